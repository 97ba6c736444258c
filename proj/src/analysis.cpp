#include "pricing/analysis.hpp"

#include <stdexcept>

#include "engine_internal.hpp"
#include "pricing/parser.hpp"

namespace pricing {

Severity lint_severity(std::string_view code)
{
    if (code == "NUMERIC_FEATURE_SUSPECT" || code == "NO_NUMERIC_PRICE" || code == "DEAD_ADDON" ||
        code == "DEAD_PLAN" || code == "DUPLICATE_PLAN_VALUATION")
        return Severity::Warning;
    return Severity::Error;
}

namespace {

LintFinding finding(std::string code, std::string subject, std::string message)
{
    Severity severity = lint_severity(code);
    return {std::move(code), severity, std::move(subject), std::move(message)};
}

bool same_price(const Price& a, const Price& b)
{
    if (a.is_contact() || b.is_contact()) return a.is_contact() && b.is_contact();
    return a.value() == b.value();
}

}  // namespace

std::uint64_t cardinal(const Pricing& pricing, const EngineOptions& options)
{
    return count(ConstraintProblem(pricing), options);
}

ConstraintProblem filter(const Pricing& pricing, FilterExpr f)
{
    return ConstraintProblem(pricing, std::move(f));
}

ConstraintProblem filter(const Pricing& pricing, std::string_view text)
{
    return ConstraintProblem(pricing, parse_filter(text, pricing));
}

std::vector<Solution> subscriptions(const Pricing& pricing, const std::optional<FilterExpr>& f,
                                    const EngineOptions& options)
{
    return enumerate(ConstraintProblem(pricing, f), options);
}

Price subscription_cost(const Pricing& pricing, const Subscription& subscription)
{
    const Subscription s = canonical(pricing, subscription);
    Price total = s.plan ? pricing.plans()[*pricing.plan_index(*s.plan)].price : Price::amount(Decimal());
    for (const auto& name : s.add_ons) total = total + pricing.add_ons()[*pricing.add_on_index(name)].price;
    return total;
}

PricingValidity valid_pricing(const Pricing& pricing)
{
    PricingValidity result;
    result.violations = check_pricing(pricing);

    const detail::CompiledPricing compiled(pricing);
    detail::for_each_mask(compiled, [&](const detail::CompiledPricing::Branch& branch, detail::Mask mask) {
        result.witness = compiled.subscription(branch.plan, mask);
        return false;
    });
    result.valid = result.violations.empty() && result.witness.has_value();

    if (!result.witness) result.notes.push_back("no subscription satisfies the subscription constraints");
    for (const auto& dead : dead_elements(pricing))
        if (dead.code == "DEAD_ADDON" && result.witness)
            result.notes.push_back(dead.message + "; other subscriptions satisfy every constraint, so this alone "
                                                  "does not make the pricing invalid");
    return result;
}

SubscriptionValidity valid_subscription(const Pricing& pricing, const Subscription& subscription)
{
    SubscriptionValidity result;
    result.violations = check_subscription(pricing, subscription);
    result.valid = result.violations.empty();
    if (result.valid) result.valuation = valuate(pricing, subscription);
    return result;
}

SubscriptionValidity valid_subscription(const Pricing& pricing, const Subscription& subscription,
                                        const FilterExpr& requirement)
{
    SubscriptionValidity result = valid_subscription(pricing, subscription);
    if (result.valuation) {
        result.meets_requirement = evaluate(requirement, *result.valuation);
        result.valid = result.meets_requirement;
    } else {
        result.meets_requirement = false;
    }
    return result;
}

bool attainable(const Pricing& pricing, const FilterExpr& requirement)
{
    bool found = false;
    for_each_solution(ConstraintProblem(pricing, requirement), [&](const Solution&) {
        found = true;
        return false;
    });
    return found;
}

AttainableRange attainable_range(const Pricing& pricing, std::string_view name)
{
    const auto feature = pricing.feature_index(name);
    const auto limit = pricing.usage_limit_index(name);
    if (!feature && !limit) throw std::invalid_argument("unknown feature or usage limit '" + std::string(name) + "'");
    const ValueType type =
        feature ? pricing.features()[*feature].value_type : pricing.usage_limits()[*limit].value_type;
    if (type != ValueType::Numeric) throw std::invalid_argument("'" + std::string(name) + "' is not NUMERIC");

    std::optional<AttainableRange> range;
    for_each_solution(ConstraintProblem(pricing), [&](const Solution& s) {
        const Value& v = feature ? s.valuation.feature_values[*feature] : s.valuation.usage_limit_values[*limit];
        if (!range) {
            range = AttainableRange{v, v};
        } else {
            if (compare_values(v, range->min) < 0) range->min = v;
            if (compare_values(v, range->max) > 0) range->max = v;
        }
        return true;
    });
    if (!range) throw EngineError(EngineError::Kind::NoSolution, "no subscription satisfies the constraints");
    return *range;
}

OptimumResult optimum(const Pricing& pricing, const std::optional<FilterExpr>& f, Direction direction,
                      const EngineOptions& options)
{
    return optimize(ConstraintProblem(pricing, f), direction, options);
}

std::vector<LintFinding> lint(const Pricing& pricing, std::chrono::year_month_day now)
{
    std::vector<LintFinding> findings;

    for (const auto& v : check_pricing(pricing)) {
        switch (v.constraint) {
        case ConstraintId::LinkedFeatures:
            findings.push_back(finding("LINKED_FEATURE_MISMATCH", v.elements.front(), v.message));
            break;
        case ConstraintId::AddOnAvailableSomePlan:
            findings.push_back(finding("ADDON_AVAILABLE_SOME_PLAN", v.elements.front(), v.message));
            break;
        default:
            findings.push_back(finding(std::string(to_string(v.constraint)), pricing.saas_name(), v.message));
        }
    }

    for (const auto& f : pricing.features())
        if (f.value_type == ValueType::Numeric)
            findings.push_back(finding("NUMERIC_FEATURE_SUSPECT", f.name,
                                       "feature '" + f.name + "' is NUMERIC; quantities are usually usage limits"));

    if (pricing.created_at() && *pricing.created_at() > now)
        findings.push_back(finding("FUTURE_CREATION_DATE", pricing.saas_name(),
                                   "createdAt " + format_date(*pricing.created_at()) + " is after " +
                                       format_date(now)));

    // Plans carry the price; a plan-less pricing is priced by its add-ons.
    auto all_contact = [](const auto& elements) {
        if (elements.empty()) return false;
        for (const auto& e : elements)
            if (!e.price.is_contact()) return false;
        return true;
    };
    if (pricing.plans().empty() ? all_contact(pricing.add_ons()) : all_contact(pricing.plans()))
        findings.push_back(finding("NO_NUMERIC_PRICE", pricing.saas_name(),
                                   std::string("every ") + (pricing.plans().empty() ? "add-on" : "plan") +
                                       " requires contacting sales; no subscription has a known cost"));

    auto dead = dead_elements(pricing);
    findings.insert(findings.end(), dead.begin(), dead.end());
    return findings;
}

std::vector<LintFinding> dead_elements(const Pricing& pricing)
{
    std::vector<LintFinding> findings;
    const detail::CompiledPricing compiled(pricing);

    for (std::size_t b = 0; b < compiled.branches().size(); ++b) {
        const auto& branch = compiled.branches()[b];
        if (branch.plan && !detail::minimal_superset(compiled, branch, 0)) {
            const auto& name = pricing.plans()[*branch.plan].name;
            findings.push_back(finding("DEAD_PLAN", name, "plan '" + name + "' occurs in no subscription"));
        }
    }

    for (std::size_t a = 0; a < pricing.add_ons().size(); ++a) {
        bool alive = false;
        for (const auto& branch : compiled.branches())
            if (detail::minimal_superset(compiled, branch, detail::bit(a))) {
                alive = true;
                break;
            }
        if (!alive) {
            const auto& name = pricing.add_ons()[a].name;
            findings.push_back(finding("DEAD_ADDON", name, "add-on '" + name + "' occurs in no subscription"));
        }
    }

    const auto& plans = pricing.plans();
    std::vector<bool> reported(plans.size(), false);
    for (std::size_t i = 0; i < plans.size(); ++i) {
        for (std::size_t j = i + 1; j < plans.size(); ++j) {
            if (reported[j] || same_price(plans[i].price, plans[j].price)) continue;
            bool identical = true;
            for (std::size_t f = 0; identical && f < pricing.features().size(); ++f)
                identical = pricing.plan_feature_value(i, f) == pricing.plan_feature_value(j, f);
            for (std::size_t u = 0; identical && u < pricing.usage_limits().size(); ++u)
                identical = pricing.plan_usage_limit_value(i, u) == pricing.plan_usage_limit_value(j, u);
            if (!identical) continue;
            reported[j] = true;
            findings.push_back(finding("DUPLICATE_PLAN_VALUATION", plans[j].name,
                                       "plan '" + plans[j].name + "' resolves to the same features and usage limits as '" +
                                           plans[i].name + "' but costs " + plans[j].price.to_string() +
                                           " instead of " + plans[i].price.to_string()));
        }
    }
    return findings;
}

PricingStats stats(const Pricing& pricing, const EngineOptions& options)
{
    PricingStats s;
    s.features = pricing.features().size();
    s.usage_limits = pricing.usage_limits().size();
    s.plans = pricing.plans().size();
    s.add_ons = pricing.add_ons().size();
    s.violations = check_pricing(pricing).size();

    EngineOptions relaxed = options;
    relaxed.enforce_pricing_constraints = false;
    s.configuration_space_size = count(ConstraintProblem(pricing), relaxed);
    s.valid = s.violations == 0 && s.configuration_space_size > 0;
    return s;
}

}  // namespace pricing
