#include "pricing/engine.hpp"

#include <algorithm>
#include <exception>
#include <set>

#include <omp.h>

#include "engine_internal.hpp"

namespace pricing {

std::string_view to_string(ConstraintId id)
{
    switch (id) {
    case ConstraintId::NotEmpty: return "NOT_EMPTY";
    case ConstraintId::LinkedFeatures: return "LINKED_FEATURES";
    case ConstraintId::AddOnAvailableSomePlan: return "ADDON_AVAILABLE_SOME_PLAN";
    case ConstraintId::SubscriptionNotEmpty: return "SUBSCRIPTION_NOT_EMPTY";
    case ConstraintId::AddOnAvailableForPlan: return "ADDON_AVAILABLE_FOR_PLAN";
    case ConstraintId::Dependency: return "DEPENDENCY";
    case ConstraintId::Exclusion: return "EXCLUSION";
    }
    return "?";
}

std::string_view to_string(Direction direction)
{
    return direction == Direction::Min ? "min" : "max";
}

std::string_view EngineError::code() const
{
    switch (kind_) {
    case Kind::InvalidPricing: return "InvalidPricing";
    case Kind::UnknownReference: return "UnknownReference";
    case Kind::ConflictingOverride: return "ConflictingOverride";
    case Kind::NoSolution: return "NoSolution";
    case Kind::NoPricedSolution: return "NoPricedSolution";
    case Kind::TooManyAddOns: return "TooManyAddOns";
    }
    return "EngineError";
}

ConstraintProblem ConstraintProblem::with_filter(FilterExpr extra) const
{
    if (!filter_) return ConstraintProblem(*pricing_, std::move(extra));
    return ConstraintProblem(*pricing_, FilterExpr::all_of({*filter_, std::move(extra)}));
}

// ---------------------------------------------------------------------------
// Constraint checks
// ---------------------------------------------------------------------------

std::vector<Violation> check_pricing(const Pricing& pricing)
{
    std::vector<Violation> violations;
    const bool has_plans = !pricing.plans().empty();
    const bool has_add_ons = !pricing.add_ons().empty();

    if (!has_plans && !has_add_ons)
        violations.push_back({ConstraintId::NotEmpty, {}, "the pricing declares neither plans nor add-ons"});

    for (std::size_t p = 0; p < pricing.plans().size(); ++p) {
        const auto& plan = pricing.plans()[p];
        for (std::size_t u = 0; u < pricing.usage_limits().size(); ++u) {
            const auto& limit = pricing.usage_limits()[u];
            const Value& value = pricing.plan_usage_limit_value(p, u);
            if (value.is_zero_like()) continue;
            for (const auto& linked : limit.linked_features) {
                auto f = pricing.feature_index(linked);
                const Value& feature_value = pricing.plan_feature_value(p, *f);
                if (feature_value.is_bool() && !feature_value.as_bool())
                    violations.push_back({ConstraintId::LinkedFeatures,
                                          {plan.name, limit.name, linked},
                                          "plan '" + plan.name + "' sets usage limit '" + limit.name + "' to " +
                                              value.to_string() + " but its linked feature '" + linked +
                                              "' is not included"});
            }
        }
    }

    if (has_plans && has_add_ons)
        for (const auto& a : pricing.add_ons())
            if (a.available_for.empty())
                violations.push_back(
                    {ConstraintId::AddOnAvailableSomePlan, {a.name}, "add-on '" + a.name + "' is available for no plan"});
    return violations;
}

Subscription canonical(const Pricing& pricing, const Subscription& subscription)
{
    std::vector<std::size_t> indices;
    for (const auto& name : subscription.add_ons) {
        auto index = pricing.add_on_index(name);
        if (!index) throw EngineError(EngineError::Kind::UnknownReference, "unknown add-on '" + name + "'");
        indices.push_back(*index);
    }
    if (subscription.plan && !pricing.plan_index(*subscription.plan))
        throw EngineError(EngineError::Kind::UnknownReference, "unknown plan '" + *subscription.plan + "'");
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());

    Subscription out{subscription.plan, {}};
    for (auto i : indices) out.add_ons.push_back(pricing.add_ons()[i].name);
    return out;
}

std::vector<Violation> check_subscription(const Pricing& pricing, const Subscription& subscription)
{
    const Subscription s = canonical(pricing, subscription);
    std::vector<Violation> violations;

    if (!s.plan && s.add_ons.empty())
        violations.push_back({ConstraintId::SubscriptionNotEmpty, {}, "the subscription selects nothing"});
    else if (!s.plan && !pricing.plans().empty())
        violations.push_back(
            {ConstraintId::SubscriptionNotEmpty, {}, "the pricing has plans, so a subscription must select one"});

    std::set<std::string_view> selected(s.add_ons.begin(), s.add_ons.end());
    for (const auto& name : s.add_ons) {
        const auto& a = pricing.add_ons()[*pricing.add_on_index(name)];
        if (s.plan && std::find(a.available_for.begin(), a.available_for.end(), *s.plan) == a.available_for.end())
            violations.push_back({ConstraintId::AddOnAvailableForPlan, {a.name, *s.plan},
                                  "add-on '" + a.name + "' is not available for plan '" + *s.plan + "'"});
        for (const auto& dep : a.depends_on)
            if (!selected.count(dep))
                violations.push_back({ConstraintId::Dependency, {a.name, dep},
                                      "add-on '" + a.name + "' requires add-on '" + dep + "'"});
        for (const auto& ex : a.excludes)
            if (selected.count(ex))
                violations.push_back({ConstraintId::Exclusion, {a.name, ex},
                                      "add-on '" + a.name + "' cannot be combined with add-on '" + ex + "'"});
    }
    return violations;
}

SubscriptionValuation valuate(const Pricing& pricing, const Subscription& subscription)
{
    const Subscription s = canonical(pricing, subscription);
    detail::CompiledPricing compiled(pricing);
    detail::Mask mask = 0;
    for (const auto& name : s.add_ons) mask |= detail::bit(*pricing.add_on_index(name));
    std::optional<std::size_t> plan;
    if (s.plan) plan = pricing.plan_index(*s.plan);
    return compiled.valuate(plan, mask);
}

// ---------------------------------------------------------------------------
// CompiledPricing
// ---------------------------------------------------------------------------

namespace detail {

CompiledPricing::CompiledPricing(const Pricing& pricing) : pricing_(&pricing)
{
    const auto& add_ons = pricing.add_ons();
    if (add_ons.size() > kMaxAddOns)
        throw EngineError(EngineError::Kind::TooManyAddOns,
                          "enumeration supports at most " + std::to_string(kMaxAddOns) + " add-ons");
    const std::size_t n = add_ons.size();
    depends_.assign(n, 0);
    dependents_.assign(n, 0);
    conflicts_.assign(n, 0);
    feature_overrides_.resize(n);
    limit_overrides_.resize(n);
    limit_extensions_.resize(n);

    for (std::size_t a = 0; a < n; ++a) {
        for (const auto& dep : add_ons[a].depends_on) {
            auto d = *pricing.add_on_index(dep);
            depends_[a] |= bit(d);
            dependents_[d] |= bit(a);
            has_relations_ = true;
        }
        for (const auto& ex : add_ons[a].excludes) {
            auto e = *pricing.add_on_index(ex);
            conflicts_[a] |= bit(e);
            conflicts_[e] |= bit(a);
            has_relations_ = true;
        }
        for (const auto& [name, value] : add_ons[a].feature_values)
            feature_overrides_[a].push_back({*pricing.feature_index(name), &value});
        for (const auto& [name, value] : add_ons[a].usage_limit_values)
            limit_overrides_[a].push_back({*pricing.usage_limit_index(name), &value});
        for (const auto& [name, value] : add_ons[a].usage_limit_extensions)
            limit_extensions_[a].push_back({*pricing.usage_limit_index(name), &value});
    }

    const std::size_t plans = pricing.plans().size();
    for (std::size_t p = 0; p <= plans; ++p) {
        std::vector<Value> features, limits;
        for (std::size_t f = 0; f < pricing.features().size(); ++f)
            features.push_back(p < plans ? pricing.plan_feature_value(p, f) : pricing.features()[f].default_value);
        for (std::size_t u = 0; u < pricing.usage_limits().size(); ++u)
            limits.push_back(p < plans ? pricing.plan_usage_limit_value(p, u) : pricing.usage_limits()[u].default_value);
        base_features_.push_back(std::move(features));
        base_limits_.push_back(std::move(limits));
    }

    if (plans == 0) {
        Mask all = n == kMaxAddOns ? ~Mask{0} : bit(n) - 1;
        branches_.push_back({std::nullopt, all});
    } else {
        for (std::size_t p = 0; p < plans; ++p) {
            Mask available = 0;
            for (std::size_t a = 0; a < n; ++a) {
                const auto& av = add_ons[a].available_for;
                if (std::find(av.begin(), av.end(), pricing.plans()[p].name) != av.end()) available |= bit(a);
            }
            branches_.push_back({p, available});
        }
    }
}

bool CompiledPricing::admissible(const Branch& branch, Mask mask) const
{
    if (!branch.plan && mask == 0) return false;
    for (Mask rest = mask; rest; rest &= rest - 1) {
        auto a = static_cast<std::size_t>(std::countr_zero(rest));
        if ((depends_[a] & ~mask) != 0) return false;
        if ((conflicts_[a] & mask) != 0) return false;
    }
    return true;
}

SubscriptionValuation CompiledPricing::valuate(std::optional<std::size_t> plan, Mask mask) const
{
    const std::size_t base = plan ? *plan : pricing_->plans().size();
    SubscriptionValuation v;
    v.feature_values = base_features_[base];
    v.usage_limit_values = base_limits_[base];

    // Features: booleans are switched on by any add-on; other types take the
    // add-on's value (numeric conflicts resolve to the maximum).
    std::vector<const Value*> feature_override(v.feature_values.size(), nullptr);
    std::vector<const Value*> limit_override(v.usage_limit_values.size(), nullptr);
    for (Mask rest = mask; rest; rest &= rest - 1) {
        auto a = static_cast<std::size_t>(std::countr_zero(rest));
        for (const auto& o : feature_overrides_[a]) {
            const Value*& current = feature_override[o.index];
            if (o.value->is_bool()) {
                if (o.value->as_bool()) current = o.value;
            } else if (!current || compare_values(*o.value, *current) > 0) {
                if (current && o.value->is_text() && *current != *o.value)
                    throw EngineError(EngineError::Kind::ConflictingOverride,
                                      "selected add-ons set different values for feature '" +
                                          pricing_->features()[o.index].name + "'");
                current = o.value;
            } else if (o.value->is_text() && *current != *o.value) {
                throw EngineError(EngineError::Kind::ConflictingOverride,
                                  "selected add-ons set different values for feature '" +
                                      pricing_->features()[o.index].name + "'");
            }
        }
        for (const auto& o : limit_overrides_[a]) {
            const Value*& current = limit_override[o.index];
            if (!current || compare_values(*o.value, *current) > 0 ||
                (o.value->is_bool() && o.value->as_bool()))
                current = o.value;
        }
    }
    for (std::size_t f = 0; f < feature_override.size(); ++f) {
        if (!feature_override[f]) continue;
        if (feature_override[f]->is_bool()) {
            v.feature_values[f] = Value::boolean(true);
        } else {
            v.feature_values[f] = *feature_override[f];
        }
    }
    for (std::size_t u = 0; u < limit_override.size(); ++u)
        if (limit_override[u]) v.usage_limit_values[u] = *limit_override[u];

    for (Mask rest = mask; rest; rest &= rest - 1) {
        auto a = static_cast<std::size_t>(std::countr_zero(rest));
        for (const auto& e : limit_extensions_[a])
            v.usage_limit_values[e.index] = add_quantities(v.usage_limit_values[e.index], *e.value);
    }

    v.cost = cost(plan, mask);
    return v;
}

Price CompiledPricing::cost(std::optional<std::size_t> plan, Mask mask) const
{
    Price total = plan ? pricing_->plans()[*plan].price : Price::amount(Decimal());
    for (Mask rest = mask; rest; rest &= rest - 1)
        total = total + pricing_->add_ons()[static_cast<std::size_t>(std::countr_zero(rest))].price;
    return total;
}

Subscription CompiledPricing::subscription(std::optional<std::size_t> plan, Mask mask) const
{
    Subscription s;
    if (plan) s.plan = pricing_->plans()[*plan].name;
    for (Mask rest = mask; rest; rest &= rest - 1)
        s.add_ons.push_back(pricing_->add_ons()[static_cast<std::size_t>(std::countr_zero(rest))].name);
    return s;
}

void require_valid(const Pricing& pricing, const EngineOptions& options)
{
    if (!options.enforce_pricing_constraints) return;
    auto violations = check_pricing(pricing);
    if (violations.empty()) return;
    std::string message = "pricing violates " + std::to_string(violations.size()) +
                          " validity constraint(s): " + violations.front().message;
    throw EngineError(EngineError::Kind::InvalidPricing, message, std::move(violations));
}

OptimumResult pick_optimum(const std::vector<Solution>& solutions, Direction direction)
{
    if (solutions.empty()) throw EngineError(EngineError::Kind::NoSolution, "no subscription satisfies the constraints");

    OptimumResult result;
    result.direction = direction;
    std::optional<Decimal> best;
    for (const auto& s : solutions) {
        const Price& cost = s.valuation.cost;
        if (cost.is_contact()) {
            result.indeterminate.push_back(s.subscription);
            continue;
        }
        Decimal c = cost.value();
        bool better = !best || (direction == Direction::Min ? c < *best : c > *best);
        if (better) {
            best = c;
            result.optimal.clear();
        }
        if (c == *best) result.optimal.push_back({s.subscription, c});
    }
    if (!best)
        throw EngineError(EngineError::Kind::NoPricedSolution, "every solution is priced as 'contact sales'");
    result.cost = *best;
    return result;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parallel kernels
// ---------------------------------------------------------------------------

namespace {

using detail::bit;
using detail::CompiledPricing;
using detail::Mask;

// Each branch is split on its highest available add-ons: fixing the top k
// bits yields 2^k contiguous, increasing ranges of the subset order.
constexpr int kSplitBits = 4;

struct Task {
    std::size_t branch;
    Mask prefix;     // chosen values of the split bits
    Mask decided;    // split bits plus everything unavailable
    std::vector<std::size_t> free_bits;  // ascending, still undecided
};

std::vector<Task> make_tasks(const CompiledPricing& compiled, int split_bits)
{
    std::vector<Task> tasks;
    const std::size_t n = compiled.add_on_count();
    const Mask universe = n == detail::kMaxAddOns ? ~Mask{0} : bit(n) - 1;
    for (std::size_t b = 0; b < compiled.branches().size(); ++b) {
        const auto& branch = compiled.branches()[b];
        std::vector<std::size_t> bits;
        for (std::size_t a = 0; a < n; ++a)
            if (branch.available & bit(a)) bits.push_back(a);
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(split_bits), bits.size());
        std::vector<std::size_t> top(bits.end() - static_cast<std::ptrdiff_t>(k), bits.end());
        bits.resize(bits.size() - k);
        Mask split_mask = 0;
        for (auto a : top) split_mask |= bit(a);
        for (Mask c = 0; c < (Mask{1} << k); ++c) {
            Mask prefix = 0;
            for (std::size_t j = 0; j < k; ++j)
                if (c & bit(j)) prefix |= bit(top[j]);
            tasks.push_back({b, prefix, (universe & ~branch.available) | split_mask, bits});
        }
    }
    return tasks;
}

/// Depth-first over the free bits from the highest down, "absent" before
/// "present", which visits masks in increasing numeric order. Exclusions and
/// dependencies on already-decided add-ons prune whole subtrees.
template <typename Leaf>
class Walker {
public:
    Walker(const CompiledPricing& compiled, const Task& task, Leaf& leaf)
        : compiled_(compiled), task_(task), leaf_(leaf)
    {
    }

    /// Returns false if the leaf callback asked to stop.
    bool run()
    {
        // The fixed prefix must be consistent on its own.
        for (Mask rest = task_.prefix; rest; rest &= rest - 1) {
            auto a = static_cast<std::size_t>(std::countr_zero(rest));
            if (compiled_.conflicts(a) & task_.prefix) return true;
            if (compiled_.depends(a) & task_.decided & ~task_.prefix) return true;
        }
        return step(static_cast<std::ptrdiff_t>(task_.free_bits.size()) - 1, task_.prefix, task_.decided);
    }

private:
    bool step(std::ptrdiff_t pos, Mask mask, Mask decided)
    {
        if (pos < 0) {
            const auto& branch = compiled_.branches()[task_.branch];
            if (!compiled_.admissible(branch, mask)) return true;
            return leaf_(branch, mask);
        }
        const std::size_t a = task_.free_bits[static_cast<std::size_t>(pos)];
        const Mask now_decided = decided | bit(a);
        if ((compiled_.dependents(a) & mask) == 0)
            if (!step(pos - 1, mask, now_decided)) return false;
        if ((compiled_.conflicts(a) & mask) == 0 && (compiled_.depends(a) & decided & ~mask) == 0)
            if (!step(pos - 1, mask | bit(a), now_decided)) return false;
        return true;
    }

    const CompiledPricing& compiled_;
    const Task& task_;
    Leaf& leaf_;
};

template <typename Leaf>
bool walk(const CompiledPricing& compiled, const Task& task, Leaf& leaf)
{
    return Walker<Leaf>(compiled, task, leaf).run();
}

int team_size(const EngineOptions& options)
{
    return options.threads > 0 ? options.threads : omp_get_max_threads();
}

/// Runs `body(task_index)` over all tasks on an OpenMP team and rethrows the
/// first exception raised by any iteration.
template <typename Body>
void parallel_tasks(std::size_t task_count, const EngineOptions& options, Body&& body)
{
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(team_size(options))
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(task_count); ++t) {
        try {
            body(static_cast<std::size_t>(t));
        } catch (...) {
#pragma omp critical(pricing_engine_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

namespace detail {

std::optional<Mask> minimal_superset(const CompiledPricing& compiled, const CompiledPricing::Branch& branch,
                                     Mask required)
{
    Mask closure = required;
    for (Mask frontier = required; frontier;) {
        Mask next = 0;
        for (Mask rest = frontier; rest; rest &= rest - 1)
            next |= compiled.depends(static_cast<std::size_t>(std::countr_zero(rest)));
        frontier = next & ~closure;
        closure |= next;
    }
    if ((closure & ~branch.available) != 0) return std::nullopt;
    if (!compiled.admissible(branch, closure)) return std::nullopt;
    return closure;
}

void for_each_mask(const CompiledPricing& compiled,
                   const std::function<bool(const CompiledPricing::Branch&, Mask)>& visit)
{
    for (const auto& task : make_tasks(compiled, 0)) {
        auto leaf = [&](const CompiledPricing::Branch& branch, Mask mask) { return visit(branch, mask); };
        if (!walk(compiled, task, leaf)) return;
    }
}

}  // namespace detail

std::vector<Solution> enumerate(const ConstraintProblem& problem, const EngineOptions& options)
{
    detail::require_valid(problem.pricing(), options);
    const CompiledPricing compiled(problem.pricing());
    const auto tasks = make_tasks(compiled, kSplitBits);
    const auto& filter = problem.filter();

    std::vector<std::vector<Solution>> partial(tasks.size());
    parallel_tasks(tasks.size(), options, [&](std::size_t t) {
        auto& out = partial[t];
        auto leaf = [&](const CompiledPricing::Branch& branch, Mask mask) {
            auto valuation = compiled.valuate(branch.plan, mask);
            if (!filter || evaluate(*filter, valuation))
                out.push_back({compiled.subscription(branch.plan, mask), std::move(valuation)});
            return true;
        };
        walk(compiled, tasks[t], leaf);
    });

    std::vector<Solution> solutions;
    std::size_t total = 0;
    for (const auto& p : partial) total += p.size();
    solutions.reserve(total);
    for (auto& p : partial) std::move(p.begin(), p.end(), std::back_inserter(solutions));
    return solutions;
}

void for_each_solution(const ConstraintProblem& problem, const std::function<bool(const Solution&)>& visit,
                       const EngineOptions& options)
{
    detail::require_valid(problem.pricing(), options);
    const CompiledPricing compiled(problem.pricing());
    const auto& filter = problem.filter();
    for (const auto& task : make_tasks(compiled, 0)) {
        auto leaf = [&](const CompiledPricing::Branch& branch, Mask mask) {
            auto valuation = compiled.valuate(branch.plan, mask);
            if (filter && !evaluate(*filter, valuation)) return true;
            return visit(Solution{compiled.subscription(branch.plan, mask), std::move(valuation)});
        };
        if (!walk(compiled, task, leaf)) return;
    }
}

std::uint64_t count(const ConstraintProblem& problem, const EngineOptions& options)
{
    detail::require_valid(problem.pricing(), options);
    const CompiledPricing compiled(problem.pricing());
    const auto& filter = problem.filter();

    if (!filter && !compiled.has_relations()) {
        std::uint64_t total = 0;
        for (const auto& branch : compiled.branches()) {
            std::uint64_t subsets = std::uint64_t{1} << std::popcount(branch.available);
            total += branch.plan ? subsets : subsets - 1;
        }
        return total;
    }

    const auto tasks = make_tasks(compiled, kSplitBits);
    std::vector<std::uint64_t> partial(tasks.size(), 0);
    parallel_tasks(tasks.size(), options, [&](std::size_t t) {
        std::uint64_t n = 0;
        auto leaf = [&](const CompiledPricing::Branch& branch, Mask mask) {
            if (!filter || evaluate(*filter, compiled.valuate(branch.plan, mask))) ++n;
            return true;
        };
        walk(compiled, tasks[t], leaf);
        partial[t] = n;
    });
    std::uint64_t total = 0;
    for (auto n : partial) total += n;
    return total;
}

OptimumResult optimize(const ConstraintProblem& problem, Direction direction, const EngineOptions& options)
{
    return detail::pick_optimum(enumerate(problem, options), direction);
}

}  // namespace pricing
