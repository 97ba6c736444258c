#include "pricing/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pricing {

std::string_view to_string(Severity severity)
{
    return severity == Severity::Error ? "ERROR" : "WARNING";
}

bool has_errors(const std::vector<Diagnostic>& diagnostics)
{
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

Price operator+(const Price& a, const Price& b)
{
    if (a.is_contact()) return a;
    if (b.is_contact()) return b;
    return Price::amount(a.value() + b.value());
}

std::optional<std::size_t> Pricing::lookup(const Index& index, std::string_view name)
{
    auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

const Value& Pricing::plan_feature_value(std::size_t plan, std::size_t feature) const
{
    const auto& overrides = data_.plans.at(plan).feature_values;
    const auto& f = data_.features.at(feature);
    auto it = overrides.find(f.name);
    return it == overrides.end() ? f.default_value : it->second;
}

const Value& Pricing::plan_usage_limit_value(std::size_t plan, std::size_t limit) const
{
    const auto& overrides = data_.plans.at(plan).usage_limit_values;
    const auto& u = data_.usage_limits.at(limit);
    auto it = overrides.find(u.name);
    return it == overrides.end() ? u.default_value : it->second;
}

std::string to_string(const Subscription& s)
{
    std::string out = "(" + (s.plan ? *s.plan : std::string("-")) + ", {";
    for (std::size_t i = 0; i < s.add_ons.size(); ++i) {
        if (i) out += ", ";
        out += s.add_ons[i];
    }
    return out + "})";
}

const Value& value_of(const Pricing& pricing, const SubscriptionValuation& valuation, std::string_view name)
{
    if (auto f = pricing.feature_index(name)) return valuation.feature_values.at(*f);
    if (auto u = pricing.usage_limit_index(name)) return valuation.usage_limit_values.at(*u);
    throw std::out_of_range("unknown feature or usage limit: " + std::string(name));
}

// ---------------------------------------------------------------------------
// build_pricing
// ---------------------------------------------------------------------------

struct PricingBuilder {
    PricingDraft draft;
    const SourceMap* sources;
    std::vector<Diagnostic> diagnostics;
    Pricing::Index features, limits, plans, add_ons;

    std::optional<SourceLocation> locate(std::string path) const
    {
        if (!sources) return std::nullopt;
        // Fall back to the closest enclosing element that has a position.
        while (true) {
            if (auto it = sources->find(path); it != sources->end()) return it->second;
            auto slash = path.rfind('/');
            if (slash == std::string::npos) return std::nullopt;
            path.erase(slash);
        }
    }

    void error(std::string code, std::string subject, std::string message, const std::string& path)
    {
        diagnostics.push_back({Severity::Error, std::move(code), std::move(subject), std::move(message), locate(path)});
    }

    void warning(std::string code, std::string subject, std::string message, const std::string& path)
    {
        diagnostics.push_back({Severity::Warning, std::move(code), std::move(subject), std::move(message), locate(path)});
    }

    template <typename Element>
    void index_names(const std::vector<Element>& elements, Pricing::Index& index, const char* section)
    {
        for (std::size_t i = 0; i < elements.size(); ++i) {
            const auto& name = elements[i].name;
            std::string path = std::string(section) + "/" + name;
            if (name.empty()) {
                error("TypeMismatch", name, std::string(section) + " entry has an empty name", path);
                continue;
            }
            if (!index.emplace(name, i).second)
                error("DuplicateName", name, "duplicate name '" + name + "' in " + section, path);
        }
    }

    void check_overrides(const std::map<std::string, Value>& feature_values,
                         const std::map<std::string, Value>& limit_values,
                         const std::string& owner, const std::string& path)
    {
        for (const auto& [name, value] : feature_values) {
            auto it = features.find(name);
            if (it == features.end()) {
                error("UnknownReference", owner, "'" + owner + "' overrides undeclared feature '" + name + "'",
                      path + "/features/" + name);
                continue;
            }
            const auto& feature = draft.features[it->second];
            if (!value.matches(feature.value_type))
                error("TypeMismatch", owner,
                      "'" + owner + "' sets " + std::string(to_string(feature.value_type)) + " feature '" + name +
                          "' to '" + value.to_string() + "'",
                      path + "/features/" + name);
        }
        for (const auto& [name, value] : limit_values) {
            auto it = limits.find(name);
            if (it == limits.end()) {
                error("UnknownReference", owner, "'" + owner + "' overrides undeclared usage limit '" + name + "'",
                      path + "/usageLimits/" + name);
                continue;
            }
            const auto& limit = draft.usage_limits[it->second];
            if (!value.matches(limit.value_type))
                error("TypeMismatch", owner,
                      "'" + owner + "' sets " + std::string(to_string(limit.value_type)) + " usage limit '" + name +
                          "' to '" + value.to_string() + "'",
                      path + "/usageLimits/" + name);
        }
    }

    void check_price(const Price& price, const std::string& owner, const std::string& path)
    {
        if (!price.is_amount()) return;
        if (price.value().is_negative())
            error("InvalidPrice", owner, "price of '" + owner + "' is negative", path + "/price");
        else if (price.value().fraction_digits() > 2)
            error("InvalidPrice", owner, "price of '" + owner + "' has more than two fractional digits",
                  path + "/price");
    }

    void run()
    {
        index_names(draft.features, features, "features");
        index_names(draft.usage_limits, limits, "usageLimits");
        index_names(draft.plans, plans, "plans");
        index_names(draft.add_ons, add_ons, "addOns");

        for (const auto& [name, _] : limits)
            if (features.count(name))
                error("DuplicateName", name, "'" + name + "' is declared both as a feature and as a usage limit",
                      "usageLimits/" + name);

        if (!draft.currency.empty() &&
            (draft.currency.size() != 3 ||
             !std::all_of(draft.currency.begin(), draft.currency.end(), [](char c) { return c >= 'A' && c <= 'Z'; })))
            warning("UnknownCurrency", draft.currency, "currency '" + draft.currency + "' is not an ISO-4217 code",
                    "currency");

        for (const auto& f : draft.features) {
            if (!f.default_value.matches(f.value_type))
                error("TypeMismatch", f.name,
                      "default value '" + f.default_value.to_string() + "' of feature '" + f.name + "' is not " +
                          std::string(to_string(f.value_type)),
                      "features/" + f.name + "/defaultValue");
        }

        for (const auto& u : draft.usage_limits) {
            std::string path = "usageLimits/" + u.name;
            if (u.value_type == ValueType::Text)
                error("TypeMismatch", u.name, "usage limit '" + u.name + "' must be NUMERIC or BOOLEAN",
                      path + "/valueType");
            else if (!u.default_value.matches(u.value_type))
                error("TypeMismatch", u.name,
                      "default value '" + u.default_value.to_string() + "' of usage limit '" + u.name + "' is not " +
                          std::string(to_string(u.value_type)),
                      path + "/defaultValue");
            std::set<std::string_view> seen;
            for (const auto& linked : u.linked_features) {
                if (!features.count(linked))
                    error("UnknownReference", u.name,
                          "usage limit '" + u.name + "' links undeclared feature '" + linked + "'",
                          path + "/linkedFeatures/" + linked);
                else if (!seen.insert(linked).second)
                    warning("DuplicateName", u.name, "usage limit '" + u.name + "' links '" + linked + "' twice",
                            path + "/linkedFeatures/" + linked);
            }
        }

        for (const auto& p : draft.plans) {
            std::string path = "plans/" + p.name;
            check_price(p.price, p.name, path);
            check_overrides(p.feature_values, p.usage_limit_values, p.name, path);
        }

        for (const auto& a : draft.add_ons) {
            std::string path = "addOns/" + a.name;
            check_price(a.price, a.name, path);
            check_overrides(a.feature_values, a.usage_limit_values, a.name, path);

            for (const auto& plan : a.available_for)
                if (!plans.count(plan))
                    error("UnknownReference", a.name,
                          "add-on '" + a.name + "' is available for undeclared plan '" + plan + "'",
                          path + "/availableFor/" + plan);

            auto check_addon_refs = [&](const std::vector<std::string>& refs, const char* key) {
                for (const auto& ref : refs) {
                    std::string ref_path = path + "/" + key + "/" + ref;
                    if (ref == a.name)
                        error("SelfReference", a.name, "add-on '" + a.name + "' lists itself in " + key, ref_path);
                    else if (!add_ons.count(ref))
                        error("UnknownReference", a.name,
                              "add-on '" + a.name + "' " + key + " undeclared add-on '" + ref + "'", ref_path);
                }
            };
            check_addon_refs(a.depends_on, "dependsOn");
            check_addon_refs(a.excludes, "excludes");
            for (const auto& dep : a.depends_on)
                if (std::find(a.excludes.begin(), a.excludes.end(), dep) != a.excludes.end() && dep != a.name)
                    error("ConflictingReference", a.name,
                          "add-on '" + a.name + "' both depends on and excludes '" + dep + "'",
                          path + "/excludes/" + dep);

            for (const auto& [name, amount] : a.usage_limit_extensions) {
                std::string ext_path = path + "/usageLimitsExtensions/" + name;
                auto it = limits.find(name);
                if (it == limits.end()) {
                    error("UnknownReference", a.name,
                          "add-on '" + a.name + "' extends undeclared usage limit '" + name + "'", ext_path);
                    continue;
                }
                if (draft.usage_limits[it->second].value_type != ValueType::Numeric)
                    error("TypeMismatch", a.name,
                          "add-on '" + a.name + "' extends non-NUMERIC usage limit '" + name + "'", ext_path);
                else if (!amount.is_quantity() || (amount.is_numeric() && amount.as_numeric().is_negative()))
                    error("TypeMismatch", a.name,
                          "extension of '" + name + "' by add-on '" + a.name + "' must be a non-negative number",
                          ext_path);
            }
        }
    }

    Pricing finish()
    {
        Pricing pricing;
        pricing.data_ = std::move(draft);
        pricing.feature_index_ = std::move(features);
        pricing.usage_limit_index_ = std::move(limits);
        pricing.plan_index_ = std::move(plans);
        pricing.add_on_index_ = std::move(add_ons);
        return pricing;
    }
};

BuildResult build_pricing(PricingDraft draft, const SourceMap* source_map)
{
    PricingBuilder builder{std::move(draft), source_map, {}, {}, {}, {}, {}};
    builder.run();

    BuildResult result;
    if (!has_errors(builder.diagnostics)) {
        result.pricing = builder.finish();
    }
    result.diagnostics = std::move(builder.diagnostics);
    return result;
}

}  // namespace pricing
