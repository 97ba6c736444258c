#include "pricing/json_io.hpp"

#include <stdexcept>

namespace pricing {

json to_json(const Value& value)
{
    if (value.is_bool()) return value.as_bool();
    if (value.is_unlimited()) return "unlimited";
    if (value.is_numeric()) return json::parse(value.as_numeric().to_string());
    const Text& text = value.as_text();
    if (text.is_list) return text.items;
    return text.items.empty() ? std::string() : text.items.front();
}

json to_json(const Price& price)
{
    return price.to_string();
}

json to_json(const Diagnostic& d)
{
    json j{{"code", d.code}, {"severity", to_string(d.severity)}, {"subject", d.subject}, {"message", d.message}};
    if (d.location) {
        j["line"] = d.location->line;
        j["column"] = d.location->column;
    }
    return j;
}

json to_json(const std::vector<Diagnostic>& diagnostics)
{
    json out = json::array();
    for (const auto& d : diagnostics) out.push_back(to_json(d));
    return out;
}

json to_json(const Violation& v)
{
    return {{"constraint", to_string(v.constraint)}, {"elements", v.elements}, {"message", v.message}};
}

json to_json(const std::vector<Violation>& violations)
{
    json out = json::array();
    for (const auto& v : violations) out.push_back(to_json(v));
    return out;
}

json to_json(const Subscription& s)
{
    return {{"plan", s.plan ? json(*s.plan) : json(nullptr)}, {"addOns", s.add_ons}};
}

json to_json(const Pricing& pricing, const SubscriptionValuation& valuation)
{
    json features = json::object();
    for (std::size_t f = 0; f < pricing.features().size(); ++f)
        features[pricing.features()[f].name] = to_json(valuation.feature_values[f]);
    json limits = json::object();
    for (std::size_t u = 0; u < pricing.usage_limits().size(); ++u)
        limits[pricing.usage_limits()[u].name] = to_json(valuation.usage_limit_values[u]);
    return {{"features", features}, {"usageLimits", limits}, {"cost", to_json(valuation.cost)}};
}

json to_json(const Pricing& pricing, const Solution& solution)
{
    return {{"subscription", to_json(solution.subscription)}, {"valuation", to_json(pricing, solution.valuation)}};
}

json to_json(const OptimumResult& result)
{
    json optimal = json::array();
    for (const auto& p : result.optimal)
        optimal.push_back({{"subscription", to_json(p.subscription)}, {"cost", p.cost.to_string()}});
    json indeterminate = json::array();
    for (const auto& s : result.indeterminate) indeterminate.push_back(to_json(s));
    return {{"direction", to_string(result.direction)},
            {"cost", result.cost.to_string()},
            {"optimal", optimal},
            {"indeterminate", indeterminate}};
}

json to_json(const LintFinding& f)
{
    return {{"code", f.code}, {"severity", to_string(f.severity)}, {"subject", f.subject}, {"message", f.message}};
}

json to_json(const std::vector<LintFinding>& findings)
{
    json out = json::array();
    for (const auto& f : findings) out.push_back(to_json(f));
    return out;
}

json to_json(const PricingStats& s)
{
    return {{"features", s.features},
            {"usageLimits", s.usage_limits},
            {"plans", s.plans},
            {"addOns", s.add_ons},
            {"configurationSpaceSize", s.configuration_space_size},
            {"valid", s.valid},
            {"violations", s.violations}};
}

json to_json(const PricingValidity& v)
{
    return {{"valid", v.valid},
            {"violations", to_json(v.violations)},
            {"notes", v.notes},
            {"witness", v.witness ? to_json(*v.witness) : json(nullptr)}};
}

json to_json(const Pricing& pricing, const SubscriptionValidity& v)
{
    json j{{"valid", v.valid}, {"violations", to_json(v.violations)}};
    if (v.valuation) {
        j["valuation"] = to_json(pricing, *v.valuation);
        j["cost"] = to_json(v.valuation->cost);
    }
    if (!v.meets_requirement) j["meetsRequirement"] = false;
    return j;
}

Subscription subscription_from_json(const json& j)
{
    if (!j.is_object()) throw std::invalid_argument("subscription must be a JSON object");
    Subscription s;
    if (auto it = j.find("plan"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw std::invalid_argument("'plan' must be a string");
        s.plan = it->get<std::string>();
    }
    if (auto it = j.find("addOns"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw std::invalid_argument("'addOns' must be an array of strings");
        for (const auto& a : *it) {
            if (!a.is_string()) throw std::invalid_argument("'addOns' must be an array of strings");
            s.add_ons.push_back(a.get<std::string>());
        }
    }
    return s;
}

}  // namespace pricing
