#pragma once

#include <nlohmann/json.hpp>

#include "pricing/analysis.hpp"

// JSON shapes shared by the CLI (--format json) and the HTTP service.
// Decimal quantities become JSON numbers, Unlimited becomes the string
// "unlimited", and costs are strings so amounts stay exact ("65.99").

namespace pricing {

using nlohmann::json;

json to_json(const Value& value);
json to_json(const Price& price);
json to_json(const Diagnostic& diagnostic);
json to_json(const std::vector<Diagnostic>& diagnostics);
json to_json(const Violation& violation);
json to_json(const std::vector<Violation>& violations);
json to_json(const Subscription& subscription);
/// {"features": {name: value}, "usageLimits": {name: value}, "cost": "..."}
json to_json(const Pricing& pricing, const SubscriptionValuation& valuation);
json to_json(const Pricing& pricing, const Solution& solution);
json to_json(const OptimumResult& result);
json to_json(const LintFinding& finding);
json to_json(const std::vector<LintFinding>& findings);
json to_json(const PricingStats& stats);
json to_json(const PricingValidity& validity);
json to_json(const Pricing& pricing, const SubscriptionValidity& validity);

/// Reads {"plan": "PRO", "addOns": ["..."]}; both keys optional.
/// Throws std::invalid_argument on a malformed object.
Subscription subscription_from_json(const json& j);

}  // namespace pricing
