#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pricing/engine.hpp"

namespace pricing {

/// Lint and dead-element output. Codes: LINKED_FEATURE_MISMATCH,
/// NUMERIC_FEATURE_SUSPECT, FUTURE_CREATION_DATE, NO_NUMERIC_PRICE,
/// DEAD_ADDON, DEAD_PLAN, DUPLICATE_PLAN_VALUATION, plus NOT_EMPTY and
/// ADDON_AVAILABLE_SOME_PLAN for the remaining pricing-level constraints.
struct LintFinding {
    std::string code;
    Severity severity = Severity::Error;
    std::string subject;
    std::string message;

    friend bool operator==(const LintFinding&, const LintFinding&) = default;
};

/// Severity fixed per code.
Severity lint_severity(std::string_view code);

struct PricingStats {
    std::size_t features = 0;
    std::size_t usage_limits = 0;
    std::size_t plans = 0;
    std::size_t add_ons = 0;
    /// Subscriptions satisfying the subscription-level constraints. Counted
    /// even when the pricing itself fails check_pricing.
    std::uint64_t configuration_space_size = 0;
    bool valid = false;
    std::size_t violations = 0;
};

struct PricingValidity {
    bool valid = false;
    std::vector<Violation> violations;
    std::vector<std::string> notes;
    /// First solution in enumeration order, when one exists.
    std::optional<Subscription> witness;
};

struct SubscriptionValidity {
    bool valid = false;
    std::vector<Violation> violations;
    /// Present whenever the subscription passes the constraints.
    std::optional<SubscriptionValuation> valuation;
    /// False when a requirement filter was given and the valuation misses it.
    bool meets_requirement = true;
};

struct AttainableRange {
    Value min;
    Value max;
};

std::uint64_t cardinal(const Pricing& pricing, const EngineOptions& options = {});

ConstraintProblem filter(const Pricing& pricing, FilterExpr f);
/// Parses `text` first; throws FilterError.
ConstraintProblem filter(const Pricing& pricing, std::string_view text);

std::vector<Solution> subscriptions(const Pricing& pricing, const std::optional<FilterExpr>& f = std::nullopt,
                                    const EngineOptions& options = {});

/// Throws EngineError(UnknownReference).
Price subscription_cost(const Pricing& pricing, const Subscription& subscription);

PricingValidity valid_pricing(const Pricing& pricing);

SubscriptionValidity valid_subscription(const Pricing& pricing, const Subscription& subscription);
/// Also checks the valuation against `requirement`.
SubscriptionValidity valid_subscription(const Pricing& pricing, const Subscription& subscription,
                                        const FilterExpr& requirement);

/// True when some solution satisfies `requirement`.
bool attainable(const Pricing& pricing, const FilterExpr& requirement);

/// Smallest and largest resolved value of a NUMERIC usage limit or feature
/// over all solutions. Throws std::invalid_argument for unknown or
/// non-numeric names and EngineError(NoSolution) on an empty space.
AttainableRange attainable_range(const Pricing& pricing, std::string_view name);

OptimumResult optimum(const Pricing& pricing, const std::optional<FilterExpr>& f, Direction direction,
                      const EngineOptions& options = {});

/// Pricing-level violations as findings, modeling-quality checks, then
/// dead_elements. `now` decides FUTURE_CREATION_DATE.
std::vector<LintFinding> lint(const Pricing& pricing, std::chrono::year_month_day now);

/// Plans and add-ons that occur in no subscription, and plans that resolve
/// to the same values as an earlier plan at a different price. Pricing-level
/// violations are ignored here.
std::vector<LintFinding> dead_elements(const Pricing& pricing);

PricingStats stats(const Pricing& pricing, const EngineOptions& options = {});

}  // namespace pricing
