#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pricing/filter.hpp"
#include "pricing/model.hpp"

namespace pricing {

/// The seven validity constraints: three on the pricing, four on a subscription.
enum class ConstraintId {
    NotEmpty,
    LinkedFeatures,
    AddOnAvailableSomePlan,
    SubscriptionNotEmpty,
    AddOnAvailableForPlan,
    Dependency,
    Exclusion,
};

std::string_view to_string(ConstraintId id);

struct Violation {
    ConstraintId constraint = ConstraintId::NotEmpty;
    std::vector<std::string> elements;  // offending element names
    std::string message;
};

class EngineError : public std::runtime_error {
public:
    enum class Kind { InvalidPricing, UnknownReference, ConflictingOverride, NoSolution, NoPricedSolution, TooManyAddOns };

    EngineError(Kind kind, const std::string& message, std::vector<Violation> violations = {})
        : std::runtime_error(message), kind_(kind), violations_(std::move(violations))
    {
    }

    Kind kind() const { return kind_; }
    std::string_view code() const;
    const std::vector<Violation>& violations() const { return violations_; }

private:
    Kind kind_;
    std::vector<Violation> violations_;
};

/// Pricing-level constraints: not empty, linked features present in each plan
/// (a plan may not give a usage limit a non-zero value while a linked feature
/// is false there), every add-on available for some plan.
std::vector<Violation> check_pricing(const Pricing& pricing);

/// Subscription-level constraints: not empty (and names a plan whenever the
/// pricing has plans), add-ons available for the plan, dependencies
/// included, exclusions respected in both directions.
/// Throws EngineError(UnknownReference) when a name does not resolve.
std::vector<Violation> check_subscription(const Pricing& pricing, const Subscription& subscription);

/// Resolved feature / usage-limit values and cost of a subscription.
/// Throws EngineError(ConflictingOverride) when two selected add-ons set
/// different TEXT values for the same feature.
SubscriptionValuation valuate(const Pricing& pricing, const Subscription& subscription);

/// Add-ons sorted into declaration order with duplicates dropped.
Subscription canonical(const Pricing& pricing, const Subscription& subscription);

/// A pricing plus an optional filter; its solutions are the configuration space.
/// Holds a reference: the pricing must outlive the problem.
class ConstraintProblem {
public:
    explicit ConstraintProblem(const Pricing& pricing, std::optional<FilterExpr> filter = std::nullopt)
        : pricing_(&pricing), filter_(std::move(filter))
    {
    }

    const Pricing& pricing() const { return *pricing_; }
    const std::optional<FilterExpr>& filter() const { return filter_; }

    /// Conjunction of the current filter (if any) and `extra`.
    ConstraintProblem with_filter(FilterExpr extra) const;

private:
    const Pricing* pricing_;
    std::optional<FilterExpr> filter_;
};

struct Solution {
    Subscription subscription;
    SubscriptionValuation valuation;
};

struct EngineOptions {
    /// When false, pricing-level violations do not abort enumeration; only
    /// the subscription constraints define the space. Used by dead-element
    /// detection on pricings that are invalid for other reasons.
    bool enforce_pricing_constraints = true;
    /// OpenMP team size; 0 keeps the runtime default.
    int threads = 0;
};

/// All solutions, in deterministic order: plans in declaration order (or the
/// single plan-less branch when the pricing has no plans), then add-on
/// subsets in binary-counting order over declaration order.
/// Throws EngineError(InvalidPricing) if check_pricing reports violations.
std::vector<Solution> enumerate(const ConstraintProblem& problem, const EngineOptions& options = {});

/// Streams solutions in the same order on the calling thread; stops early
/// when `visit` returns false.
void for_each_solution(const ConstraintProblem& problem, const std::function<bool(const Solution&)>& visit,
                       const EngineOptions& options = {});

/// Number of solutions. Without filter, dependencies or exclusions this is
/// the closed form sum over plan branches of 2^(available add-ons).
std::uint64_t count(const ConstraintProblem& problem, const EngineOptions& options = {});

enum class Direction { Min, Max };

std::string_view to_string(Direction direction);

struct PricedSubscription {
    Subscription subscription;
    Decimal cost;
};

struct OptimumResult {
    Direction direction = Direction::Min;
    Decimal cost;
    std::vector<PricedSubscription> optimal;  // every solution attaining `cost`
    std::vector<Subscription> indeterminate;  // solutions priced "contact sales"
};

/// Throws EngineError(NoSolution) for an empty space and
/// EngineError(NoPricedSolution) when every solution is "contact sales".
OptimumResult optimize(const ConstraintProblem& problem, Direction direction, const EngineOptions& options = {});

/// Straightforward single-threaded kernels without pruning. Kept as the
/// reference the parallel kernels are tested and benchmarked against.
namespace serial {

std::vector<Solution> enumerate(const ConstraintProblem& problem, const EngineOptions& options = {});
std::uint64_t count(const ConstraintProblem& problem, const EngineOptions& options = {});
OptimumResult optimize(const ConstraintProblem& problem, Direction direction, const EngineOptions& options = {});

}  // namespace serial

}  // namespace pricing
