#pragma once

// Shared between the parallel kernels (engine.cpp) and the serial reference
// (engine_serial.cpp). Not installed.

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pricing/engine.hpp"

namespace pricing::detail {

using Mask = std::uint64_t;

inline constexpr std::size_t kMaxAddOns = 64;

inline Mask bit(std::size_t i) { return Mask{1} << i; }

/// Index-based view of a pricing: add-on relations as bitmasks and per-plan
/// base valuations, so the kernels never touch names.
class CompiledPricing {
public:
    struct Branch {
        std::optional<std::size_t> plan;
        Mask available = 0;
    };

    explicit CompiledPricing(const Pricing& pricing);

    const Pricing& pricing() const { return *pricing_; }
    std::size_t add_on_count() const { return depends_.size(); }
    const std::vector<Branch>& branches() const { return branches_; }

    Mask depends(std::size_t a) const { return depends_[a]; }
    Mask dependents(std::size_t a) const { return dependents_[a]; }
    /// Add-ons that may not be combined with `a` (exclusion in either direction).
    Mask conflicts(std::size_t a) const { return conflicts_[a]; }
    bool has_relations() const { return has_relations_; }

    /// Non-empty, dependency-closed and exclusion-free. Availability is the
    /// caller's business (masks are drawn from a branch's available set).
    bool admissible(const Branch& branch, Mask mask) const;

    SubscriptionValuation valuate(std::optional<std::size_t> plan, Mask mask) const;
    Price cost(std::optional<std::size_t> plan, Mask mask) const;
    Subscription subscription(std::optional<std::size_t> plan, Mask mask) const;

private:
    struct Override {
        std::size_t index;
        const Value* value;
    };

    const Pricing* pricing_;
    std::vector<Mask> depends_;
    std::vector<Mask> dependents_;
    std::vector<Mask> conflicts_;
    bool has_relations_ = false;
    std::vector<Branch> branches_;
    // base values per plan; the last entry holds the declared defaults
    std::vector<std::vector<Value>> base_features_;
    std::vector<std::vector<Value>> base_limits_;
    std::vector<std::vector<Override>> feature_overrides_;
    std::vector<std::vector<Override>> limit_overrides_;
    std::vector<std::vector<Override>> limit_extensions_;
};

/// Dependency closure of `required`, if it fits the branch and contains no
/// excluded pair. Any solution containing `required` contains the closure.
std::optional<Mask> minimal_superset(const CompiledPricing& compiled, const CompiledPricing::Branch& branch,
                                     Mask required);

/// Sequential pruned walk over admissible masks in enumeration order, with
/// no valuation. Stops when `visit` returns false.
void for_each_mask(const CompiledPricing& compiled,
                   const std::function<bool(const CompiledPricing::Branch&, Mask)>& visit);

/// Throws EngineError(InvalidPricing) unless the options waive pricing checks.
void require_valid(const Pricing& pricing, const EngineOptions& options);

/// Extreme Amount cost among `solutions`, ties kept in enumeration order.
OptimumResult pick_optimum(const std::vector<Solution>& solutions, Direction direction);

}  // namespace pricing::detail
