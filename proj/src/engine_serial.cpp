#include "engine_internal.hpp"

namespace pricing::serial {

namespace {

using detail::CompiledPricing;
using detail::Mask;

// Visits every submask of `available` in increasing numeric order.
template <typename Visit>
void for_each_submask(Mask available, Visit&& visit)
{
    Mask s = 0;
    while (true) {
        visit(s);
        if (s == available) break;
        s = ((s | ~available) + 1) & available;
    }
}

template <typename Visit>
void walk(const CompiledPricing& compiled, const std::optional<FilterExpr>& filter, Visit&& visit)
{
    for (const auto& branch : compiled.branches()) {
        for_each_submask(branch.available, [&](Mask mask) {
            if (!compiled.admissible(branch, mask)) return;
            auto valuation = compiled.valuate(branch.plan, mask);
            if (filter && !evaluate(*filter, valuation)) return;
            visit(branch, mask, std::move(valuation));
        });
    }
}

}  // namespace

std::vector<Solution> enumerate(const ConstraintProblem& problem, const EngineOptions& options)
{
    detail::require_valid(problem.pricing(), options);
    const CompiledPricing compiled(problem.pricing());
    std::vector<Solution> solutions;
    walk(compiled, problem.filter(), [&](const CompiledPricing::Branch& branch, Mask mask, SubscriptionValuation v) {
        solutions.push_back({compiled.subscription(branch.plan, mask), std::move(v)});
    });
    return solutions;
}

std::uint64_t count(const ConstraintProblem& problem, const EngineOptions& options)
{
    detail::require_valid(problem.pricing(), options);
    const CompiledPricing compiled(problem.pricing());
    const auto& filter = problem.filter();
    std::uint64_t n = 0;
    for (const auto& branch : compiled.branches()) {
        for_each_submask(branch.available, [&](Mask mask) {
            if (!compiled.admissible(branch, mask)) return;
            if (!filter || evaluate(*filter, compiled.valuate(branch.plan, mask))) ++n;
        });
    }
    return n;
}

OptimumResult optimize(const ConstraintProblem& problem, Direction direction, const EngineOptions& options)
{
    return detail::pick_optimum(serial::enumerate(problem, options), direction);
}

}  // namespace pricing::serial
