// Serial reference kernels against the pruned OpenMP kernels.
//
//   bench_engine --benchmark_filter=Salesforce
//   OMP_NUM_THREADS=8 bench_engine

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pricing/engine.hpp"
#include "pricing/filter.hpp"
#include "pricing/parser.hpp"

using namespace pricing;

namespace {

Pricing load(const std::string& relative)
{
    std::ifstream in(std::string(PRICING_BENCH_DATA) + "/" + relative, std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();
    auto parsed = parse_pricing(text.str());
    if (!parsed.ok()) throw std::runtime_error("cannot load " + relative);
    return std::move(*parsed.pricing);
}

/// Four plans and `n` add-ons: every seventh add-on depends on its
/// predecessor, every eleventh excludes the one two places back.
Pricing synthetic(int n)
{
    PricingDraft d;
    d.saas_name = "Synthetic";
    d.currency = "USD";
    for (int i = 0; i < 6; ++i)
        d.features.push_back({.name = "f" + std::to_string(i), .value_type = ValueType::Boolean,
                              .default_value = Value::boolean(i % 2 == 0)});
    UsageLimit seats;
    seats.name = "seats";
    seats.default_value = Value::numeric(5);
    d.usage_limits.push_back(seats);
    for (int p = 0; p < 4; ++p) {
        Plan plan;
        plan.name = "P" + std::to_string(p);
        plan.price = Price::amount(Decimal::from_int(10 * p));
        plan.usage_limit_values["seats"] = Value::numeric(5 + 10 * p);
        d.plans.push_back(plan);
    }
    for (int i = 0; i < n; ++i) {
        AddOn a;
        a.name = "A" + std::to_string(i);
        a.price = Price::amount(Decimal::from_int(1 + i % 7));
        for (int p = 0; p < 4; ++p)
            if ((i + p) % 4 != 0) a.available_for.push_back("P" + std::to_string(p));
        a.feature_values["f" + std::to_string(i % 6)] = Value::boolean(true);
        a.usage_limit_extensions["seats"] = Value::numeric(i + 1);
        if (i % 7 == 6) a.depends_on.push_back("A" + std::to_string(i - 1));
        if (i % 11 == 10) a.excludes.push_back("A" + std::to_string(i - 2));
        d.add_ons.push_back(a);
    }
    auto built = build_pricing(std::move(d));
    if (!built.pricing) throw std::runtime_error("synthetic pricing rejected");
    return std::move(*built.pricing);
}

const EngineOptions kRelaxed{.enforce_pricing_constraints = false};

const Pricing& salesforce()
{
    static const Pricing p = load("corpus2024/salesforce.yml");
    return p;
}

const Pricing& synthetic_large()
{
    static const Pricing p = synthetic(20);
    return p;
}

template <typename F>
void run(benchmark::State& state, F&& kernel)
{
    std::uint64_t items = 0;
    for (auto _ : state) {
        auto n = kernel();
        benchmark::DoNotOptimize(n);
        items += n;
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(items));
}

void SalesforceEnumerateSerial(benchmark::State& state)
{
    run(state, [] { return serial::enumerate(ConstraintProblem(salesforce()), kRelaxed).size(); });
}

void SalesforceEnumerateParallel(benchmark::State& state)
{
    run(state, [] { return enumerate(ConstraintProblem(salesforce()), kRelaxed).size(); });
}

void SyntheticCountSerial(benchmark::State& state)
{
    run(state, [] { return serial::count(ConstraintProblem(synthetic_large())); });
}

void SyntheticCountParallel(benchmark::State& state)
{
    run(state, [] { return count(ConstraintProblem(synthetic_large())); });
}

void SyntheticFilteredCountSerial(benchmark::State& state)
{
    const auto& p = synthetic_large();
    const ConstraintProblem cp(p, parse_filter("f1 AND f3 AND seats >= 60", p));
    run(state, [&] { return serial::count(cp); });
}

void SyntheticFilteredCountParallel(benchmark::State& state)
{
    const auto& p = synthetic_large();
    const ConstraintProblem cp(p, parse_filter("f1 AND f3 AND seats >= 60", p));
    run(state, [&] { return count(cp); });
}

void SyntheticOptimizeSerial(benchmark::State& state)
{
    const auto& p = synthetic_large();
    const ConstraintProblem cp(p, parse_filter("seats >= 100", p));
    run(state, [&] { return serial::optimize(cp, Direction::Min).optimal.size(); });
}

void SyntheticOptimizeParallel(benchmark::State& state)
{
    const auto& p = synthetic_large();
    const ConstraintProblem cp(p, parse_filter("seats >= 100", p));
    run(state, [&] { return optimize(cp, Direction::Min).optimal.size(); });
}

}  // namespace

BENCHMARK(SalesforceEnumerateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(SalesforceEnumerateParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(SyntheticCountSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(SyntheticCountParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(SyntheticFilteredCountSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(SyntheticFilteredCountParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(SyntheticOptimizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(SyntheticOptimizeParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
