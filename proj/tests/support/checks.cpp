#include "checks.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "oracle.hpp"
#include <yaml-cpp/yaml.h>

#include "pricing/analysis.hpp"
#include "pricing/engine.hpp"

using pricing::ConstraintProblem;
using pricing::EngineError;

namespace checks {

void Report::fail(std::string message)
{
    ++mismatches;
    if (messages.size() < 10) messages.push_back(std::move(message));
}

namespace {

std::map<std::string, pricing::Value> named(const pricing::Pricing& p, const pricing::SubscriptionValuation& v)
{
    std::map<std::string, pricing::Value> out;
    for (std::size_t f = 0; f < p.features().size(); ++f) out.insert_or_assign(p.features()[f].name, v.feature_values[f]);
    for (std::size_t u = 0; u < p.usage_limits().size(); ++u)
        out.insert_or_assign(p.usage_limits()[u].name, v.usage_limit_values[u]);
    return out;
}

std::optional<std::int64_t> cents(const pricing::Price& price)
{
    if (price.is_contact()) return std::nullopt;
    return oracle::to_cents(price.value());
}

template <typename F>
std::optional<EngineError::Kind> error_of(F&& f)
{
    try {
        f();
    } catch (const EngineError& e) {
        return e.kind();
    }
    return std::nullopt;
}

std::string label(std::uint64_t seed, std::size_t i)
{
    return "seed " + std::to_string(seed) + " case " + std::to_string(i);
}

bool has_relations(const pricing::Pricing& p)
{
    for (const auto& a : p.add_ons())
        if (!a.depends_on.empty() || !a.excludes.empty()) return true;
    return false;
}

void compare_enumeration(Report& r, const std::string& where, const pricing::Pricing& p,
                         const std::vector<pricing::Solution>& got, const oracle::Result& want)
{
    if (got.size() != want.solutions.size()) {
        r.fail(where + ": " + std::to_string(got.size()) + " solutions, oracle " +
               std::to_string(want.solutions.size()));
        return;
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
        const auto& g = got[i];
        const auto& w = want.solutions[i];
        if (!(g.subscription == w.subscription)) {
            r.fail(where + ": solution " + std::to_string(i) + " is " + to_string(g.subscription) + ", oracle " +
                   to_string(w.subscription));
            return;
        }
        if (named(p, g.valuation) != w.values) {
            r.fail(where + ": valuation differs for " + to_string(g.subscription));
            return;
        }
        if (cents(g.valuation.cost) != w.cost_cents) {
            r.fail(where + ": cost differs for " + to_string(g.subscription));
            return;
        }
    }
}

void compare_optimum(Report& r, const std::string& where, const ConstraintProblem& cp, const oracle::Result& want,
                     pricing::Direction direction, bool serial)
{
    std::optional<std::int64_t> best;
    for (const auto& s : want.solutions) {
        if (!s.cost_cents) continue;
        if (!best || (direction == pricing::Direction::Min ? *s.cost_cents < *best : *s.cost_cents > *best))
            best = s.cost_cents;
    }
    pricing::OptimumResult got;
    auto error = error_of([&] { got = serial ? pricing::serial::optimize(cp, direction) : pricing::optimize(cp, direction); });
    if (want.solutions.empty()) {
        if (error != EngineError::Kind::NoSolution) r.fail(where + ": expected NoSolution");
        return;
    }
    if (!best) {
        if (error != EngineError::Kind::NoPricedSolution) r.fail(where + ": expected NoPricedSolution");
        return;
    }
    if (error) {
        r.fail(where + ": unexpected engine error from optimize");
        return;
    }
    if (oracle::to_cents(got.cost) != *best) {
        r.fail(where + ": optimum cost " + got.cost.to_string() + ", oracle " + std::to_string(*best) + " cents");
        return;
    }
    std::vector<pricing::Subscription> want_optimal, want_contact, got_optimal;
    for (const auto& s : want.solutions) {
        if (!s.cost_cents)
            want_contact.push_back(s.subscription);
        else if (*s.cost_cents == *best)
            want_optimal.push_back(s.subscription);
    }
    for (const auto& o : got.optimal) got_optimal.push_back(o.subscription);
    if (got_optimal != want_optimal) r.fail(where + ": optimal set differs");
    if (got.indeterminate != want_contact) r.fail(where + ": indeterminate set differs");
}

}  // namespace

Report oracle_sweep(std::uint64_t seed, std::size_t pricings)
{
    Report r;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < pricings; ++i) {
        const auto p = gen::pricing(rng);
        std::optional<pricing::FilterExpr> filter;
        if (std::bernoulli_distribution(0.6)(rng)) filter = gen::filter(rng, p);
        const ConstraintProblem cp(p, filter);
        const auto want = oracle::solve(p, filter);
        const std::string where = label(seed, i);
        ++r.cases;

        const pricing::EngineOptions threaded{true, 3};
        if (want.invalid_pricing) {
            if (error_of([&] { pricing::enumerate(cp); }) != EngineError::Kind::InvalidPricing ||
                error_of([&] { pricing::count(cp); }) != EngineError::Kind::InvalidPricing ||
                error_of([&] { pricing::serial::enumerate(cp); }) != EngineError::Kind::InvalidPricing ||
                error_of([&] { pricing::optimize(cp, pricing::Direction::Min); }) != EngineError::Kind::InvalidPricing)
                r.fail(where + ": expected InvalidPricing");
            continue;
        }
        if (want.conflicting) {
            if (error_of([&] { pricing::enumerate(cp); }) != EngineError::Kind::ConflictingOverride ||
                error_of([&] { pricing::serial::enumerate(cp); }) != EngineError::Kind::ConflictingOverride)
                r.fail(where + ": expected ConflictingOverride");
            // Counting without a filter never resolves values.
            if (!filter && (pricing::count(cp) != want.unfiltered || pricing::serial::count(cp) != want.unfiltered))
                r.fail(where + ": unfiltered count differs");
            continue;
        }

        std::vector<pricing::Solution> got;
        if (auto e = error_of([&] { got = pricing::enumerate(cp); })) {
            r.fail(where + ": unexpected engine error from enumerate");
            continue;
        }
        compare_enumeration(r, where + " (parallel)", p, got, want);
        compare_enumeration(r, where + " (3 threads)", p, pricing::enumerate(cp, threaded), want);
        compare_enumeration(r, where + " (serial)", p, pricing::serial::enumerate(cp), want);

        if (pricing::count(cp) != want.solutions.size()) r.fail(where + ": count differs");
        if (pricing::count(cp, threaded) != want.solutions.size()) r.fail(where + ": threaded count differs");
        if (pricing::serial::count(cp) != want.solutions.size()) r.fail(where + ": serial count differs");

        for (auto direction : {pricing::Direction::Min, pricing::Direction::Max}) {
            compare_optimum(r, where + " optimum", cp, want, direction, false);
            compare_optimum(r, where + " serial optimum", cp, want, direction, true);
        }
    }
    return r;
}

Report growth_laws(std::uint64_t seed, std::size_t pricings)
{
    Report r;
    std::mt19937_64 rng(seed);
    gen::Limits plain;
    plain.dependencies = false;
    plain.invalid_bias = 0;
    for (std::size_t i = 0; i < pricings; ++i) {
        const auto d = gen::draft(rng, plain);
        const auto p = gen::build(d);
        // Without plans the space is 2^n - 1 and an add-on gives 2x + 1.
        if (d.plans.empty() || !pricing::check_pricing(p).empty()) continue;
        const std::string where = label(seed, i);
        const auto base = pricing::count(ConstraintProblem(p));
        ++r.cases;

        // A free add-on available everywhere doubles the space.
        auto doubled = d;
        doubled.add_ons.push_back(gen::free_add_on(d, "Extra", 7));
        const auto with_add_on = gen::build(doubled);
        const auto n2 = pricing::count(ConstraintProblem(with_add_on));
        if (n2 != 2 * base)
            r.fail(where + ": doubling gave " + std::to_string(n2) + " from " + std::to_string(base));
        if (pricing::serial::count(ConstraintProblem(with_add_on)) != n2) r.fail(where + ": serial doubling differs");

        // A new plan adds 2^(add-ons made available to it).
        auto grown = d;
        pricing::Plan plan;
        plan.name = "Fresh";
        plan.price = pricing::Price::amount(pricing::Decimal::from_int(1));
        grown.plans.push_back(plan);
        int available = 0;
        for (auto& a : grown.add_ons)
            if (std::bernoulli_distribution(0.5)(rng)) {
                a.available_for.push_back("Fresh");
                ++available;
            }
        const auto with_plan = gen::build(grown);
        if (!pricing::check_pricing(with_plan).empty()) continue;
        const auto n3 = pricing::count(ConstraintProblem(with_plan));
        if (n3 != base + (std::uint64_t{1} << available))
            r.fail(where + ": plan additivity gave " + std::to_string(n3) + " from " + std::to_string(base) + " + 2^" +
                   std::to_string(available));
    }
    return r;
}

Report filter_monotonicity(std::uint64_t seed, std::size_t pricings)
{
    Report r;
    std::mt19937_64 rng(seed);
    gen::Limits limits;
    limits.invalid_bias = 0;
    limits.text_override = 0;
    for (std::size_t i = 0; i < pricings; ++i) {
        const auto p = gen::pricing(rng, limits);
        if (!pricing::check_pricing(p).empty()) continue;
        const std::string where = label(seed, i);
        ++r.cases;
        const auto f = gen::filter(rng, p);
        const auto g = gen::filter(rng, p);
        const ConstraintProblem none(p);
        const ConstraintProblem with_f(p, f);
        const auto all = pricing::count(none);
        const auto nf = pricing::count(with_f);
        const auto nfg = pricing::count(with_f.with_filter(g));
        if (nf > all) r.fail(where + ": filter increased the count");
        if (nfg > nf) r.fail(where + ": extra conjunct increased the count");
        if (pricing::enumerate(none).size() != all) r.fail(where + ": count != |enumerate| without filter");
        if (pricing::enumerate(with_f).size() != nf) r.fail(where + ": count != |enumerate| with filter");
        if (pricing::count(ConstraintProblem(p, pricing::FilterExpr::all_of({}))) != all)
            r.fail(where + ": neutral filter changed the count");
    }
    return r;
}

Report shortcut_agreement(std::uint64_t seed, std::size_t pricings)
{
    Report r;
    std::mt19937_64 rng(seed);
    gen::Limits limits;
    limits.dependencies = false;
    limits.invalid_bias = 0;
    limits.text_override = 0;
    for (std::size_t i = 0; i < pricings; ++i) {
        const auto p = gen::pricing(rng, limits);
        if (!pricing::check_pricing(p).empty() || has_relations(p)) continue;
        ++r.cases;
        std::uint64_t closed_form = 0;
        if (p.plans().empty()) {
            closed_form = (std::uint64_t{1} << p.add_ons().size()) - 1;
        } else {
            for (const auto& plan : p.plans()) {
                int available = 0;
                for (const auto& a : p.add_ons())
                    available += std::count(a.available_for.begin(), a.available_for.end(), plan.name) > 0;
                closed_form += std::uint64_t{1} << available;
            }
        }
        const ConstraintProblem cp(p);
        if (pricing::count(cp) != closed_form || pricing::serial::count(cp) != closed_form ||
            pricing::enumerate(cp).size() != closed_form)
            r.fail(label(seed, i) + ": closed form " + std::to_string(closed_form) + " disagrees with enumeration");
    }
    return r;
}

Report round_trip(const pricing::Pricing& p, const std::string& where)
{
    Report r;
    ++r.cases;
    const std::string text = pricing::serialize_pricing(p);
    auto again = pricing::parse_pricing(text);
    if (!again.ok()) {
        std::string msg = where + ": serialized form does not parse:";
        for (const auto& d : again.diagnostics) msg += " " + d.message;
        r.fail(msg);
        return r;
    }
    if (!(*again.pricing == p)) r.fail(where + ": parse(serialize(p)) != p");
    if (pricing::serialize_pricing(*again.pricing) != text) r.fail(where + ": serialization is not a fixed point");
    return r;
}

Report round_trip_files(const std::vector<std::filesystem::path>& files)
{
    Report r;
    for (const auto& f : files) {
        auto one = round_trip(load(f), f.filename().string());
        r.cases += one.cases;
        for (auto& m : one.messages) r.fail(m);
    }
    return r;
}

Report round_trip_random(std::uint64_t seed, std::size_t pricings)
{
    Report r;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < pricings; ++i) {
        auto one = round_trip(gen::pricing(rng), label(seed, i));
        r.cases += one.cases;
        for (auto& m : one.messages) r.fail(m);
    }
    return r;
}

Report seeded_lint(const std::filesystem::path& manifest, const std::filesystem::path& directory,
                   std::chrono::year_month_day now)
{
    Report report;
    for (const auto& entry : YAML::LoadFile(manifest.string())) {
        ++report.cases;
        const auto file = entry.first.as<std::string>();
        std::vector<std::string> expected;
        for (const auto& item : entry.second) expected.push_back(item.as<std::string>());

        std::vector<std::string> found;
        for (const auto& f : pricing::lint(load(directory / file), now)) found.push_back(f.code + " " + f.subject);
        std::sort(expected.begin(), expected.end());
        std::sort(found.begin(), found.end());
        if (found != expected) {
            std::string got;
            for (const auto& f : found) got += " [" + f + "]";
            report.fail(file + ": got" + (got.empty() ? " nothing" : got));
        }
    }
    if (report.cases == 0) report.fail("empty manifest " + manifest.string());
    return report;
}

Report clean_lint(const pricing::Pricing& p, const std::string& label, std::chrono::year_month_day now)
{
    Report report;
    report.cases = 1;
    for (const auto& f : pricing::lint(p, now)) report.fail(label + ": unexpected " + f.code + " " + f.subject);
    return report;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream text;
    text << in.rdbuf();
    return text.str();
}

pricing::Pricing load(const std::filesystem::path& path)
{
    auto parsed = pricing::parse_pricing(read_file(path));
    if (!parsed.ok()) {
        std::string msg = path.string() + " does not parse:";
        for (const auto& d : parsed.diagnostics) msg += " " + d.message;
        throw std::runtime_error(msg);
    }
    return std::move(*parsed.pricing);
}

std::vector<std::filesystem::path> yaml_files(const std::filesystem::path& directory)
{
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(directory))
        if (e.is_regular_file() && e.path().extension() == ".yml") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace checks
