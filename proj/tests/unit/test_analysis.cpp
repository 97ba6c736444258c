#include <doctest.h>

#include <algorithm>

#include "generators.hpp"
#include "helpers.hpp"
#include "pricing/analysis.hpp"

using namespace pricing;
using namespace std::chrono;

namespace {

constexpr year_month_day kNow{year{2026}, month{10}, day{15}};

Decimal dec(const char* text) { return *Decimal::parse(text); }

bool has_code(const std::vector<LintFinding>& findings, std::string_view code, std::string_view subject)
{
    return std::any_of(findings.begin(), findings.end(),
                       [&](const LintFinding& f) { return f.code == code && f.subject == subject; });
}

}  // namespace

TEST_CASE("cardinal")
{
    CHECK(cardinal(fixture("zoom")) == 20);
    CHECK(cardinal(fixture("minimal")) == 1);
    CHECK(cardinal(checks::load(data_path("corpus2024/salesforce.yml")), {.enforce_pricing_constraints = false}) ==
          12544);
}

TEST_CASE("filter composes with cardinal")
{
    auto zoom = fixture("zoom");
    CHECK(count(filter(zoom, "administratorPortal = true AND maxAssistantsPerMeeting >= 200")) == 8);
    CHECK(count(filter(zoom, FilterExpr::all_of({}))) == 20);
    CHECK(count(filter(zoom, "streaming = true AND streaming = false")) == 0);
    CHECK_THROWS_AS(filter(zoom, "nonsense >= 3"), FilterError);

    auto narrowed = filter(zoom, "record").with_filter(parse_filter("cloudStorage >= 5", zoom));
    CHECK(count(narrowed) == count(filter(zoom, "record AND cloudStorage >= 5")));
}

TEST_CASE("subscriptions with recording")
{
    auto zoom = fixture("zoom");
    auto all = subscriptions(zoom);
    CHECK(all.size() == cardinal(zoom));

    auto recorded = subscriptions(zoom, parse_filter("record = true", zoom));
    std::size_t expected = 0;
    for (const auto& s : all)
        if (value_of(zoom, s.valuation, "record") == Value::boolean(true)) ++expected;
    CHECK(recorded.size() == expected);
    CHECK(recorded.size() == 12);
    for (const auto& s : recorded) CHECK(s.subscription.plan != "BASIC");
}

TEST_CASE("subscription cost")
{
    auto zoom = fixture("zoom");
    CHECK(subscription_cost(zoom, {"PRO", {"Huge Meetings"}}) == Price::amount(dec("65.99")));
    CHECK(subscription_cost(zoom, {"BUSINESS", {}}) == Price::amount(dec("21.99")));

    auto d = zoom.data();
    d.add_ons[2].price = Price::contact();
    auto contact = gen::build(d);
    CHECK(subscription_cost(contact, {"PRO", {"Phone Dialing"}}).is_contact());
    CHECK_THROWS_AS(subscription_cost(zoom, {"PRO", {"Nope"}}), EngineError);
}

TEST_CASE("valid pricing")
{
    CHECK(valid_pricing(fixture("zoom")).valid);
    auto empty = valid_pricing(fixture("empty"));
    CHECK_FALSE(empty.valid);
    REQUIRE(!empty.violations.empty());
    CHECK(empty.violations[0].constraint == ConstraintId::NotEmpty);
}

TEST_CASE("circular constraints are satisfiable with a dead add-on")
{
    auto circular = fixture("circular");
    auto validity = valid_pricing(circular);
    CHECK(validity.valid);
    REQUIRE(validity.witness);
    CHECK(validity.witness->add_ons == std::vector<std::string>{"a3"});
    CHECK(!validity.notes.empty());

    std::vector<std::vector<std::string>> sets;
    for (const auto& s : subscriptions(circular)) sets.push_back(s.subscription.add_ons);
    CHECK(sets == std::vector<std::vector<std::string>>{{"a3"}, {"a2", "a3"}});

    auto dead = dead_elements(circular);
    REQUIRE(dead.size() == 1);
    CHECK(dead[0].code == "DEAD_ADDON");
    CHECK(dead[0].subject == "a1");
    CHECK(dead[0].severity == Severity::Warning);
}

TEST_CASE("valid subscription")
{
    auto zoom = fixture("zoom");
    auto pro = valid_subscription(zoom, {"PRO", {}});
    CHECK(pro.valid);
    REQUIRE(pro.valuation);
    CHECK(pro.valuation->cost == Price::amount(dec("15.99")));

    auto bad = valid_subscription(zoom, {"BUSINESS", {"Huge Meetings"}});
    CHECK_FALSE(bad.valid);
    CHECK_FALSE(bad.valuation);
    REQUIRE(bad.violations.size() == 1);
    CHECK(bad.violations[0].constraint == ConstraintId::AddOnAvailableForPlan);

    auto none = valid_subscription(zoom, {std::nullopt, {}});
    CHECK_FALSE(none.valid);
    CHECK(none.violations[0].constraint == ConstraintId::SubscriptionNotEmpty);

    auto need = parse_filter("maxAssistantsPerMeeting >= 1000", zoom);
    CHECK(valid_subscription(zoom, {"PRO", {"Huge Meetings"}}, need).meets_requirement);
    CHECK_FALSE(valid_subscription(zoom, {"PRO", {}}, need).meets_requirement);
}

TEST_CASE("attainable participant limits")
{
    auto zoom = fixture("zoom");
    CHECK(attainable(zoom, parse_filter("maxAssistantsPerMeeting = 1000", zoom)));
    CHECK_FALSE(attainable(zoom, parse_filter("maxAssistantsPerMeeting = 1200", zoom)));
    CHECK_FALSE(attainable(zoom, parse_filter("maxAssistantsPerMeeting >= 1200", zoom)));

    auto range = attainable_range(zoom, "maxAssistantsPerMeeting");
    CHECK(range.min == Value::numeric(100));
    CHECK(range.max == Value::numeric(1000));
    CHECK_THROWS_AS(attainable_range(zoom, "record"), std::invalid_argument);
    CHECK_THROWS_AS(attainable_range(zoom, "missing"), std::invalid_argument);
}

TEST_CASE("optimum operation")
{
    auto zoom = fixture("zoom");
    auto min = optimum(zoom, parse_filter("record = true AND cloudStorage >= 5", zoom), Direction::Min);
    REQUIRE(min.optimal.size() == 1);
    CHECK(min.optimal[0].subscription == Subscription{"PRO", {}});
    CHECK(min.cost == dec("15.99"));

    auto max = optimum(zoom, std::nullopt, Direction::Max);
    for (const auto& s : subscriptions(zoom)) CHECK(s.valuation.cost.value() <= max.cost);
}

TEST_CASE("lint severities")
{
    CHECK(lint_severity("LINKED_FEATURE_MISMATCH") == Severity::Error);
    CHECK(lint_severity("FUTURE_CREATION_DATE") == Severity::Error);
    CHECK(lint_severity("NUMERIC_FEATURE_SUSPECT") == Severity::Warning);
    CHECK(lint_severity("NO_NUMERIC_PRICE") == Severity::Warning);
    CHECK(lint_severity("DEAD_ADDON") == Severity::Warning);
    CHECK(lint_severity("DEAD_PLAN") == Severity::Warning);
    CHECK(lint_severity("DUPLICATE_PLAN_VALUATION") == Severity::Warning);
}

TEST_CASE("seeded lint set")
{
    require_ok(checks::seeded_lint(data_path("lint-manifest.yml"), data_path("lint"), kNow));
    require_ok(checks::clean_lint(fixture("zoom"), "zoom", kNow));
    require_ok(checks::clean_lint(fixture("minimal"), "minimal", kNow));
}

TEST_CASE("lint details")
{
    auto empty = lint(fixture("empty"), kNow);
    CHECK(has_code(empty, "NOT_EMPTY", "Empty"));

    auto d = fixture("zoom").data();
    d.add_ons[0].available_for.clear();
    auto orphan = lint(gen::build(d), kNow);
    CHECK(has_code(orphan, "ADDON_AVAILABLE_SOME_PLAN", "Huge Meetings"));
    CHECK(has_code(orphan, "DEAD_ADDON", "Huge Meetings"));

    auto zoom = fixture("zoom");
    CHECK(lint(zoom, year_month_day{year{2024}, month{7}, day{15}}).empty());
    CHECK(has_code(lint(zoom, year_month_day{year{2024}, month{7}, day{14}}), "FUTURE_CREATION_DATE", "Zoom"));
}

TEST_CASE("dead plans and duplicate valuations")
{
    auto d = fixture("zoom").data();
    d.plans.push_back(d.plans[1]);
    d.plans.back().name = "PRO2";
    d.plans.back().price = Price::amount(dec("17"));
    auto dup = dead_elements(gen::build(d));
    CHECK(has_code(dup, "DUPLICATE_PLAN_VALUATION", "PRO2"));

    d = fixture("zoom").data();
    d.plans[1].price = d.plans[0].price;
    d.plans[1].feature_values.clear();
    d.plans[1].usage_limit_values.clear();
    CHECK_FALSE(has_code(dead_elements(gen::build(d)), "DUPLICATE_PLAN_VALUATION", "PRO"));

    CHECK(dead_elements(fixture("zoom")).empty());
}

TEST_CASE("stats")
{
    auto zoom = stats(fixture("zoom"));
    CHECK(zoom.features == 13);
    CHECK(zoom.usage_limits == 3);
    CHECK(zoom.plans == 3);
    CHECK(zoom.add_ons == 3);
    CHECK(zoom.configuration_space_size == 20);
    CHECK(zoom.valid);

    auto minimal = stats(fixture("minimal"));
    CHECK(minimal.features == 1);
    CHECK(minimal.plans == 1);
    CHECK(minimal.add_ons == 0);
    CHECK(minimal.configuration_space_size == 1);

    auto github = stats(checks::load(data_path("corpus2024/github.yml")));
    CHECK(github.features == 81);
    CHECK(github.plans == 3);
    CHECK(github.add_ons == 14);
    CHECK(github.configuration_space_size == 8960);
}
