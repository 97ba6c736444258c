#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pricing/decimal.hpp"
#include "pricing/value.hpp"

namespace pricing {

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

enum class Severity { Error, Warning };

std::string_view to_string(Severity severity);

struct SourceLocation {
    int line = 0;  // 1-based
    int column = 0;  // 1-based

    friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

/// One syntax error, referential error, constraint violation or lint finding.
/// `code` is a stable identifier (e.g. "UnknownReference", "LINKED_FEATURE_MISMATCH").
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string subject;
    std::string message;
    std::optional<SourceLocation> location;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// ---------------------------------------------------------------------------
// Pricing elements
// ---------------------------------------------------------------------------

/// Unknown serialization keys, kept verbatim: (key, YAML fragment).
using Extensions = std::vector<std::pair<std::string, std::string>>;

/// Either a non-negative amount with at most two fractional digits, or a
/// "contact sales" marker carrying the label the document used.
class Price {
public:
    Price() = default;

    static Price amount(Decimal value) { return Price(value, {}); }
    static Price contact(std::string label = "Contact Sales") { return Price(std::nullopt, std::move(label)); }

    bool is_amount() const { return amount_.has_value(); }
    bool is_contact() const { return !amount_.has_value(); }
    Decimal value() const { return *amount_; }
    const std::string& contact_label() const { return contact_label_; }

    std::string to_string() const { return is_amount() ? amount_->to_string() : contact_label_; }

    /// Contact on either side yields Contact.
    friend Price operator+(const Price& a, const Price& b);

    friend bool operator==(const Price&, const Price&) = default;

private:
    Price(std::optional<Decimal> amount, std::string label) : amount_(amount), contact_label_(std::move(label)) {}

    std::optional<Decimal> amount_ = Decimal();
    std::string contact_label_;
};

struct Feature {
    std::string name;
    std::optional<std::string> description;
    ValueType value_type = ValueType::Boolean;
    Value default_value;
    Extensions extensions;

    friend bool operator==(const Feature&, const Feature&) = default;
};

struct UsageLimit {
    std::string name;
    std::optional<std::string> description;
    ValueType value_type = ValueType::Numeric;
    Value default_value = Value::numeric(0);
    std::string unit;
    std::vector<std::string> linked_features;
    Extensions extensions;

    friend bool operator==(const UsageLimit&, const UsageLimit&) = default;
};

struct Plan {
    std::string name;
    std::optional<std::string> description;
    Price price;
    std::optional<std::string> unit;
    std::map<std::string, Value> feature_values;
    std::map<std::string, Value> usage_limit_values;
    Extensions extensions;

    friend bool operator==(const Plan&, const Plan&) = default;
};

struct AddOn {
    std::string name;
    std::optional<std::string> description;
    Price price;
    std::optional<std::string> unit;
    std::vector<std::string> available_for;
    std::vector<std::string> depends_on;
    std::vector<std::string> excludes;
    std::map<std::string, Value> feature_values;
    std::map<std::string, Value> usage_limit_values;
    std::map<std::string, Value> usage_limit_extensions;
    Extensions extensions;

    friend bool operator==(const AddOn&, const AddOn&) = default;
};

/// Raw, unvalidated pricing content as produced by the parser (or by hand).
struct PricingDraft {
    std::string saas_name;
    std::string syntax_version;
    std::string version;
    std::optional<std::chrono::year_month_day> created_at;
    std::string currency;
    std::vector<Feature> features;
    std::vector<UsageLimit> usage_limits;
    std::vector<Plan> plans;
    std::vector<AddOn> add_ons;
    Extensions extensions;

    friend bool operator==(const PricingDraft&, const PricingDraft&) = default;
};

/// Element path -> source position, e.g. "plans/PRO/features/record" or
/// "addOns/Huge Meetings/availableFor/BASIC". Used only to locate diagnostics.
using SourceMap = std::map<std::string, SourceLocation, std::less<>>;

/// A validated pricing. Immutable; every name referenced anywhere inside
/// resolves, and feature / usage-limit names share one namespace.
class Pricing {
public:
    const std::string& saas_name() const { return data_.saas_name; }
    const std::string& syntax_version() const { return data_.syntax_version; }
    const std::string& version() const { return data_.version; }
    const std::optional<std::chrono::year_month_day>& created_at() const { return data_.created_at; }
    const std::string& currency() const { return data_.currency; }
    const std::vector<Feature>& features() const { return data_.features; }
    const std::vector<UsageLimit>& usage_limits() const { return data_.usage_limits; }
    const std::vector<Plan>& plans() const { return data_.plans; }
    const std::vector<AddOn>& add_ons() const { return data_.add_ons; }
    const Extensions& extensions() const { return data_.extensions; }
    const PricingDraft& data() const { return data_; }

    std::optional<std::size_t> feature_index(std::string_view name) const { return lookup(feature_index_, name); }
    std::optional<std::size_t> usage_limit_index(std::string_view name) const { return lookup(usage_limit_index_, name); }
    std::optional<std::size_t> plan_index(std::string_view name) const { return lookup(plan_index_, name); }
    std::optional<std::size_t> add_on_index(std::string_view name) const { return lookup(add_on_index_, name); }

    /// Value of a feature in a plan (override, else default).
    const Value& plan_feature_value(std::size_t plan, std::size_t feature) const;
    const Value& plan_usage_limit_value(std::size_t plan, std::size_t limit) const;

    friend bool operator==(const Pricing& a, const Pricing& b) { return a.data_ == b.data_; }

private:
    friend struct PricingBuilder;
    Pricing() = default;

    using Index = std::map<std::string, std::size_t, std::less<>>;

    static std::optional<std::size_t> lookup(const Index& index, std::string_view name);

    PricingDraft data_;
    Index feature_index_;
    Index usage_limit_index_;
    Index plan_index_;
    Index add_on_index_;
};

struct BuildResult {
    std::optional<Pricing> pricing;
    std::vector<Diagnostic> diagnostics;  // warnings may accompany a pricing; errors never do
};

/// Validates referential integrity and value typing. Reports every violation,
/// not just the first.
BuildResult build_pricing(PricingDraft draft, const SourceMap* source_map = nullptr);

// ---------------------------------------------------------------------------
// Subscriptions
// ---------------------------------------------------------------------------

struct Subscription {
    std::optional<std::string> plan;
    std::vector<std::string> add_ons;

    friend bool operator==(const Subscription&, const Subscription&) = default;
};

std::string to_string(const Subscription& s);

/// Resolved values of every feature and usage limit (declaration order) plus cost.
struct SubscriptionValuation {
    std::vector<Value> feature_values;
    std::vector<Value> usage_limit_values;
    Price cost;

    friend bool operator==(const SubscriptionValuation&, const SubscriptionValuation&) = default;
};

/// Feature or usage-limit value by name; throws std::out_of_range if unknown.
const Value& value_of(const Pricing& pricing, const SubscriptionValuation& valuation, std::string_view name);

}  // namespace pricing
