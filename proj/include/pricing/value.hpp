#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pricing/decimal.hpp"

namespace pricing {

enum class ValueType { Boolean, Numeric, Text };

std::string_view to_string(ValueType type);

struct Unlimited {
    friend bool operator==(Unlimited, Unlimited) = default;
};

/// Free-text value. Some pricings declare TEXT features whose value is a list
/// (payment methods, supported languages); `is_list` keeps that shape.
struct Text {
    std::vector<std::string> items;
    bool is_list = false;

    friend bool operator==(const Text&, const Text&) = default;
};

class Value {
public:
    using Storage = std::variant<bool, Decimal, Text, Unlimited>;

    Value() : storage_(false) {}

    static Value boolean(bool b) { return Value(Storage(b)); }
    static Value numeric(Decimal d) { return Value(Storage(d)); }
    static Value numeric(std::int64_t whole) { return numeric(Decimal::from_int(whole)); }
    static Value text(std::string s) { return Value(Storage(Text{{std::move(s)}, false})); }
    static Value text_list(std::vector<std::string> items) { return Value(Storage(Text{std::move(items), true})); }
    static Value unlimited() { return Value(Storage(Unlimited{})); }

    bool is_bool() const { return std::holds_alternative<bool>(storage_); }
    bool is_numeric() const { return std::holds_alternative<Decimal>(storage_); }
    bool is_text() const { return std::holds_alternative<Text>(storage_); }
    bool is_unlimited() const { return std::holds_alternative<Unlimited>(storage_); }

    bool as_bool() const { return std::get<bool>(storage_); }
    Decimal as_numeric() const { return std::get<Decimal>(storage_); }
    const Text& as_text() const { return std::get<Text>(storage_); }

    /// Numeric or Unlimited.
    bool is_quantity() const { return is_numeric() || is_unlimited(); }

    /// Whether this value may be held by something declared with `type`.
    bool matches(ValueType type) const;

    /// "Not included" semantics: false, zero, or empty text.
    bool is_zero_like() const;

    std::string to_string() const;

    const Storage& storage() const { return storage_; }

    friend bool operator==(const Value&, const Value&) = default;

private:
    explicit Value(Storage s) : storage_(std::move(s)) {}

    Storage storage_;
};

/// Orders quantities (Unlimited above every number); Bool and Text compare
/// for equality only (`unordered` when different); mixed tags are unordered.
std::partial_ordering compare_values(const Value& a, const Value& b);

/// Sum of two quantities; Unlimited absorbs.
Value add_quantities(const Value& a, const Value& b);

}  // namespace pricing
