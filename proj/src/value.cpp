#include "pricing/value.hpp"

#include <stdexcept>

namespace pricing {

std::string_view to_string(ValueType type)
{
    switch (type) {
    case ValueType::Boolean: return "BOOLEAN";
    case ValueType::Numeric: return "NUMERIC";
    case ValueType::Text: return "TEXT";
    }
    return "?";
}

bool Value::matches(ValueType type) const
{
    switch (type) {
    case ValueType::Boolean: return is_bool();
    case ValueType::Numeric: return is_quantity();
    case ValueType::Text: return is_text();
    }
    return false;
}

bool Value::is_zero_like() const
{
    if (is_bool()) return !as_bool();
    if (is_numeric()) return as_numeric().is_zero();
    if (is_text()) {
        const auto& t = as_text();
        return t.items.empty() || (!t.is_list && t.items.front().empty());
    }
    return false;
}

std::string Value::to_string() const
{
    if (is_bool()) return as_bool() ? "true" : "false";
    if (is_numeric()) return as_numeric().to_string();
    if (is_unlimited()) return "unlimited";
    const auto& t = as_text();
    if (!t.is_list) return t.items.empty() ? std::string() : t.items.front();
    std::string out = "[";
    for (std::size_t i = 0; i < t.items.size(); ++i) {
        if (i) out += ", ";
        out += t.items[i];
    }
    return out + "]";
}

std::partial_ordering compare_values(const Value& a, const Value& b)
{
    if (a.is_quantity() && b.is_quantity()) {
        if (a.is_unlimited() && b.is_unlimited()) return std::partial_ordering::equivalent;
        if (a.is_unlimited()) return std::partial_ordering::greater;
        if (b.is_unlimited()) return std::partial_ordering::less;
        return a.as_numeric() <=> b.as_numeric();
    }
    if (a.is_bool() && b.is_bool())
        return a.as_bool() == b.as_bool() ? std::partial_ordering::equivalent : std::partial_ordering::unordered;
    if (a.is_text() && b.is_text())
        return a.as_text() == b.as_text() ? std::partial_ordering::equivalent : std::partial_ordering::unordered;
    return std::partial_ordering::unordered;
}

Value add_quantities(const Value& a, const Value& b)
{
    if (!a.is_quantity() || !b.is_quantity()) throw std::invalid_argument("add_quantities: non-numeric operand");
    if (a.is_unlimited() || b.is_unlimited()) return Value::unlimited();
    return Value::numeric(a.as_numeric() + b.as_numeric());
}

}  // namespace pricing
