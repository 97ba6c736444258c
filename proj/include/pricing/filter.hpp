#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pricing/model.hpp"

namespace pricing {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op);

/// A feature or usage limit a filter refers to, resolved to its declaration index.
struct FilterTarget {
    enum class Kind { Feature, UsageLimit };
    Kind kind = Kind::Feature;
    std::size_t index = 0;
    std::string name;
    ValueType type = ValueType::Boolean;

    friend bool operator==(const FilterTarget&, const FilterTarget&) = default;
};

/// Constraint over resolved subscription values.
/// And() of no children is neutral (true); Or() of no children is false.
struct FilterExpr {
    enum class Kind { And, Or, Not, Compare, IsTrue };

    Kind kind = Kind::And;
    std::vector<FilterExpr> children;
    FilterTarget target;
    CompareOp op = CompareOp::Eq;
    Value literal;

    static FilterExpr all_of(std::vector<FilterExpr> children);
    static FilterExpr any_of(std::vector<FilterExpr> children);
    static FilterExpr negate(FilterExpr child);
    static FilterExpr is_true(FilterTarget target);
    static FilterExpr compare(FilterTarget target, CompareOp op, Value literal);

    friend bool operator==(const FilterExpr&, const FilterExpr&) = default;
};

class FilterError : public std::runtime_error {
public:
    enum class Kind { Syntax, UnknownIdentifier, TypeMismatch };

    FilterError(Kind kind, std::size_t position, const std::string& message)
        : std::runtime_error(message), kind_(kind), position_(position)
    {
    }

    Kind kind() const { return kind_; }
    /// 0-based byte offset into the filter text.
    std::size_t position() const { return position_; }
    std::string_view code() const;

private:
    Kind kind_;
    std::size_t position_;
};

/// Grammar:
///   expr := or ; or := and (("OR"|"∨") and)* ; and := not (("AND"|"∧") not)*
///   not := ("NOT"|"¬") not | atom ; atom := "(" expr ")" | ident cmp literal | ident
///   cmp := = | != | < | <= | > | >= ; literal := true | false | number | "string"
/// Keywords are case-insensitive. Throws FilterError.
FilterExpr parse_filter(std::string_view text, const Pricing& pricing);

/// Resolves `name` in `pricing` or throws FilterError(UnknownIdentifier).
FilterTarget resolve_target(const Pricing& pricing, std::string_view name);

/// Type-checked node construction; throws FilterError(TypeMismatch).
FilterExpr make_comparison(FilterTarget target, CompareOp op, Value literal);

bool evaluate(const FilterExpr& filter, const SubscriptionValuation& valuation);

/// Renders back into the grammar. For any filter produced by parse_filter,
/// parse_filter(to_string(f)) == f. Empty groups have no textual form.
std::string to_string(const FilterExpr& filter);

}  // namespace pricing
