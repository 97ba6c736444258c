#include "pricing/filter.hpp"

#include <algorithm>
#include <cctype>

namespace pricing {

std::string_view to_string(CompareOp op)
{
    switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "?";
}

std::string_view FilterError::code() const
{
    switch (kind_) {
    case Kind::Syntax: return "FilterSyntax";
    case Kind::UnknownIdentifier: return "UnknownIdentifier";
    case Kind::TypeMismatch: return "TypeMismatch";
    }
    return "FilterError";
}

FilterExpr FilterExpr::all_of(std::vector<FilterExpr> children)
{
    FilterExpr e;
    e.kind = Kind::And;
    e.children = std::move(children);
    return e;
}

FilterExpr FilterExpr::any_of(std::vector<FilterExpr> children)
{
    FilterExpr e;
    e.kind = Kind::Or;
    e.children = std::move(children);
    return e;
}

FilterExpr FilterExpr::negate(FilterExpr child)
{
    FilterExpr e;
    e.kind = Kind::Not;
    e.children.push_back(std::move(child));
    return e;
}

FilterExpr FilterExpr::is_true(FilterTarget target)
{
    FilterExpr e;
    e.kind = Kind::IsTrue;
    e.target = std::move(target);
    return e;
}

FilterExpr FilterExpr::compare(FilterTarget target, CompareOp op, Value literal)
{
    FilterExpr e;
    e.kind = Kind::Compare;
    e.target = std::move(target);
    e.op = op;
    e.literal = std::move(literal);
    return e;
}

FilterTarget resolve_target(const Pricing& pricing, std::string_view name)
{
    if (auto f = pricing.feature_index(name))
        return {FilterTarget::Kind::Feature, *f, std::string(name), pricing.features()[*f].value_type};
    if (auto u = pricing.usage_limit_index(name))
        return {FilterTarget::Kind::UsageLimit, *u, std::string(name), pricing.usage_limits()[*u].value_type};
    throw FilterError(FilterError::Kind::UnknownIdentifier, 0,
                      "unknown feature or usage limit '" + std::string(name) + "'");
}

FilterExpr make_comparison(FilterTarget target, CompareOp op, Value literal)
{
    bool ordering = op != CompareOp::Eq && op != CompareOp::Ne;
    if (ordering && target.type != ValueType::Numeric)
        throw FilterError(FilterError::Kind::TypeMismatch, 0,
                          "ordering comparison on " + std::string(to_string(target.type)) + " '" + target.name + "'");
    if (!literal.matches(target.type))
        throw FilterError(FilterError::Kind::TypeMismatch, 0,
                          "'" + target.name + "' is " + std::string(to_string(target.type)) +
                              " and cannot be compared with " + literal.to_string());
    return FilterExpr::compare(std::move(target), op, std::move(literal));
}

namespace {

enum class Tok { Ident, Number, String, True, False, And, Or, Not, LParen, RParen, Op, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
    CompareOp op = CompareOp::Eq;
};

bool starts_with(std::string_view s, std::size_t at, std::string_view prefix)
{
    return s.substr(at, prefix.size()) == prefix;
}

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    auto fail = [&](std::size_t pos, const std::string& msg) {
        throw FilterError(FilterError::Kind::Syntax, pos, msg + " at column " + std::to_string(pos + 1));
    };
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (starts_with(text, i, "∧")) {  // ∧
            tokens.push_back({Tok::And, "AND", start});
            i += 3;
        } else if (starts_with(text, i, "∨")) {  // ∨
            tokens.push_back({Tok::Or, "OR", start});
            i += 3;
        } else if (starts_with(text, i, "¬")) {  // ¬
            tokens.push_back({Tok::Not, "NOT", start});
            i += 2;
        } else if (c == '(') {
            tokens.push_back({Tok::LParen, "(", start});
            ++i;
        } else if (c == ')') {
            tokens.push_back({Tok::RParen, ")", start});
            ++i;
        } else if (c == '!' || c == '<' || c == '>' || c == '=') {
            Token t{Tok::Op, "", start};
            if (starts_with(text, i, "!=")) t.op = CompareOp::Ne, i += 2;
            else if (starts_with(text, i, "<=")) t.op = CompareOp::Le, i += 2;
            else if (starts_with(text, i, ">=")) t.op = CompareOp::Ge, i += 2;
            else if (c == '<') t.op = CompareOp::Lt, ++i;
            else if (c == '>') t.op = CompareOp::Gt, ++i;
            else if (c == '=') t.op = CompareOp::Eq, ++i;
            else fail(start, "unexpected '!'");
            t.text = std::string(text.substr(start, i - start));
            tokens.push_back(std::move(t));
        } else if (c == '"') {
            std::string value;
            ++i;
            bool closed = false;
            while (i < text.size()) {
                char ch = text[i++];
                if (ch == '"') {
                    closed = true;
                    break;
                }
                if (ch == '\\' && i < text.size()) ch = text[i++];
                value.push_back(ch);
            }
            if (!closed) fail(start, "unterminated string");
            tokens.push_back({Tok::String, std::move(value), start});
        } else if (std::isdigit(c) || c == '-' || c == '.') {
            ++i;
            while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
            tokens.push_back({Tok::Number, std::string(text.substr(start, i - start)), start});
        } else if (std::isalpha(c) || c == '_') {
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
            std::string word(text.substr(start, i - start));
            std::string upper = word;
            std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
            Tok kind = Tok::Ident;
            if (upper == "AND") kind = Tok::And;
            else if (upper == "OR") kind = Tok::Or;
            else if (upper == "NOT") kind = Tok::Not;
            else if (upper == "TRUE") kind = Tok::True;
            else if (upper == "FALSE") kind = Tok::False;
            tokens.push_back({kind, std::move(word), start});
        } else {
            fail(start, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
        }
    }
    tokens.push_back({Tok::End, "", text.size()});
    return tokens;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const Pricing& pricing) : tokens_(std::move(tokens)), pricing_(pricing) {}

    FilterExpr parse()
    {
        auto e = parse_or();
        if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const Token& at, const std::string& msg, FilterError::Kind kind = FilterError::Kind::Syntax)
    {
        throw FilterError(kind, at.pos, msg + " at column " + std::to_string(at.pos + 1));
    }

    FilterExpr parse_or()
    {
        std::vector<FilterExpr> terms;
        terms.push_back(parse_and());
        while (peek().kind == Tok::Or) {
            next();
            terms.push_back(parse_and());
        }
        return terms.size() == 1 ? std::move(terms.front()) : FilterExpr::any_of(std::move(terms));
    }

    FilterExpr parse_and()
    {
        std::vector<FilterExpr> terms;
        terms.push_back(parse_not());
        while (peek().kind == Tok::And) {
            next();
            terms.push_back(parse_not());
        }
        return terms.size() == 1 ? std::move(terms.front()) : FilterExpr::all_of(std::move(terms));
    }

    FilterExpr parse_not()
    {
        if (peek().kind == Tok::Not) {
            next();
            return FilterExpr::negate(parse_not());
        }
        return parse_atom();
    }

    FilterExpr parse_atom()
    {
        const Token& t = next();
        if (t.kind == Tok::LParen) {
            auto e = parse_or();
            if (peek().kind != Tok::RParen) fail(peek(), "expected ')'");
            next();
            return e;
        }
        if (t.kind != Tok::Ident) fail(t, t.kind == Tok::End ? "unexpected end of filter" : "expected identifier");

        FilterTarget target;
        try {
            target = resolve_target(pricing_, t.text);
        } catch (const FilterError& e) {
            fail(t, e.what(), FilterError::Kind::UnknownIdentifier);
        }

        if (peek().kind != Tok::Op) {
            if (target.type != ValueType::Boolean)
                fail(t, "'" + t.text + "' is " + std::string(to_string(target.type)) + "; a bare identifier must be BOOLEAN",
                     FilterError::Kind::TypeMismatch);
            return FilterExpr::is_true(std::move(target));
        }
        CompareOp op = next().op;
        const Token& lit = next();
        Value literal;
        switch (lit.kind) {
        case Tok::True: literal = Value::boolean(true); break;
        case Tok::False: literal = Value::boolean(false); break;
        case Tok::String: literal = Value::text(lit.text); break;
        case Tok::Number: {
            auto d = Decimal::parse(lit.text);
            if (!d) fail(lit, "invalid number '" + lit.text + "'");
            literal = Value::numeric(*d);
            break;
        }
        default: fail(lit, "expected a literal after '" + std::string(to_string(op)) + "'");
        }
        try {
            return make_comparison(std::move(target), op, std::move(literal));
        } catch (const FilterError& e) {
            fail(t, e.what(), FilterError::Kind::TypeMismatch);
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const Pricing& pricing_;
};

const Value& target_value(const FilterTarget& target, const SubscriptionValuation& valuation)
{
    return target.kind == FilterTarget::Kind::Feature ? valuation.feature_values.at(target.index)
                                                      : valuation.usage_limit_values.at(target.index);
}

bool text_equals(const Value& value, const Value& literal)
{
    const auto& text = value.as_text();
    const auto& wanted = literal.as_text().items.front();
    if (text.is_list) return std::find(text.items.begin(), text.items.end(), wanted) != text.items.end();
    return !text.items.empty() && text.items.front() == wanted;
}

bool compare(const Value& value, CompareOp op, const Value& literal)
{
    if (value.is_text() && literal.is_text()) {
        bool eq = text_equals(value, literal);
        return op == CompareOp::Eq ? eq : op == CompareOp::Ne ? !eq : false;
    }
    auto order = compare_values(value, literal);
    switch (op) {
    case CompareOp::Eq: return order == 0;
    case CompareOp::Ne: return order != 0;
    case CompareOp::Lt: return order < 0;
    case CompareOp::Le: return order <= 0;
    case CompareOp::Gt: return order > 0;
    case CompareOp::Ge: return order >= 0;
    }
    return false;
}

std::string literal_text(const Value& v)
{
    if (!v.is_text()) return v.to_string();
    std::string out = "\"";
    for (char c : v.as_text().items.front()) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace

FilterExpr parse_filter(std::string_view text, const Pricing& pricing)
{
    return Parser(tokenize(text), pricing).parse();
}

bool evaluate(const FilterExpr& filter, const SubscriptionValuation& valuation)
{
    switch (filter.kind) {
    case FilterExpr::Kind::And:
        return std::all_of(filter.children.begin(), filter.children.end(),
                           [&](const FilterExpr& c) { return evaluate(c, valuation); });
    case FilterExpr::Kind::Or:
        return std::any_of(filter.children.begin(), filter.children.end(),
                           [&](const FilterExpr& c) { return evaluate(c, valuation); });
    case FilterExpr::Kind::Not: return !evaluate(filter.children.front(), valuation);
    case FilterExpr::Kind::IsTrue: {
        const auto& v = target_value(filter.target, valuation);
        return v.is_bool() && v.as_bool();
    }
    case FilterExpr::Kind::Compare: return compare(target_value(filter.target, valuation), filter.op, filter.literal);
    }
    return false;
}

std::string to_string(const FilterExpr& filter)
{
    auto join = [&](const char* sep, const char* empty) {
        if (filter.children.empty()) return std::string(empty);
        std::string out = "(";
        for (std::size_t i = 0; i < filter.children.size(); ++i) {
            if (i) out += sep;
            out += to_string(filter.children[i]);
        }
        return out + ")";
    };
    switch (filter.kind) {
    case FilterExpr::Kind::And: return join(" AND ", "");
    case FilterExpr::Kind::Or: return join(" OR ", "");
    case FilterExpr::Kind::Not: return "NOT " + to_string(filter.children.front());
    case FilterExpr::Kind::IsTrue: return filter.target.name;
    case FilterExpr::Kind::Compare:
        return filter.target.name + " " + std::string(to_string(filter.op)) + " " + literal_text(filter.literal);
    }
    return {};
}

}  // namespace pricing
