#include "oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

using pricing::Pricing;
using pricing::Value;

namespace oracle {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& x)
{
    return std::find(v.begin(), v.end(), x) != v.end();
}

const Value* find_override(const std::map<std::string, Value>& m, const std::string& name)
{
    auto it = m.find(name);
    return it == m.end() ? nullptr : &it->second;
}

// -1, 0, 1 for quantities; Unlimited is above every number.
int order(const Value& a, const Value& b)
{
    if (a.is_unlimited() && b.is_unlimited()) return 0;
    if (a.is_unlimited()) return 1;
    if (b.is_unlimited()) return -1;
    if (a.as_numeric() < b.as_numeric()) return -1;
    return a.as_numeric() == b.as_numeric() ? 0 : 1;
}

bool is_zero_like(const Value& v)
{
    if (v.is_bool()) return !v.as_bool();
    if (v.is_numeric()) return v.as_numeric().is_zero();
    if (v.is_text()) {
        for (const auto& s : v.as_text().items)
            if (!s.empty()) return false;
        return true;
    }
    return false;
}

struct Candidate {
    const pricing::Plan* plan = nullptr;
    std::vector<const pricing::AddOn*> add_ons;
};

bool subscription_ok(const Pricing& p, const Candidate& c)
{
    if (!c.plan && c.add_ons.empty()) return false;
    if (!c.plan && !p.plans().empty()) return false;
    std::set<std::string> names;
    for (auto* a : c.add_ons) names.insert(a->name);
    for (auto* a : c.add_ons) {
        if (c.plan && !contains(a->available_for, c.plan->name)) return false;
        for (const auto& d : a->depends_on)
            if (!names.count(d)) return false;
        for (const auto& e : a->excludes)
            if (names.count(e)) return false;
    }
    return true;
}

// Returns false on a TEXT conflict.
bool resolve(const Pricing& p, const Candidate& c, std::map<std::string, Value>& out)
{
    for (const auto& f : p.features()) {
        Value base = f.default_value;
        if (c.plan)
            if (auto* v = find_override(c.plan->feature_values, f.name)) base = *v;
        std::vector<Value> overrides;
        for (auto* a : c.add_ons)
            if (auto* v = find_override(a->feature_values, f.name)) overrides.push_back(*v);

        if (f.value_type == pricing::ValueType::Boolean) {
            bool on = base.as_bool();
            for (const auto& o : overrides) on = on || o.as_bool();
            out.insert_or_assign(f.name, Value::boolean(on));
        } else if (overrides.empty()) {
            out.insert_or_assign(f.name, base);
        } else if (f.value_type == pricing::ValueType::Numeric) {
            Value best = overrides.front();
            for (const auto& o : overrides)
                if (order(o, best) > 0) best = o;
            out.insert_or_assign(f.name, best);
        } else {
            for (const auto& o : overrides)
                if (!(o == overrides.front())) return false;
            out.insert_or_assign(f.name, overrides.front());
        }
    }

    for (const auto& u : p.usage_limits()) {
        Value base = u.default_value;
        if (c.plan)
            if (auto* v = find_override(c.plan->usage_limit_values, u.name)) base = *v;
        std::optional<Value> best;
        for (auto* a : c.add_ons) {
            auto* v = find_override(a->usage_limit_values, u.name);
            if (!v) continue;
            if (!best) {
                best = *v;
            } else if (v->is_bool()) {
                if (v->as_bool()) best = *v;
            } else if (order(*v, *best) > 0) {
                best = *v;
            }
        }
        if (best) base = *best;
        for (auto* a : c.add_ons) {
            auto* e = find_override(a->usage_limit_extensions, u.name);
            if (!e) continue;
            if (base.is_unlimited() || e->is_unlimited())
                base = Value::unlimited();
            else
                base = Value::numeric(base.as_numeric() + e->as_numeric());
        }
        out.insert_or_assign(u.name, base);
    }
    return true;
}

std::optional<std::int64_t> cost(const Candidate& c)
{
    std::int64_t total = 0;
    if (c.plan) {
        if (c.plan->price.is_contact()) return std::nullopt;
        total += to_cents(c.plan->price.value());
    }
    for (auto* a : c.add_ons) {
        if (a->price.is_contact()) return std::nullopt;
        total += to_cents(a->price.value());
    }
    return total;
}

}  // namespace

std::int64_t to_cents(const pricing::Decimal& d)
{
    std::string s = d.to_string();
    bool negative = !s.empty() && s[0] == '-';
    if (negative) s.erase(0, 1);
    auto dot = s.find('.');
    std::string whole = dot == std::string::npos ? s : s.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (frac.size() > 2) throw std::invalid_argument("more than two decimals: " + d.to_string());
    while (frac.size() < 2) frac.push_back('0');
    std::int64_t cents = std::stoll(whole) * 100 + std::stoll(frac);
    return negative ? -cents : cents;
}

bool pricing_is_valid(const Pricing& p)
{
    if (p.plans().empty() && p.add_ons().empty()) return false;
    for (const auto& plan : p.plans()) {
        for (const auto& u : p.usage_limits()) {
            Value v = u.default_value;
            if (auto* o = find_override(plan.usage_limit_values, u.name)) v = *o;
            if (is_zero_like(v)) continue;
            for (const auto& linked : u.linked_features) {
                Value fv = p.features()[*p.feature_index(linked)].default_value;
                if (auto* o = find_override(plan.feature_values, linked)) fv = *o;
                if (fv.is_bool() && !fv.as_bool()) return false;
            }
        }
    }
    if (!p.plans().empty())
        for (const auto& a : p.add_ons())
            if (a.available_for.empty()) return false;
    return true;
}

bool holds(const pricing::FilterExpr& f, const std::map<std::string, Value>& values)
{
    using K = pricing::FilterExpr::Kind;
    switch (f.kind) {
    case K::And:
        for (const auto& c : f.children)
            if (!holds(c, values)) return false;
        return true;
    case K::Or:
        for (const auto& c : f.children)
            if (holds(c, values)) return true;
        return false;
    case K::Not: return !holds(f.children.front(), values);
    case K::IsTrue: {
        const Value& v = values.at(f.target.name);
        return v.is_bool() && v.as_bool();
    }
    case K::Compare: break;
    }

    const Value& v = values.at(f.target.name);
    const Value& lit = f.literal;
    using Op = pricing::CompareOp;
    if (v.is_text()) {
        const auto& items = v.as_text().items;
        const auto& want = lit.as_text().items.front();
        bool eq = v.as_text().is_list ? contains(items, want) : items.front() == want;
        return f.op == Op::Eq ? eq : !eq;
    }
    if (v.is_bool()) {
        bool eq = v.as_bool() == lit.as_bool();
        return f.op == Op::Eq ? eq : !eq;
    }
    int c = order(v, lit);
    switch (f.op) {
    case Op::Eq: return c == 0;
    case Op::Ne: return c != 0;
    case Op::Lt: return c < 0;
    case Op::Le: return c <= 0;
    case Op::Gt: return c > 0;
    case Op::Ge: return c >= 0;
    }
    return false;
}

Result solve(const Pricing& p, const std::optional<pricing::FilterExpr>& filter)
{
    Result result;
    result.invalid_pricing = !pricing_is_valid(p);

    std::vector<const pricing::Plan*> plan_options;
    for (const auto& plan : p.plans()) plan_options.push_back(&plan);
    if (plan_options.empty()) plan_options.push_back(nullptr);

    const std::size_t n = p.add_ons().size();
    for (auto* plan : plan_options) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            Candidate c{plan, {}};
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1) c.add_ons.push_back(&p.add_ons()[i]);
            if (!subscription_ok(p, c)) continue;
            ++result.unfiltered;

            Solution s;
            if (!resolve(p, c, s.values)) {
                result.conflicting = true;
                continue;
            }
            if (filter && !holds(*filter, s.values)) continue;
            if (plan) s.subscription.plan = plan->name;
            for (auto* a : c.add_ons) s.subscription.add_ons.push_back(a->name);
            s.cost_cents = cost(c);
            result.solutions.push_back(std::move(s));
        }
    }
    if (result.conflicting) result.solutions.clear();
    return result;
}

}  // namespace oracle
