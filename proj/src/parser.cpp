#include "pricing/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <set>

#include <yaml-cpp/yaml.h>

namespace pricing {

namespace {

// Keys that belong to Pricing2Yaml but carry nothing the analysis needs.
// They are preserved as extensions without a warning.
const std::set<std::string, std::less<>> kQuietTopKeys = {
    "hasAnnualPayment", "day", "month", "year", "url", "tags", "billing", "variables", "starts", "ends"};
const std::set<std::string, std::less<>> kQuietFeatureKeys = {
    "type", "automationType", "integrationType", "expression", "serverExpression", "paymentType",
    "docUrl", "docURL", "pricingURLs", "pricingUrls", "pricingsUrls", "pricingsURLs", "tag", "render"};
const std::set<std::string, std::less<>> kQuietLimitKeys = {"type", "trackable", "period", "render", "expression"};
const std::set<std::string, std::less<>> kQuietPlanKeys = {"monthlyPrice", "annualPrice", "private", "isPrivate",
                                                           "tag"};
const std::set<std::string, std::less<>> kQuietAddOnKeys = {"monthlyPrice", "annualPrice", "private", "isPrivate",
                                                            "subscriptionConstraints", "tag"};

SourceLocation location_of(const YAML::Node& node)
{
    auto mark = node.Mark();
    if (mark.line < 0) return {1, 1};
    return {mark.line + 1, mark.column + 1};
}

bool is_null(const YAML::Node& node)
{
    return !node.IsDefined() || node.IsNull();
}

bool is_plain(const YAML::Node& node)
{
    return node.Tag() != "!";
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::optional<bool> scalar_bool(const YAML::Node& node)
{
    if (!node.IsScalar()) return std::nullopt;
    auto s = lower(node.Scalar());
    if (s == "true") return true;
    if (s == "false") return false;
    return std::nullopt;
}

std::optional<Value> scalar_quantity(const YAML::Node& node)
{
    if (!node.IsScalar()) return std::nullopt;
    auto s = lower(node.Scalar());
    if (s == ".inf" || s == "+.inf" || s == "unlimited" || s == "infinity" || s == "inf") return Value::unlimited();
    if (auto d = Decimal::parse(node.Scalar())) return Value::numeric(*d);
    return std::nullopt;
}

std::optional<Value> text_value(const YAML::Node& node)
{
    if (node.IsScalar()) return Value::text(node.Scalar());
    if (node.IsSequence()) {
        std::vector<std::string> items;
        for (const auto& item : node) {
            if (!item.IsScalar()) return std::nullopt;
            items.push_back(item.Scalar());
        }
        return Value::text_list(std::move(items));
    }
    return std::nullopt;
}

std::optional<Value> value_as(const YAML::Node& node, ValueType type)
{
    switch (type) {
    case ValueType::Boolean:
        if (auto b = scalar_bool(node)) return Value::boolean(*b);
        return std::nullopt;
    case ValueType::Numeric: return scalar_quantity(node);
    case ValueType::Text: return text_value(node);
    }
    return std::nullopt;
}

/// Best-effort typing for values whose target is not declared.
Value guess_value(const YAML::Node& node)
{
    if (is_plain(node)) {
        if (auto b = scalar_bool(node)) return Value::boolean(*b);
        if (auto q = scalar_quantity(node)) return *q;
    }
    if (auto t = text_value(node)) return *t;
    return Value::text(YAML::Dump(node));
}

Value default_for(ValueType type)
{
    switch (type) {
    case ValueType::Boolean: return Value::boolean(false);
    case ValueType::Numeric: return Value::numeric(0);
    case ValueType::Text: return Value::text("");
    }
    return {};
}

std::optional<ValueType> parse_value_type(std::string_view s)
{
    if (s == "BOOLEAN") return ValueType::Boolean;
    if (s == "NUMERIC") return ValueType::Numeric;
    if (s == "TEXT") return ValueType::Text;
    return std::nullopt;
}

class DocumentReader {
public:
    explicit DocumentReader(ParseResult& result) : result_(result) {}

    void read(const YAML::Node& root)
    {
        if (!root.IsMap()) {
            error("InvalidDocument", "", "a Pricing2Yaml document must be a mapping", root);
            return;
        }

        std::optional<YAML::Node> features, limits, plans, add_ons;
        std::optional<int> day, month, year;
        bool has_saas_name = false;

        for (const auto& entry : root) {
            std::string key = entry.first.Scalar();
            const YAML::Node& value = entry.second;
            if (key == "saasName") {
                has_saas_name = true;
                draft_.saas_name = scalar_string(value, key);
            } else if (key == "syntaxVersion") {
                draft_.syntax_version = scalar_string(value, key);
            } else if (key == "version") {
                draft_.version = scalar_string(value, key);
            } else if (key == "createdAt") {
                if (is_null(value)) continue;
                auto date = value.IsScalar() ? parse_date(value.Scalar()) : std::nullopt;
                if (!date)
                    error("InvalidDate", "createdAt", "createdAt must be an ISO-8601 date (YYYY-MM-DD)", value);
                else
                    draft_.created_at = date;
            } else if (key == "currency") {
                draft_.currency = scalar_string(value, key);
            } else if (key == "features") {
                features = value;
            } else if (key == "usageLimits") {
                limits = value;
            } else if (key == "plans") {
                plans = value;
            } else if (key == "addOns") {
                add_ons = value;
            } else {
                if (key == "day" || key == "month" || key == "year") {
                    int parsed = 0;
                    const auto& s = value.IsScalar() ? value.Scalar() : std::string();
                    if (std::from_chars(s.data(), s.data() + s.size(), parsed).ec == std::errc())
                        (key == "day" ? day : key == "month" ? month : year) = parsed;
                }
                extension(draft_.extensions, key, entry.first, value, kQuietTopKeys, "pricing");
            }
        }

        if (!has_saas_name) error("MissingKey", "saasName", "required key 'saasName' is missing", root);
        if (!features) error("MissingKey", "features", "required key 'features' is missing", root);

        // Older syntax splits the creation date into day/month/year.
        if (!draft_.created_at && day && month && year) {
            std::chrono::year_month_day date{std::chrono::year(*year), std::chrono::month(unsigned(*month)),
                                             std::chrono::day(unsigned(*day))};
            if (date.ok()) draft_.created_at = date;
        }

        if (features) read_features(*features);
        if (limits) read_usage_limits(*limits);
        if (plans) read_plans(*plans);
        if (add_ons) read_add_ons(*add_ons);
    }

    PricingDraft& draft() { return draft_; }
    SourceMap& sources() { return sources_; }

private:
    void error(std::string code, std::string subject, std::string message, const YAML::Node& at)
    {
        result_.diagnostics.push_back(
            {Severity::Error, std::move(code), std::move(subject), std::move(message), location_of(at)});
    }

    void warning(std::string code, std::string subject, std::string message, const YAML::Node& at)
    {
        result_.diagnostics.push_back(
            {Severity::Warning, std::move(code), std::move(subject), std::move(message), location_of(at)});
    }

    void mark(const std::string& path, const YAML::Node& node) { sources_.emplace(path, location_of(node)); }

    std::string scalar_string(const YAML::Node& node, const std::string& what)
    {
        if (is_null(node)) return {};
        if (!node.IsScalar()) {
            error("TypeMismatch", what, "'" + what + "' must be a scalar", node);
            return {};
        }
        return node.Scalar();
    }

    std::optional<std::string> optional_string(const YAML::Node& node, const std::string& what)
    {
        if (is_null(node)) return std::nullopt;
        return scalar_string(node, what);
    }

    void extension(Extensions& bag, const std::string& key, const YAML::Node& key_node, const YAML::Node& value,
                   const std::set<std::string, std::less<>>& quiet, const std::string& owner)
    {
        if (!quiet.count(key))
            warning("UnknownKey", owner, "unknown key '" + key + "' in " + owner + " (kept as extension)", key_node);
        bag.emplace_back(key, YAML::Dump(value));
    }

    /// Iterates a section that must be a mapping (null means empty).
    template <typename Fn>
    void for_each_entry(const YAML::Node& section, const std::string& name, Fn&& fn)
    {
        if (is_null(section)) return;
        if (!section.IsMap()) {
            error("TypeMismatch", name, "'" + name + "' must be a mapping of named entries", section);
            return;
        }
        for (const auto& entry : section) {
            if (!entry.second.IsMap() && !is_null(entry.second)) {
                error("TypeMismatch", entry.first.Scalar(),
                      "entry '" + entry.first.Scalar() + "' in '" + name + "' must be a mapping", entry.second);
                continue;
            }
            fn(entry.first.Scalar(), entry.first, entry.second);
        }
    }

    std::vector<std::string> name_list(const YAML::Node& node, const std::string& path, const std::string& what)
    {
        std::vector<std::string> names;
        if (is_null(node)) return names;
        if (node.IsScalar()) {
            mark(path + "/" + node.Scalar(), node);
            names.push_back(node.Scalar());
            return names;
        }
        if (!node.IsSequence()) {
            error("TypeMismatch", what, "'" + what + "' must be a list of names", node);
            return names;
        }
        for (const auto& item : node) {
            if (!item.IsScalar()) {
                error("TypeMismatch", what, "'" + what + "' entries must be names", item);
                continue;
            }
            mark(path + "/" + item.Scalar(), item);
            names.push_back(item.Scalar());
        }
        return names;
    }

    std::optional<ValueType> read_value_type(const YAML::Node& element, const std::string& name)
    {
        const auto& node = element["valueType"];
        if (is_null(node)) {
            error("MissingKey", name, "'" + name + "' has no valueType", element);
            return std::nullopt;
        }
        auto type = node.IsScalar() ? parse_value_type(node.Scalar()) : std::nullopt;
        if (!type) error("TypeMismatch", name, "valueType of '" + name + "' must be BOOLEAN, NUMERIC or TEXT", node);
        return type;
    }

    Value read_default(const YAML::Node& element, ValueType type, const std::string& name)
    {
        const auto& node = element["defaultValue"];
        if (is_null(node)) return default_for(type);
        auto value = value_as(node, type);
        if (!value) {
            error("TypeMismatch", name,
                  "defaultValue of '" + name + "' is not a " + std::string(to_string(type)) + " value", node);
            return default_for(type);
        }
        return *value;
    }

    void read_features(const YAML::Node& section)
    {
        for_each_entry(section, "features", [&](const std::string& name, const YAML::Node& key, const YAML::Node& body) {
            mark("features/" + name, key);
            Feature f;
            f.name = name;
            if (is_null(body)) {
                error("MissingKey", name, "feature '" + name + "' has no valueType", key);
                return;
            }
            auto type = read_value_type(body, name);
            if (!type) return;
            f.value_type = *type;
            f.default_value = read_default(body, *type, name);
            for (const auto& entry : body) {
                std::string k = entry.first.Scalar();
                if (k == "description")
                    f.description = optional_string(entry.second, name + ".description");
                else if (k != "valueType" && k != "defaultValue")
                    extension(f.extensions, k, entry.first, entry.second, kQuietFeatureKeys, "feature '" + name + "'");
            }
            declared_types_.emplace(name, f.value_type);
            draft_.features.push_back(std::move(f));
        });
    }

    void read_usage_limits(const YAML::Node& section)
    {
        for_each_entry(section, "usageLimits", [&](const std::string& name, const YAML::Node& key, const YAML::Node& body) {
            mark("usageLimits/" + name, key);
            UsageLimit u;
            u.name = name;
            if (is_null(body)) {
                error("MissingKey", name, "usage limit '" + name + "' has no valueType", key);
                return;
            }
            auto type = read_value_type(body, name);
            if (!type) return;
            u.value_type = *type;
            u.default_value = read_default(body, *type, name);
            for (const auto& entry : body) {
                std::string k = entry.first.Scalar();
                if (k == "description")
                    u.description = optional_string(entry.second, name + ".description");
                else if (k == "unit")
                    u.unit = scalar_string(entry.second, name + ".unit");
                else if (k == "linkedFeatures")
                    u.linked_features = name_list(entry.second, "usageLimits/" + name + "/linkedFeatures",
                                                  name + ".linkedFeatures");
                else if (k != "valueType" && k != "defaultValue")
                    extension(u.extensions, k, entry.first, entry.second, kQuietLimitKeys, "usage limit '" + name + "'");
            }
            declared_types_.emplace(name, u.value_type);
            draft_.usage_limits.push_back(std::move(u));
        });
    }

    Price read_price(const YAML::Node& node, const std::string& owner)
    {
        if (!node.IsScalar()) {
            error("TypeMismatch", owner, "price of '" + owner + "' must be a number or a label", node);
            return {};
        }
        if (auto amount = Decimal::parse(node.Scalar())) return Price::amount(*amount);
        return Price::contact(node.Scalar());
    }

    /// Override maps take either `name: {value: X}` or `name: X`.
    std::map<std::string, Value> read_overrides(const YAML::Node& section, const std::string& path,
                                                const std::string& owner)
    {
        std::map<std::string, Value> overrides;
        if (is_null(section)) return overrides;
        if (!section.IsMap()) {
            error("TypeMismatch", owner, "overrides of '" + owner + "' must be a mapping", section);
            return overrides;
        }
        for (const auto& entry : section) {
            std::string name = entry.first.Scalar();
            mark(path + "/" + name, entry.first);
            YAML::Node raw = entry.second;
            if (raw.IsMap()) raw = raw["value"];
            if (is_null(raw)) {
                warning("NullOverride", owner, "override of '" + name + "' in '" + owner + "' has no value; ignored",
                        entry.first);
                continue;
            }
            auto declared = declared_types_.find(name);
            if (declared == declared_types_.end()) {
                overrides.emplace(name, guess_value(raw));  // reported as UnknownReference when building
                continue;
            }
            auto value = value_as(raw, declared->second);
            if (!value) {
                error("TypeMismatch", owner,
                      "'" + owner + "' sets " + std::string(to_string(declared->second)) + " '" + name + "' to '" +
                          (raw.IsScalar() ? raw.Scalar() : std::string("<collection>")) + "'",
                      raw);
                continue;
            }
            if (!overrides.emplace(name, *value).second)
                error("DuplicateName", owner, "'" + owner + "' overrides '" + name + "' twice", entry.first);
        }
        return overrides;
    }

    Price plan_price(const YAML::Node& body, const YAML::Node& key, const std::string& owner)
    {
        if (!is_null(body["price"])) return read_price(body["price"], owner);
        for (const char* fallback : {"monthlyPrice", "annualPrice"}) {
            if (!is_null(body[fallback])) {
                warning("PriceFallback", owner, "'" + owner + "' has no price; using " + fallback, body[fallback]);
                return read_price(body[fallback], owner);
            }
        }
        error("MissingKey", owner, "'" + owner + "' has no price", key);
        return {};
    }

    void read_plans(const YAML::Node& section)
    {
        for_each_entry(section, "plans", [&](const std::string& name, const YAML::Node& key, const YAML::Node& body) {
            std::string path = "plans/" + name;
            mark(path, key);
            Plan p;
            p.name = name;
            if (is_null(body)) {
                error("MissingKey", name, "plan '" + name + "' has no price", key);
                return;
            }
            p.price = plan_price(body, key, name);
            for (const auto& entry : body) {
                std::string k = entry.first.Scalar();
                mark(path + "/" + k, entry.first);
                if (k == "description")
                    p.description = optional_string(entry.second, name + ".description");
                else if (k == "unit")
                    p.unit = optional_string(entry.second, name + ".unit");
                else if (k == "features")
                    p.feature_values = read_overrides(entry.second, path + "/features", name);
                else if (k == "usageLimits")
                    p.usage_limit_values = read_overrides(entry.second, path + "/usageLimits", name);
                else if (k != "price")
                    extension(p.extensions, k, entry.first, entry.second, kQuietPlanKeys, "plan '" + name + "'");
            }
            draft_.plans.push_back(std::move(p));
        });
    }

    void read_add_ons(const YAML::Node& section)
    {
        for_each_entry(section, "addOns", [&](const std::string& name, const YAML::Node& key, const YAML::Node& body) {
            std::string path = "addOns/" + name;
            mark(path, key);
            AddOn a;
            a.name = name;
            if (is_null(body)) {
                error("MissingKey", name, "add-on '" + name + "' has no price", key);
                return;
            }
            a.price = plan_price(body, key, name);
            for (const auto& entry : body) {
                std::string k = entry.first.Scalar();
                mark(path + "/" + k, entry.first);
                if (k == "description")
                    a.description = optional_string(entry.second, name + ".description");
                else if (k == "unit")
                    a.unit = optional_string(entry.second, name + ".unit");
                else if (k == "availableFor")
                    a.available_for = name_list(entry.second, path + "/availableFor", name + ".availableFor");
                else if (k == "dependsOn")
                    a.depends_on = name_list(entry.second, path + "/dependsOn", name + ".dependsOn");
                else if (k == "excludes")
                    a.excludes = name_list(entry.second, path + "/excludes", name + ".excludes");
                else if (k == "features")
                    a.feature_values = read_overrides(entry.second, path + "/features", name);
                else if (k == "usageLimits")
                    a.usage_limit_values = read_overrides(entry.second, path + "/usageLimits", name);
                else if (k == "usageLimitsExtensions")
                    a.usage_limit_extensions = read_extensions(entry.second, path + "/usageLimitsExtensions", name);
                else if (k != "price")
                    extension(a.extensions, k, entry.first, entry.second, kQuietAddOnKeys, "add-on '" + name + "'");
            }
            draft_.add_ons.push_back(std::move(a));
        });
    }

    std::map<std::string, Value> read_extensions(const YAML::Node& section, const std::string& path,
                                                 const std::string& owner)
    {
        std::map<std::string, Value> extensions;
        if (is_null(section)) return extensions;
        if (!section.IsMap()) {
            error("TypeMismatch", owner, "usageLimitsExtensions of '" + owner + "' must be a mapping", section);
            return extensions;
        }
        for (const auto& entry : section) {
            std::string name = entry.first.Scalar();
            mark(path + "/" + name, entry.first);
            YAML::Node raw = entry.second;
            if (raw.IsMap()) raw = raw["value"];
            if (is_null(raw)) continue;
            auto amount = scalar_quantity(raw);
            if (!amount) {
                error("TypeMismatch", owner, "extension of '" + name + "' by '" + owner + "' must be a number", raw);
                continue;
            }
            extensions.emplace(name, *amount);
        }
        return extensions;
    }

    ParseResult& result_;
    PricingDraft draft_;
    SourceMap sources_;
    std::map<std::string, ValueType> declared_types_;
};

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

void emit_value(YAML::Emitter& out, const Value& value)
{
    if (value.is_bool()) {
        out << value.as_bool();
    } else if (value.is_numeric()) {
        out << value.as_numeric().to_string();
    } else if (value.is_unlimited()) {
        out << ".inf";
    } else {
        const auto& text = value.as_text();
        if (text.is_list) {
            out << YAML::BeginSeq;
            for (const auto& item : text.items) out << YAML::DoubleQuoted << item;
            out << YAML::EndSeq;
        } else {
            out << YAML::DoubleQuoted << (text.items.empty() ? std::string() : text.items.front());
        }
    }
}

void emit_extensions(YAML::Emitter& out, const Extensions& extensions)
{
    for (const auto& [key, fragment] : extensions) out << YAML::Key << key << YAML::Value << YAML::Load(fragment);
}

void emit_names(YAML::Emitter& out, const char* key, const std::vector<std::string>& names)
{
    if (names.empty()) return;
    out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
    for (const auto& n : names) out << n;
    out << YAML::EndSeq;
}

template <typename Element>
void emit_overrides(YAML::Emitter& out, const char* key, const std::map<std::string, Value>& overrides,
                    const std::vector<Element>& declared_order)
{
    if (overrides.empty()) return;
    out << YAML::Key << key << YAML::Value << YAML::BeginMap;
    for (const auto& element : declared_order) {
        auto it = overrides.find(element.name);
        if (it == overrides.end()) continue;
        out << YAML::Key << element.name << YAML::Value << YAML::BeginMap << YAML::Key << "value" << YAML::Value;
        emit_value(out, it->second);
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
}

void emit_price(YAML::Emitter& out, const Price& price)
{
    out << YAML::Key << "price" << YAML::Value;
    if (price.is_amount())
        out << price.value().to_string();
    else
        out << YAML::DoubleQuoted << price.contact_label();
}

}  // namespace

std::optional<std::chrono::year_month_day> parse_date(std::string_view text)
{
    if (text.size() > 10 && (text[10] == 'T' || text[10] == ' ')) text = text.substr(0, 10);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    auto digits = [](std::string_view s, auto& out) {
        if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
        return std::from_chars(s.data(), s.data() + s.size(), out).ec == std::errc();
    };
    if (!digits(text.substr(0, 4), y) || !digits(text.substr(5, 2), m) || !digits(text.substr(8, 2), d))
        return std::nullopt;
    std::chrono::year_month_day date{std::chrono::year(y), std::chrono::month(m), std::chrono::day(d)};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_date(std::chrono::year_month_day date)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(date.year()), unsigned(date.month()), unsigned(date.day()));
    return buf;
}

ParseResult parse_pricing(std::string_view text)
{
    ParseResult result;
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        result.diagnostics.push_back({Severity::Error, "YamlSyntax", "", e.msg,
                                      SourceLocation{std::max(e.mark.line, 0) + 1, std::max(e.mark.column, 0) + 1}});
        return result;
    }

    DocumentReader reader(result);
    reader.read(root);
    if (has_errors(result.diagnostics)) return result;

    auto built = build_pricing(std::move(reader.draft()), &reader.sources());
    for (auto& d : built.diagnostics) {
        if (!d.location) d.location = SourceLocation{1, 1};
        result.diagnostics.push_back(std::move(d));
    }
    result.pricing = std::move(built.pricing);
    return result;
}

std::string serialize_pricing(const Pricing& pricing)
{
    YAML::Emitter out;
    out.SetIndent(2);
    out << YAML::BeginMap;
    out << YAML::Key << "saasName" << YAML::Value << pricing.saas_name();
    if (!pricing.syntax_version().empty())
        out << YAML::Key << "syntaxVersion" << YAML::Value << YAML::SingleQuoted << pricing.syntax_version();
    if (!pricing.version().empty())
        out << YAML::Key << "version" << YAML::Value << YAML::SingleQuoted << pricing.version();
    if (pricing.created_at())
        out << YAML::Key << "createdAt" << YAML::Value << YAML::SingleQuoted << format_date(*pricing.created_at());
    if (!pricing.currency().empty()) out << YAML::Key << "currency" << YAML::Value << pricing.currency();

    out << YAML::Key << "features" << YAML::Value << YAML::BeginMap;
    for (const auto& f : pricing.features()) {
        out << YAML::Key << f.name << YAML::Value << YAML::BeginMap;
        if (f.description) out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << *f.description;
        out << YAML::Key << "valueType" << YAML::Value << std::string(to_string(f.value_type));
        out << YAML::Key << "defaultValue" << YAML::Value;
        emit_value(out, f.default_value);
        emit_extensions(out, f.extensions);
        out << YAML::EndMap;
    }
    out << YAML::EndMap;

    if (!pricing.usage_limits().empty()) {
        out << YAML::Key << "usageLimits" << YAML::Value << YAML::BeginMap;
        for (const auto& u : pricing.usage_limits()) {
            out << YAML::Key << u.name << YAML::Value << YAML::BeginMap;
            if (u.description)
                out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << *u.description;
            out << YAML::Key << "valueType" << YAML::Value << std::string(to_string(u.value_type));
            out << YAML::Key << "defaultValue" << YAML::Value;
            emit_value(out, u.default_value);
            if (!u.unit.empty()) out << YAML::Key << "unit" << YAML::Value << u.unit;
            emit_names(out, "linkedFeatures", u.linked_features);
            emit_extensions(out, u.extensions);
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }

    if (!pricing.plans().empty() || pricing.add_ons().empty()) {
        out << YAML::Key << "plans" << YAML::Value << YAML::BeginMap;
        for (const auto& p : pricing.plans()) {
            out << YAML::Key << p.name << YAML::Value << YAML::BeginMap;
            if (p.description)
                out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << *p.description;
            emit_price(out, p.price);
            if (p.unit) out << YAML::Key << "unit" << YAML::Value << *p.unit;
            emit_overrides(out, "features", p.feature_values, pricing.features());
            emit_overrides(out, "usageLimits", p.usage_limit_values, pricing.usage_limits());
            emit_extensions(out, p.extensions);
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }

    if (!pricing.add_ons().empty()) {
        out << YAML::Key << "addOns" << YAML::Value << YAML::BeginMap;
        for (const auto& a : pricing.add_ons()) {
            out << YAML::Key << a.name << YAML::Value << YAML::BeginMap;
            if (a.description)
                out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << *a.description;
            emit_price(out, a.price);
            if (a.unit) out << YAML::Key << "unit" << YAML::Value << *a.unit;
            emit_names(out, "availableFor", a.available_for);
            emit_names(out, "dependsOn", a.depends_on);
            emit_names(out, "excludes", a.excludes);
            emit_overrides(out, "features", a.feature_values, pricing.features());
            emit_overrides(out, "usageLimits", a.usage_limit_values, pricing.usage_limits());
            emit_overrides(out, "usageLimitsExtensions", a.usage_limit_extensions, pricing.usage_limits());
            emit_extensions(out, a.extensions);
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }

    emit_extensions(out, pricing.extensions());
    out << YAML::EndMap;

    std::string text = out.c_str();
    text += '\n';
    return text;
}

}  // namespace pricing
