#include "pricing/service.hpp"

#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string_view>
#include <vector>

#include "pricing/json_io.hpp"

namespace pricing::service {

namespace fs = std::filesystem;

namespace {

Response json_response(int status, const json& body)
{
    return {status, "application/json", body.dump()};
}

Response error_response(int status, std::string_view code, const std::string& message, json extra = json::object())
{
    json error{{"code", code}, {"message", message}};
    for (auto& [key, value] : extra.items()) error[key] = value;
    return json_response(status, {{"error", error}});
}

std::string iso_timestamp(std::chrono::system_clock::time_point t)
{
    std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::chrono::year_month_day today()
{
    return std::chrono::year_month_day(std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now()));
}

std::vector<std::string> split_path(std::string_view path)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto end = path.find('/', start);
        if (end == std::string_view::npos) end = path.size();
        if (end > start) parts.emplace_back(path.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

std::optional<std::string> query(const Request& request, const std::string& key)
{
    auto it = request.query.find(key);
    if (it == request.query.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

std::size_t query_size(const Request& request, const std::string& key, std::size_t fallback)
{
    auto text = query(request, key);
    if (!text) return fallback;
    std::size_t value = 0;
    std::size_t used = 0;
    try {
        value = std::stoul(*text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text->size() || (*text)[0] == '-')
        throw std::invalid_argument("query parameter '" + key + "' must be a non-negative integer");
    return value;
}

std::optional<FilterExpr> query_filter(const Request& request, const Pricing& pricing)
{
    auto text = query(request, "filter");
    if (!text) return std::nullopt;
    return parse_filter(*text, pricing);
}

/// Operations shared by stored (/pricings/{id}/op) and inline (/analysis/op) routes.
Response analyze(const Pricing& pricing, std::string_view op, const Request& request, const json* subscription_body)
{
    if (op == "cardinal")
        return json_response(200, {{"cardinal", count(ConstraintProblem(pricing, query_filter(request, pricing)))}});
    if (op == "stats") return json_response(200, to_json(stats(pricing)));
    if (op == "validate") return json_response(200, to_json(valid_pricing(pricing)));
    if (op == "dead") return json_response(200, {{"findings", to_json(dead_elements(pricing))}});
    if (op == "lint") {
        auto now = today();
        if (auto text = query(request, "now")) {
            auto parsed = parse_date(*text);
            if (!parsed) throw std::invalid_argument("query parameter 'now' must be an ISO date (YYYY-MM-DD)");
            now = *parsed;
        }
        return json_response(200, {{"findings", to_json(lint(pricing, now))}});
    }
    if (op == "subscriptions") {
        const std::size_t limit = query_size(request, "limit", 100);
        const std::size_t offset = query_size(request, "offset", 0);
        auto solutions = subscriptions(pricing, query_filter(request, pricing));
        json items = json::array();
        for (std::size_t i = offset; i < solutions.size() && i - offset < limit; ++i)
            items.push_back(to_json(pricing, solutions[i]));
        return json_response(
            200, {{"total", solutions.size()}, {"offset", offset}, {"limit", limit}, {"subscriptions", items}});
    }
    if (op == "optimum") {
        Direction direction = Direction::Min;
        if (auto text = query(request, "direction")) {
            if (*text == "max")
                direction = Direction::Max;
            else if (*text != "min")
                throw std::invalid_argument("query parameter 'direction' must be 'min' or 'max'");
        }
        return json_response(200, to_json(optimum(pricing, query_filter(request, pricing), direction)));
    }
    if (op == "validate-subscription") {
        if (!subscription_body) throw std::invalid_argument("a JSON subscription body is required");
        Subscription s = subscription_from_json(*subscription_body);
        auto requirement = query_filter(request, pricing);
        auto result = requirement ? valid_subscription(pricing, s, *requirement) : valid_subscription(pricing, s);
        return json_response(200, to_json(pricing, result));
    }
    return error_response(404, "NotFound", "unknown operation '" + std::string(op) + "'");
}

bool is_get_operation(std::string_view op)
{
    return op == "cardinal" || op == "stats" || op == "validate" || op == "dead" || op == "lint" ||
           op == "subscriptions" || op == "optimum";
}

Response parse_failure(const ParseResult& parsed)
{
    return error_response(422, "InvalidDocument", "the pricing document has errors",
                          {{"diagnostics", to_json(parsed.diagnostics)}});
}

}  // namespace

ServiceCore::ServiceCore(std::optional<fs::path> data_dir) : data_dir_(std::move(data_dir)), ids_(std::random_device{}())
{
    if (!data_dir_) return;
    fs::create_directories(*data_dir_);
    for (const auto& entry : fs::directory_iterator(*data_dir_)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".yml") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream text;
        text << in.rdbuf();
        auto stored = std::make_shared<StoredPricing>();
        stored->id = entry.path().stem().string();
        stored->source = text.str();
        stored->parsed = parse_pricing(stored->source);
        stored->uploaded_at = std::chrono::file_clock::to_sys(entry.last_write_time());
        pricings_[stored->id] = std::move(stored);
    }
}

std::size_t ServiceCore::size() const
{
    std::shared_lock lock(mutex_);
    return pricings_.size();
}

std::shared_ptr<const StoredPricing> ServiceCore::find(const std::string& id) const
{
    std::shared_lock lock(mutex_);
    auto it = pricings_.find(id);
    return it == pricings_.end() ? nullptr : it->second;
}

std::shared_ptr<const StoredPricing> ServiceCore::store(std::string source)
{
    auto stored = std::make_shared<StoredPricing>();
    stored->parsed = parse_pricing(source);
    stored->source = std::move(source);
    stored->uploaded_at = std::chrono::system_clock::now();

    std::unique_lock lock(mutex_);
    do {
        std::ostringstream id;
        id << std::hex << ids_();
        stored->id = id.str();
    } while (pricings_.count(stored->id));
    if (data_dir_) {
        std::ofstream out(*data_dir_ / (stored->id + ".yml"), std::ios::binary);
        out << stored->source;
        if (!out) throw std::runtime_error("cannot write to the data directory");
    }
    pricings_[stored->id] = stored;
    return stored;
}

bool ServiceCore::remove(const std::string& id)
{
    std::unique_lock lock(mutex_);
    if (!pricings_.erase(id)) return false;
    if (data_dir_) fs::remove(*data_dir_ / (id + ".yml"));
    return true;
}

Response ServiceCore::handle(const Request& request)
{
    try {
        return route(request);
    } catch (const FilterError& e) {
        return error_response(400, e.code(), e.what(), {{"position", e.position()}});
    } catch (const EngineError& e) {
        int status = e.kind() == EngineError::Kind::UnknownReference ? 400 : 422;
        json extra = json::object();
        if (!e.violations().empty()) extra["violations"] = to_json(e.violations());
        return error_response(status, e.code(), e.what(), extra);
    } catch (const json::exception& e) {
        return error_response(400, "InvalidJson", e.what());
    } catch (const std::invalid_argument& e) {
        return error_response(400, "BadRequest", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "InternalError", e.what());
    }
}

Response ServiceCore::route(const Request& request)
{
    const auto parts = split_path(request.path);
    if (parts.size() < 3 || parts[0] != "api" || parts[1] != "v1")
        return error_response(404, "NotFound", "no route for " + request.path);
    const std::string& method = request.method;
    const std::string& resource = parts[2];

    if (resource == "pricings") {
        if (parts.size() == 3) {
            if (method == "POST") {
                auto stored = store(request.body);
                return json_response(201, {{"id", stored->id},
                                           {"ok", stored->parsed.ok()},
                                           {"diagnostics", to_json(stored->parsed.diagnostics)}});
            }
            if (method == "GET") {
                json list = json::array();
                std::shared_lock lock(mutex_);
                for (const auto& [id, stored] : pricings_)
                    list.push_back({{"id", id},
                                    {"saasName", stored->parsed.ok() ? json(stored->parsed.pricing->saas_name())
                                                                     : json(nullptr)},
                                    {"ok", stored->parsed.ok()},
                                    {"uploadedAt", iso_timestamp(stored->uploaded_at)}});
                return json_response(200, {{"pricings", list}});
            }
            return error_response(405, "MethodNotAllowed", method + " not allowed on " + request.path);
        }

        auto stored = find(parts[3]);
        if (!stored) return error_response(404, "UnknownPricing", "no pricing with id '" + parts[3] + "'");

        if (parts.size() == 4) {
            if (method == "GET") return {200, "application/yaml", stored->source};
            if (method == "DELETE") {
                remove(parts[3]);
                return {204, "application/json", ""};
            }
            return error_response(405, "MethodNotAllowed", method + " not allowed on " + request.path);
        }
        if (parts.size() != 5) return error_response(404, "NotFound", "no route for " + request.path);

        const std::string& op = parts[4];
        if (op == "diagnostics" && method == "GET")
            return json_response(200, {{"ok", stored->parsed.ok()}, {"diagnostics", to_json(stored->parsed.diagnostics)}});
        const bool is_post = op == "validate-subscription";
        if ((is_post && method != "POST") || (!is_post && is_get_operation(op) && method != "GET"))
            return error_response(405, "MethodNotAllowed", method + " not allowed on " + request.path);
        if (!stored->parsed.ok()) return parse_failure(stored->parsed);

        if (is_post) {
            json body = json::parse(request.body);
            return analyze(*stored->parsed.pricing, op, request, &body);
        }
        return analyze(*stored->parsed.pricing, op, request, nullptr);
    }

    if (resource == "analysis" && parts.size() == 4) {
        if (method != "POST") return error_response(405, "MethodNotAllowed", method + " not allowed on " + request.path);
        const std::string& op = parts[3];

        if (op == "validate-subscription") {
            json body = json::parse(request.body);
            if (!body.is_object() || !body.contains("pricing") || !body["pricing"].is_string())
                throw std::invalid_argument("body must be {\"pricing\": <yaml text>, \"plan\": ..., \"addOns\": [...]}");
            auto parsed = parse_pricing(body["pricing"].get<std::string>());
            if (!parsed.ok()) return parse_failure(parsed);
            return analyze(*parsed.pricing, op, request, &body);
        }

        auto parsed = parse_pricing(request.body);
        if (op == "parse") {
            json result{{"ok", parsed.ok()}, {"diagnostics", to_json(parsed.diagnostics)}};
            if (parsed.ok()) result["canonical"] = serialize_pricing(*parsed.pricing);
            return json_response(200, result);
        }
        if (!is_get_operation(op)) return error_response(404, "NotFound", "unknown operation '" + op + "'");
        if (!parsed.ok()) return parse_failure(parsed);
        return analyze(*parsed.pricing, op, request, nullptr);
    }

    return error_response(404, "NotFound", "no route for " + request.path);
}

}  // namespace pricing::service
