#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>

#include "pricing/model.hpp"
#include "pricing/parser.hpp"

namespace pricing::service {

struct Request {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

struct StoredPricing {
    std::string id;
    std::string source;
    ParseResult parsed;
    std::chrono::system_clock::time_point uploaded_at;
};

/// Transport-free request handling for the /api/v1 endpoints. Safe to call
/// from many threads at once.
class ServiceCore {
public:
    /// With a data directory, every stored pricing is mirrored to
    /// `<dir>/<id>.yml` and the directory is reloaded here.
    explicit ServiceCore(std::optional<std::filesystem::path> data_dir = std::nullopt);

    Response handle(const Request& request);

    std::size_t size() const;

private:
    std::shared_ptr<const StoredPricing> find(const std::string& id) const;
    std::shared_ptr<const StoredPricing> store(std::string source);
    bool remove(const std::string& id);

    Response route(const Request& request);

    std::optional<std::filesystem::path> data_dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const StoredPricing>> pricings_;
    std::mt19937_64 ids_;
};

struct ServerOptions {
    std::string host = "0.0.0.0";
    int port = 8080;
    std::string cors_origin = "*";
};

/// Blocks serving HTTP until the process is stopped. Returns non-zero if the
/// socket cannot be bound.
int serve(ServiceCore& core, const ServerOptions& options);

}  // namespace pricing::service
