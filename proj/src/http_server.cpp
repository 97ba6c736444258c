#include <httplib.h>

#include <iostream>

#include "pricing/service.hpp"

namespace pricing::service {

int serve(ServiceCore& core, const ServerOptions& options)
{
    httplib::Server server;

    auto add_cors = [&](httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", options.cors_origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    };

    auto forward = [&](const httplib::Request& req, httplib::Response& res) {
        Request request{req.method, req.path, {}, req.body};
        for (const auto& [key, value] : req.params) request.query[key] = value;
        Response response = core.handle(request);
        res.status = response.status;
        if (!response.body.empty()) res.set_content(response.body, response.content_type);
        add_cors(res);
    };

    const std::string pattern = R"(/api/v1/.*)";
    server.Get(pattern, forward);
    server.Post(pattern, forward);
    server.Delete(pattern, forward);
    server.Options(pattern, [&](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        add_cors(res);
    });

    std::cerr << "listening on " << options.host << ":" << options.port << "\n";
    if (!server.listen(options.host, options.port)) {
        std::cerr << "cannot listen on " << options.host << ":" << options.port << "\n";
        return 1;
    }
    return 0;
}

}  // namespace pricing::service
