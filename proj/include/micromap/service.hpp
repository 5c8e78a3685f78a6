#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "micromap/catalog.hpp"

namespace httplib {
class Server;
}

namespace micromap {

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::vector<std::pair<std::string, std::string>> headers;
};

struct ServiceConfig {
    std::string cors_origin = "*";  // empty disables CORS headers
};

/// HTTP facade over a catalog. Handlers are plain functions of the request body so they can be
/// exercised without a socket; `mount` wires them into a server.
///
///   GET  /api/datasets  manifest summaries, id-sorted
///   GET  /api/atlases   atlas ids and region counts
///   POST /api/render    {dataset, atlas?, spec} -> SVG; 400 bad JSON, 404 unknown id, 422 issues
///   POST /api/report    same body -> layout report JSON
class Service {
public:
    explicit Service(Catalog catalog, ServiceConfig config = {});

    HttpResponse list_datasets() const;
    HttpResponse list_atlases() const;
    HttpResponse render(std::string_view body) const;
    HttpResponse report(std::string_view body) const;

    void mount(httplib::Server& server) const;
    /// Blocks until the server stops. Returns false when the port cannot be bound.
    bool serve(const std::string& host, int port) const;

    const Catalog& catalog() const { return catalog_; }

private:
    HttpResponse render_impl(std::string_view body, bool want_report) const;

    Catalog catalog_;
    ServiceConfig config_;
};

}  // namespace micromap
