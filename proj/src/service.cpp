#include "micromap/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include "micromap/spec_json.hpp"

namespace micromap {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

HttpResponse json_response(int status, const ojson& body)
{
    return {status, "application/json", body.dump(2) + "\n", {}};
}

HttpResponse error_response(int status, const std::string& message)
{
    return json_response(status, {{"error", message}});
}

ojson issues_json(const ValidationReport& report)
{
    ojson issues = ojson::array();
    for (const auto& i : report.issues)
        issues.push_back({{"code", i.code}, {"message", i.message}});
    return {{"ok", report.ok()}, {"issues", issues}};
}

ojson dataset_summary(const DatasetManifest& m)
{
    ojson j;
    j["id"] = m.id;
    j["title"] = m.title;
    j["atlas"] = m.atlas;
    j["status"] = m.ok() ? "ok" : "error";
    if (!m.ok()) {
        j["error"] = m.error;
        return j;
    }
    j["provenance"] = {{"url", m.provenance.url}, {"vintage", m.provenance.vintage}, {"note", m.provenance.note}};
    ojson national = ojson::object();
    for (const auto& [k, v] : m.national)
        national[k] = v;
    j["national"] = national;

    std::map<std::string, std::string> units;
    for (const auto& s : m.sources)
        for (const auto& c : s.adapter.columns)
            units[c.name] = c.unit;
    try {
        const DataTable table = load_dataset(m);
        std::set<std::string> in_groups;
        ojson groups = ojson::array();
        for (const auto& [name, points] : table.time_groups()) {
            ojson labels = ojson::array();
            for (const auto& p : points) {
                labels.push_back(p.label);
                in_groups.insert(p.column);
            }
            groups.push_back({{"name", name}, {"labels", labels}, {"unit", units.count(name) ? units[name] : ""}});
        }
        ojson columns = ojson::array();
        for (const auto& [name, _] : table.columns())
            if (!in_groups.contains(name))
                columns.push_back({{"name", name}, {"type", "numeric"}, {"unit", units.count(name) ? units[name] : ""}});
        j["columns"] = columns;
        j["time_groups"] = groups;
        j["row_count"] = table.row_count();
    } catch (const std::exception& e) {
        j["status"] = "error";
        j["error"] = e.what();
    }
    return j;
}

}  // namespace

Service::Service(Catalog catalog, ServiceConfig config) : catalog_(std::move(catalog)), config_(std::move(config)) {}

HttpResponse Service::list_datasets() const
{
    ojson out = ojson::array();
    for (const auto& m : catalog_.datasets())
        out.push_back(dataset_summary(m));
    return json_response(200, out);
}

HttpResponse Service::list_atlases() const
{
    ojson out = ojson::array();
    for (const auto& a : catalog_.atlases()) {
        ojson j = {{"id", a.id}, {"region_count", a.region_count}, {"bundled", a.bundled}};
        if (!a.error.empty())
            j["error"] = a.error;
        out.push_back(j);
    }
    return json_response(200, out);
}

HttpResponse Service::render_impl(std::string_view body, bool want_report) const
{
    RenderRequest request;
    try {
        request = parse_request(body);
    } catch (const InputError& e) {
        return error_response(400, e.what());
    }
    if (request.dataset.empty())
        return error_response(400, "request names no dataset");

    try {
        const RenderedFigure fig = render_request(catalog_, request);
        if (want_report)
            return {200, "application/json", fig.report, {}};
        return {200, "image/svg+xml", fig.svg, {{"Link", "</api/report>; rel=\"describedby\""}}};
    } catch (const NotFound& e) {
        return error_response(404, e.what());
    } catch (const SpecError& e) {
        return json_response(422, issues_json(e.report()));
    } catch (const LayoutError& e) {
        return json_response(422, issues_json(ValidationReport{{{"layout", e.what()}}}));
    } catch (const InputError& e) {
        return error_response(500, e.what());
    }
}

HttpResponse Service::render(std::string_view body) const
{
    return render_impl(body, false);
}

HttpResponse Service::report(std::string_view body) const
{
    return render_impl(body, true);
}

void Service::mount(httplib::Server& server) const
{
    const auto send = [this](httplib::Response& res, const HttpResponse& r) {
        res.status = r.status;
        for (const auto& [k, v] : r.headers)
            res.set_header(k, v);
        if (!config_.cors_origin.empty()) {
            res.set_header("Access-Control-Allow-Origin", config_.cors_origin);
            res.set_header("Access-Control-Expose-Headers", "Link");
        }
        res.set_content(r.body, r.content_type);
    };

    server.Get("/api/datasets", [this, send](const httplib::Request&, httplib::Response& res) { send(res, list_datasets()); });
    server.Get("/api/atlases", [this, send](const httplib::Request&, httplib::Response& res) { send(res, list_atlases()); });
    server.Post("/api/render",
                [this, send](const httplib::Request& req, httplib::Response& res) { send(res, render(req.body)); });
    server.Post("/api/report",
                [this, send](const httplib::Request& req, httplib::Response& res) { send(res, report(req.body)); });
    server.Options(R"(/api/.*)", [this](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        if (!config_.cors_origin.empty()) {
            res.set_header("Access-Control-Allow-Origin", config_.cors_origin);
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
        }
    });
    server.set_error_handler([send](const httplib::Request& req, httplib::Response& res) {
        if (res.body.empty())
            send(res, error_response(res.status, "no route for " + req.method + " " + req.path));
    });
    server.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        send(res, error_response(500, message));
    });
}

bool Service::serve(const std::string& host, int port) const
{
    httplib::Server server;
    mount(server);
    return server.listen(host, port);
}

}  // namespace micromap
