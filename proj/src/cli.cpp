#include "micromap/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "micromap/catalog.hpp"
#include "micromap/maprender.hpp"
#include "micromap/render.hpp"
#include "micromap/service.hpp"
#include "micromap/spec_json.hpp"
#include "micromap/stats.hpp"

namespace micromap::cli {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Writes "<path>.partial", then renames.
void write_atomic(const fs::path& path, const std::string& content)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw InputError("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string shortest(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct Inputs {
    PlotSpec spec;
    DataTable table;
    std::optional<Atlas> atlas;
};

Inputs resolve(const Catalog& catalog, const std::string& spec_path, const std::string& dataset_arg,
               const std::string& atlas_arg)
{
    RenderRequest request = parse_request(read_text(spec_path));
    const std::string dataset = dataset_arg.empty() ? request.dataset : dataset_arg;
    if (dataset.empty())
        throw InputError("no dataset: pass --dataset or name one in the spec file");

    DatasetManifest manifest;
    if (fs::is_regular_file(fs::path(dataset) / "manifest.json"))
        manifest = read_manifest(dataset);
    else
        manifest = catalog.dataset(dataset);

    std::string atlas = atlas_arg.empty() ? request.atlas : atlas_arg;
    if (atlas.empty())
        atlas = manifest.atlas;

    Inputs in{std::move(request.spec), load_dataset(manifest), std::nullopt};
    if (fs::path(atlas).extension() == ".geojson" && fs::is_regular_file(atlas))
        in.atlas = load_atlas_file(atlas);
    else
        in.atlas = catalog.load_atlas(atlas);
    return in;
}

void print_issues(const ValidationReport& report, std::ostream& err)
{
    for (const auto& i : report.issues)
        err << i.code << ": " << i.message << "\n";
}

template <class F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const SpecError& e) {
        print_issues(e.report(), err);
        return kValidation;
    } catch (const LayoutError& e) {
        err << "layout: " << e.what() << "\n";
        return kValidation;
    } catch (const NotFound& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

bool have_rasterizer()
{
    return std::system("command -v rsvg-convert >/dev/null 2>&1") == 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Linked micromap renderer", "micromap"};
    app.require_subcommand(1);

    std::string root_arg;
    std::string spec_path, dataset_arg, atlas_arg, out_path;
    bool want_report = false, want_png = false;

    auto* render = app.add_subcommand("render", "Render a figure to SVG");
    render->add_option("--spec", spec_path, "Spec or recipe JSON")->required();
    render->add_option("--dataset", dataset_arg, "Dataset id or directory");
    render->add_option("--atlas", atlas_arg, "Atlas id or .geojson file");
    render->add_option("--out", out_path, "Output SVG path")->required();
    render->add_flag("--report", want_report, "Also write <out>.report.json");
    render->add_flag("--png", want_png, "Also rasterize to PNG with rsvg-convert");
    render->add_option("--root", root_arg, "Data root");

    auto* validate = app.add_subcommand("validate", "Check a spec against a dataset and atlas");
    validate->add_option("--spec", spec_path, "Spec or recipe JSON")->required();
    validate->add_option("--dataset", dataset_arg, "Dataset id or directory");
    validate->add_option("--atlas", atlas_arg, "Atlas id or .geojson file");
    validate->add_option("--root", root_arg, "Data root");

    std::vector<double> lq_pos;
    std::optional<double> area_cat, area_total, nat_cat, nat_total;
    auto* lq = app.add_subcommand("lq", "Location quotient");
    lq->add_option("values", lq_pos, "AREA_CAT AREA_TOTAL NAT_CAT NAT_TOTAL")->expected(0, 4);
    lq->add_option("--area-cat", area_cat, "Category employment in the area");
    lq->add_option("--area-total", area_total, "Total employment in the area");
    lq->add_option("--nat-cat", nat_cat, "Category employment in the nation");
    lq->add_option("--nat-total", nat_total, "Total employment in the nation");

    auto* datasets = app.add_subcommand("datasets", "List registered datasets");
    datasets->add_option("--root", root_arg, "Data root");

    auto* atlases = app.add_subcommand("atlases", "List atlases");
    atlases->add_option("--root", root_arg, "Data root");

    int port = 8080;
    std::string host = "127.0.0.1";
    std::string cors = "*";
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--port", port, "Port");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--root", root_arg, "Data root");
    serve->add_option("--cors", cors, "Allowed UI origin (empty disables CORS)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kInputError;
    }

    const Catalog catalog(root_arg.empty() ? Catalog::default_root() : fs::path(root_arg));

    if (*render) {
        return guarded(err, [&] {
            const Inputs in = resolve(catalog, spec_path, dataset_arg, atlas_arg);
            const RenderedFigure fig = render_figure(in.spec, in.table, *in.atlas);
            const fs::path svg_path(out_path);
            write_atomic(svg_path, fig.svg);
            if (want_report) {
                fs::path report_path = svg_path;
                report_path.replace_extension(".report.json");
                write_atomic(report_path, fig.report);
            }
            if (want_png) {
                if (!have_rasterizer()) {
                    err << "error: --png needs rsvg-convert on PATH\n";
                    return kInputError;
                }
                fs::path png = svg_path;
                png.replace_extension(".png");
                const std::string cmd = "rsvg-convert -o '" + png.string() + "' '" + svg_path.string() + "'";
                if (std::system(cmd.c_str()) != 0) {
                    err << "error: rsvg-convert failed\n";
                    return kInputError;
                }
            }
            out << svg_path.string() << "\n";
            return kOk;
        });
    }

    if (*validate) {
        return guarded(err, [&] {
            const Inputs in = resolve(catalog, spec_path, dataset_arg, atlas_arg);
            const ValidationReport report = validate_spec(in.spec, in.table, *in.atlas);
            if (!report.ok()) {
                print_issues(report, err);
                return kValidation;
            }
            prepare_figure(in.spec, in.table, *in.atlas);
            out << "ok\n";
            return kOk;
        });
    }

    if (*lq) {
        if (!lq_pos.empty() && (area_cat || area_total || nat_cat || nat_total)) {
            err << "error: give the four values either positionally or as flags\n" << lq->help();
            return kInputError;
        }
        if (lq_pos.empty()) {
            if (!(area_cat && area_total && nat_cat && nat_total)) {
                err << "error: lq needs four values\n" << lq->help();
                return kInputError;
            }
            lq_pos = {*area_cat, *area_total, *nat_cat, *nat_total};
        }
        if (lq_pos.size() != 4) {
            err << "error: lq needs four values\n" << lq->help();
            return kInputError;
        }
        return guarded(err, [&] {
            out << shortest(stats::location_quotient({lq_pos[0], lq_pos[1], lq_pos[2], lq_pos[3]})) << "\n";
            return kOk;
        });
    }

    if (*datasets) {
        for (const auto& m : catalog.datasets()) {
            if (m.ok())
                out << m.id << "\t" << m.atlas << "\t" << m.title << "\n";
            else
                out << m.id << "\terror\t" << m.error << "\n";
        }
        return kOk;
    }

    if (*atlases) {
        for (const auto& a : catalog.atlases()) {
            if (a.error.empty())
                out << a.id << "\t" << a.region_count << "\n";
            else
                out << a.id << "\terror\t" << a.error << "\n";
        }
        return kOk;
    }

    if (*serve) {
        const Service service(catalog, ServiceConfig{cors});
        out << "serving " << catalog.root().string() << " on http://" << host << ":" << port << "\n" << std::flush;
        if (!service.serve(host, port)) {
            err << "error: cannot listen on " << host << ":" << port << "\n";
            return kInputError;
        }
        return kOk;
    }
    return kInputError;
}

}  // namespace micromap::cli
