#include "micromap/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "micromap/maprender.hpp"

#ifndef MICROMAP_DEFAULT_DATA_ROOT
#define MICROMAP_DEFAULT_DATA_ROOT "data"
#endif

namespace micromap {

namespace fs = std::filesystem;

Catalog::Catalog(fs::path root, fs::path bundled_atlases) : root_(std::move(root)), bundled_(std::move(bundled_atlases)) {}

fs::path Catalog::default_root()
{
    if (const char* env = std::getenv("MICROMAP_DATA_ROOT"); env && *env)
        return env;
    return MICROMAP_DEFAULT_DATA_ROOT;
}

fs::path Catalog::bundled_atlas_dir()
{
    return fs::path(MICROMAP_DEFAULT_DATA_ROOT) / "atlases";
}

std::vector<DatasetManifest> Catalog::datasets() const
{
    return registry_list(root_);
}

DatasetManifest Catalog::dataset(const std::string& id) const
{
    for (auto& m : datasets()) {
        if (m.id != id)
            continue;
        if (!m.ok())
            throw InputError("dataset " + id + ": " + m.error);
        return m;
    }
    throw NotFound("unknown dataset " + id);
}

DataTable Catalog::load_table(const std::string& id) const
{
    return load_dataset(dataset(id));
}

namespace {

std::map<std::string, fs::path> atlas_files(const fs::path& dir)
{
    std::map<std::string, fs::path> out;
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        return out;
    for (const auto& e : fs::directory_iterator(dir, ec))
        if (e.is_regular_file() && e.path().extension() == ".geojson")
            out.emplace(e.path().stem().string(), e.path());
    return out;
}

std::map<std::string, std::pair<fs::path, bool>> merged_atlases(const fs::path& root, const fs::path& bundled)
{
    std::map<std::string, std::pair<fs::path, bool>> all;
    for (const auto& [id, p] : atlas_files(root / "atlases"))
        all[id] = {p, false};
    for (const auto& [id, p] : atlas_files(bundled))
        all[id] = {p, true};
    return all;
}

}  // namespace

std::vector<AtlasSummary> Catalog::atlases() const
{
    std::vector<AtlasSummary> out;
    for (const auto& [id, entry] : merged_atlases(root_, bundled_)) {
        AtlasSummary s{id, 0, entry.first, entry.second, {}};
        try {
            s.region_count = load_atlas_file(entry.first).size();
        } catch (const InputError& e) {
            s.error = e.what();
        }
        out.push_back(std::move(s));
    }
    return out;
}

Atlas Catalog::load_atlas(const std::string& id) const
{
    const auto all = merged_atlases(root_, bundled_);
    const auto it = all.find(id);
    if (it == all.end())
        throw NotFound("unknown atlas " + id);
    return load_atlas_file(it->second.first);
}

RenderedFigure render_request(const Catalog& catalog, const RenderRequest& request)
{
    if (request.dataset.empty())
        throw InputError("request names no dataset");
    const DatasetManifest manifest = catalog.dataset(request.dataset);
    const Atlas atlas = catalog.load_atlas(request.atlas.empty() ? manifest.atlas : request.atlas);
    const DataTable table = load_dataset(manifest);
    return render_figure(request.spec, table, atlas);
}

}  // namespace micromap
