#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "micromap/ingest.hpp"
#include "micromap/model.hpp"
#include "micromap/render.hpp"
#include "micromap/spec_json.hpp"

namespace micromap {

/// A dataset or atlas id that the catalog does not know.
class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AtlasSummary {
    std::string id;
    std::size_t region_count = 0;
    std::filesystem::path path;
    bool bundled = false;
    std::string error;
};

/// Datasets under root/datasets and atlases under root/atlases plus the bundled atlases.
/// Bundled atlas ids win over user files of the same name. Reads files on every call.
class Catalog {
public:
    explicit Catalog(std::filesystem::path root, std::filesystem::path bundled_atlases = bundled_atlas_dir());

    /// MICROMAP_DATA_ROOT when set, otherwise the data directory of the source tree.
    static std::filesystem::path default_root();
    static std::filesystem::path bundled_atlas_dir();

    const std::filesystem::path& root() const { return root_; }

    std::vector<DatasetManifest> datasets() const;
    /// Throws NotFound for unknown ids and InputError for an unusable manifest.
    DatasetManifest dataset(const std::string& id) const;
    DataTable load_table(const std::string& id) const;

    std::vector<AtlasSummary> atlases() const;
    Atlas load_atlas(const std::string& id) const;

private:
    std::filesystem::path root_;
    std::filesystem::path bundled_;
};

/// Resolves the request's dataset and atlas (the manifest's atlas when none is named) and renders.
/// Throws NotFound, SpecError, LayoutError or InputError.
RenderedFigure render_request(const Catalog& catalog, const RenderRequest& request);

}  // namespace micromap
