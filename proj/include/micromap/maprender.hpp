#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "micromap/grouping.hpp"
#include "micromap/model.hpp"

namespace micromap {

// ─── Loading ────────────────────────────────────────────────────────────────

/// Empty fields fall back to the document's "micromap" member, then to "id" and "name".
struct AtlasLoadOptions {
    std::string id_property;
    std::string name_property;
};

/// Reads a GeoJSON FeatureCollection of Polygon / MultiPolygon features.
///
/// Coordinates are longitude/latitude unless the document carries
/// `"micromap": {"coordinates": "planar"}`; lon/lat is projected equirectangularly with
/// x = lon * cos(mid latitude), y = -lat. Planar input with `"y_axis": "up"` is flipped.
/// Rings must be closed in the document and are stored open.
/// Throws InputError for unclosed rings, a missing id, duplicate ids, or fewer than two regions.
Atlas load_atlas(std::string_view geojson, std::string atlas_id, const AtlasLoadOptions& options = {});
Atlas load_atlas_file(const std::filesystem::path& path, const AtlasLoadOptions& options = {});

// ─── Projection ─────────────────────────────────────────────────────────────

/// Douglas–Peucker reduction of a closed ring. Keeps at least three vertices.
Ring simplify_ring(std::span<const Point> ring, double tolerance);

struct ProjectedRegion {
    std::string id;
    std::string path;         // SVG path data in panel coordinates
    Point center;             // bounding-box center
    double marker_radius = 0; // > 0 when the region is too small to see and gets a marker
};

/// Atlas fitted once into a panel box; every panel reuses the same path text.
struct PanelGeometry {
    double width = 0.0;
    double height = 0.0;
    std::vector<ProjectedRegion> regions;  // atlas order
    std::string outline_path;
};

struct ProjectionOptions {
    double tolerance_px = 0.4;
    double min_visible_px = 3.0;
    double marker_radius_px = 2.0;
};

PanelGeometry project_atlas(const Atlas& atlas, double width, double height, const ProjectionOptions& options = {});

/// Height / width of the atlas bounding box (outline included).
double atlas_aspect(const Atlas& atlas);

// ─── Panels ─────────────────────────────────────────────────────────────────

enum class RegionStyle { highlight, prior, neutral };
std::string_view to_string(RegionStyle s);

struct PanelRegionStyle {
    std::string id;
    RegionStyle style = RegionStyle::neutral;
    std::string fill;
    friend bool operator==(const PanelRegionStyle&, const PanelRegionStyle&) = default;
};

struct PanelMap {
    std::size_t group_index = 0;
    std::vector<PanelRegionStyle> regions;  // atlas order, one entry per atlas region
    friend bool operator==(const PanelMap&, const PanelMap&) = default;
};

/// One panel per group. Members take their assigned colors. In cumulative mode regions of
/// earlier groups are shaded with the prior color; everything else is neutral, including
/// atlas regions that have no data.
std::vector<PanelMap> build_panel_maps(const Atlas& atlas, const PerceptualGrouping& grouping,
                                       const ColorAssignment& colors, ShadingMode mode);

}  // namespace micromap
