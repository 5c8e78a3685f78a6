#include "micromap/maprender.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "svg_writer.hpp"

namespace micromap {

using nlohmann::json;

// ─── Loading ────────────────────────────────────────────────────────────────

namespace {

struct RawRegion {
    std::string id;
    std::string name;
    std::vector<std::vector<Point>> rings;
};

std::string property_text(const json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_number())
        return v.dump();
    return {};
}

Point read_position(const json& pos, const std::string& where)
{
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number())
        throw InputError("bad coordinate in " + where);
    return {pos[0].get<double>(), pos[1].get<double>()};
}

std::vector<Point> read_ring(const json& ring, const std::string& where)
{
    if (!ring.is_array())
        throw InputError("bad ring in " + where);
    std::vector<Point> pts;
    for (const auto& pos : ring)
        pts.push_back(read_position(pos, where));
    if (pts.size() < 4 || !(pts.front() == pts.back()))
        throw InputError("unclosed ring in " + where);
    pts.pop_back();
    return pts;
}

std::vector<std::vector<Point>> read_geometry(const json& geom, const std::string& where)
{
    if (!geom.is_object() || !geom.contains("type") || !geom.contains("coordinates"))
        throw InputError("missing geometry in " + where);
    const std::string type = geom["type"].get<std::string>();
    const json& coords = geom["coordinates"];
    std::vector<std::vector<Point>> rings;
    if (type == "Polygon") {
        for (const auto& r : coords)
            rings.push_back(read_ring(r, where));
    } else if (type == "MultiPolygon") {
        for (const auto& poly : coords)
            for (const auto& r : poly)
                rings.push_back(read_ring(r, where));
    } else {
        throw InputError("unsupported geometry type " + type + " in " + where);
    }
    return rings;
}

}  // namespace

Atlas load_atlas(std::string_view geojson, std::string atlas_id, const AtlasLoadOptions& options)
{
    json doc;
    try {
        doc = json::parse(geojson);
    } catch (const json::parse_error& e) {
        throw InputError("atlas " + atlas_id + ": " + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features"))
        throw InputError("atlas " + atlas_id + ": not a FeatureCollection");

    const json meta = doc.value("micromap", json::object());
    const bool planar = meta.value("coordinates", "lonlat") == "planar";
    const bool y_up = meta.value("y_axis", "down") == "up";
    std::string id_prop = options.id_property.empty() ? meta.value("id_property", "id") : options.id_property;
    std::string name_prop = options.name_property.empty() ? meta.value("name_property", "name") : options.name_property;

    std::vector<RawRegion> raw;
    std::set<std::string> seen;
    std::size_t index = 0;
    for (const auto& f : doc["features"]) {
        const std::string where = "atlas " + atlas_id + " feature " + std::to_string(index++);
        const json props = f.value("properties", json::object());
        std::string id;
        if (props.is_object() && props.contains(id_prop))
            id = trim(property_text(props[id_prop]));
        else if (f.contains("id"))
            id = trim(property_text(f["id"]));
        if (id.empty())
            throw InputError(where + ": missing id property \"" + id_prop + "\"");
        if (!seen.insert(id).second)
            throw InputError("atlas " + atlas_id + ": duplicate region id " + id);
        std::string name = props.is_object() && props.contains(name_prop) ? property_text(props[name_prop]) : id;
        raw.push_back({id, name, read_geometry(f.value("geometry", json()), where + " (" + id + ")")});
    }
    if (raw.size() < 2)
        throw InputError("atlas " + atlas_id + ": needs at least 2 regions, found " + std::to_string(raw.size()));

    std::vector<std::vector<Point>> outline_rings;
    if (doc.contains("outline") && !doc["outline"].is_null())
        outline_rings = read_geometry(doc["outline"], "atlas " + atlas_id + " outline");

    std::function<Point(Point)> project;
    if (planar) {
        project = [y_up](Point p) { return y_up ? Point{p.x, -p.y} : p; };
    } else {
        double lat_min = 90.0, lat_max = -90.0;
        for (const auto& r : raw)
            for (const auto& ring : r.rings)
                for (const auto& p : ring) {
                    lat_min = std::min(lat_min, p.y);
                    lat_max = std::max(lat_max, p.y);
                }
        const double k = std::cos((lat_min + lat_max) / 2.0 * std::numbers::pi / 180.0);
        project = [k](Point p) { return Point{p.x * k, -p.y}; };
    }

    std::vector<Region> regions;
    for (auto& r : raw) {
        Geometry g;
        for (auto& ring : r.rings) {
            Ring out;
            for (const auto& p : ring)
                out.push_back(project(p));
            g.push_back(std::move(out));
        }
        regions.push_back({r.id, r.name, std::move(g)});
    }
    Geometry outline;
    for (auto& ring : outline_rings) {
        Ring out;
        for (const auto& p : ring)
            out.push_back(project(p));
        outline.push_back(std::move(out));
    }

    try {
        return Atlas(std::move(atlas_id), std::move(regions), std::move(outline), meta.value("note", ""));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

Atlas load_atlas_file(const std::filesystem::path& path, const AtlasLoadOptions& options)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read atlas file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return load_atlas(buf.str(), path.stem().string(), options);
}

// ─── Projection ─────────────────────────────────────────────────────────────

namespace {

double segment_distance(Point p, Point a, Point b)
{
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0)
        return std::hypot(p.x - a.x, p.y - a.y);
    const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

// Marks vertices of pts[first..last] to keep; endpoints are kept by the caller.
void douglas_peucker(std::span<const Point> pts, std::size_t first, std::size_t last, double tol, std::vector<bool>& keep)
{
    if (last <= first + 1)
        return;
    double best = -1.0;
    std::size_t best_i = first;
    for (std::size_t i = first + 1; i < last; ++i) {
        const double d = segment_distance(pts[i], pts[first], pts[last]);
        if (d > best) {
            best = d;
            best_i = i;
        }
    }
    if (best > tol) {
        keep[best_i] = true;
        douglas_peucker(pts, first, best_i, tol, keep);
        douglas_peucker(pts, best_i, last, tol, keep);
    }
}

}  // namespace

Ring simplify_ring(std::span<const Point> ring, double tolerance)
{
    const std::size_t n = ring.size();
    if (n <= 3 || tolerance <= 0.0)
        return Ring(ring.begin(), ring.end());

    // Anchor at vertex 0 and the vertex farthest from it, then reduce both chains.
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = std::hypot(ring[i].x - ring[0].x, ring[i].y - ring[0].y);
        if (d > far_d) {
            far_d = d;
            far = i;
        }
    }
    std::vector<Point> closed(ring.begin(), ring.end());
    closed.push_back(ring[0]);
    std::vector<bool> keep(n + 1, false);
    keep[0] = keep[far] = keep[n] = true;
    douglas_peucker(closed, 0, far, tolerance, keep);
    douglas_peucker(closed, far, n, tolerance, keep);

    Ring out;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i])
            out.push_back(ring[i]);
    if (out.size() < 3) {
        // Keep the vertex farthest from the anchor chord.
        std::size_t third = 0;
        double third_d = -1.0;
        for (std::size_t i = 1; i < n; ++i) {
            if (i == far)
                continue;
            const double d = segment_distance(ring[i], ring[0], ring[far]);
            if (d > third_d) {
                third_d = d;
                third = i;
            }
        }
        out.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (i == 0 || i == far || i == third)
                out.push_back(ring[i]);
    }
    return out;
}

namespace {

BoundingBox full_bounds(const Atlas& atlas)
{
    BoundingBox box = atlas.bounds();
    box.expand(bounds(atlas.outline()));
    return box;
}

}  // namespace

double atlas_aspect(const Atlas& atlas)
{
    const BoundingBox box = full_bounds(atlas);
    return box.width() > 0.0 ? box.height() / box.width() : 1.0;
}

namespace {

std::string path_data(const Geometry& geometry, double scale, double ox, double oy, double tolerance)
{
    std::string d;
    for (const auto& ring : geometry) {
        Ring px;
        px.reserve(ring.size());
        for (const auto& p : ring)
            px.push_back({ox + (p.x) * scale, oy + (p.y) * scale});
        const Ring simple = simplify_ring(px, tolerance);

        // Drop vertices that collapse onto their predecessor after rounding.
        std::vector<std::pair<std::string, std::string>> coords;
        for (const auto& p : simple) {
            auto c = std::make_pair(svg::num(p.x), svg::num(p.y));
            if (coords.empty() || coords.back() != c)
                coords.push_back(std::move(c));
        }
        while (coords.size() > 1 && coords.back() == coords.front())
            coords.pop_back();
        if (coords.size() < 3)
            continue;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            d += i == 0 ? "M" : "L";
            d += coords[i].first + " " + coords[i].second;
        }
        d += "Z";
    }
    return d;
}

}  // namespace

PanelGeometry project_atlas(const Atlas& atlas, double width, double height, const ProjectionOptions& options)
{
    const BoundingBox box = full_bounds(atlas);
    const double scale = std::min(width / box.width(), height / box.height());
    const double ox = (width - box.width() * scale) / 2.0 - box.min_x * scale;
    const double oy = (height - box.height() * scale) / 2.0 - box.min_y * scale;

    PanelGeometry out;
    out.width = width;
    out.height = height;
    for (const auto& r : atlas.regions()) {
        ProjectedRegion pr;
        pr.id = r.id;
        pr.path = path_data(r.geometry, scale, ox, oy, options.tolerance_px);
        const BoundingBox b = bounds(r.geometry);
        pr.center = {ox + (b.min_x + b.max_x) / 2.0 * scale, oy + (b.min_y + b.max_y) / 2.0 * scale};
        if (std::max(b.width(), b.height()) * scale < options.min_visible_px || pr.path.empty())
            pr.marker_radius = options.marker_radius_px;
        out.regions.push_back(std::move(pr));
    }
    out.outline_path = path_data(atlas.outline(), scale, ox, oy, options.tolerance_px);
    return out;
}

// ─── Panels ─────────────────────────────────────────────────────────────────

std::string_view to_string(RegionStyle s)
{
    switch (s) {
    case RegionStyle::highlight: return "highlight";
    case RegionStyle::prior: return "prior";
    case RegionStyle::neutral: return "neutral";
    }
    return "neutral";
}

std::vector<PanelMap> build_panel_maps(const Atlas& atlas, const PerceptualGrouping& grouping,
                                       const ColorAssignment& colors, ShadingMode mode)
{
    std::map<std::string, std::size_t, std::less<>> group_of;
    for (std::size_t g = 0; g < grouping.groups.size(); ++g)
        for (const auto& id : grouping.groups[g])
            group_of[id] = g;

    std::vector<PanelMap> panels;
    for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
        PanelMap panel{g, {}};
        for (const auto& r : atlas.regions()) {
            PanelRegionStyle s{r.id, RegionStyle::neutral, colors.palette.neutral};
            const auto it = group_of.find(r.id);
            if (it != group_of.end()) {
                if (it->second == g) {
                    s.style = RegionStyle::highlight;
                    s.fill = colors.at(r.id).fill;
                } else if (mode == ShadingMode::cumulative && it->second < g) {
                    s.style = RegionStyle::prior;
                    s.fill = colors.palette.prior;
                }
            }
            panel.regions.push_back(std::move(s));
        }
        panels.push_back(std::move(panel));
    }
    return panels;
}

}  // namespace micromap
