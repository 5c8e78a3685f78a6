#include "micromap/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "svg_writer.hpp"

namespace micromap {

using ojson = nlohmann::ordered_json;

// ─── Text metrics ───────────────────────────────────────────────────────────

namespace {

// Helvetica advance widths (1/1000 em) for ASCII 32..126.
constexpr std::array<int, 95> kHelvetica = {
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278,  //  !"#$%&'()*+,-./
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 278, 278, 584, 584, 584, 556,  // 0-9:;<=>?
    1015, 667, 667, 722, 722, 667, 611, 778, 722, 278, 500, 667, 556, 833, 722, 778, // @A-O
    667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611, 278, 278, 278, 469, 556,  // P-Z[\]^_
    333, 556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500, 222, 833, 556, 556,  // `a-o
    556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584,       // p-z{|}~
};
constexpr int kWideDefault = 556;   // any non-ASCII code point
constexpr int kEllipsis = 1000;
constexpr std::string_view kEllipsisText = "\xE2\x80\xA6";

// Splits UTF-8 into code point byte ranges.
std::vector<std::string_view> code_points(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const auto c = static_cast<unsigned char>(text[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
        len = std::min(len, text.size() - i);
        out.push_back(text.substr(i, len));
        i += len;
    }
    return out;
}

int advance(std::string_view cp)
{
    if (cp.size() == 1) {
        const auto c = static_cast<unsigned char>(cp[0]);
        return c >= 32 && c <= 126 ? kHelvetica[c - 32] : kWideDefault;
    }
    return cp == kEllipsisText ? kEllipsis : kWideDefault;
}

}  // namespace

double text_width(std::string_view text, double font_size)
{
    long units = 0;
    for (auto cp : code_points(text))
        units += advance(cp);
    return static_cast<double>(units) * font_size / 1000.0;
}

std::string truncate_to_width(std::string_view text, double max_width, double font_size)
{
    if (text_width(text, font_size) <= max_width)
        return std::string(text);
    const auto cps = code_points(text);
    double budget = max_width - kEllipsis * font_size / 1000.0;
    std::string out;
    for (auto cp : cps) {
        const double w = advance(cp) * font_size / 1000.0;
        if (w > budget)
            break;
        budget -= w;
        out += cp;
    }
    while (!out.empty() && out.back() == ' ')
        out.pop_back();
    return out + std::string(kEllipsisText);
}

// ─── Layout ─────────────────────────────────────────────────────────────────

namespace {

constexpr double kLabelPad = 10.0;
constexpr double kMapRowsTall = 5.0;

double header_height(double fs) { return 2.0 * fs + 10.0; }
double axis_footer_height(double fs) { return fs + 10.0; }

}  // namespace

FigureLayout compute_layout(const BoundFigureModel& model, const PerceptualGrouping& grouping, const PageOptions& page,
                            double map_aspect)
{
    const double m = page.margin;
    const double fs = page.font_size;
    const auto& spec = model.spec;
    FigureLayout L;
    L.width = page.width;

    double y = m;
    if (!spec.title.empty() || !spec.subtitle.empty()) {
        L.has_title_block = true;
        if (!spec.title.empty()) {
            L.title_y = y + 1.5 * fs;
            y += 2.0 * fs;
        }
        if (!spec.subtitle.empty()) {
            L.subtitle_y = y + 1.1 * fs;
            y += 1.6 * fs;
        }
        y += 4.0;
    }
    L.header_top = y;
    y += header_height(fs);
    L.plot_top = y;
    for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
        Band b;
        b.group_index = g;
        b.y = y;
        b.height = static_cast<double>(grouping.groups[g].size()) * page.row_height;
        b.region_ids = grouping.groups[g];
        y += b.height;
        if (g + 1 < grouping.groups.size())
            y += page.gutter;
        L.bands.push_back(std::move(b));
    }
    L.plot_bottom = y;
    L.footer_top = y;
    L.height = y + axis_footer_height(fs) + m;

    // Columns: map, labels, data.
    double map_w = page.map_width;
    if (map_w <= 0.0) {
        const double aspect = map_aspect > 0.0 ? map_aspect : 1.0;
        map_w = std::clamp(kMapRowsTall * page.row_height / aspect, 50.0, 160.0);
    }
    L.map = {"map", "", m, map_w};

    std::unordered_map<std::string, std::string> names;
    for (std::size_t i = 0; i < model.region_ids.size(); ++i)
        names[model.region_ids[i]] = model.region_names[i];
    double longest = 0.0;
    for (const auto& id : grouping.order)
        longest = std::max(longest, text_width(names.at(id), fs));
    const double text_w = std::min(longest, page.label_width_cap);
    L.labels = {"labels", "", L.map.x + map_w + kColumnGap, text_w + kLabelPad};

    const double x0 = L.labels.x + L.labels.width + kColumnGap;
    const std::size_t nc = spec.columns.size();
    double total_weight = 0.0;
    for (const auto& c : spec.columns) {
        if (!(c.options.weight > 0.0) || !std::isfinite(c.options.weight))
            throw std::invalid_argument("column weight must be positive");
        total_weight += c.options.weight;
    }
    const double gaps = kColumnGap * static_cast<double>(nc > 0 ? nc - 1 : 0);
    double needed = 0.0;
    for (const auto& c : spec.columns)
        needed = std::max(needed, kMinColumnWidth * total_weight / c.options.weight);
    const double minimum = std::ceil(x0 + gaps + needed + m);
    if (nc == 0 || page.width < minimum)
        throw LayoutError("page width " + svg::num(page.width) + " is too narrow; minimum width is " + svg::num(minimum),
                          minimum);

    const double avail = page.width - m - x0 - gaps;
    double x = x0;
    for (const auto& c : spec.columns) {
        const double w = avail * c.options.weight / total_weight;
        L.columns.push_back({std::string(to_string(c.glyph)), c.title, x, w});
        x += w + kColumnGap;
    }

    for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
        const Band& b = L.bands[g];
        for (std::size_t r = 0; r < b.region_ids.size(); ++r) {
            RowLabel row;
            row.region_id = b.region_ids[r];
            row.name = names.at(row.region_id);
            row.text = truncate_to_width(row.name, page.label_width_cap, fs);
            row.truncated = row.text != row.name;
            row.y = b.y + (static_cast<double>(r) + 0.5) * page.row_height;
            L.rows.push_back(std::move(row));
        }
    }
    return L;
}

// ─── Figure preparation ─────────────────────────────────────────────────────

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace

Figure prepare_figure(const PlotSpec& spec, const DataTable& table, const Atlas& atlas)
{
    Figure f;
    f.model = bind_spec(spec, table, atlas);
    f.grouping = make_grouping(sort_rows(f.model));
    f.colors = assign_colors(f.grouping, spec.palette);
    f.layout = compute_layout(f.model, f.grouping, spec.page, atlas_aspect(atlas));
    f.geometry = project_atlas(atlas, f.layout.map.width, kMapRowsTall * spec.page.row_height);
    f.maps = build_panel_maps(atlas, f.grouping, f.colors, spec.shading);

    for (std::size_t c = 0; c < f.model.columns.size(); ++c) {
        try {
            f.columns.push_back(build_column(f.model.columns[c], f.model, f.grouping, f.layout.columns[c].width));
        } catch (const std::invalid_argument& e) {
            const std::string title = spec.columns[c].title.empty() ? std::string(to_string(spec.columns[c].glyph))
                                                                    : spec.columns[c].title;
            throw SpecError(ValidationReport{{{"invalid_data", "column " + title + ": " + e.what()}}});
        }
    }

    for (std::size_t c = 0; c < f.columns.size(); ++c) {
        const std::string title = spec.columns[c].title.empty() ? std::string(to_string(spec.columns[c].glyph))
                                                                : spec.columns[c].title;
        if (!f.columns[c].footnotes.empty())
            f.notes.push_back(title + ": no mark for " + join(f.columns[c].footnotes, ", "));
        for (const auto& w : f.columns[c].warnings)
            f.notes.push_back(title + ": " + w);
    }
    if (!f.model.dropped_missing_sort.empty())
        f.notes.push_back("Dropped for missing sort value: " + join(f.model.dropped_missing_sort, ", "));
    if (!f.model.omitted_regions.empty())
        f.notes.push_back("No data: " + join(f.model.omitted_regions, ", "));
    f.layout.height += static_cast<double>(f.notes.size()) * 1.4 * spec.page.font_size;
    return f;
}

// ─── Emission ───────────────────────────────────────────────────────────────

namespace {

using svg::num;
using svg::round2;

constexpr const char* kPanelFill = "#F2F2F2";
constexpr const char* kPanelStroke = "#BBBBBB";
constexpr const char* kGrid = "#FFFFFF";
constexpr const char* kInk = "#000000";
constexpr const char* kOpenPoint = "#808080";
constexpr const char* kSmooth = "#D62728";
constexpr const char* kIdentity = "#666666";
constexpr const char* kMapStroke = "#666666";
constexpr const char* kOutlineStroke = "#333333";
constexpr double kArrowLength = 5.0;
constexpr double kArrowHalfWidth = 2.5;

struct Emitter {
    const Figure& f;
    svg::Writer w;
    ojson report;
    std::unordered_map<std::string, std::size_t> band_of;
    std::unordered_map<std::string, double> row_y;

    explicit Emitter(const Figure& fig) : f(fig)
    {
        for (std::size_t g = 0; g < f.grouping.groups.size(); ++g)
            for (const auto& id : f.grouping.groups[g])
                band_of[id] = g;
        for (const auto& r : f.layout.rows)
            row_y[r.region_id] = r.y;
    }

    const Palette& palette() const { return f.colors.palette; }

    std::string color_of(const Mark& m, const std::string& region) const
    {
        switch (m.color) {
        case ColorRole::region: return f.colors.at(region).fill;
        case ColorRole::neutral: return kOpenPoint;
        case ColorRole::ink:
            return !region.empty() && f.colors.at(region).palette_index < 0 ? "#FFFFFF" : kInk;
        case ColorRole::reference: return palette().reference;
        case ColorRole::smooth: return kSmooth;
        case ColorRole::identity: return kIdentity;
        }
        return kInk;
    }

    // Draws one mark with a point transform into page coordinates; returns the page points.
    template <class Map>
    std::vector<Point> draw(const Mark& m, const std::string& region, Map to_page)
    {
        std::vector<Point> pts;
        for (const auto& p : m.points)
            pts.push_back(to_page(p));
        const std::string color = color_of(m, region);
        svg::Attrs style;
        switch (m.kind) {
        case MarkKind::circle:
            if (m.filled)
                style = {{"fill", color}, {"stroke", "#333333"}, {"stroke-width", "0.5"}};
            else
                style = {{"fill", "none"}, {"stroke", color}, {"stroke-width", "0.8"}};
            {
                svg::Attrs a = {{"cx", num(pts[0].x)}, {"cy", num(pts[0].y)}, {"r", num(m.size)}};
                a.insert(a.end(), style.begin(), style.end());
                w.leaf("circle", a);
            }
            break;
        case MarkKind::segment: {
            Point a = pts[0], b = pts[1];
            const double len = std::hypot(b.x - a.x, b.y - a.y);
            if (m.arrow_head && len > 0.0) {
                const double ux = (b.x - a.x) / len, uy = (b.y - a.y) / len;
                const double head = std::min(kArrowLength, len);
                const Point base{b.x - ux * head, b.y - uy * head};
                w.leaf("line", {{"x1", num(a.x)}, {"y1", num(a.y)}, {"x2", num(base.x)}, {"y2", num(base.y)},
                                {"stroke", color}, {"stroke-width", num(m.size)}});
                const Point l{base.x - uy * kArrowHalfWidth, base.y + ux * kArrowHalfWidth};
                const Point r{base.x + uy * kArrowHalfWidth, base.y - ux * kArrowHalfWidth};
                w.leaf("polygon", {{"points", num(b.x) + "," + num(b.y) + " " + num(l.x) + "," + num(l.y) + " " +
                                                  num(r.x) + "," + num(r.y)},
                                   {"fill", color}});
            } else {
                svg::Attrs attrs = {{"x1", num(a.x)}, {"y1", num(a.y)}, {"x2", num(b.x)}, {"y2", num(b.y)},
                                    {"stroke", color}, {"stroke-width", num(m.size)}};
                if (m.line == LineStyle::dashed || m.color == ColorRole::identity)
                    attrs.emplace_back("stroke-dasharray", "3 2");
                w.leaf("line", attrs);
            }
            break;
        }
        case MarkKind::rect: {
            const double x = std::min(pts[0].x, pts[1].x), y = std::min(pts[0].y, pts[1].y);
            svg::Attrs attrs = {{"x", num(x)},
                                {"y", num(y)},
                                {"width", num(round2(std::max(pts[0].x, pts[1].x)) - round2(x))},
                                {"height", num(round2(std::max(pts[0].y, pts[1].y)) - round2(y))},
                                {"fill", color},
                                {"stroke", "#333333"},
                                {"stroke-width", "0.4"}};
            if (m.opacity < 1.0)
                attrs.emplace_back("fill-opacity", num(m.opacity));
            w.leaf("rect", attrs);
            break;
        }
        case MarkKind::polyline: {
            std::string s;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (i)
                    s += ' ';
                s += num(pts[i].x) + "," + num(pts[i].y);
            }
            w.leaf("polyline", {{"points", s}, {"fill", "none"}, {"stroke", color}, {"stroke-width", num(m.size)}});
            break;
        }
        case MarkKind::text:
            w.text({{"x", num(pts[0].x)}, {"y", num(pts[0].y)}}, m.text);
            break;
        }
        return pts;
    }

    ojson mark_json(const Mark& m, const std::string& region, std::optional<std::size_t> panel,
                    const std::vector<Point>& pts) const
    {
        ojson j;
        if (!region.empty())
            j["region_id"] = region;
        if (panel)
            j["panel"] = *panel;
        j["tag"] = m.tag;
        j["kind"] = m.kind == MarkKind::circle    ? "circle"
                    : m.kind == MarkKind::segment ? "segment"
                    : m.kind == MarkKind::rect    ? "rect"
                    : m.kind == MarkKind::polyline ? "polyline"
                                                   : "text";
        j["filled"] = m.filled;
        if (m.color == ColorRole::region && !region.empty())
            j["color"] = f.colors.at(region).fill;
        ojson p = ojson::array();
        for (const auto& q : pts)
            p.push_back({round2(q.x), round2(q.y)});
        j["points"] = p;
        if (m.kind == MarkKind::circle)
            j["size"] = round2(m.size);
        ojson d = ojson::array();
        for (double v : m.data)
            d.push_back(v);
        j["data"] = d;
        return j;
    }

    static ojson axis_json(const AxisScale& s, double offset)
    {
        ojson j;
        j["domain"] = {s.domain_min, s.domain_max};
        j["range"] = {round2(offset + s.range_min), round2(offset + s.range_max)};
        j["ticks"] = s.ticks;
        j["tick_labels"] = s.tick_labels;
        return j;
    }

    void backgrounds()
    {
        const auto& L = f.layout;
        w.leaf("rect", {{"x", "0"}, {"y", "0"}, {"width", num(L.width)}, {"height", num(L.height)}, {"fill", "#FFFFFF"}});
        for (const auto& band : L.bands) {
            for (std::size_t c = 0; c < L.columns.size(); ++c) {
                const auto& col = L.columns[c];
                w.leaf("rect", {{"x", num(col.x)},
                                {"y", num(band.y)},
                                {"width", num(col.width)},
                                {"height", num(band.height)},
                                {"fill", kPanelFill},
                                {"stroke", kPanelStroke},
                                {"stroke-width", "0.5"}});
                for (double t : f.columns[c].x.ticks) {
                    const double x = col.x + f.columns[c].x.position(t);
                    w.leaf("line", {{"x1", num(x)}, {"y1", num(band.y)}, {"x2", num(x)}, {"y2", num(band.y + band.height)},
                                    {"stroke", kGrid}, {"stroke-width", "0.8"}});
                }
            }
        }
    }

    void references()
    {
        const auto& L = f.layout;
        for (std::size_t c = 0; c < f.columns.size(); ++c) {
            for (const auto& r : f.columns[c].references) {
                const double x = L.columns[c].x + r.x;
                svg::Attrs a = {{"x1", num(x)}, {"y1", num(L.plot_top)}, {"x2", num(x)}, {"y2", num(L.plot_bottom)},
                                {"stroke", palette().reference}, {"stroke-width", "1.2"}};
                if (r.style == LineStyle::dashed)
                    a.emplace_back("stroke-dasharray", "4 3");
                w.leaf("line", a);
            }
        }
    }

    void maps()
    {
        const auto& L = f.layout;
        const auto& geo = f.geometry;
        ojson maps_json = ojson::array();
        for (const auto& panel : f.maps) {
            const Band& band = L.bands[panel.group_index];
            const double s = std::min(1.0, band.height / geo.height);
            const double tx = L.map.x + (L.map.width - geo.width * s) / 2.0;
            const double ty = band.y + (band.height - geo.height * s) / 2.0;
            std::string transform = "translate(" + num(tx) + "," + num(ty) + ")";
            if (s < 1.0)
                transform += " scale(" + num(s) + ")";
            w.open("g", {{"transform", transform}});

            ojson pj;
            pj["group"] = panel.group_index;
            pj["transform"] = {{"x", round2(tx)}, {"y", round2(ty)}, {"scale", s}};
            ojson by_style = {{"highlight", ojson::array()}, {"prior", ojson::array()}, {"neutral", ojson::array()}};
            for (auto style : {RegionStyle::neutral, RegionStyle::prior, RegionStyle::highlight}) {
                for (std::size_t i = 0; i < panel.regions.size(); ++i) {
                    const auto& rs = panel.regions[i];
                    if (rs.style != style)
                        continue;
                    by_style[std::string(to_string(style))].push_back(rs.id);
                    const auto& pr = geo.regions[i];
                    const std::string stroke = style == RegionStyle::highlight ? f.colors.at(rs.id).outline : kMapStroke;
                    const double sw = (style == RegionStyle::highlight ? 0.6 : 0.3) / s;
                    if (!pr.path.empty())
                        w.leaf("path", {{"d", pr.path}, {"fill", rs.fill}, {"fill-rule", "evenodd"}, {"stroke", stroke},
                                        {"stroke-width", num(sw)}});
                    if (pr.marker_radius > 0.0)
                        w.leaf("circle", {{"cx", num(pr.center.x)}, {"cy", num(pr.center.y)}, {"r", num(pr.marker_radius / s)},
                                          {"fill", rs.fill}, {"stroke", stroke}, {"stroke-width", num(sw)}});
                }
            }
            if (!geo.outline_path.empty())
                w.leaf("path", {{"d", geo.outline_path}, {"fill", "none"}, {"stroke", kOutlineStroke},
                                {"stroke-width", num(0.6 / s)}});
            w.close();
            pj["regions"] = by_style;
            maps_json.push_back(pj);
        }
        report["maps"] = maps_json;
    }

    void marks()
    {
        const auto& L = f.layout;
        ojson cols = ojson::array();
        for (std::size_t c = 0; c < f.columns.size(); ++c) {
            const GlyphColumn& gc = f.columns[c];
            const ColumnExtent& ext = L.columns[c];
            ojson cj;
            cj["index"] = c;
            cj["kind"] = ext.kind;
            cj["title"] = ext.title;
            cj["x"] = round2(ext.x);
            cj["width"] = round2(ext.width);
            cj["axis"] = axis_json(gc.x, ext.x);
            if (gc.y)
                cj["y_axis"] = {{"domain", {gc.y->domain_min, gc.y->domain_max}},
                                {"ticks", gc.y->ticks},
                                {"tick_labels", gc.y->tick_labels}};
            ojson refs = ojson::array();
            for (const auto& r : gc.references)
                refs.push_back({{"value", r.value},
                                {"x", round2(ext.x + r.x)},
                                {"label", r.label},
                                {"style", r.style == LineStyle::dashed ? "dashed" : "solid"}});
            cj["references"] = refs;

            ojson marks_json = ojson::array();
            const auto panel_map = [&](const Band& band) {
                return [&, band](Point p) { return Point{ext.x + p.x, band.y + band.height * (1.0 - p.y)}; };
            };
            w.open("g", {{"class", "column"}});
            for (const auto& band : L.bands)
                for (const auto& m : gc.decorations)
                    draw(m, "", panel_map(band));
            for (const auto& row : gc.rows) {
                const Band& band = L.bands[band_of.at(row.region_id)];
                const double cy = row_y.at(row.region_id);
                for (const auto& m : row.marks) {
                    std::vector<Point> pts;
                    if (gc.y)
                        pts = draw(m, row.region_id, panel_map(band));
                    else
                        pts = draw(m, row.region_id, [&](Point p) { return Point{ext.x + p.x, cy + p.y}; });
                    auto mj = mark_json(m, row.region_id, std::nullopt, pts);
                    mj["group"] = band.group_index;
                    marks_json.push_back(mj);
                }
            }
            for (const auto& panel : gc.panels) {
                const Band& band = L.bands[panel.group_index];
                for (const auto& m : panel.marks) {
                    const auto pts = draw(m, m.region_id, panel_map(band));
                    marks_json.push_back(mark_json(m, m.region_id, panel.group_index, pts));
                }
            }
            w.close();
            cj["marks"] = marks_json;
            cj["footnotes"] = gc.footnotes;
            cj["warnings"] = gc.warnings;
            cols.push_back(cj);
        }
        report["columns"] = cols;
    }

    void text()
    {
        const auto& L = f.layout;
        const double fs = f.model.spec.page.font_size;
        const double m = f.model.spec.page.margin;
        w.open("g", {{"fill", kInk}});
        if (!f.model.spec.title.empty())
            w.text({{"x", num(m)}, {"y", num(L.title_y)}, {"font-size", num(1.5 * fs)}, {"font-weight", "bold"}},
                   f.model.spec.title);
        if (!f.model.spec.subtitle.empty())
            w.text({{"x", num(m)}, {"y", num(L.subtitle_y)}, {"font-size", num(1.1 * fs)}}, f.model.spec.subtitle);

        const double title_base = L.header_top + fs;
        const double top_ticks = L.header_top + 2.0 * fs + 4.0;
        const double bottom_ticks = L.footer_top + fs + 2.0;
        for (std::size_t c = 0; c < L.columns.size(); ++c) {
            const auto& col = L.columns[c];
            if (!col.title.empty())
                w.text({{"x", num(col.x + col.width / 2.0)}, {"y", num(title_base)}, {"text-anchor", "middle"},
                        {"font-weight", "bold"}},
                       truncate_to_width(col.title, col.width, fs));
            const auto& axis = f.columns[c].x;
            for (std::size_t t = 0; t < axis.ticks.size(); ++t) {
                const std::string x = num(col.x + axis.position(axis.ticks[t]));
                for (double y : {top_ticks, bottom_ticks})
                    w.text({{"x", x}, {"y", num(y)}, {"text-anchor", "middle"}, {"font-size", num(0.8 * fs)}},
                           axis.tick_labels[t]);
            }
        }
        for (const auto& row : L.rows)
            w.text({{"x", num(L.labels.x + 3.0)}, {"y", num(row.y + 0.35 * fs)}}, row.text);
        double ny = L.footer_top + fs + 10.0 + 1.1 * fs;
        for (const auto& note : f.notes) {
            w.text({{"x", num(m)}, {"y", num(ny)}, {"font-size", num(0.85 * fs)}},
                   truncate_to_width(note, L.width - 2.0 * m, 0.85 * fs));
            ny += 1.4 * fs;
        }
        w.close();
    }

    void header()
    {
        const auto& L = f.layout;
        report["page"] = {{"width", round2(L.width)}, {"height", round2(L.height)}};
        report["title"] = f.model.spec.title;
        report["subtitle"] = f.model.spec.subtitle;
        report["panel_count"] = L.bands.size();
        report["row_count"] = L.rows.size();
        report["shading"] = f.model.spec.shading == ShadingMode::cumulative ? "cumulative" : "current_group";
        report["direction"] = f.model.spec.direction == SortDirection::ascending ? "ascending" : "descending";

        ojson groups = ojson::array();
        for (const auto& band : L.bands)
            groups.push_back({{"index", band.group_index},
                              {"size", band.region_ids.size()},
                              {"median", f.grouping.median_group_index == band.group_index},
                              {"y", round2(band.y)},
                              {"height", round2(band.height)},
                              {"regions", band.region_ids}});
        report["groups"] = groups;

        std::unordered_map<std::string, double> sort_value;
        for (std::size_t i = 0; i < f.model.region_ids.size(); ++i)
            sort_value[f.model.region_ids[i]] = f.model.sort_values[i];
        ojson rows = ojson::array();
        for (const auto& r : L.rows)
            rows.push_back({{"region_id", r.region_id},
                            {"name", r.name},
                            {"label", r.text},
                            {"truncated", r.truncated},
                            {"group", band_of.at(r.region_id)},
                            {"y", round2(r.y)},
                            {"sort_value", sort_value.at(r.region_id)}});
        report["rows"] = rows;
        report["layout"] = {
            {"map", {{"x", round2(L.map.x)}, {"width", round2(L.map.width)}}},
            {"labels", {{"x", round2(L.labels.x)}, {"width", round2(L.labels.width)}}},
            {"plot_top", round2(L.plot_top)},
            {"plot_bottom", round2(L.plot_bottom)},
        };
    }

    void trailer()
    {
        ojson colors = ojson::object();
        for (const auto& id : f.grouping.order) {
            const auto& c = f.colors.at(id);
            colors[id] = {{"fill", c.fill}, {"outline", c.outline}, {"palette_index", c.palette_index}};
        }
        report["colors"] = colors;
        report["footnotes"] = {{"dropped_missing_sort", f.model.dropped_missing_sort},
                               {"omitted_regions", f.model.omitted_regions},
                               {"notes", f.notes}};
    }
};

}  // namespace

RenderedFigure emit_svg(const Figure& figure)
{
    Emitter e(figure);
    const auto& L = figure.layout;
    e.w.open("svg", {{"xmlns", "http://www.w3.org/2000/svg"},
                     {"version", "1.1"},
                     {"width", num(L.width)},
                     {"height", num(L.height)},
                     {"viewBox", "0 0 " + num(L.width) + " " + num(L.height)},
                     {"font-family", "Helvetica, Arial, sans-serif"},
                     {"font-size", num(figure.model.spec.page.font_size)}});
    e.header();
    e.backgrounds();
    e.references();
    e.maps();
    e.marks();
    e.text();
    e.trailer();

    RenderedFigure out;
    out.svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" + e.w.finish();
    out.report = e.report.dump(2) + "\n";
    return out;
}

RenderedFigure render_figure(const PlotSpec& spec, const DataTable& table, const Atlas& atlas)
{
    return emit_svg(prepare_figure(spec, table, atlas));
}

}  // namespace micromap
