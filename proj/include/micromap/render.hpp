#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "micromap/glyphs.hpp"
#include "micromap/grouping.hpp"
#include "micromap/maprender.hpp"
#include "micromap/model.hpp"

namespace micromap {

// ─── Text metrics ───────────────────────────────────────────────────────────

/// Width of UTF-8 text from a fixed Helvetica advance table; no font lookup.
double text_width(std::string_view text, double font_size);

/// Shortens text with a trailing "…" until it fits; returns the text unchanged when it fits.
std::string truncate_to_width(std::string_view text, double max_width, double font_size);

// ─── Layout ─────────────────────────────────────────────────────────────────

struct ColumnExtent {
    std::string kind;  // "map", "labels" or a glyph name
    std::string title;
    double x = 0.0;
    double width = 0.0;
};

struct Band {
    std::size_t group_index = 0;
    double y = 0.0;
    double height = 0.0;
    std::vector<std::string> region_ids;
};

struct RowLabel {
    std::string region_id;
    std::string name;   // full name
    std::string text;   // as drawn
    double y = 0.0;     // row center
    bool truncated = false;
};

struct FigureLayout {
    double width = 0.0;
    double height = 0.0;
    double title_y = 0.0;       // baseline of the title; unused when there is no title block
    double subtitle_y = 0.0;
    bool has_title_block = false;
    double header_top = 0.0;    // column titles and top tick labels
    double plot_top = 0.0;      // first band
    double plot_bottom = 0.0;   // last band
    double footer_top = 0.0;    // bottom tick labels and notes
    ColumnExtent map;
    ColumnExtent labels;
    std::vector<ColumnExtent> columns;
    std::vector<Band> bands;
    std::vector<RowLabel> rows;  // sorted order
};

/// Page too narrow for the map, labels and data columns.
class LayoutError : public std::runtime_error {
public:
    LayoutError(const std::string& message, double minimum_width)
        : std::runtime_error(message), minimum_width_(minimum_width) {}
    double minimum_width() const { return minimum_width_; }

private:
    double minimum_width_;
};

inline constexpr double kMinColumnWidth = 40.0;
inline constexpr double kColumnGap = 8.0;

/// Bands top to bottom with fixed row height and gutters; columns are map, labels, then data
/// columns sharing the remaining width by weight. `map_aspect` is the atlas height / width.
FigureLayout compute_layout(const BoundFigureModel& model, const PerceptualGrouping& grouping, const PageOptions& page,
                            double map_aspect);

// ─── Figure ─────────────────────────────────────────────────────────────────

struct RenderedFigure {
    std::string svg;
    std::string report;  // JSON layout report
};

/// Every intermediate product of one render.
struct Figure {
    BoundFigureModel model;
    PerceptualGrouping grouping;
    ColorAssignment colors;
    FigureLayout layout;
    PanelGeometry geometry;
    std::vector<PanelMap> maps;
    std::vector<GlyphColumn> columns;
    std::vector<std::string> notes;  // footer lines: missing values, dropped and omitted regions
};

Figure prepare_figure(const PlotSpec& spec, const DataTable& table, const Atlas& atlas);

/// SVG with coordinates rounded to two decimals and a fixed element order:
/// backgrounds, reference lines, map panels, glyph marks, text.
RenderedFigure emit_svg(const Figure& figure);

/// The single render path shared by the CLI and the service.
RenderedFigure render_figure(const PlotSpec& spec, const DataTable& table, const Atlas& atlas);

}  // namespace micromap
