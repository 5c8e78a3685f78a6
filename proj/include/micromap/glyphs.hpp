#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "micromap/grouping.hpp"
#include "micromap/model.hpp"
#include "micromap/stats.hpp"

namespace micromap {

// ─── Axis scales ────────────────────────────────────────────────────────────

/// Linear map from a data domain onto a pixel range, shared by every row of a column.
struct AxisScale {
    double domain_min = 0.0;
    double domain_max = 1.0;
    double range_min = 0.0;
    double range_max = 1.0;
    std::vector<double> ticks;
    std::vector<std::string> tick_labels;

    double position(double value) const;
    double value_at(double position) const;
    AxisScale with_range(double lo, double hi) const;
    bool contains(double value) const { return value >= domain_min && value <= domain_max; }
    friend bool operator==(const AxisScale&, const AxisScale&) = default;
};

struct AxisPolicy {
    double padding = 0.05;  // fraction of the data span added on each side
    int max_ticks = 7;
    int min_ticks = 3;
};

/// Domain covers every finite value and reference, padded; ticks come from a 1-2-5 ladder.
/// Identical values widen to value +/- 10% of |value| (+/- 0.5 at zero) without padding.
AxisScale fit_axis(std::span<const double> values, std::span<const double> references, const AxisPolicy& policy = {});

/// Multiples of the smallest 1-2-5 step giving at most `max_ticks` ticks inside [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int max_ticks = 7, int min_ticks = 3);
std::string format_tick(double value, double step);

// ─── Primitives ─────────────────────────────────────────────────────────────

enum class MarkKind { circle, segment, rect, polyline, text };
enum class ColorRole { region, neutral, ink, reference, smooth, identity };

/// Format-independent drawing primitive.
///
/// Row glyphs use x in column pixels and y in pixels relative to the row's center line.
/// Panel glyphs (timeseries, scatter) use x in column pixels and y as a 0..1 fraction of
/// the panel height measured upward from the bottom.
struct Mark {
    MarkKind kind = MarkKind::circle;
    std::string tag;
    ColorRole color = ColorRole::region;
    std::vector<Point> points;   // circle: center; segment: from, to; rect: two corners; polyline: vertices
    double size = 0.0;           // circle radius or stroke width
    bool filled = true;
    bool arrow_head = false;     // segment: head at the `to` end
    LineStyle line = LineStyle::solid;
    double opacity = 1.0;
    std::string text;
    std::string region_id;       // panel marks colored by a region; empty otherwise
    std::vector<double> data;    // data values this mark encodes
    friend bool operator==(const Mark&, const Mark&) = default;
};

struct GlyphRow {
    std::string region_id;
    std::vector<Mark> marks;
    friend bool operator==(const GlyphRow&, const GlyphRow&) = default;
};

struct PanelGlyphs {
    std::size_t group_index = 0;
    std::vector<Mark> marks;
    friend bool operator==(const PanelGlyphs&, const PanelGlyphs&) = default;
};

struct ReferenceLine {
    double value = 0.0;
    double x = 0.0;
    std::string label;
    LineStyle style = LineStyle::solid;
    friend bool operator==(const ReferenceLine&, const ReferenceLine&) = default;
};

struct GlyphColumn {
    GlyphKind kind = GlyphKind::dot;
    AxisScale x;
    std::optional<AxisScale> y;          // panel glyphs only, range 0..1
    std::vector<GlyphRow> rows;          // row glyphs, and timeseries lines (drawn in the row's panel)
    std::vector<PanelGlyphs> panels;     // scatter
    std::vector<Mark> decorations;       // drawn beneath data marks in every panel (zero line)
    std::vector<ReferenceLine> references;
    std::vector<std::string> footnotes;  // regions with absent marks
    std::vector<std::string> warnings;
    friend bool operator==(const GlyphColumn&, const GlyphColumn&) = default;
};

struct GlyphStyle {
    double dot_radius = 3.2;
    double ci_half_height = 1.0;
    double bar_half_height = 4.0;
    double box_half_height = 4.0;
    double stroke = 1.0;
    double point_radius = 2.0;  // scatter
};

// ─── Builders ───────────────────────────────────────────────────────────────

/// One dot per region, with an optional interval bar (`ci` empty = none).
/// Throws std::invalid_argument when an interval has lo > hi.
GlyphColumn dot_column(std::span<const std::string> ids, std::span<const double> values,
                       std::span<const stats::Interval> ci, const AxisScale& scale, const GlyphStyle& style = {});

/// Segment from -> to with a head at `to`. With `range`, endpoints are ordered low -> high.
GlyphColumn arrow_column(std::span<const std::string> ids, std::span<const double> from, std::span<const double> to,
                         const AxisScale& scale, bool range = false, const GlyphStyle& style = {});

/// Rect from scale(0) to scale(value).
GlyphColumn bar_column(std::span<const std::string> ids, std::span<const double> values, const AxisScale& scale,
                       const GlyphStyle& style = {});

/// Adjacent rects with cumulative offsets; `segments[k][row]` is segment k of a row.
/// Throws std::invalid_argument for a negative share.
GlyphColumn segmented_bar_column(std::span<const std::string> ids, const std::vector<std::vector<double>>& segments,
                                 const AxisScale& scale, const GlyphStyle& style = {});

struct BoxStats {
    double p10 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p90 = 0.0;
};

/// Box p25..p75, median line at p50, whiskers to p10 and p90.
/// Throws std::invalid_argument naming the region when percentiles are out of order.
GlyphColumn boxplot_column(std::span<const std::string> ids, std::span<const BoxStats> rows, const AxisScale& scale,
                           const GlyphStyle& style = {});

/// `series[row][t]`; one polyline per run of consecutive non-missing points.
GlyphColumn timeseries_column(std::span<const std::string> ids, const std::vector<std::vector<double>>& series,
                              const AxisScale& x_scale, const AxisScale& y_scale, const GlyphStyle& style = {});

struct ScatterOptions {
    bool identity_line = true;
    std::optional<double> lowess_span;
    int robust_iters = 3;
};

/// Every panel shows every complete point: members of that panel's group filled in their
/// colors, all others open and neutral. Identity line and pooled lowess curve repeat per panel.
GlyphColumn scatter_column(std::span<const std::string> ids, std::span<const double> x, std::span<const double> y,
                           const PerceptualGrouping& grouping, const ScatterOptions& options,
                           const AxisScale& x_scale, const AxisScale& y_scale, const GlyphStyle& style = {});

/// Full-height lines at each reference value, in input order.
std::vector<ReferenceLine> reference_lines(std::span<const ReferenceValue> refs, const AxisScale& scale);

/// Builds one bound column at the given pixel width: fits the shared axis (including
/// references, and zero for bars) and dispatches to the glyph builder.
GlyphColumn build_column(const BoundColumn& column, const BoundFigureModel& model, const PerceptualGrouping& grouping,
                         double width, const GlyphStyle& style = {});

}  // namespace micromap
