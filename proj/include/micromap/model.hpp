#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace micromap {

// ─── Missing values ─────────────────────────────────────────────────────────

/// Published tables suppress cells; a quiet NaN marks a missing value everywhere.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

/// Equality that treats two missing values as equal.
inline bool same_value(double a, double b) { return (is_missing(a) && is_missing(b)) || a == b; }
bool same_values(std::span<const double> a, std::span<const double> b);

// ─── Errors ─────────────────────────────────────────────────────────────────

/// Unreadable or malformed input (files, CSV cells, JSON documents).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ─── Geometry ───────────────────────────────────────────────────────────────

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

/// Polygon ring with implicit closure (last vertex connects back to the first).
using Ring = std::vector<Point>;
/// Rings filled with the even-odd rule, so holes need no separate type.
using Geometry = std::vector<Ring>;

struct BoundingBox {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void expand(Point p);
    void expand(const BoundingBox& other);
    bool empty() const { return min_x > max_x; }
    bool finite() const;
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

BoundingBox bounds(const Geometry& g);

struct Region {
    std::string id;
    std::string name;
    Geometry geometry;
};

/// Named set of regions. Coordinates are planar layout units with y growing downward.
class Atlas {
public:
    /// Throws std::invalid_argument when fewer than two regions, duplicate ids,
    /// rings with fewer than three vertices, or non-finite geometry are supplied.
    Atlas(std::string id, std::vector<Region> regions, Geometry outline = {}, std::string crs_note = {});

    const std::string& id() const { return id_; }
    std::span<const Region> regions() const { return regions_; }
    std::size_t size() const { return regions_.size(); }
    const Region* find(std::string_view region_id) const;
    const Geometry& outline() const { return outline_; }
    const std::string& crs_note() const { return crs_note_; }
    BoundingBox bounds() const;

private:
    std::string id_;
    std::vector<Region> regions_;
    Geometry outline_;
    std::string crs_note_;
    std::unordered_map<std::string, std::size_t> index_;
};

// ─── Tabular data ───────────────────────────────────────────────────────────

struct TimePoint {
    std::string label;
    std::string column;
    friend bool operator==(const TimePoint&, const TimePoint&) = default;
};

/// Sortable key for labels such as "2021", "2021 Q2", "Q2 2021", "2021Q2", "2021-Q2", "2021-06".
std::optional<long> time_ordinal(std::string_view label);

/// Name of the column holding one time point of a time group ("group@label").
std::string time_column_name(std::string_view group, std::string_view label);

/// Region-keyed rows of numeric columns. Immutable after construction.
class DataTable {
public:
    DataTable() = default;
    /// Throws std::invalid_argument on duplicate or empty keys, ragged columns,
    /// time groups naming unknown columns, or time labels that are not strictly increasing.
    DataTable(std::string key_column,
              std::vector<std::string> keys,
              std::map<std::string, std::vector<double>> columns,
              std::map<std::string, std::vector<TimePoint>> time_groups = {});

    const std::string& key_column() const { return key_column_; }
    std::span<const std::string> keys() const { return keys_; }
    std::size_t row_count() const { return keys_.size(); }
    const std::map<std::string, std::vector<double>>& columns() const { return columns_; }
    const std::map<std::string, std::vector<TimePoint>>& time_groups() const { return time_groups_; }

    const std::vector<double>* column(std::string_view name) const;
    const std::vector<TimePoint>* time_group(std::string_view name) const;
    std::optional<std::size_t> row_index(std::string_view key) const;

    friend bool operator==(const DataTable& a, const DataTable& b);

private:
    std::string key_column_;
    std::vector<std::string> keys_;
    std::map<std::string, std::vector<double>> columns_;
    std::map<std::string, std::vector<TimePoint>> time_groups_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Trims ASCII whitespace; region ids are matched exactly after trimming.
std::string trim(std::string_view s);

// ─── Plot specification ─────────────────────────────────────────────────────

enum class GlyphKind { dot, dot_ci, arrow, bar, segmented_bar, boxplot, timeseries, scatter };
enum class SortDirection { ascending, descending };
enum class ShadingMode { current_group, cumulative };
enum class LineStyle { solid, dashed };

std::string_view to_string(GlyphKind k);
std::optional<GlyphKind> glyph_from_string(std::string_view s);

struct SortSpec {
    enum class Kind { column, pca, lowess_residual };
    Kind kind = Kind::column;
    std::string column;                // Kind::column
    int component = 1;                 // Kind::pca
    std::vector<std::string> columns;  // Kind::pca
    std::string x;                     // Kind::lowess_residual
    std::string y;
    double span = 2.0 / 3.0;
    int robust_iters = 3;
    friend bool operator==(const SortSpec&, const SortSpec&) = default;
};

struct ReferenceValue {
    double value = 0.0;
    std::string label;
    LineStyle style = LineStyle::solid;
    friend bool operator==(const ReferenceValue&, const ReferenceValue&) = default;
};

struct ColumnOptions {
    std::optional<double> lowess_span;  // scatter: pooled lowess overlay
    int robust_iters = 3;
    bool show_identity_line = true;     // scatter: y = x diagonal
    double ci_level = 0.90;             // dot_ci bound through "prse"
    int change_lag = 0;                 // timeseries: plot percent change over this many periods
    bool range = false;                 // arrow: from/to are an unordered range, drawn low -> high
    double weight = 1.0;                // relative column width
    friend bool operator==(const ColumnOptions&, const ColumnOptions&) = default;
};

/// Binding role -> column names. Most roles take one column; "segments" takes several
/// and a timeseries "series" names a time group.
using Bindings = std::map<std::string, std::vector<std::string>>;

struct ColumnSpec {
    GlyphKind glyph = GlyphKind::dot;
    std::string title;
    Bindings bindings;
    std::vector<ReferenceValue> reference_values;
    ColumnOptions options;
    friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

struct Palette {
    std::array<std::string, 5> group = {"#D55E00", "#E69F00", "#009E73", "#56B4E9", "#CC79A7"};
    std::string median = "#000000";
    std::string neutral = "#CCCCCC";
    std::string prior = "#A0A0A0";
    std::string reference = "#2CA02C";
    friend bool operator==(const Palette&, const Palette&) = default;
};

struct PageOptions {
    double width = 1000.0;
    double row_height = 14.0;
    double gutter = 8.0;
    double margin = 12.0;
    double map_width = 0.0;  // 0 = derived from the atlas aspect ratio
    double label_width_cap = 140.0;
    double font_size = 9.0;
    friend bool operator==(const PageOptions&, const PageOptions&) = default;
};

struct PlotSpec {
    SortSpec sort;
    SortDirection direction = SortDirection::descending;
    std::vector<ColumnSpec> columns;
    ShadingMode shading = ShadingMode::current_group;
    std::string title;
    std::string subtitle;
    bool drop_missing_sort = false;
    Palette palette;
    PageOptions page;
    friend bool operator==(const PlotSpec&, const PlotSpec&) = default;
};

// ─── Validation and binding ─────────────────────────────────────────────────

struct Issue {
    std::string code;  // unresolved_binding, unmatched_region, missing_binding, ...
    std::string message;
    friend bool operator==(const Issue&, const Issue&) = default;
};

struct ValidationReport {
    std::vector<Issue> issues;
    bool ok() const { return issues.empty(); }
};

/// Binding failed: either validation issues or a missing sort value.
class SpecError : public std::runtime_error {
public:
    explicit SpecError(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Roles each glyph requires (alternatives such as dot_ci's lo/hi vs prse are handled in validation).
std::vector<std::string> required_roles(GlyphKind k);

ValidationReport validate_spec(const PlotSpec& spec, const DataTable& table, const Atlas& atlas);

struct BoundColumn {
    ColumnSpec spec;
    /// role -> one value vector per bound column, each aligned with BoundFigureModel::region_ids.
    std::map<std::string, std::vector<std::vector<double>>> roles;
    std::vector<std::string> time_labels;  // timeseries only

    const std::vector<double>& role(const std::string& name, std::size_t i = 0) const;
    friend bool operator==(const BoundColumn& a, const BoundColumn& b);
};

struct BoundFigureModel {
    PlotSpec spec;
    std::vector<std::string> region_ids;
    std::vector<std::string> region_names;
    std::vector<double> sort_values;
    std::vector<BoundColumn> columns;
    std::vector<std::string> dropped_missing_sort;
    std::vector<std::string> omitted_regions;  // in the atlas, absent from the table

    friend bool operator==(const BoundFigureModel& a, const BoundFigureModel& b);
};

/// Throws SpecError when validation fails or a sort value is missing without drop_missing_sort.
BoundFigureModel bind_spec(const PlotSpec& spec, const DataTable& table, const Atlas& atlas);

}  // namespace micromap
