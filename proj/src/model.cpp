#include "micromap/model.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include "micromap/stats.hpp"

namespace micromap {

bool same_values(std::span<const double> a, std::span<const double> b)
{
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), same_value);
}

std::string trim(std::string_view s)
{
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b]))
        ++b;
    while (e > b && is_space(s[e - 1]))
        --e;
    return std::string(s.substr(b, e - b));
}

// ─── Geometry ───────────────────────────────────────────────────────────────

void BoundingBox::expand(Point p)
{
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
}

void BoundingBox::expand(const BoundingBox& o)
{
    if (o.empty())
        return;
    expand(Point{o.min_x, o.min_y});
    expand(Point{o.max_x, o.max_y});
}

bool BoundingBox::finite() const
{
    return std::isfinite(min_x) && std::isfinite(min_y) && std::isfinite(max_x) && std::isfinite(max_y);
}

BoundingBox bounds(const Geometry& g)
{
    BoundingBox box;
    for (const auto& ring : g)
        for (const auto& p : ring)
            box.expand(p);
    return box;
}

Atlas::Atlas(std::string id, std::vector<Region> regions, Geometry outline, std::string crs_note)
    : id_(std::move(id)), regions_(std::move(regions)), outline_(std::move(outline)), crs_note_(std::move(crs_note))
{
    if (regions_.size() < 2)
        throw std::invalid_argument("atlas '" + id_ + "' needs at least 2 regions");
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        auto& r = regions_[i];
        r.id = trim(r.id);
        if (r.id.empty())
            throw std::invalid_argument("atlas '" + id_ + "': region with empty id");
        if (!index_.emplace(r.id, i).second)
            throw std::invalid_argument("atlas '" + id_ + "': duplicate region id " + r.id);
        if (r.geometry.empty())
            throw std::invalid_argument("atlas '" + id_ + "': region " + r.id + " has no geometry");
        for (const auto& ring : r.geometry) {
            if (ring.size() < 3)
                throw std::invalid_argument("atlas '" + id_ + "': region " + r.id + " has a ring with fewer than 3 vertices");
            for (const Point& p : ring)
                if (!std::isfinite(p.x) || !std::isfinite(p.y))
                    throw std::invalid_argument("atlas '" + id_ + "': region " + r.id + " has non-finite geometry");
        }
        if (r.name.empty())
            r.name = r.id;
    }
}

const Region* Atlas::find(std::string_view region_id) const
{
    const auto it = index_.find(std::string(region_id));
    return it == index_.end() ? nullptr : &regions_[it->second];
}

BoundingBox Atlas::bounds() const
{
    BoundingBox box;
    for (const auto& r : regions_)
        box.expand(micromap::bounds(r.geometry));
    return box;
}

// ─── Tabular data ───────────────────────────────────────────────────────────

std::optional<long> time_ordinal(std::string_view label)
{
    static const std::regex year_quarter(R"(^\s*(\d{4})\s*-?\s*[Qq]([1-4])\s*$)");
    static const std::regex quarter_year(R"(^\s*[Qq]([1-4])\s*-?\s*(\d{4})\s*$)");
    static const std::regex year_month(R"(^\s*(\d{4})-(\d{1,2})\s*$)");
    static const std::regex year_only(R"(^\s*(\d{4})\s*$)");

    const std::string s(label);
    std::smatch m;
    if (std::regex_match(s, m, year_quarter))
        return std::stol(m[1]) * 12 + (std::stol(m[2]) - 1) * 3;
    if (std::regex_match(s, m, quarter_year))
        return std::stol(m[2]) * 12 + (std::stol(m[1]) - 1) * 3;
    if (std::regex_match(s, m, year_month)) {
        const long month = std::stol(m[2]);
        if (month < 1 || month > 12)
            return std::nullopt;
        return std::stol(m[1]) * 12 + month - 1;
    }
    if (std::regex_match(s, m, year_only))
        return std::stol(m[1]) * 12;
    return std::nullopt;
}

std::string time_column_name(std::string_view group, std::string_view label)
{
    std::string out(group);
    out += '@';
    out += label;
    return out;
}

DataTable::DataTable(std::string key_column,
                     std::vector<std::string> keys,
                     std::map<std::string, std::vector<double>> columns,
                     std::map<std::string, std::vector<TimePoint>> time_groups)
    : key_column_(std::move(key_column)), keys_(std::move(keys)), columns_(std::move(columns)), time_groups_(std::move(time_groups))
{
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        keys_[i] = trim(keys_[i]);
        if (keys_[i].empty())
            throw std::invalid_argument("empty row key at row " + std::to_string(i + 1));
        if (!index_.emplace(keys_[i], i).second)
            throw std::invalid_argument("duplicate row key " + keys_[i]);
    }
    for (const auto& [name, values] : columns_)
        if (values.size() != keys_.size())
            throw std::invalid_argument("column " + name + " has " + std::to_string(values.size()) + " values for " +
                                        std::to_string(keys_.size()) + " rows");
    for (const auto& [group, points] : time_groups_) {
        std::optional<long> previous;
        for (const auto& tp : points) {
            if (!columns_.contains(tp.column))
                throw std::invalid_argument("time group " + group + " names unknown column " + tp.column);
            const auto ord = time_ordinal(tp.label);
            if (!ord)
                throw std::invalid_argument("time group " + group + ": unrecognized time label '" + tp.label + "'");
            if (previous && *ord <= *previous)
                throw std::invalid_argument("time group " + group + ": labels not strictly increasing at '" + tp.label + "'");
            previous = ord;
        }
    }
}

const std::vector<double>* DataTable::column(std::string_view name) const
{
    const auto it = columns_.find(std::string(name));
    return it == columns_.end() ? nullptr : &it->second;
}

const std::vector<TimePoint>* DataTable::time_group(std::string_view name) const
{
    const auto it = time_groups_.find(std::string(name));
    return it == time_groups_.end() ? nullptr : &it->second;
}

std::optional<std::size_t> DataTable::row_index(std::string_view key) const
{
    const auto it = index_.find(std::string(key));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

bool operator==(const DataTable& a, const DataTable& b)
{
    if (a.key_column_ != b.key_column_ || a.keys_ != b.keys_ || a.time_groups_ != b.time_groups_)
        return false;
    if (a.columns_.size() != b.columns_.size())
        return false;
    for (const auto& [name, values] : a.columns_) {
        const auto* other = b.column(name);
        if (!other || !same_values(values, *other))
            return false;
    }
    return true;
}

// ─── Plot specification ─────────────────────────────────────────────────────

std::string_view to_string(GlyphKind k)
{
    switch (k) {
    case GlyphKind::dot: return "dot";
    case GlyphKind::dot_ci: return "dot_ci";
    case GlyphKind::arrow: return "arrow";
    case GlyphKind::bar: return "bar";
    case GlyphKind::segmented_bar: return "segmented_bar";
    case GlyphKind::boxplot: return "boxplot";
    case GlyphKind::timeseries: return "timeseries";
    case GlyphKind::scatter: return "scatter";
    }
    return "?";
}

std::optional<GlyphKind> glyph_from_string(std::string_view s)
{
    for (GlyphKind k : {GlyphKind::dot, GlyphKind::dot_ci, GlyphKind::arrow, GlyphKind::bar, GlyphKind::segmented_bar,
                        GlyphKind::boxplot, GlyphKind::timeseries, GlyphKind::scatter})
        if (to_string(k) == s)
            return k;
    return std::nullopt;
}

std::vector<std::string> required_roles(GlyphKind k)
{
    switch (k) {
    case GlyphKind::dot:
    case GlyphKind::dot_ci:
    case GlyphKind::bar: return {"value"};
    case GlyphKind::arrow: return {"from", "to"};
    case GlyphKind::segmented_bar: return {"segments"};
    case GlyphKind::boxplot: return {"p10", "p25", "p50", "p75", "p90"};
    case GlyphKind::timeseries: return {"series"};
    case GlyphKind::scatter: return {"x", "y"};
    }
    return {};
}

namespace {

std::vector<std::string> allowed_roles(GlyphKind k)
{
    auto roles = required_roles(k);
    if (k == GlyphKind::dot_ci)
        roles.insert(roles.end(), {"lo", "hi", "prse"});
    return roles;
}

bool multi_valued(std::string_view role) { return role == "segments"; }

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

class IssueList {
public:
    void add(std::string code, std::string message)
    {
        // One entry per distinct message keeps repeated bindings from flooding the report.
        if (seen_.insert(message).second)
            report_.issues.push_back({std::move(code), std::move(message)});
    }
    void require_column(const DataTable& table, const std::string& name)
    {
        if (!table.column(name))
            add("unresolved_binding", "unresolved binding " + name);
    }
    ValidationReport take() { return std::move(report_); }

private:
    ValidationReport report_;
    std::set<std::string> seen_;
};

void validate_sort(const SortSpec& sort, const DataTable& table, IssueList& issues)
{
    switch (sort.kind) {
    case SortSpec::Kind::column:
        if (sort.column.empty())
            issues.add("missing_binding", "sort binding names no column");
        else
            issues.require_column(table, sort.column);
        break;
    case SortSpec::Kind::pca:
        if (sort.columns.empty())
            issues.add("missing_binding", "pca sort names no columns");
        for (const auto& c : sort.columns)
            issues.require_column(table, c);
        if (sort.component < 1 || sort.component > static_cast<int>(sort.columns.size()))
            issues.add("invalid_option", "pca component " + std::to_string(sort.component) + " outside [1, " +
                                             std::to_string(sort.columns.size()) + "]");
        break;
    case SortSpec::Kind::lowess_residual:
        if (sort.x.empty() || sort.y.empty())
            issues.add("missing_binding", "lowess_residual sort needs x and y");
        if (!sort.x.empty())
            issues.require_column(table, sort.x);
        if (!sort.y.empty())
            issues.require_column(table, sort.y);
        if (!(sort.span > 0.0 && sort.span <= 1.0))
            issues.add("invalid_option", "lowess span must lie in (0, 1]");
        if (sort.robust_iters < 0)
            issues.add("invalid_option", "robust_iters must be non-negative");
        break;
    }
}

void validate_column(std::size_t index, const ColumnSpec& col, const DataTable& table, IssueList& issues)
{
    const std::string where = "column " + std::to_string(index + 1) + " (" + std::string(to_string(col.glyph)) + ")";
    const auto allowed = allowed_roles(col.glyph);

    for (const auto& [role, names] : col.bindings) {
        if (std::find(allowed.begin(), allowed.end(), role) == allowed.end()) {
            issues.add("unknown_role", where + ": unknown binding role " + role);
            continue;
        }
        if (!multi_valued(role) && names.size() != 1)
            issues.add("binding_arity", where + ": binding " + role + " expects 1 column, got " + std::to_string(names.size()));
        if (multi_valued(role) && names.empty())
            issues.add("binding_arity", where + ": binding " + role + " expects at least 1 column");
        for (const auto& name : names) {
            if (col.glyph == GlyphKind::timeseries && role == "series") {
                if (!table.time_group(name))
                    issues.add("unresolved_binding", "unresolved binding " + name);
            } else {
                issues.require_column(table, name);
            }
        }
    }
    for (const auto& role : required_roles(col.glyph))
        if (!col.bindings.contains(role))
            issues.add("missing_binding", where + ": missing binding " + role);

    if (col.glyph == GlyphKind::dot_ci) {
        const bool interval = col.bindings.contains("lo") && col.bindings.contains("hi");
        const bool prse = col.bindings.contains("prse");
        if (interval == prse)
            issues.add("missing_binding", where + ": bind either lo and hi, or prse");
        if (col.bindings.contains("lo") != col.bindings.contains("hi"))
            issues.add("missing_binding", where + ": lo and hi must be bound together");
        if (!(col.options.ci_level > 0.0 && col.options.ci_level < 1.0))
            issues.add("invalid_option", where + ": ci_level must lie in (0, 1)");
    }
    if (col.glyph == GlyphKind::timeseries) {
        if (col.options.change_lag < 0)
            issues.add("invalid_option", where + ": change_lag must be non-negative");
        const auto it = col.bindings.find("series");
        if (it != col.bindings.end() && it->second.size() == 1) {
            const auto* group = table.time_group(it->second.front());
            if (group && col.options.change_lag > 0 && group->size() <= static_cast<std::size_t>(col.options.change_lag))
                issues.add("invalid_option", where + ": time group shorter than change_lag");
        }
    }
    if (col.options.lowess_span && !(*col.options.lowess_span > 0.0 && *col.options.lowess_span <= 1.0))
        issues.add("invalid_option", where + ": lowess_span must lie in (0, 1]");
    if (col.options.robust_iters < 0)
        issues.add("invalid_option", where + ": robust_iters must be non-negative");
    if (!(col.options.weight > 0.0) || !std::isfinite(col.options.weight))
        issues.add("invalid_option", where + ": weight must be positive");
    for (const auto& ref : col.reference_values)
        if (!std::isfinite(ref.value))
            issues.add("invalid_option", where + ": reference value must be finite");
}

}  // namespace

SpecError::SpecError(ValidationReport report)
    : std::runtime_error([&] {
          std::vector<std::string> lines;
          for (const auto& i : report.issues)
              lines.push_back(i.message);
          return "spec validation failed: " + join(lines, "; ");
      }()),
      report_(std::move(report))
{
}

ValidationReport validate_spec(const PlotSpec& spec, const DataTable& table, const Atlas& atlas)
{
    IssueList issues;
    if (spec.columns.empty())
        issues.add("empty_columns", "spec has no data columns");
    validate_sort(spec.sort, table, issues);
    for (std::size_t i = 0; i < spec.columns.size(); ++i)
        validate_column(i, spec.columns[i], table, issues);
    for (const auto& key : table.keys())
        if (!atlas.find(key))
            issues.add("unmatched_region", "unmatched region key " + key);
    if (!(spec.page.width > 0.0) || !(spec.page.row_height > 0.0) || !(spec.page.font_size > 0.0))
        issues.add("invalid_option", "page width, row_height and font_size must be positive");
    return issues.take();
}

// ─── Binding ────────────────────────────────────────────────────────────────

const std::vector<double>& BoundColumn::role(const std::string& name, std::size_t i) const
{
    const auto it = roles.find(name);
    if (it == roles.end() || i >= it->second.size())
        throw std::out_of_range("bound column has no role " + name);
    return it->second[i];
}

bool operator==(const BoundColumn& a, const BoundColumn& b)
{
    if (!(a.spec == b.spec) || a.time_labels != b.time_labels || a.roles.size() != b.roles.size())
        return false;
    for (const auto& [role, series] : a.roles) {
        const auto it = b.roles.find(role);
        if (it == b.roles.end() || it->second.size() != series.size())
            return false;
        for (std::size_t i = 0; i < series.size(); ++i)
            if (!same_values(series[i], it->second[i]))
                return false;
    }
    return true;
}

bool operator==(const BoundFigureModel& a, const BoundFigureModel& b)
{
    return a.spec == b.spec && a.region_ids == b.region_ids && a.region_names == b.region_names &&
           same_values(a.sort_values, b.sort_values) && a.columns == b.columns &&
           a.dropped_missing_sort == b.dropped_missing_sort && a.omitted_regions == b.omitted_regions;
}

namespace {

std::vector<double> gather(const std::vector<double>& column, const std::vector<std::size_t>& rows)
{
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r : rows)
        out.push_back(column[r]);
    return out;
}

std::vector<double> compute_sort_values(const SortSpec& sort, const DataTable& table, const std::vector<std::size_t>& rows)
{
    switch (sort.kind) {
    case SortSpec::Kind::column:
        return gather(*table.column(sort.column), rows);

    case SortSpec::Kind::pca: {
        std::vector<std::vector<double>> all;
        for (const auto& c : sort.columns)
            all.push_back(gather(*table.column(c), rows));
        std::vector<std::size_t> complete;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (std::none_of(all.begin(), all.end(), [&](const auto& col) { return is_missing(col[i]); }))
                complete.push_back(i);
        std::vector<std::vector<double>> candidates;
        for (const auto& col : all)
            candidates.push_back(gather(col, complete));
        std::vector<double> out(rows.size(), kMissing);
        try {
            const auto scores = stats::pca_scores(candidates, sort.component, sort.columns);
            for (std::size_t k = 0; k < complete.size(); ++k)
                out[complete[k]] = scores[k];
        } catch (const std::invalid_argument& e) {
            throw SpecError({{{"sort_failed", std::string("pca sort: ") + e.what()}}});
        }
        return out;
    }

    case SortSpec::Kind::lowess_residual: {
        const auto xs = gather(*table.column(sort.x), rows);
        const auto ys = gather(*table.column(sort.y), rows);
        std::vector<std::size_t> complete;
        std::vector<double> cx, cy;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (!is_missing(xs[i]) && !is_missing(ys[i])) {
                complete.push_back(i);
                cx.push_back(xs[i]);
                cy.push_back(ys[i]);
            }
        std::vector<double> out(rows.size(), kMissing);
        try {
            const auto resid = stats::lowess_residuals(cx, cy, {sort.span, sort.robust_iters});
            for (std::size_t k = 0; k < complete.size(); ++k)
                out[complete[k]] = resid[k];
        } catch (const std::invalid_argument& e) {
            throw SpecError({{{"sort_failed", std::string("lowess_residual sort: ") + e.what()}}});
        }
        return out;
    }
    }
    return {};
}

BoundColumn bind_column(const ColumnSpec& spec, const DataTable& table, const std::vector<std::size_t>& rows,
                        const std::vector<std::string>& ids)
{
    BoundColumn out;
    out.spec = spec;

    if (spec.glyph == GlyphKind::timeseries) {
        const auto& points = *table.time_group(spec.bindings.at("series").front());
        std::vector<std::vector<double>> by_time;
        for (const auto& tp : points) {
            by_time.push_back(gather(*table.column(tp.column), rows));
            out.time_labels.push_back(tp.label);
        }
        if (spec.options.change_lag > 0) {
            std::vector<double> row_series(points.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                for (std::size_t t = 0; t < points.size(); ++t)
                    row_series[t] = by_time[t][r];
                const auto change = stats::over_year_pct_change(row_series, spec.options.change_lag);
                for (std::size_t t = 0; t < points.size(); ++t)
                    by_time[t][r] = change[t];
            }
        }
        out.roles["series"] = std::move(by_time);
        return out;
    }

    for (const auto& [role, names] : spec.bindings)
        for (const auto& name : names)
            out.roles[role].push_back(gather(*table.column(name), rows));

    if (spec.glyph == GlyphKind::dot_ci && spec.bindings.contains("prse")) {
        const auto& mean = out.roles.at("value").front();
        const auto& prse = out.roles.at("prse").front();
        std::vector<double> lo(rows.size(), kMissing), hi(rows.size(), kMissing);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (is_missing(mean[i]) || is_missing(prse[i]))
                continue;
            if (prse[i] < 0)
                throw SpecError({{{"invalid_value", "negative prse for region " + ids[i]}}});
            const auto ci = stats::ci_from_prse(mean[i], prse[i], spec.options.ci_level);
            lo[i] = ci.lo;
            hi[i] = ci.hi;
        }
        out.roles["lo"] = {std::move(lo)};
        out.roles["hi"] = {std::move(hi)};
    }
    return out;
}

}  // namespace

BoundFigureModel bind_spec(const PlotSpec& spec, const DataTable& table, const Atlas& atlas)
{
    if (auto report = validate_spec(spec, table, atlas); !report.ok())
        throw SpecError(std::move(report));

    BoundFigureModel model;
    model.spec = spec;

    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < table.row_count(); ++i)
        rows.push_back(i);  // validation guarantees every key has a region
    for (const auto& region : atlas.regions())
        if (!table.row_index(region.id))
            model.omitted_regions.push_back(region.id);

    const auto sort_values = compute_sort_values(spec.sort, table, rows);
    std::vector<std::size_t> kept;
    ValidationReport missing;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string& key = table.keys()[rows[i]];
        if (is_missing(sort_values[i])) {
            if (spec.drop_missing_sort)
                model.dropped_missing_sort.push_back(key);
            else
                missing.issues.push_back({"missing_sort_value", "missing sort value for region " + key});
            continue;
        }
        kept.push_back(i);
    }
    if (!missing.ok())
        throw SpecError(std::move(missing));

    std::vector<std::size_t> table_rows;
    for (std::size_t k : kept) {
        const std::size_t r = rows[k];
        const std::string& key = table.keys()[r];
        table_rows.push_back(r);
        model.region_ids.push_back(key);
        model.region_names.push_back(atlas.find(key)->name);
        model.sort_values.push_back(sort_values[k]);
    }
    for (const auto& col : spec.columns)
        model.columns.push_back(bind_column(col, table, table_rows, model.region_ids));
    return model;
}

}  // namespace micromap
