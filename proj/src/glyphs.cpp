#include "micromap/glyphs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace micromap {

// ─── Axis scales ────────────────────────────────────────────────────────────

double AxisScale::position(double value) const
{
    const double t = (value - domain_min) / (domain_max - domain_min);
    return range_min + t * (range_max - range_min);
}

double AxisScale::value_at(double pos) const
{
    const double t = (pos - range_min) / (range_max - range_min);
    return domain_min + t * (domain_max - domain_min);
}

AxisScale AxisScale::with_range(double lo, double hi) const
{
    AxisScale s = *this;
    s.range_min = lo;
    s.range_max = hi;
    return s;
}

namespace {

struct Step {
    int mantissa;  // 1, 2 or 5
    int exponent;
    double value() const { return mantissa * std::pow(10.0, exponent); }
    // k * step computed so that decimal steps do not accumulate error.
    double at(long k) const
    {
        return exponent >= 0 ? static_cast<double>(k * mantissa) * std::pow(10.0, exponent)
                             : static_cast<double>(k * mantissa) / std::pow(10.0, -exponent);
    }
};

std::vector<double> ticks_for(const Step& step, double lo, double hi)
{
    const double s = step.value();
    const auto kmin = static_cast<long>(std::ceil(lo / s - 1e-9));
    const auto kmax = static_cast<long>(std::floor(hi / s + 1e-9));
    std::vector<double> out;
    for (long k = kmin; k <= kmax; ++k) {
        double v = step.at(k);
        if (v == 0.0)
            v = 0.0;  // no negative zero
        out.push_back(v);
    }
    return out;
}

Step choose_step(double lo, double hi, int max_ticks, int min_ticks)
{
    const int e0 = static_cast<int>(std::floor(std::log10(hi - lo))) - 3;
    std::optional<Step> previous;
    for (int e = e0; e < e0 + 10; ++e) {
        for (int m : {1, 2, 5}) {
            const Step step{m, e};
            const auto count = static_cast<int>(ticks_for(step, lo, hi).size());
            if (count <= max_ticks) {
                if (count < min_ticks && previous)
                    return *previous;
                return step;
            }
            previous = step;
        }
    }
    return Step{1, e0 + 10};
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int max_ticks, int min_ticks)
{
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
        return {lo};
    return ticks_for(choose_step(lo, hi, max_ticks, min_ticks), lo, hi);
}

std::string format_tick(double value, double step)
{
    const int decimals = std::max(0, -static_cast<int>(std::floor(std::log10(step) + 1e-9)));
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
    std::string s(buf, res.ptr);
    if (s.find_first_not_of("-0.") == std::string::npos)
        s = decimals > 0 ? "0." + std::string(static_cast<std::size_t>(decimals), '0') : "0";
    return s;
}

AxisScale fit_axis(std::span<const double> values, std::span<const double> references, const AxisPolicy& policy)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (auto set : {values, references})
        for (double v : set)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }

    AxisScale scale;
    if (lo > hi) {
        scale.domain_min = 0.0;
        scale.domain_max = 1.0;
    } else if (lo == hi) {
        const double half = lo != 0.0 ? 0.1 * std::abs(lo) : 0.5;
        scale.domain_min = lo - half;
        scale.domain_max = lo + half;
    } else {
        const double pad = policy.padding * (hi - lo);
        scale.domain_min = lo - pad;
        scale.domain_max = hi + pad;
    }

    const Step step = choose_step(scale.domain_min, scale.domain_max, policy.max_ticks, policy.min_ticks);
    scale.ticks = ticks_for(step, scale.domain_min, scale.domain_max);
    for (double t : scale.ticks)
        scale.tick_labels.push_back(format_tick(t, step.value()));
    return scale;
}

// ─── Builders ───────────────────────────────────────────────────────────────

namespace {

Mark circle(Point c, double r, std::string tag, std::vector<double> data)
{
    Mark m;
    m.kind = MarkKind::circle;
    m.points = {c};
    m.size = r;
    m.tag = std::move(tag);
    m.data = std::move(data);
    return m;
}

Mark segment(Point a, Point b, double width, std::string tag, std::vector<double> data)
{
    Mark m;
    m.kind = MarkKind::segment;
    m.points = {a, b};
    m.size = width;
    m.tag = std::move(tag);
    m.data = std::move(data);
    return m;
}

Mark rect(Point a, Point b, std::string tag, std::vector<double> data)
{
    Mark m;
    m.kind = MarkKind::rect;
    m.points = {a, b};
    m.tag = std::move(tag);
    m.data = std::move(data);
    return m;
}

void check_lengths(std::size_t ids, std::size_t values)
{
    if (ids != values)
        throw std::invalid_argument("glyph column: ids and values differ in length");
}

}  // namespace

GlyphColumn dot_column(std::span<const std::string> ids, std::span<const double> values,
                       std::span<const stats::Interval> ci, const AxisScale& scale, const GlyphStyle& style)
{
    check_lengths(ids.size(), values.size());
    if (!ci.empty())
        check_lengths(ids.size(), ci.size());

    GlyphColumn col;
    col.kind = ci.empty() ? GlyphKind::dot : GlyphKind::dot_ci;
    col.x = scale;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!ci.empty() && !is_missing(ci[i].lo) && !is_missing(ci[i].hi) && ci[i].lo > ci[i].hi)
            throw std::invalid_argument("confidence interval with lo > hi for region " + ids[i]);
        if (is_missing(values[i])) {
            col.footnotes.push_back(ids[i]);
            continue;
        }
        GlyphRow row{ids[i], {}};
        if (!ci.empty() && !is_missing(ci[i].lo) && !is_missing(ci[i].hi))
            row.marks.push_back(segment({scale.position(ci[i].lo), 0.0}, {scale.position(ci[i].hi), 0.0},
                                        2.0 * style.ci_half_height, "ci-bar", {ci[i].lo, ci[i].hi}));
        row.marks.push_back(circle({scale.position(values[i]), 0.0}, style.dot_radius, "dot", {values[i]}));
        col.rows.push_back(std::move(row));
    }
    return col;
}

GlyphColumn arrow_column(std::span<const std::string> ids, std::span<const double> from, std::span<const double> to,
                         const AxisScale& scale, bool range, const GlyphStyle& style)
{
    check_lengths(ids.size(), from.size());
    check_lengths(ids.size(), to.size());

    GlyphColumn col;
    col.kind = GlyphKind::arrow;
    col.x = scale;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (is_missing(from[i]) || is_missing(to[i])) {
            col.footnotes.push_back(ids[i]);
            continue;
        }
        double a = from[i], b = to[i];
        if (range && a > b)
            std::swap(a, b);
        GlyphRow row{ids[i], {}};
        if (a == b) {
            row.marks.push_back(circle({scale.position(a), 0.0}, style.dot_radius * 0.6, "arrow-point", {a, b}));
        } else {
            Mark m = segment({scale.position(a), 0.0}, {scale.position(b), 0.0}, 1.5 * style.stroke, "arrow", {a, b});
            m.arrow_head = true;
            row.marks.push_back(std::move(m));
        }
        col.rows.push_back(std::move(row));
    }
    return col;
}

GlyphColumn bar_column(std::span<const std::string> ids, std::span<const double> values, const AxisScale& scale,
                       const GlyphStyle& style)
{
    check_lengths(ids.size(), values.size());

    GlyphColumn col;
    col.kind = GlyphKind::bar;
    col.x = scale;
    const double zero = scale.position(0.0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (is_missing(values[i])) {
            col.footnotes.push_back(ids[i]);
            continue;
        }
        col.rows.push_back({ids[i],
                            {rect({zero, -style.bar_half_height}, {scale.position(values[i]), style.bar_half_height}, "bar",
                                  {values[i]})}});
    }
    return col;
}

GlyphColumn segmented_bar_column(std::span<const std::string> ids, const std::vector<std::vector<double>>& segments,
                                 const AxisScale& scale, const GlyphStyle& style)
{
    for (const auto& s : segments)
        check_lengths(ids.size(), s.size());

    GlyphColumn col;
    col.kind = GlyphKind::segmented_bar;
    col.x = scale;
    const std::size_t k_count = segments.size();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        bool missing = false;
        for (const auto& s : segments) {
            if (is_missing(s[i]))
                missing = true;
            else if (s[i] < 0)
                throw std::invalid_argument("negative segment share for region " + ids[i]);
        }
        if (missing) {
            col.footnotes.push_back(ids[i]);
            continue;
        }
        GlyphRow row{ids[i], {}};
        double cum = 0.0;
        for (std::size_t k = 0; k < k_count; ++k) {
            const double next = cum + segments[k][i];
            Mark m = rect({scale.position(cum), -style.bar_half_height}, {scale.position(next), style.bar_half_height},
                          "segment", {segments[k][i], cum, next});
            m.opacity = k_count > 1 ? 1.0 - 0.65 * static_cast<double>(k) / static_cast<double>(k_count - 1) : 1.0;
            row.marks.push_back(std::move(m));
            cum = next;
        }
        col.rows.push_back(std::move(row));
    }
    return col;
}

GlyphColumn boxplot_column(std::span<const std::string> ids, std::span<const BoxStats> rows, const AxisScale& scale,
                           const GlyphStyle& style)
{
    check_lengths(ids.size(), rows.size());

    GlyphColumn col;
    col.kind = GlyphKind::boxplot;
    col.x = scale;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const BoxStats& b = rows[i];
        if (is_missing(b.p10) || is_missing(b.p25) || is_missing(b.p50) || is_missing(b.p75) || is_missing(b.p90)) {
            col.footnotes.push_back(ids[i]);
            continue;
        }
        if (!(b.p10 <= b.p25 && b.p25 <= b.p50 && b.p50 <= b.p75 && b.p75 <= b.p90))
            throw std::invalid_argument("percentiles out of order for region " + ids[i]);

        const double h = style.box_half_height;
        GlyphRow row{ids[i], {}};
        row.marks.push_back(segment({scale.position(b.p10), 0.0}, {scale.position(b.p25), 0.0}, style.stroke, "whisker",
                                    {b.p10, b.p25}));
        row.marks.push_back(segment({scale.position(b.p75), 0.0}, {scale.position(b.p90), 0.0}, style.stroke, "whisker",
                                    {b.p75, b.p90}));
        row.marks.push_back(rect({scale.position(b.p25), -h}, {scale.position(b.p75), h}, "box", {b.p25, b.p75}));
        Mark median = segment({scale.position(b.p50), -h}, {scale.position(b.p50), h}, 1.5 * style.stroke, "median", {b.p50});
        median.color = ColorRole::ink;
        row.marks.push_back(std::move(median));
        col.rows.push_back(std::move(row));
    }
    return col;
}

GlyphColumn timeseries_column(std::span<const std::string> ids, const std::vector<std::vector<double>>& series,
                              const AxisScale& x_scale, const AxisScale& y_scale, const GlyphStyle& style)
{
    check_lengths(ids.size(), series.size());

    GlyphColumn col;
    col.kind = GlyphKind::timeseries;
    col.x = x_scale;
    col.y = y_scale;
    if (y_scale.domain_min < 0.0 && y_scale.domain_max > 0.0) {
        Mark zero = segment({x_scale.range_min, y_scale.position(0.0)}, {x_scale.range_max, y_scale.position(0.0)},
                            0.6 * style.stroke, "zero-line", {0.0});
        zero.color = ColorRole::ink;
        col.decorations.push_back(std::move(zero));
    }

    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& s = series[i];
        const auto present = std::count_if(s.begin(), s.end(), [](double v) { return !is_missing(v); });
        if (present < 2) {
            col.footnotes.push_back(ids[i]);
            continue;
        }
        GlyphRow row{ids[i], {}};
        std::size_t t = 0;
        while (t < s.size()) {
            if (is_missing(s[t])) {
                ++t;
                continue;
            }
            std::size_t end = t;
            while (end < s.size() && !is_missing(s[end]))
                ++end;
            std::vector<Point> pts;
            std::vector<double> data;
            for (std::size_t k = t; k < end; ++k) {
                pts.push_back({x_scale.position(static_cast<double>(k)), y_scale.position(s[k])});
                data.push_back(s[k]);
            }
            if (pts.size() == 1) {
                row.marks.push_back(circle(pts.front(), style.stroke, "series-point", std::move(data)));
            } else {
                Mark m;
                m.kind = MarkKind::polyline;
                m.points = std::move(pts);
                m.size = style.stroke;
                m.tag = "series";
                m.data = std::move(data);
                row.marks.push_back(std::move(m));
            }
            t = end;
        }
        col.rows.push_back(std::move(row));
    }
    return col;
}

GlyphColumn scatter_column(std::span<const std::string> ids, std::span<const double> x, std::span<const double> y,
                           const PerceptualGrouping& grouping, const ScatterOptions& options,
                           const AxisScale& x_scale, const AxisScale& y_scale, const GlyphStyle& style)
{
    check_lengths(ids.size(), x.size());
    check_lengths(ids.size(), y.size());

    GlyphColumn col;
    col.kind = GlyphKind::scatter;
    col.x = x_scale;
    col.y = y_scale;

    std::vector<std::size_t> complete;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (is_missing(x[i]) || is_missing(y[i]))
            col.footnotes.push_back(ids[i]);
        else
            complete.push_back(i);
    }

    std::vector<Mark> backdrop;
    if (options.identity_line) {
        const double t0 = std::max(x_scale.domain_min, y_scale.domain_min);
        const double t1 = std::min(x_scale.domain_max, y_scale.domain_max);
        if (t0 < t1) {
            Mark m = segment({x_scale.position(t0), y_scale.position(t0)}, {x_scale.position(t1), y_scale.position(t1)},
                             0.8 * style.stroke, "identity", {t0, t1});
            m.color = ColorRole::identity;
            backdrop.push_back(std::move(m));
        }
    }
    if (options.lowess_span) {
        std::vector<double> cx, cy;
        for (std::size_t i : complete) {
            cx.push_back(x[i]);
            cy.push_back(y[i]);
        }
        try {
            const auto fit = stats::lowess_fit(cx, cy, {*options.lowess_span, options.robust_iters});
            std::vector<std::size_t> order(cx.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cx[a] < cx[b]; });
            Mark curve;
            curve.kind = MarkKind::polyline;
            curve.tag = "lowess";
            curve.color = ColorRole::smooth;
            curve.size = 1.2 * style.stroke;
            for (std::size_t k : order) {
                curve.points.push_back({x_scale.position(cx[k]), y_scale.position(fit[k])});
                curve.data.push_back(fit[k]);
            }
            backdrop.push_back(std::move(curve));
        } catch (const std::invalid_argument& e) {
            col.warnings.push_back(std::string("lowess overlay skipped: ") + e.what());
        }
    }

    std::unordered_map<std::string, std::size_t> group_of;
    for (std::size_t g = 0; g < grouping.groups.size(); ++g)
        for (const auto& id : grouping.groups[g])
            group_of[id] = g;

    for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
        PanelGlyphs panel{g, backdrop};
        std::vector<Mark> members;
        for (std::size_t i : complete) {
            Mark m = circle({x_scale.position(x[i]), y_scale.position(y[i])}, style.point_radius, "point", {x[i], y[i]});
            m.region_id = ids[i];
            const auto it = group_of.find(ids[i]);
            if (it != group_of.end() && it->second == g) {
                members.push_back(std::move(m));
            } else {
                m.filled = false;
                m.color = ColorRole::neutral;
                panel.marks.push_back(std::move(m));
            }
        }
        for (auto& m : members)
            panel.marks.push_back(std::move(m));
        col.panels.push_back(std::move(panel));
    }
    return col;
}

std::vector<ReferenceLine> reference_lines(std::span<const ReferenceValue> refs, const AxisScale& scale)
{
    std::vector<ReferenceLine> out;
    for (const auto& r : refs)
        out.push_back({r.value, scale.position(r.value), r.label, r.style});
    return out;
}

// ─── Column assembly ────────────────────────────────────────────────────────

namespace {

constexpr double kInset = 5.0;  // keeps round marks at the domain edge inside the column

std::vector<double> reorder(const std::vector<double>& v, const std::vector<std::size_t>& idx)
{
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::size_t i : idx)
        out.push_back(v[i]);
    return out;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& vs)
{
    std::vector<double> out;
    for (const auto& v : vs)
        out.insert(out.end(), v.begin(), v.end());
    return out;
}

}  // namespace

GlyphColumn build_column(const BoundColumn& column, const BoundFigureModel& model, const PerceptualGrouping& grouping,
                         double width, const GlyphStyle& style)
{
    std::unordered_map<std::string, std::size_t> model_index;
    for (std::size_t i = 0; i < model.region_ids.size(); ++i)
        model_index[model.region_ids[i]] = i;
    std::vector<std::size_t> idx;
    for (const auto& id : grouping.order)
        idx.push_back(model_index.at(id));
    const std::vector<std::string>& ids = grouping.order;

    const auto& spec = column.spec;
    std::vector<double> refs;
    for (const auto& r : spec.reference_values)
        refs.push_back(r.value);
    const auto role = [&](const std::string& name, std::size_t k = 0) { return reorder(column.role(name, k), idx); };
    AxisPolicy policy;
    policy.max_ticks = std::clamp(static_cast<int>(width / 40.0), 3, 7);
    const auto fit = [&](const std::vector<double>& values, std::vector<double> extra = {}) {
        extra.insert(extra.end(), refs.begin(), refs.end());
        return fit_axis(values, extra, policy).with_range(kInset, width - kInset);
    };

    GlyphColumn out;
    switch (spec.glyph) {
    case GlyphKind::dot: {
        const auto v = role("value");
        out = dot_column(ids, v, {}, fit(v), style);
        break;
    }
    case GlyphKind::dot_ci: {
        const auto v = role("value");
        const auto lo = role("lo");
        const auto hi = role("hi");
        std::vector<stats::Interval> ci;
        for (std::size_t i = 0; i < v.size(); ++i)
            ci.push_back({lo[i], hi[i]});
        out = dot_column(ids, v, ci, fit(v, flatten({lo, hi})), style);
        out.kind = GlyphKind::dot_ci;
        break;
    }
    case GlyphKind::arrow: {
        const auto from = role("from");
        const auto to = role("to");
        out = arrow_column(ids, from, to, fit(from, to), spec.options.range, style);
        break;
    }
    case GlyphKind::bar: {
        const auto v = role("value");
        out = bar_column(ids, v, fit(v, {0.0}), style);
        break;
    }
    case GlyphKind::segmented_bar: {
        std::vector<std::vector<double>> segs;
        const std::size_t count = column.roles.at("segments").size();
        for (std::size_t k = 0; k < count; ++k)
            segs.push_back(role("segments", k));
        std::vector<double> totals(ids.size(), 0.0);
        for (const auto& s : segs)
            for (std::size_t i = 0; i < s.size(); ++i)
                totals[i] += s[i];
        out = segmented_bar_column(ids, segs, fit(totals, {0.0}), style);
        break;
    }
    case GlyphKind::boxplot: {
        const auto p10 = role("p10"), p25 = role("p25"), p50 = role("p50"), p75 = role("p75"), p90 = role("p90");
        std::vector<BoxStats> rows;
        for (std::size_t i = 0; i < ids.size(); ++i)
            rows.push_back({p10[i], p25[i], p50[i], p75[i], p90[i]});
        out = boxplot_column(ids, rows, fit(p10, flatten({p25, p50, p75, p90})), style);
        break;
    }
    case GlyphKind::timeseries: {
        const auto& by_time = column.roles.at("series");
        std::vector<std::vector<double>> per_row(ids.size());
        std::optional<std::size_t> first, last;
        for (std::size_t t = 0; t < by_time.size(); ++t) {
            const auto values = reorder(by_time[t], idx);
            for (std::size_t r = 0; r < ids.size(); ++r) {
                per_row[r].push_back(values[r]);
                if (!is_missing(values[r])) {
                    if (!first)
                        first = t;
                    last = t;
                }
            }
        }
        AxisScale xs;
        xs.domain_min = static_cast<double>(first.value_or(0));
        xs.domain_max = static_cast<double>(std::max(last.value_or(1), first.value_or(0) + 1));
        for (double t : nice_ticks(xs.domain_min, xs.domain_max, std::min(policy.max_ticks, 5), 2)) {
            const auto ti = static_cast<std::size_t>(std::llround(t));
            if (std::abs(t - static_cast<double>(ti)) < 1e-9 && ti < column.time_labels.size()) {
                xs.ticks.push_back(t);
                xs.tick_labels.push_back(column.time_labels[ti]);
            }
        }
        xs = xs.with_range(kInset, width - kInset);
        const AxisScale ys = fit_axis(flatten(per_row), refs).with_range(0.08, 0.92);
        out = timeseries_column(ids, per_row, xs, ys, style);
        break;
    }
    case GlyphKind::scatter: {
        const auto x = role("x");
        const auto y = role("y");
        ScatterOptions opts;
        opts.identity_line = spec.options.show_identity_line;
        opts.lowess_span = spec.options.lowess_span;
        opts.robust_iters = spec.options.robust_iters;

        std::vector<double> y_extent = y;
        if (opts.lowess_span) {
            std::vector<double> cx, cy;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (!is_missing(x[i]) && !is_missing(y[i])) {
                    cx.push_back(x[i]);
                    cy.push_back(y[i]);
                }
            try {
                const auto f = stats::lowess_fit(cx, cy, {*opts.lowess_span, opts.robust_iters});
                y_extent.insert(y_extent.end(), f.begin(), f.end());
            } catch (const std::invalid_argument&) {
                // scatter_column reports the warning
            }
        }
        const AxisScale xs = fit(x);
        const AxisScale ys = fit_axis(y_extent, {}).with_range(0.06, 0.94);
        out = scatter_column(ids, x, y, grouping, opts, xs, ys, style);
        break;
    }
    }
    out.kind = spec.glyph;
    out.references = reference_lines(spec.reference_values, out.x);
    return out;
}

}  // namespace micromap
