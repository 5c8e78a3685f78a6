#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "micromap/glyphs.hpp"
#include "micromap/render.hpp"
#include "oracles.hpp"

using namespace micromap;

namespace {

AxisScale scale(double d0, double d1, double r0 = 0, double r1 = 100)
{
    AxisScale s;
    s.domain_min = d0;
    s.domain_max = d1;
    s.range_min = r0;
    s.range_max = r1;
    return s;
}

const Mark& find_tag(const std::vector<Mark>& marks, const std::string& tag, std::size_t nth = 0)
{
    for (const auto& m : marks)
        if (m.tag == tag && nth-- == 0)
            return m;
    throw std::runtime_error("no mark tagged " + tag);
}

}  // namespace

TEST_CASE("fit_axis examples")
{
    std::vector<double> v;
    for (int i = 0; i <= 100; ++i)
        v.push_back(i);
    const auto a = fit_axis(v, {});
    CHECK(a.ticks == std::vector<double>{0, 20, 40, 60, 80, 100});
    CHECK(a.tick_labels == std::vector<std::string>{"0", "20", "40", "60", "80", "100"});
    CHECK(a.domain_min == doctest::Approx(-5));
    CHECK(a.domain_max == doctest::Approx(105));

    const std::vector<double> five = {5, 5, 5};
    const auto b = fit_axis(five, {});
    CHECK(b.domain_min == doctest::Approx(4.5));
    CHECK(b.domain_max == doctest::Approx(5.5));

    const std::vector<double> zero = {0, 0};
    const auto z = fit_axis(zero, {});
    CHECK(z.domain_min == doctest::Approx(-0.5));
    CHECK(z.domain_max == doctest::Approx(0.5));

    const std::vector<double> data = {10, 20};
    const std::vector<double> ref = {66};
    const auto c = fit_axis(data, ref);
    CHECK(c.contains(66));
    CHECK(c.contains(10));

    const auto none = fit_axis(std::vector<double>{kMissing}, {});
    CHECK(none.domain_min == 0.0);
    CHECK(none.domain_max == 1.0);
}

TEST_CASE("tick ladder against a brute-force 1-2-5 search")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lo(-1e4, 1e4), span_exp(-3, 5);
    for (int trial = 0; trial < 500; ++trial) {
        const double a = lo(rng);
        const double b = a + std::pow(10.0, span_exp(rng));
        const auto ticks = nice_ticks(a, b, 7, 3);
        // Oracle: the smallest 1-2-5 step with at most 7 multiples inside [a, b], or the
        // step below it when that leaves fewer than 3.
        double best = 0, previous = 0;
        for (int e = -6; e <= 8 && best == 0; ++e)
            for (double m : {1.0, 2.0, 5.0}) {
                const double step = m * std::pow(10.0, e);
                const double count = std::floor(b / step + 1e-9) - std::ceil(a / step - 1e-9) + 1;
                if (count <= 7) {
                    best = count < 3 && previous > 0 ? previous : step;
                    break;
                }
                previous = step;
            }
        REQUIRE(ticks.size() >= 2);
        const double step = ticks[1] - ticks[0];
        CHECK(step == doctest::Approx(best).epsilon(1e-9));
        CHECK(ticks.size() >= 3);
        for (double t : ticks) {
            CHECK(t >= a - 1e-9 * std::abs(a));
            CHECK(t <= b + 1e-9 * std::abs(b));
        }
    }
}

TEST_CASE("tick labels")
{
    CHECK(format_tick(0.5, 0.1) == "0.5");
    CHECK(format_tick(20, 20) == "20");
    CHECK(format_tick(-0.25, 0.05) == "-0.25");
    for (double t : nice_ticks(-1, 1))
        CHECK(!std::signbit(t) == (t >= 0));
}

TEST_CASE("axis scales are linear and monotone")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1000, 1000), lam(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        double d0 = u(rng), d1 = u(rng);
        if (d0 > d1)
            std::swap(d0, d1);
        if (d1 - d0 < 1e-3)
            continue;
        const auto s = scale(d0, d1, u(rng), u(rng));
        const double a = u(rng), b = u(rng), l = lam(rng);
        const double lhs = s.position(a * l + b * (1 - l));
        const double rhs = l * s.position(a) + (1 - l) * s.position(b);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
        CHECK(std::abs(s.value_at(s.position(a)) - a) <= 1e-9 * std::max(1.0, std::abs(a)));
    }
    const auto fitted = fit_axis(std::vector<double>{3, 9, 4}, {});
    CHECK(fitted.domain_min < fitted.domain_max);
    for (double t : fitted.ticks)
        CHECK(fitted.contains(t));
}

TEST_CASE("dot column")
{
    const std::vector<std::string> ids = {"CA", "AL", "XX"};
    const std::vector<double> v = {83.55, 53.19, kMissing};
    const auto s = scale(40, 100);
    const auto ca_ci = stats::ci_from_prse(83.55, 0.8);
    const auto al_ci = stats::ci_from_prse(53.19, 1.5);
    const std::vector<stats::Interval> ci = {ca_ci, al_ci, {}};
    const auto col = dot_column(ids, v, ci, s);
    REQUIRE(col.rows.size() == 2);
    CHECK(col.footnotes == std::vector<std::string>{"XX"});
    const auto& bar = find_tag(col.rows[0].marks, "ci-bar");
    const auto& dot = find_tag(col.rows[0].marks, "dot");
    CHECK(bar.points[0].x == doctest::Approx((ca_ci.lo - 40) / 60 * 100));
    CHECK(bar.points[1].x == doctest::Approx((ca_ci.hi - 40) / 60 * 100));
    CHECK(dot.points[0].x == doctest::Approx((83.55 - 40) / 60 * 100));
    CHECK(dot.points[0].x == doctest::Approx((bar.points[0].x + bar.points[1].x) / 2));

    const auto mid = dot_column(std::vector<std::string>{"M"}, std::vector<double>{70}, {}, s);
    CHECK(mid.rows[0].marks.back().points[0].x == doctest::Approx(50));

    const std::vector<stats::Interval> bad = {{5, 4}};
    CHECK_THROWS_AS(dot_column(std::vector<std::string>{"M"}, std::vector<double>{4.5}, bad, s), std::invalid_argument);
}

TEST_CASE("arrow column")
{
    const auto s = scale(0, 80);
    const std::vector<std::string> id = {"A"};
    const auto col = arrow_column(id, std::vector<double>{20}, std::vector<double>{40}, s, true);
    const auto& m = find_tag(col.rows[0].marks, "arrow");
    CHECK(m.points[0].x == doctest::Approx(25));
    CHECK(m.points[1].x == doctest::Approx(50));
    CHECK(m.arrow_head);

    const auto ranged = arrow_column(id, std::vector<double>{40}, std::vector<double>{20}, s, true);
    CHECK(ranged.rows[0].marks[0].points[0].x == doctest::Approx(25));
    CHECK(ranged.rows[0].marks[0].points[1].x == doctest::Approx(50));

    const auto change = arrow_column(id, std::vector<double>{40}, std::vector<double>{20}, s, false);
    CHECK(change.rows[0].marks[0].points[1].x == doctest::Approx(25));

    const auto same = arrow_column(id, std::vector<double>{30}, std::vector<double>{30}, s);
    CHECK(same.rows[0].marks[0].tag == "arrow-point");

    const auto gap = arrow_column(id, std::vector<double>{kMissing}, std::vector<double>{30}, s);
    CHECK(gap.rows.empty());
    CHECK(gap.footnotes == id);
}

TEST_CASE("bar columns")
{
    const auto s = scale(-10, 10);
    const std::vector<std::string> ids = {"Z", "N"};
    const auto col = bar_column(ids, std::vector<double>{0, -5}, s);
    const auto& zero = col.rows[0].marks[0];
    CHECK(zero.points[0].x == doctest::Approx(zero.points[1].x));
    const auto& neg = col.rows[1].marks[0];
    CHECK(std::min(neg.points[0].x, neg.points[1].x) == doctest::Approx(25));
    CHECK(std::max(neg.points[0].x, neg.points[1].x) == doctest::Approx(50));

    const std::vector<std::vector<double>> shares = {{1}, {1}, {2}};
    const auto seg = segmented_bar_column(std::vector<std::string>{"S"}, shares, scale(0, 4));
    REQUIRE(seg.rows[0].marks.size() == 3);
    std::vector<double> breaks = {seg.rows[0].marks[0].points[0].x};
    for (const auto& m : seg.rows[0].marks)
        breaks.push_back(m.points[1].x);
    const double total = breaks.back() - breaks.front();
    CHECK((breaks[1] - breaks[0]) / total == doctest::Approx(0.25));
    CHECK((breaks[2] - breaks[0]) / total == doctest::Approx(0.5));
    CHECK((breaks[3] - breaks[0]) / total == doctest::Approx(1.0));

    const std::vector<std::vector<double>> negative = {{1}, {-1}};
    CHECK_THROWS_AS(segmented_bar_column(std::vector<std::string>{"S"}, negative, scale(0, 4)), std::invalid_argument);
}

TEST_CASE("boxplot column uses published percentiles")
{
    const auto s = scale(20, 100);
    const std::vector<std::string> ids = {"AL", "AK", "EQ"};
    const std::vector<BoxStats> rows = {{29.58, 37.73, 49.39, 64.57, 81.29},
                                        {41.95, 52.27, 72.79, 84.83, 93.45},
                                        {50, 50, 50, 50, 50}};
    const auto col = boxplot_column(ids, rows, s);
    for (std::size_t r = 0; r < 2; ++r) {
        const auto& marks = col.rows[r].marks;
        const auto& b = rows[r];
        const auto& lo = find_tag(marks, "whisker", 0);
        const auto& hi = find_tag(marks, "whisker", 1);
        const auto& box = find_tag(marks, "box");
        const auto& med = find_tag(marks, "median");
        CHECK(s.value_at(lo.points[0].x) == doctest::Approx(b.p10));
        CHECK(s.value_at(lo.points[1].x) == doctest::Approx(b.p25));
        CHECK(s.value_at(box.points[0].x) == doctest::Approx(b.p25));
        CHECK(s.value_at(box.points[1].x) == doctest::Approx(b.p75));
        CHECK(s.value_at(med.points[0].x) == doctest::Approx(b.p50));
        CHECK(s.value_at(hi.points[1].x) == doctest::Approx(b.p90));
        // screen order matches data order
        CHECK(lo.points[0].x <= box.points[0].x);
        CHECK(box.points[0].x <= med.points[0].x);
        CHECK(med.points[0].x <= box.points[1].x);
        CHECK(box.points[1].x <= hi.points[1].x);
    }
    const auto& eq = find_tag(col.rows[2].marks, "box");
    CHECK(eq.points[0].x == eq.points[1].x);

    const std::vector<BoxStats> bad = {{1, 3, 2, 4, 5}};
    CHECK_THROWS_WITH_AS(boxplot_column(std::vector<std::string>{"AZ"}, bad, s), doctest::Contains("AZ"),
                         std::invalid_argument);
}

TEST_CASE("timeseries column")
{
    const auto xs = scale(0, 4);
    const auto ys = scale(-10, 10, 0, 1);
    const std::vector<std::string> ids = {"flat", "gap", "twin", "short"};
    const std::vector<std::vector<double>> series = {
        {3, 3, 3, 3, 3}, {1, 2, kMissing, 4, 5}, {3, 3, 3, 3, 3}, {kMissing, 1, kMissing, kMissing, kMissing}};
    const auto col = timeseries_column(ids, series, xs, ys);
    REQUIRE(col.rows.size() == 3);
    CHECK(col.footnotes == std::vector<std::string>{"short"});
    const auto& flat = col.rows[0].marks;
    REQUIRE(flat.size() == 1);
    for (const auto& p : flat[0].points)
        CHECK(p.y == doctest::Approx(ys.position(3)));
    CHECK(col.rows[1].marks.size() == 2);
    CHECK(col.rows[0].marks == col.rows[2].marks);
    REQUIRE(col.decorations.size() == 1);
    CHECK(col.decorations[0].tag == "zero-line");

    const auto positive = timeseries_column(ids, series, xs, scale(1, 10, 0, 1));
    CHECK(positive.decorations.empty());
}

TEST_CASE("scatter column panels")
{
    const std::vector<std::string> ids = {"a", "b", "c", "d", "e", "f", "g"};
    const std::vector<double> x = {1, 2, 3, 4, 5, 6, 7};
    const std::vector<double> y = {1.5, 1.8, 3.9, 3.1, 5.5, 5.2, 8.0};
    const auto grouping = make_grouping(ids);
    ScatterOptions opt;
    opt.lowess_span = 2.0 / 3.0;
    const auto sx = scale(0, 8), sy = scale(0, 8, 0, 1);
    const auto col = scatter_column(ids, x, y, grouping, opt, sx, sy);
    REQUIRE(col.panels.size() == grouping.groups.size());

    const auto fit = stats::lowess_fit(x, y, {2.0 / 3.0, 3});
    for (std::size_t g = 0; g < col.panels.size(); ++g) {
        const auto& marks = col.panels[g].marks;
        std::size_t filled = 0, points = 0;
        std::vector<std::pair<double, double>> geometry;
        for (const auto& m : marks) {
            if (m.tag != "point")
                continue;
            ++points;
            geometry.push_back({m.points[0].x, m.points[0].y});
            if (m.filled) {
                ++filled;
                CHECK(grouping.group_of(m.region_id) == g);
                CHECK(m.color == ColorRole::region);
            } else {
                CHECK(m.color == ColorRole::neutral);
            }
        }
        CHECK(points == ids.size());
        CHECK(filled == grouping.groups[g].size());

        const auto& id_line = find_tag(marks, "identity");
        CHECK(id_line.points[0].x == doctest::Approx(0));
        CHECK(id_line.points[1].x == doctest::Approx(100));
        CHECK(id_line.points[1].y == doctest::Approx(1));

        const auto& curve = find_tag(marks, "lowess");
        auto sorted = fit;  // x is already ascending
        for (std::size_t i = 0; i < sorted.size(); ++i)
            CHECK(curve.data[i] == doctest::Approx(sorted[i]).epsilon(1e-12));

        std::sort(geometry.begin(), geometry.end());
        static std::vector<std::pair<double, double>> first;
        if (g == 0)
            first = geometry;
        else
            CHECK(geometry == first);
    }

    const std::vector<double> same_x(7, 2.0);
    const auto degenerate = scatter_column(ids, same_x, y, grouping, opt, sx, sy);
    REQUIRE(degenerate.warnings.size() == 1);
    CHECK(degenerate.warnings[0].find("lowess overlay skipped") != std::string::npos);
}

TEST_CASE("reference lines keep input order")
{
    const auto s = scale(0, 100);
    const std::vector<ReferenceValue> refs = {{66, "mean"}, {0, "zero", LineStyle::dashed}};
    const auto lines = reference_lines(refs, s);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].x == doctest::Approx(66));
    CHECK(lines[1].x == doctest::Approx(0));
    CHECK(lines[1].style == LineStyle::dashed);
}

TEST_CASE("built columns share one scale across rows and are deterministic")
{
    const auto atlas = fixture::grid_atlas(12);
    std::vector<double> v(12, 7.0);
    v[3] = 2;
    DataTable t("id", fixture::grid_ids(12), {{"a", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}}, {"b", v}});
    auto spec = fixture::dot_spec();
    spec.columns[0].reference_values.push_back({50});
    const auto model = bind_spec(spec, t, atlas);
    const auto grouping = make_grouping(sort_rows(model));
    const auto col = build_column(model.columns[0], model, grouping, 200);
    CHECK(col.x.contains(50));
    double x7 = -1;
    for (const auto& row : col.rows) {
        const auto& dot = find_tag(row.marks, "dot");
        if (dot.data[0] == 7.0) {
            if (x7 < 0)
                x7 = dot.points[0].x;
            CHECK(dot.points[0].x == x7);
        }
        CHECK(dot.points[0].x >= 0);
        CHECK(dot.points[0].x <= 200);
    }
    CHECK(col.rows.front().region_id == grouping.order.front());
    CHECK(build_column(model.columns[0], model, grouping, 200) == col);
}
