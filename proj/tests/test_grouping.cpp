#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "micromap/grouping.hpp"

using namespace micromap;

namespace {

std::vector<std::string> ids(std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back("r" + std::to_string(1000 + i));
    return out;
}

}  // namespace

TEST_CASE("group sizes for the stated counts")
{
    CHECK(build_groups(51) == std::vector<int>{5, 5, 5, 5, 5, 1, 5, 5, 5, 5, 5});
    CHECK(build_groups(1) == std::vector<int>{1});
    CHECK(build_groups(62) == std::vector<int>{5, 5, 5, 4, 4, 4, 4, 4, 4, 4, 4, 5, 5, 5});
    CHECK(build_groups(2) == std::vector<int>{1, 1});
    CHECK(build_groups(10) == std::vector<int>{5, 5});
    CHECK(build_groups(11) == std::vector<int>{5, 1, 5});
    CHECK_THROWS_AS(build_groups(0), std::invalid_argument);
}

TEST_CASE("group size properties for n up to 500")
{
    for (std::size_t n = 1; n <= 500; ++n) {
        const auto g = build_groups(n);
        CHECK(std::accumulate(g.begin(), g.end(), std::size_t{0}) == n);
        for (int s : g) {
            CHECK(s >= 1);
            CHECK(s <= 5);
        }
        auto rev = g;
        std::reverse(rev.begin(), rev.end());
        CHECK(rev == g);
        const std::size_t ones = static_cast<std::size_t>(std::count(g.begin(), g.end(), 1));
        if (n % 2 == 1) {
            CHECK(g[g.size() / 2] == 1);
        } else if (n > 2) {
            CHECK(g.size() % 2 == 0);
        }
        // Within a half sizes differ by at most one, larger toward the extreme.
        const std::size_t half_groups = g.size() / 2;
        for (std::size_t k = 0; k + 1 < half_groups; ++k) {
            CHECK(g[k] >= g[k + 1]);
            CHECK(g[k] - g[half_groups - 1] <= 1);
        }
        const std::size_t half = n / 2;
        if (half >= 12)
            for (std::size_t k = 0; k < g.size(); ++k)
                if (!(n % 2 == 1 && k == g.size() / 2))
                    CHECK((g[k] == 4 || g[k] == 5));
        if (n >= 4 && n % 2 == 0 && half >= 12)
            CHECK(ones == 0);
    }
}

TEST_CASE("sorting by value with id tie-break")
{
    const std::vector<std::string> id = {"b", "a", "c", "d"};
    const std::vector<double> v = {2, 2, 5, 1};
    CHECK(sort_rows(id, v, SortDirection::descending) == std::vector<std::string>{"c", "a", "b", "d"});
    CHECK(sort_rows(id, v, SortDirection::ascending) == std::vector<std::string>{"d", "b", "a", "c"});

    std::vector<double> scaled;
    for (double x : v)
        scaled.push_back(x * 17.5);
    CHECK(sort_rows(id, scaled, SortDirection::descending) == sort_rows(id, v, SortDirection::descending));
}

TEST_CASE("reversing direction reverses order and group sizes")
{
    for (std::size_t n : {7u, 12u, 51u, 62u}) {
        const auto id = ids(n);
        std::vector<double> v;
        for (std::size_t i = 0; i < n; ++i)
            v.push_back(static_cast<double>((i * 37) % 11));
        auto desc = sort_rows(id, v, SortDirection::descending);
        auto asc = sort_rows(id, v, SortDirection::ascending);
        std::reverse(asc.begin(), asc.end());
        CHECK(asc == desc);
        auto sizes = build_groups(n);
        std::reverse(sizes.begin(), sizes.end());
        CHECK(sizes == build_groups(n));
    }
}

TEST_CASE("grouping partitions the order")
{
    for (std::size_t n : {1u, 2u, 5u, 6u, 51u, 62u, 101u}) {
        const auto order = ids(n);
        const auto g = make_grouping(order);
        std::vector<std::string> joined;
        for (const auto& grp : g.groups)
            joined.insert(joined.end(), grp.begin(), grp.end());
        CHECK(joined == order);
        CHECK(g.order == order);
        CHECK(g.median_group_index.has_value() == (n % 2 == 1));
        if (g.median_group_index)
            CHECK(g.groups[*g.median_group_index].size() == 1);
        for (std::size_t k = 0; k < g.groups.size(); ++k)
            for (const auto& id : g.groups[k])
                CHECK(g.group_of(id) == k);
    }
}

TEST_CASE("colors are positional within each group")
{
    const Palette pal;
    const auto g = make_grouping(ids(51));
    const auto colors = assign_colors(g, pal);
    for (std::size_t k = 0; k < g.groups.size(); ++k) {
        if (g.median_group_index == k) {
            const auto& c = colors.at(g.groups[k][0]);
            CHECK(c.fill == pal.median);
            CHECK(c.palette_index == -1);
            continue;
        }
        for (std::size_t i = 0; i < g.groups[k].size(); ++i) {
            const auto& c = colors.at(g.groups[k][i]);
            CHECK(c.fill == pal.group[i]);
            CHECK(c.palette_index == static_cast<int>(i));
        }
    }
    std::size_t accent = 0;
    for (const auto& [id, c] : colors.by_region)
        accent += c.fill == pal.median;
    CHECK(accent == 1);
}

TEST_CASE("colors follow row position, not region identity")
{
    const std::vector<std::string> a = {"x1", "x2", "x3", "x4", "x5", "x6", "x7"};
    const std::vector<std::string> b = {"q9", "q2", "q5", "q1", "q7", "q3", "q4"};
    const std::vector<double> v = {7, 6, 5, 4, 3, 2, 1};
    const auto ca = assign_colors(make_grouping(sort_rows(a, v, SortDirection::descending)));
    const auto cb = assign_colors(make_grouping(sort_rows(b, v, SortDirection::descending)));
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(ca.at(a[i]) == cb.at(b[i]));
}
