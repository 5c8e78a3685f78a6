#include <doctest.h>

#include "fixtures.hpp"
#include "micromap/model.hpp"
#include "micromap/stats.hpp"
#include "oracles.hpp"

using namespace micromap;

namespace {

bool has_issue(const ValidationReport& r, const std::string& code, const std::string& text)
{
    for (const auto& i : r.issues)
        if (i.code == code && i.message.find(text) != std::string::npos)
            return true;
    return false;
}

}  // namespace

TEST_CASE("atlas invariants")
{
    auto a = fixture::grid_atlas(3);
    CHECK(a.size() == 3);
    CHECK(a.find("R02")->name == "Region 2");
    CHECK(a.find("nope") == nullptr);
    CHECK(a.bounds().finite());

    std::vector<Region> one = {{"A", "A", {fixture::square(0, 0)}}};
    CHECK_THROWS_AS(Atlas("x", one), std::invalid_argument);
    std::vector<Region> dup = {{"A", "A", {fixture::square(0, 0)}}, {"A", "B", {fixture::square(2, 0)}}};
    CHECK_THROWS_WITH_AS(Atlas("x", dup), doctest::Contains("A"), std::invalid_argument);
    std::vector<Region> thin = {{"A", "A", {{{0, 0}, {1, 1}}}}, {"B", "B", {fixture::square(2, 0)}}};
    CHECK_THROWS_AS(Atlas("x", thin), std::invalid_argument);
    std::vector<Region> inf = {{"A", "A", {{{0, 0}, {1, 0}, {kMissing, 1}}}}, {"B", "B", {fixture::square(2, 0)}}};
    CHECK_THROWS_AS(Atlas("x", inf), std::invalid_argument);
}

TEST_CASE("data table invariants")
{
    const auto t = fixture::grid_table(4);
    CHECK(t.row_count() == 4);
    CHECK(t.row_index("R03") == 2u);
    CHECK(t.column("a")->at(3) == 4.0);
    CHECK(t.time_group("ts")->size() == 4);
    CHECK(t == fixture::grid_table(4));

    CHECK_THROWS_AS(DataTable("id", {"A", "A"}, {{"v", {1, 2}}}), std::invalid_argument);
    CHECK_THROWS_AS(DataTable("id", {"A", ""}, {{"v", {1, 2}}}), std::invalid_argument);
    CHECK_THROWS_AS(DataTable("id", {"A", "B"}, {{"v", {1}}}), std::invalid_argument);
    CHECK_THROWS_AS(DataTable("id", {"A"}, {{"v", {1}}}, {{"g", {{"2020", "missing"}}}}), std::invalid_argument);
    CHECK_THROWS_AS(DataTable("id", {"A"}, {{"v@2021", {1}}, {"v@2020", {2}}},
                              {{"v", {{"2021", "v@2021"}, {"2020", "v@2020"}}}}),
                    std::invalid_argument);
}

TEST_CASE("time labels order chronologically")
{
    CHECK(time_ordinal("2021 Q2") == time_ordinal("Q2 2021"));
    CHECK(time_ordinal("2021Q2") == time_ordinal("2021-Q2"));
    CHECK(*time_ordinal("2020 Q4") < *time_ordinal("2021 Q1"));
    CHECK(*time_ordinal("2020") < *time_ordinal("2021"));
    CHECK(*time_ordinal("2021-06") < *time_ordinal("2021-07"));
    CHECK_FALSE(time_ordinal("spring").has_value());
    CHECK(time_column_name("emp", "2021 Q2") == "emp@2021 Q2");
}

TEST_CASE("trim and missing values")
{
    CHECK(trim("  CA\t") == "CA");
    CHECK(trim("") == "");
    CHECK(is_missing(kMissing));
    CHECK(same_value(kMissing, kMissing));
    CHECK_FALSE(same_value(kMissing, 1.0));
}

TEST_CASE("glyph names round-trip")
{
    for (auto k : {GlyphKind::dot, GlyphKind::dot_ci, GlyphKind::arrow, GlyphKind::bar, GlyphKind::segmented_bar,
                   GlyphKind::boxplot, GlyphKind::timeseries, GlyphKind::scatter})
        CHECK(glyph_from_string(to_string(k)) == k);
    CHECK_FALSE(glyph_from_string("pie").has_value());
}

TEST_CASE("validation reports unresolved bindings and unmatched keys")
{
    const auto atlas = fixture::grid_atlas(4);
    const auto table = fixture::grid_table(4);
    CHECK(validate_spec(fixture::dot_spec(), table, atlas).ok());

    auto bad = fixture::dot_spec("a", "nope");
    const auto r = validate_spec(bad, table, atlas);
    CHECK(has_issue(r, "unresolved_binding", "nope"));

    auto missing_role = fixture::dot_spec();
    missing_role.columns.push_back(fixture::column(GlyphKind::arrow, {{"from", {"a"}}}));
    CHECK(has_issue(validate_spec(missing_role, table, atlas), "missing_binding", "to"));

    auto empty = fixture::dot_spec();
    empty.columns.clear();
    CHECK(has_issue(validate_spec(empty, table, atlas), "empty_columns", ""));

    auto infinite_ref = fixture::dot_spec();
    infinite_ref.columns[0].reference_values.push_back({std::numeric_limits<double>::infinity()});
    CHECK(has_issue(validate_spec(infinite_ref, table, atlas), "invalid_option", "finite"));

    DataTable extra("id", {"R01", "R02", "PR"}, {{"a", {1, 2, 3}}, {"b", {1, 2, 3}}});
    CHECK(has_issue(validate_spec(fixture::dot_spec(), extra, atlas), "unmatched_region", "unmatched region key PR"));
}

TEST_CASE("binding resolves sort values and columns")
{
    const auto atlas = fixture::grid_atlas(6);
    const auto table = fixture::grid_table(6);
    const auto m = bind_spec(fixture::dot_spec(), table, atlas);
    CHECK(m.region_ids == fixture::grid_ids(6));
    CHECK(m.sort_values == *table.column("a"));
    CHECK(m.columns.size() == 1);
    CHECK(m.columns[0].role("value") == *table.column("b"));
    CHECK(m.region_names[0] == "Region 1");

    CHECK(bind_spec(fixture::dot_spec(), table, atlas) == m);
}

TEST_CASE("binding a pca sort uses the principal component scores")
{
    const auto atlas = fixture::grid_atlas(8);
    const auto table = fixture::grid_table(8);
    auto spec = fixture::dot_spec();
    spec.sort.kind = SortSpec::Kind::pca;
    spec.sort.columns = {"a", "b", "c"};
    spec.sort.component = 1;
    const auto m = bind_spec(spec, table, atlas);
    const auto want = oracle::pca_scores({*table.column("a"), *table.column("b"), *table.column("c")}, 1);
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(std::abs(m.sort_values[i] - want[i]) < 1e-8);
}

TEST_CASE("binding a lowess residual sort")
{
    const auto atlas = fixture::grid_atlas(9);
    const auto table = fixture::grid_table(9);
    auto spec = fixture::dot_spec();
    spec.sort.kind = SortSpec::Kind::lowess_residual;
    spec.sort.x = "c";
    spec.sort.y = "b";
    const auto m = bind_spec(spec, table, atlas);
    const auto want = oracle::lowess(*table.column("c"), *table.column("b"), 2.0 / 3.0, 3);
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(std::abs(m.sort_values[i] - (table.column("b")->at(i) - want[i])) < 1e-8);
}

TEST_CASE("missing sort values fail unless dropped")
{
    const auto atlas = fixture::grid_atlas(4);
    DataTable t("id", fixture::grid_ids(4), {{"a", {1, kMissing, 3, 4}}, {"b", {1, 2, 3, 4}}});
    try {
        bind_spec(fixture::dot_spec(), t, atlas);
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        REQUIRE_FALSE(e.report().ok());
        CHECK(e.report().issues[0].code == "missing_sort_value");
        CHECK(e.report().issues[0].message.find("R02") != std::string::npos);
    }
    auto spec = fixture::dot_spec();
    spec.drop_missing_sort = true;
    const auto m = bind_spec(spec, t, atlas);
    CHECK(m.region_ids == std::vector<std::string>{"R01", "R03", "R04"});
    CHECK(m.dropped_missing_sort == std::vector<std::string>{"R02"});
}

TEST_CASE("bound rows never exceed atlas regions present in the table")
{
    const auto atlas = fixture::grid_atlas(6);
    DataTable t("id", {"R05", "R01", "R03"}, {{"a", {5, 1, 3}}, {"b", {1, 2, 3}}});
    const auto m = bind_spec(fixture::dot_spec(), t, atlas);
    CHECK(m.region_ids.size() == 3);
    for (const auto& id : m.region_ids)
        CHECK(atlas.find(id) != nullptr);
    CHECK(m.omitted_regions == std::vector<std::string>{"R02", "R04", "R06"});
}

TEST_CASE("bind rejects invalid specs with the issue list")
{
    const auto atlas = fixture::grid_atlas(4);
    const auto table = fixture::grid_table(4);
    CHECK_THROWS_AS(bind_spec(fixture::dot_spec("zzz"), table, atlas), SpecError);
}
