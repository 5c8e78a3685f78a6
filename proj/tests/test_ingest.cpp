#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "micromap/ingest.hpp"
#include "oracles.hpp"

using namespace micromap;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
    {
        path = fs::temp_directory_path() / ("micromap-test-" + tag + "-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& text)
{
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

std::string manifest(const std::string& id, const std::string& file = "d.csv")
{
    return R"({"id":")" + id + R"(","title":"T","atlas":"grid","sources":[{"file":")" + file +
           R"(","adapter":{"key_column":"k","columns":[{"source":"v","name":"v"}]}}]})";
}

AdapterConfig simple_adapter()
{
    AdapterConfig a;
    a.key_column = "key";
    a.columns = {{"Value", "value", ""}, {"Other", "other", ""}};
    a.missing_markers = {"", "*"};
    return a;
}

// Published software developer rows: LQ, mean, PRSE, p10, p25, median, p75, p90.
struct TableRow {
    const char* state;
    double v[8];
};
const TableRow kPublished[] = {
    {"AL", {0.76, 53.19, 1.5, 29.58, 37.73, 49.39, 64.57, 81.29}},
    {"AK", {0.08, 70.01, 4.6, 41.95, 52.27, 72.79, 84.83, 93.45}},
    {"AZ", {1.13, 61.56, 1.6, 37.72, 45.77, 59.22, 69.85, 84.83}},
    {"AR", {0.41, 42.37, 4.8, 14.13, 27.96, 44.3, 53.97, 64.05}},
    {"CA", {1.55, 83.55, 0.8, 49.64, 65.04, 81.09, 100.92, 108.97}},
    {"CO", {1.47, 69.92, 1.1, 41.62, 50.73, 64.89, 80.44, 99.25}},
    {"CT", {1.01, 61.75, 1.5, 37.51, 47.93, 60.14, 75.69, 89.63}},
    {"DE", {0.95, 63.29, 2, 44.08, 51.97, 63.31, 73.29, 84.04}},
};

}  // namespace

TEST_CASE("csv records")
{
    const auto rows = parse_csv("\xEF\xBB\xBF" "a,b,c\r\n1,\"x, y\",\"say \"\"hi\"\"\"\n\n2,,3");
    REQUIRE(rows.size() >= 3);
    CHECK(rows[0] == std::vector<std::string>{"a", "b", "c"});
    CHECK(rows[1] == std::vector<std::string>{"1", "x, y", "say \"hi\""});
    CHECK(rows.back() == std::vector<std::string>{"2", "", "3"});
    CHECK(parse_csv("a,\"line\nbreak\"")[0][1] == "line\nbreak");
    CHECK_THROWS_AS(parse_csv("a,\"open"), InputError);
}

TEST_CASE("number cells")
{
    CHECK(parse_number("1,234") == 1234.0);
    CHECK(parse_number(" 2.5 ") == 2.5);
    CHECK(parse_number("$1,000.50") == 1000.5);
    CHECK(parse_number("12%") == 12.0);
    CHECK(parse_number("-3.25") == -3.25);
    CHECK(parse_number("1e3") == 1000.0);
    CHECK_FALSE(parse_number("abc").has_value());
    CHECK_FALSE(parse_number("").has_value());
    CHECK_FALSE(parse_number("1.2.3").has_value());
    CHECK_FALSE(parse_number("12 apples").has_value());
}

TEST_CASE("adapter loading")
{
    const std::string text = "key,Value,Other,Ignored\nA,\"1,000\",*,x\n B ,2.5,7,y\n";
    const auto t = load_csv_text(text, simple_adapter());
    CHECK(t.key_column() == "key");
    CHECK(t.keys()[1] == "B");
    CHECK(t.column("value")->at(0) == 1000.0);
    CHECK(is_missing(t.column("other")->at(0)));
    CHECK(t.column("Ignored") == nullptr);
}

TEST_CASE("adapter errors")
{
    try {
        load_csv_text("key,Value,Other\nA,1,2\nB,oops,3\n", simple_adapter());
        FAIL("expected CellError");
    } catch (const CellError& e) {
        CHECK(e.row() == 2);
        CHECK(e.column() == "Value");
        CHECK(std::string(e.what()).find("oops") != std::string::npos);
    }
    CHECK_THROWS_WITH_AS(load_csv_text("key,Value\nA,1\n", simple_adapter()), doctest::Contains("missing mapped column Other"),
                         InputError);
    CHECK_THROWS_WITH_AS(load_csv_text("key,Value,Other\nA,1,2\nA,3,4\n", simple_adapter()),
                         doctest::Contains("duplicate key A"), InputError);

    AdapterConfig none;
    none.columns = simple_adapter().columns;
    CHECK_THROWS_AS(check_adapter(none), InputError);
    AdapterConfig empty = simple_adapter();
    empty.columns.clear();
    CHECK_THROWS_AS(check_adapter(empty), InputError);
    AdapterConfig both = simple_adapter();
    both.long_time = LongTimeSpec{"t"};
    both.wide_time = {{"g", "v_{label}"}};
    CHECK_THROWS_AS(check_adapter(both), InputError);
}

TEST_CASE("long format pivots to ordered time groups")
{
    AdapterConfig a;
    a.key_column = "k";
    a.columns = {{"v", "emp", ""}};
    a.long_time = LongTimeSpec{"t"};
    const auto t = load_csv_text("k,t,v\nA,2021 Q1,3\nA,2020 Q4,2\nB,2020 Q4,5\nB,2021 Q1,6\n", a);
    const auto* g = t.time_group("emp");
    REQUIRE(g != nullptr);
    REQUIRE(g->size() == 2);
    CHECK((*g)[0].label == "2020 Q4");
    CHECK(t.column((*g)[1].column)->at(1) == 6.0);
    CHECK_THROWS_AS(load_csv_text("k,t,v\nA,2021 Q1,3\nA,2021 Q1,4\n", a), InputError);
}

TEST_CASE("wide format matches header patterns")
{
    AdapterConfig a;
    a.key_column = "k";
    a.columns = {{"lvl", "level", ""}};
    a.wide_time = {{"emp", "emp_{label}"}};
    const auto t = load_csv_text("k,lvl,emp_2021,emp_2020\nA,1,20,10\nB,2,40,30\n", a);
    const auto* g = t.time_group("emp");
    REQUIRE(g != nullptr);
    CHECK((*g)[0].label == "2020");
    CHECK((*g)[1].label == "2021");
    CHECK(t.column((*g)[0].column)->at(1) == 30.0);
}

TEST_CASE("bundled software developer extract carries the published rows")
{
    const auto m = read_manifest(oracle::data_dir() / "datasets" / "oews-software-developers-2023");
    REQUIRE(m.ok());
    const auto t = load_dataset(m);
    CHECK(t.row_count() == 51);
    const char* cols[] = {"lq", "h_mean", "mean_prse", "p10", "p25", "p50", "p75", "p90"};
    for (const auto& row : kPublished) {
        const auto i = t.row_index(row.state);
        REQUIRE(i.has_value());
        for (int c = 0; c < 8; ++c)
            CHECK(t.column(cols[c])->at(*i) == doctest::Approx(row.v[c]).epsilon(1e-12));
    }
    CHECK(m.national.at("h_mean") == 66.0);
}

TEST_CASE("bundled quarterly extract has 21 ordered quarters")
{
    const auto m = read_manifest(oracle::data_dir() / "datasets" / "qcew-all-industries");
    const auto t = load_dataset(m);
    const auto* g = t.time_group("employment");
    REQUIRE(g != nullptr);
    CHECK(g->size() == 21);
    CHECK(time_ordinal(g->front().label) == time_ordinal("Q1 2020"));
    CHECK(time_ordinal(g->back().label) == time_ordinal("Q1 2025"));
    CHECK(t.column("establishments") != nullptr);
}

TEST_CASE("registry listing")
{
    TempDir empty("empty");
    CHECK(registry_list(empty.path).empty());

    TempDir root("reg");
    write(root.path / "datasets" / "zeta" / "manifest.json", manifest("b-set"));
    write(root.path / "datasets" / "zeta" / "d.csv", "k,v\nR01,1\n");
    write(root.path / "datasets" / "alpha" / "manifest.json", manifest("a-set"));
    write(root.path / "datasets" / "alpha" / "d.csv", "k,v\nR01,2\n");
    auto list = registry_list(root.path);
    REQUIRE(list.size() == 2);
    CHECK(list[0].id == "a-set");
    CHECK(list[1].id == "b-set");
    CHECK(list[0].ok());

    write(root.path / "datasets" / "beta" / "manifest.json", manifest("a-set"));
    write(root.path / "datasets" / "broken" / "manifest.json", "{ nope");
    list = registry_list(root.path);
    REQUIRE(list.size() == 4);
    int dup = 0, broken = 0;
    for (const auto& m : list) {
        if (m.error.find("duplicate dataset id") != std::string::npos) {
            ++dup;
            CHECK(m.directory.filename() == "beta");
        }
        if (m.id == "broken")
            broken += !m.ok();
    }
    CHECK(dup == 1);
    CHECK(broken == 1);
    for (std::size_t i = 1; i < list.size(); ++i)
        CHECK(list[i - 1].id <= list[i].id);

    auto missing = read_manifest(root.path / "datasets" / "alpha");
    missing.sources[0].file = "gone.csv";
    CHECK_THROWS_AS(load_dataset(missing), InputError);
}

TEST_CASE("canonical csv round-trip")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::string> keys;
        std::map<std::string, std::vector<double>> cols;
        for (int i = 0; i < 12; ++i) {
            keys.push_back("K" + std::to_string(i) + (i % 3 ? "" : ",\"q\""));
            for (const char* c : {"alpha", "beta", "ts@2020 Q1", "ts@2020 Q2"})
                cols[c].push_back(i == trial ? kMissing : u(rng) / (1 + i));
        }
        const DataTable t("key", keys, cols, {{"ts", {{"2020 Q1", "ts@2020 Q1"}, {"2020 Q2", "ts@2020 Q2"}}}});
        const auto text = write_canonical_csv(t);
        CHECK(read_canonical_csv(text) == t);
        CHECK(write_canonical_csv(read_canonical_csv(text)) == text);
    }
}
