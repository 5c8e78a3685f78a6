#pragma once

// Small in-memory atlases, tables and specs shared by the unit tests.

#include <map>
#include <string>
#include <vector>

#include "micromap/model.hpp"

namespace fixture {

inline micromap::Ring square(double x, double y, double s = 1.0)
{
    return {{x, y}, {x + s, y}, {x + s, y + s}, {x, y + s}};
}

/// Regions "R01".."Rnn" laid out on a grid of unit squares.
inline micromap::Atlas grid_atlas(std::size_t n, std::string id = "grid")
{
    std::vector<micromap::Region> regions;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string rid = (i + 1 < 10 ? "R0" : "R") + std::to_string(i + 1);
        regions.push_back({rid, "Region " + std::to_string(i + 1),
                           {square(static_cast<double>(i % 8) * 1.2, static_cast<double>(i / 8) * 1.2)}});
    }
    return micromap::Atlas(std::move(id), std::move(regions));
}

inline std::vector<std::string> grid_ids(std::size_t n)
{
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i)
        ids.push_back((i + 1 < 10 ? "R0" : "R") + std::to_string(i + 1));
    return ids;
}

/// Columns a = i, b = 2i + noise-free offset, c = (i * 7) % n, and a time group "ts" of 4 points.
inline micromap::DataTable grid_table(std::size_t n)
{
    std::map<std::string, std::vector<double>> cols;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = static_cast<double>(i);
        cols["a"].push_back(v + 1);
        cols["b"].push_back(2 * v + 3 + static_cast<double>((i * 5) % 3));
        cols["c"].push_back(static_cast<double>((i * 7) % n));
        cols["ts@2020"].push_back(v);
        cols["ts@2021"].push_back(v + 1);
        cols["ts@2022"].push_back(v + 3);
        cols["ts@2023"].push_back(v + 2);
    }
    std::map<std::string, std::vector<micromap::TimePoint>> groups = {
        {"ts", {{"2020", "ts@2020"}, {"2021", "ts@2021"}, {"2022", "ts@2022"}, {"2023", "ts@2023"}}}};
    return micromap::DataTable("id", grid_ids(n), std::move(cols), std::move(groups));
}

inline micromap::ColumnSpec column(micromap::GlyphKind kind, micromap::Bindings bindings, std::string title = {})
{
    micromap::ColumnSpec c;
    c.glyph = kind;
    c.bindings = std::move(bindings);
    c.title = std::move(title);
    return c;
}

inline micromap::PlotSpec dot_spec(const std::string& sort = "a", const std::string& value = "b")
{
    micromap::PlotSpec spec;
    spec.sort.column = sort;
    spec.columns.push_back(column(micromap::GlyphKind::dot, {{"value", {value}}}, "B"));
    return spec;
}

}  // namespace fixture
