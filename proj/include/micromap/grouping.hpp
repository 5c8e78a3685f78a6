#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "micromap/model.hpp"

namespace micromap {

/// Sorted regions split into bands of at most five, with a singleton median band for odd counts.
struct PerceptualGrouping {
    std::vector<std::string> order;
    std::vector<std::vector<std::string>> groups;
    std::optional<std::size_t> median_group_index;

    std::size_t group_of(std::string_view region_id) const;
    friend bool operator==(const PerceptualGrouping&, const PerceptualGrouping&) = default;
};

/// Stable order by sort value. Descending breaks ties by ascending region id;
/// ascending is the exact reverse of descending.
std::vector<std::string> sort_rows(std::span<const std::string> ids, std::span<const double> values, SortDirection direction);
std::vector<std::string> sort_rows(const BoundFigureModel& model, SortDirection direction);
std::vector<std::string> sort_rows(const BoundFigureModel& model);

/// Group sizes for n sorted regions, listed top to bottom.
///
/// Odd n puts the median alone in the middle. Each half is cut into ceil(half / 5) groups
/// whose sizes differ by at most one, larger groups toward the extremes, mirrored about
/// the middle. n = 51 gives 5,5,5,5,5,1,5,5,5,5,5. Throws std::invalid_argument for n = 0.
std::vector<int> build_groups(std::size_t n);

/// Splits a sorted order according to build_groups.
PerceptualGrouping make_grouping(std::vector<std::string> order);

struct RegionColors {
    std::string fill;
    std::string outline;
    int palette_index = -1;  // -1 for the median accent
    friend bool operator==(const RegionColors&, const RegionColors&) = default;
};

struct ColorAssignment {
    Palette palette;
    std::map<std::string, RegionColors> by_region;

    const RegionColors& at(std::string_view region_id) const;
};

/// The i-th row of every group gets palette.group[i]; the median singleton gets the accent.
ColorAssignment assign_colors(const PerceptualGrouping& grouping, const Palette& palette = {});

}  // namespace micromap
