#include "micromap/grouping.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace micromap {

std::size_t PerceptualGrouping::group_of(std::string_view region_id) const
{
    for (std::size_t g = 0; g < groups.size(); ++g)
        if (std::find(groups[g].begin(), groups[g].end(), region_id) != groups[g].end())
            return g;
    throw std::out_of_range("region " + std::string(region_id) + " is not grouped");
}

std::vector<std::string> sort_rows(std::span<const std::string> ids, std::span<const double> values, SortDirection direction)
{
    if (ids.size() != values.size())
        throw std::invalid_argument("sort_rows: ids and values differ in length");
    std::vector<std::size_t> idx(ids.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b])
            return values[a] > values[b];
        return ids[a] < ids[b];
    });
    if (direction == SortDirection::ascending)
        std::reverse(idx.begin(), idx.end());

    std::vector<std::string> out;
    out.reserve(idx.size());
    for (std::size_t i : idx)
        out.push_back(ids[i]);
    return out;
}

std::vector<std::string> sort_rows(const BoundFigureModel& model, SortDirection direction)
{
    for (std::size_t i = 0; i < model.sort_values.size(); ++i)
        if (is_missing(model.sort_values[i]))
            throw std::invalid_argument("sort value missing for region " + model.region_ids[i]);
    return sort_rows(model.region_ids, model.sort_values, direction);
}

std::vector<std::string> sort_rows(const BoundFigureModel& model) { return sort_rows(model, model.spec.direction); }

namespace {

// Outermost group first.
std::vector<int> split_half(std::size_t half)
{
    if (half == 0)
        return {};
    const std::size_t count = (half + 4) / 5;
    const std::size_t base = half / count;
    const std::size_t extra = half % count;
    std::vector<int> sizes;
    for (std::size_t g = 0; g < count; ++g)
        sizes.push_back(static_cast<int>(base + (g < extra ? 1 : 0)));
    return sizes;
}

}  // namespace

std::vector<int> build_groups(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("build_groups: need at least one region");
    const bool odd = n % 2 == 1;
    const auto top = split_half(odd ? (n - 1) / 2 : n / 2);

    std::vector<int> sizes(top.begin(), top.end());
    if (odd)
        sizes.push_back(1);
    sizes.insert(sizes.end(), top.rbegin(), top.rend());
    return sizes;
}

PerceptualGrouping make_grouping(std::vector<std::string> order)
{
    PerceptualGrouping g;
    const auto sizes = build_groups(order.size());
    std::size_t pos = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        const auto len = static_cast<std::size_t>(sizes[k]);
        g.groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(pos),
                              order.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    if (order.size() % 2 == 1)
        g.median_group_index = sizes.size() / 2;
    g.order = std::move(order);
    return g;
}

const RegionColors& ColorAssignment::at(std::string_view region_id) const
{
    const auto it = by_region.find(std::string(region_id));
    if (it == by_region.end())
        throw std::out_of_range("no color for region " + std::string(region_id));
    return it->second;
}

ColorAssignment assign_colors(const PerceptualGrouping& grouping, const Palette& palette)
{
    ColorAssignment out;
    out.palette = palette;
    for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
        const bool median = grouping.median_group_index == g;
        const auto& members = grouping.groups[g];
        for (std::size_t i = 0; i < members.size(); ++i) {
            RegionColors c;
            if (median) {
                c.fill = palette.median;
                c.palette_index = -1;
            } else {
                c.fill = palette.group[i % palette.group.size()];
                c.palette_index = static_cast<int>(i % palette.group.size());
            }
            c.outline = "#000000";
            out.by_region[members[i]] = c;
        }
    }
    return out;
}

}  // namespace micromap
