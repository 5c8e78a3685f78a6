#include "micromap/spec_json.hpp"

#include <set>

namespace micromap {

using nlohmann::json;

namespace {

void check_fields(const json& j, const std::string& where, std::initializer_list<const char*> known)
{
    if (!j.is_object())
        throw InputError(where + " must be an object");
    const std::set<std::string_view> allowed(known.begin(), known.end());
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key))
            throw InputError("unknown field " + key + " in " + where);
}

template <class T>
T get(const json& j, const char* key, const std::string& where, T fallback)
{
    if (!j.contains(key) || j[key].is_null())
        return fallback;
    try {
        return j[key].get<T>();
    } catch (const json::exception&) {
        throw InputError("field " + std::string(key) + " in " + where + " has the wrong type");
    }
}

template <class E>
E enum_field(const json& j, const char* key, const std::string& where, E fallback,
             std::initializer_list<std::pair<const char*, E>> names)
{
    if (!j.contains(key))
        return fallback;
    const auto s = get<std::string>(j, key, where, "");
    for (const auto& [n, v] : names)
        if (s == n)
            return v;
    throw InputError("unknown " + std::string(key) + " \"" + s + "\" in " + where);
}

SortSpec sort_from_json(const json& j)
{
    SortSpec s;
    if (j.is_string()) {
        s.column = j.get<std::string>();
        return s;
    }
    check_fields(j, "sort", {"kind", "column", "component", "columns", "x", "y", "span", "robust_iters"});
    s.kind = enum_field(j, "kind", "sort", SortSpec::Kind::column,
                        {{"column", SortSpec::Kind::column}, {"pca", SortSpec::Kind::pca},
                         {"lowess_residual", SortSpec::Kind::lowess_residual}});
    s.column = get<std::string>(j, "column", "sort", "");
    s.component = get<int>(j, "component", "sort", 1);
    s.columns = get<std::vector<std::string>>(j, "columns", "sort", {});
    s.x = get<std::string>(j, "x", "sort", "");
    s.y = get<std::string>(j, "y", "sort", "");
    s.span = get<double>(j, "span", "sort", 2.0 / 3.0);
    s.robust_iters = get<int>(j, "robust_iters", "sort", 3);
    return s;
}

json sort_to_json(const SortSpec& s)
{
    switch (s.kind) {
    case SortSpec::Kind::column: return {{"kind", "column"}, {"column", s.column}};
    case SortSpec::Kind::pca: return {{"kind", "pca"}, {"component", s.component}, {"columns", s.columns}};
    case SortSpec::Kind::lowess_residual:
        return {{"kind", "lowess_residual"}, {"x", s.x}, {"y", s.y}, {"span", s.span}, {"robust_iters", s.robust_iters}};
    }
    return {};
}

LineStyle line_style(const json& j, const std::string& where)
{
    return enum_field(j, "style", where, LineStyle::solid, {{"solid", LineStyle::solid}, {"dashed", LineStyle::dashed}});
}

ColumnSpec column_from_json(const json& j, std::size_t index)
{
    const std::string where = "columns[" + std::to_string(index) + "]";
    check_fields(j, where, {"glyph", "title", "bindings", "reference_values", "options"});
    ColumnSpec c;
    const auto glyph_name = get<std::string>(j, "glyph", where, "");
    const auto glyph = glyph_from_string(glyph_name);
    if (!glyph)
        throw InputError("unknown glyph \"" + glyph_name + "\" in " + where);
    c.glyph = *glyph;
    c.title = get<std::string>(j, "title", where, "");

    if (j.contains("bindings")) {
        const json& b = j["bindings"];
        if (!b.is_object())
            throw InputError("bindings in " + where + " must be an object");
        for (const auto& [role, v] : b.items()) {
            if (v.is_string())
                c.bindings[role] = {v.get<std::string>()};
            else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_string(); }))
                c.bindings[role] = v.get<std::vector<std::string>>();
            else
                throw InputError("binding " + role + " in " + where + " must be a string or a list of strings");
        }
    }

    if (j.contains("reference_values")) {
        const json& refs = j["reference_values"];
        if (!refs.is_array())
            throw InputError("reference_values in " + where + " must be a list");
        for (const auto& r : refs) {
            ReferenceValue rv;
            if (r.is_number()) {
                rv.value = r.get<double>();
            } else {
                check_fields(r, where + " reference", {"value", "label", "style"});
                if (!r.contains("value") || !r["value"].is_number())
                    throw InputError("reference value in " + where + " must be a number");
                rv.value = r["value"].get<double>();
                rv.label = get<std::string>(r, "label", where, "");
                rv.style = line_style(r, where);
            }
            c.reference_values.push_back(std::move(rv));
        }
    }

    if (j.contains("options")) {
        const json& o = j["options"];
        const std::string ow = where + " options";
        check_fields(o, ow, {"lowess_span", "robust_iters", "show_identity_line", "ci_level", "change_lag", "range", "weight"});
        if (o.contains("lowess_span") && !o["lowess_span"].is_null())
            c.options.lowess_span = get<double>(o, "lowess_span", ow, 2.0 / 3.0);
        c.options.robust_iters = get<int>(o, "robust_iters", ow, 3);
        c.options.show_identity_line = get<bool>(o, "show_identity_line", ow, true);
        c.options.ci_level = get<double>(o, "ci_level", ow, 0.90);
        c.options.change_lag = get<int>(o, "change_lag", ow, 0);
        c.options.range = get<bool>(o, "range", ow, false);
        c.options.weight = get<double>(o, "weight", ow, 1.0);
    }
    return c;
}

json column_to_json(const ColumnSpec& c)
{
    json bindings = json::object();
    for (const auto& [role, names] : c.bindings)
        bindings[role] = names.size() == 1 && role != "segments" ? json(names.front()) : json(names);
    json refs = json::array();
    for (const auto& r : c.reference_values)
        refs.push_back({{"value", r.value}, {"label", r.label}, {"style", r.style == LineStyle::dashed ? "dashed" : "solid"}});
    json opts = {{"robust_iters", c.options.robust_iters},
                 {"show_identity_line", c.options.show_identity_line},
                 {"ci_level", c.options.ci_level},
                 {"change_lag", c.options.change_lag},
                 {"range", c.options.range},
                 {"weight", c.options.weight}};
    opts["lowess_span"] = c.options.lowess_span ? json(*c.options.lowess_span) : json(nullptr);
    return {{"glyph", std::string(to_string(c.glyph))},
            {"title", c.title},
            {"bindings", bindings},
            {"reference_values", refs},
            {"options", opts}};
}

}  // namespace

PlotSpec spec_from_json(const json& j)
{
    check_fields(j, "spec",
                 {"sort", "direction", "columns", "shading", "title", "subtitle", "drop_missing_sort", "palette", "page"});
    PlotSpec s;
    if (!j.contains("sort"))
        throw InputError("spec has no sort binding");
    s.sort = sort_from_json(j["sort"]);
    s.direction = enum_field(j, "direction", "spec", SortDirection::descending,
                             {{"descending", SortDirection::descending}, {"ascending", SortDirection::ascending}});
    s.shading = enum_field(j, "shading", "spec", ShadingMode::current_group,
                           {{"current_group", ShadingMode::current_group}, {"cumulative", ShadingMode::cumulative}});
    s.title = get<std::string>(j, "title", "spec", "");
    s.subtitle = get<std::string>(j, "subtitle", "spec", "");
    s.drop_missing_sort = get<bool>(j, "drop_missing_sort", "spec", false);

    if (j.contains("columns")) {
        if (!j["columns"].is_array())
            throw InputError("columns must be a list");
        for (std::size_t i = 0; i < j["columns"].size(); ++i)
            s.columns.push_back(column_from_json(j["columns"][i], i));
    }
    if (j.contains("palette")) {
        const json& p = j["palette"];
        check_fields(p, "palette", {"group", "median", "neutral", "prior", "reference"});
        if (p.contains("group")) {
            const auto g = get<std::vector<std::string>>(p, "group", "palette", {});
            if (g.size() != s.palette.group.size())
                throw InputError("palette.group needs exactly 5 colors");
            std::copy(g.begin(), g.end(), s.palette.group.begin());
        }
        s.palette.median = get<std::string>(p, "median", "palette", s.palette.median);
        s.palette.neutral = get<std::string>(p, "neutral", "palette", s.palette.neutral);
        s.palette.prior = get<std::string>(p, "prior", "palette", s.palette.prior);
        s.palette.reference = get<std::string>(p, "reference", "palette", s.palette.reference);
    }
    if (j.contains("page")) {
        const json& p = j["page"];
        check_fields(p, "page", {"width", "row_height", "gutter", "margin", "map_width", "label_width_cap", "font_size"});
        PageOptions d;
        s.page.width = get<double>(p, "width", "page", d.width);
        s.page.row_height = get<double>(p, "row_height", "page", d.row_height);
        s.page.gutter = get<double>(p, "gutter", "page", d.gutter);
        s.page.margin = get<double>(p, "margin", "page", d.margin);
        s.page.map_width = get<double>(p, "map_width", "page", d.map_width);
        s.page.label_width_cap = get<double>(p, "label_width_cap", "page", d.label_width_cap);
        s.page.font_size = get<double>(p, "font_size", "page", d.font_size);
    }
    return s;
}

PlotSpec parse_spec(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed spec JSON: ") + e.what());
    }
    return spec_from_json(j);
}

json spec_to_json(const PlotSpec& s)
{
    json columns = json::array();
    for (const auto& c : s.columns)
        columns.push_back(column_to_json(c));
    return {{"sort", sort_to_json(s.sort)},
            {"direction", s.direction == SortDirection::ascending ? "ascending" : "descending"},
            {"columns", columns},
            {"shading", s.shading == ShadingMode::cumulative ? "cumulative" : "current_group"},
            {"title", s.title},
            {"subtitle", s.subtitle},
            {"drop_missing_sort", s.drop_missing_sort},
            {"palette",
             {{"group", s.palette.group},
              {"median", s.palette.median},
              {"neutral", s.palette.neutral},
              {"prior", s.palette.prior},
              {"reference", s.palette.reference}}},
            {"page",
             {{"width", s.page.width},
              {"row_height", s.page.row_height},
              {"gutter", s.page.gutter},
              {"margin", s.page.margin},
              {"map_width", s.page.map_width},
              {"label_width_cap", s.page.label_width_cap},
              {"font_size", s.page.font_size}}}};
}

RenderRequest request_from_json(const json& j)
{
    if (j.is_object() && j.contains("spec")) {
        check_fields(j, "request", {"dataset", "atlas", "spec", "description"});
        return {get<std::string>(j, "dataset", "request", ""), get<std::string>(j, "atlas", "request", ""),
                spec_from_json(j["spec"])};
    }
    return {"", "", spec_from_json(j)};
}

RenderRequest parse_request(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    return request_from_json(j);
}

json request_to_json(const RenderRequest& r)
{
    return {{"dataset", r.dataset}, {"atlas", r.atlas}, {"spec", spec_to_json(r.spec)}};
}

}  // namespace micromap
