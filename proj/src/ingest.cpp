#include "micromap/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace micromap {

using nlohmann::json;
namespace fs = std::filesystem;

// ─── CSV ────────────────────────────────────────────────────────────────────

std::vector<std::vector<std::string>> parse_csv(std::string_view text)
{
    if (text.starts_with("\xEF\xBB\xBF"))
        text.remove_prefix(3);

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t quote_line = 0;

    const auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    const auto end_record = [&] {
        end_field();
        if (!(record.size() == 1 && record[0].empty()))
            records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n')
                    ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field_started) {
                quoted = true;
                field_started = true;
                quote_line = line;
            } else {
                field += c;
            }
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            [[fallthrough]];
        case '\n':
            end_record();
            ++line;
            break;
        default:
            field += c;
            field_started = true;
        }
    }
    if (quoted)
        throw InputError("unterminated quoted field starting on line " + std::to_string(quote_line));
    if (field_started || !record.empty())
        end_record();
    return records;
}

std::optional<double> parse_number(std::string_view cell)
{
    std::string s;
    std::string_view t = cell;
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t'))
        t.remove_prefix(1);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t'))
        t.remove_suffix(1);
    if (!t.empty() && t.back() == '%')
        t.remove_suffix(1);
    bool negative = false;
    if (!t.empty() && (t.front() == '-' || t.front() == '+')) {
        negative = t.front() == '-';
        t.remove_prefix(1);
    }
    if (!t.empty() && t.front() == '$')
        t.remove_prefix(1);
    for (char c : t)
        if (c != ',')
            s += c;
    if (s.empty() || s.front() == '-' || s.front() == '+')
        return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return negative ? -v : v;
}

// ─── Adapters ───────────────────────────────────────────────────────────────

void check_adapter(const AdapterConfig& a)
{
    if (trim(a.key_column).empty())
        throw InputError("adapter has no key column");
    if (a.columns.empty() && a.wide_time.empty())
        throw InputError("adapter maps no columns");
    if (!a.wide_time.empty() && a.long_time)
        throw InputError("adapter sets both wide and long time specs");
    for (const auto& w : a.wide_time)
        if (w.pattern.find("{label}") == std::string::npos)
            throw InputError("wide time pattern " + w.pattern + " has no {label} placeholder");
}

AdapterConfig adapter_from_json(const json& j)
{
    try {
        AdapterConfig a;
        a.key_column = j.at("key_column").get<std::string>();
        for (const auto& c : j.value("columns", json::array()))
            a.columns.push_back({c.at("source").get<std::string>(), c.value("name", c.at("source").get<std::string>()),
                                 c.value("unit", "")});
        if (j.contains("missing_markers"))
            a.missing_markers = j["missing_markers"].get<std::vector<std::string>>();
        for (const auto& w : j.value("wide_time", json::array()))
            a.wide_time.push_back({w.at("group").get<std::string>(), w.at("pattern").get<std::string>()});
        if (j.contains("long_time"))
            a.long_time = LongTimeSpec{j["long_time"].at("time_column").get<std::string>()};
        check_adapter(a);
        return a;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed adapter: ") + e.what());
    }
}

namespace {

struct Header {
    std::unordered_map<std::string, std::size_t> index;

    explicit Header(const std::vector<std::string>& names)
    {
        for (std::size_t i = 0; i < names.size(); ++i)
            index.emplace(trim(names[i]), i);
    }
    std::size_t at(const std::string& name) const
    {
        const auto it = index.find(name);
        if (it == index.end())
            throw InputError("missing mapped column " + name);
        return it->second;
    }
};

double cell_value(const std::vector<std::string>& record, std::size_t col, std::size_t row, const std::string& column,
                  const std::vector<std::string>& missing)
{
    const std::string cell = col < record.size() ? trim(record[col]) : std::string();
    if (std::find(missing.begin(), missing.end(), cell) != missing.end())
        return kMissing;
    const auto v = parse_number(cell);
    if (!v)
        throw CellError("unparseable value \"" + cell + "\" at row " + std::to_string(row) + ", column " + column, row,
                        column);
    return *v;
}

std::optional<std::string> match_pattern(const std::string& header, const std::string& pattern)
{
    const auto pos = pattern.find("{label}");
    const std::string prefix = pattern.substr(0, pos);
    const std::string suffix = pattern.substr(pos + 7);
    if (header.size() <= prefix.size() + suffix.size() || !header.starts_with(prefix) || !header.ends_with(suffix))
        return std::nullopt;
    return header.substr(prefix.size(), header.size() - prefix.size() - suffix.size());
}

}  // namespace

DataTable load_csv_text(std::string_view text, const AdapterConfig& adapter)
{
    check_adapter(adapter);
    const auto records = parse_csv(text);
    if (records.empty())
        throw InputError("CSV has no header row");
    const Header header(records[0]);
    const std::size_t key_col = header.at(adapter.key_column);
    const auto& missing = adapter.missing_markers;

    std::vector<std::string> keys;
    std::unordered_map<std::string, std::size_t> key_index;
    std::map<std::string, std::vector<double>> columns;
    std::map<std::string, std::vector<TimePoint>> groups;

    if (adapter.long_time) {
        const std::size_t time_col = header.at(adapter.long_time->time_column);
        std::vector<std::pair<std::string, std::size_t>> mapped;
        for (const auto& m : adapter.columns)
            mapped.emplace_back(m.name, header.at(m.source));

        // Pass 1: keys and labels.
        std::set<std::pair<long, std::string>> labels;
        std::set<std::pair<std::string, std::string>> seen;
        for (std::size_t r = 1; r < records.size(); ++r) {
            const std::string key = trim(key_col < records[r].size() ? records[r][key_col] : "");
            const std::string label = trim(time_col < records[r].size() ? records[r][time_col] : "");
            if (key.empty())
                throw CellError("empty key at row " + std::to_string(r), r, adapter.key_column);
            const auto ord = time_ordinal(label);
            if (!ord)
                throw CellError("unparseable time label \"" + label + "\" at row " + std::to_string(r), r,
                                adapter.long_time->time_column);
            if (!seen.emplace(key, label).second)
                throw InputError("duplicate key " + key + " for time " + label);
            labels.emplace(*ord, label);
            if (key_index.emplace(key, keys.size()).second)
                keys.push_back(key);
        }
        std::map<long, std::string> ordinal_label;
        for (const auto& [ord, label] : labels)
            if (!ordinal_label.emplace(ord, label).second)
                throw InputError("time labels " + ordinal_label[ord] + " and " + label + " name the same period");
        std::unordered_map<std::string, std::size_t> label_pos;
        std::vector<std::string> ordered;
        for (const auto& [ord, label] : ordinal_label) {
            label_pos[label] = ordered.size();
            ordered.push_back(label);
        }

        // Pass 2: values.
        std::map<std::string, std::vector<std::vector<double>>> grid;
        for (const auto& [name, _] : mapped)
            grid[name].assign(ordered.size(), std::vector<double>(keys.size(), kMissing));
        for (std::size_t r = 1; r < records.size(); ++r) {
            const std::size_t k = key_index.at(trim(records[r][key_col]));
            const std::size_t t = label_pos.at(trim(records[r][time_col]));
            for (std::size_t m = 0; m < mapped.size(); ++m)
                grid[mapped[m].first][t][k] =
                    cell_value(records[r], mapped[m].second, r, adapter.columns[m].source, missing);
        }
        for (auto& [name, by_time] : grid) {
            auto& points = groups[name];
            for (std::size_t t = 0; t < ordered.size(); ++t) {
                const std::string col = time_column_name(name, ordered[t]);
                points.push_back({ordered[t], col});
                columns[col] = std::move(by_time[t]);
            }
        }
    } else {
        for (std::size_t r = 1; r < records.size(); ++r) {
            const std::string key = trim(key_col < records[r].size() ? records[r][key_col] : "");
            if (key.empty())
                throw CellError("empty key at row " + std::to_string(r), r, adapter.key_column);
            if (!key_index.emplace(key, keys.size()).second)
                throw InputError("duplicate key " + key + " at row " + std::to_string(r));
            keys.push_back(key);
        }
        const auto read_column = [&](std::size_t col, const std::string& source) {
            std::vector<double> values;
            for (std::size_t r = 1; r < records.size(); ++r)
                values.push_back(cell_value(records[r], col, r, source, missing));
            return values;
        };
        for (const auto& m : adapter.columns) {
            if (columns.contains(m.name))
                throw InputError("column " + m.name + " mapped twice");
            columns[m.name] = read_column(header.at(m.source), m.source);
        }
        for (const auto& w : adapter.wide_time) {
            std::vector<std::pair<long, std::pair<std::string, std::size_t>>> found;
            for (std::size_t c = 0; c < records[0].size(); ++c) {
                const std::string name = trim(records[0][c]);
                const auto label = match_pattern(name, w.pattern);
                if (!label)
                    continue;
                const auto ord = time_ordinal(*label);
                if (!ord)
                    throw InputError("column " + name + " matches " + w.pattern + " but " + *label + " is not a time label");
                found.push_back({*ord, {*label, c}});
            }
            if (found.empty())
                throw InputError("no column matches wide time pattern " + w.pattern);
            std::sort(found.begin(), found.end());
            auto& points = groups[w.group];
            for (const auto& [ord, lc] : found) {
                const std::string col = time_column_name(w.group, lc.first);
                points.push_back({lc.first, col});
                columns[col] = read_column(lc.second, trim(records[0][lc.second]));
            }
        }
    }

    try {
        return DataTable(adapter.key_column, std::move(keys), std::move(columns), std::move(groups));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

namespace {

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

DataTable load_csv_dataset(const fs::path& file, const AdapterConfig& adapter)
{
    const std::string text = read_file(file);
    try {
        return load_csv_text(text, adapter);
    } catch (const CellError& e) {
        throw CellError(file.filename().string() + ": " + e.what(), e.row(), e.column());
    } catch (const InputError& e) {
        throw InputError(file.filename().string() + ": " + e.what());
    }
}

// ─── Registry ───────────────────────────────────────────────────────────────

DatasetManifest manifest_from_json(const json& j, fs::path directory)
{
    DatasetManifest m;
    m.directory = std::move(directory);
    try {
        m.id = j.at("id").get<std::string>();
        if (trim(m.id).empty())
            throw InputError("manifest id is empty");
        m.title = j.value("title", m.id);
        m.atlas = j.at("atlas").get<std::string>();
        if (j.contains("provenance")) {
            const json& p = j["provenance"];
            m.provenance = {p.value("url", ""), p.value("vintage", ""), p.value("note", "")};
        }
        if (j.contains("national"))
            m.national = j["national"].get<std::map<std::string, double>>();
        const json& sources = j.at("sources");
        if (!sources.is_array() || sources.empty())
            throw InputError("manifest lists no sources");
        for (const auto& s : sources)
            m.sources.push_back({s.at("file").get<std::string>(), adapter_from_json(s.at("adapter"))});
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

DatasetManifest read_manifest(const fs::path& directory)
{
    const std::string text = read_file(directory / "manifest.json");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed manifest: ") + e.what());
    }
    return manifest_from_json(j, directory);
}

std::vector<DatasetManifest> registry_list(const fs::path& root)
{
    std::vector<DatasetManifest> out;
    const fs::path dir = root / "datasets";
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        return out;

    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(dir, ec))
        if (entry.is_directory() && fs::exists(entry.path() / "manifest.json"))
            dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());

    for (const auto& d : dirs) {
        DatasetManifest m;
        try {
            m = read_manifest(d);
        } catch (const InputError& e) {
            m = {};
            m.id = d.filename().string();
            m.directory = d;
            m.error = e.what();
        }
        out.push_back(std::move(m));
    }
    // Directory order decides which of two equal ids is "second".
    std::set<std::string> seen;
    for (auto& m : out)
        if (!seen.insert(m.id).second && m.ok())
            m.error = "duplicate dataset id " + m.id + " in " + m.directory.filename().string();
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

DataTable load_dataset(const DatasetManifest& manifest)
{
    if (!manifest.ok())
        throw InputError("dataset " + manifest.id + ": " + manifest.error);

    std::string key_column;
    std::vector<std::string> keys;
    std::unordered_map<std::string, std::size_t> key_index;
    std::vector<DataTable> parts;
    for (const auto& src : manifest.sources) {
        const fs::path file = manifest.directory / src.file;
        if (!fs::exists(file))
            throw InputError("dataset " + manifest.id + ": missing file " + src.file);
        parts.push_back(load_csv_dataset(file, src.adapter));
        if (key_column.empty())
            key_column = src.adapter.key_column;
        for (const auto& k : parts.back().keys())
            if (key_index.emplace(k, keys.size()).second)
                keys.push_back(k);
    }

    std::map<std::string, std::vector<double>> columns;
    std::map<std::string, std::vector<TimePoint>> groups;
    for (const auto& part : parts) {
        for (const auto& [name, values] : part.columns()) {
            if (columns.contains(name))
                throw InputError("dataset " + manifest.id + ": column " + name + " defined by two sources");
            std::vector<double> merged(keys.size(), kMissing);
            for (std::size_t r = 0; r < values.size(); ++r)
                merged[key_index.at(part.keys()[r])] = values[r];
            columns[name] = std::move(merged);
        }
        for (const auto& [name, points] : part.time_groups()) {
            if (groups.contains(name))
                throw InputError("dataset " + manifest.id + ": time group " + name + " defined by two sources");
            groups[name] = points;
        }
    }
    try {
        return DataTable(key_column, std::move(keys), std::move(columns), std::move(groups));
    } catch (const std::invalid_argument& e) {
        throw InputError("dataset " + manifest.id + ": " + e.what());
    }
}

// ─── Canonical CSV ──────────────────────────────────────────────────────────

namespace {

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string shortest(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string write_canonical_csv(const DataTable& table)
{
    std::vector<std::string> names;
    for (const auto& [name, _] : table.columns())
        names.push_back(name);

    std::string out = csv_field(table.key_column());
    for (const auto& n : names)
        out += "," + csv_field(n);
    out += "\n";
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        out += csv_field(table.keys()[r]);
        for (const auto& n : names) {
            out += ",";
            const double v = (*table.column(n))[r];
            if (!is_missing(v))
                out += shortest(v);
        }
        out += "\n";
    }
    return out;
}

DataTable read_canonical_csv(std::string_view text)
{
    const auto records = parse_csv(text);
    if (records.empty() || records[0].empty())
        throw InputError("canonical CSV has no header");
    std::vector<std::string> keys;
    std::map<std::string, std::vector<double>> columns;
    std::map<std::string, std::vector<TimePoint>> groups;
    for (std::size_t r = 1; r < records.size(); ++r)
        keys.push_back(records[r][0]);
    for (std::size_t c = 1; c < records[0].size(); ++c) {
        const std::string& name = records[0][c];
        auto& values = columns[name];
        for (std::size_t r = 1; r < records.size(); ++r)
            values.push_back(cell_value(records[r], c, r, name, {""}));
        const auto at = name.find('@');
        if (at != std::string::npos)
            groups[name.substr(0, at)].push_back({name.substr(at + 1), name});
    }
    for (auto& [_, points] : groups)
        std::stable_sort(points.begin(), points.end(), [](const TimePoint& a, const TimePoint& b) {
            return time_ordinal(a.label).value_or(0) < time_ordinal(b.label).value_or(0);
        });
    try {
        return DataTable(records[0][0], std::move(keys), std::move(columns), std::move(groups));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

}  // namespace micromap
