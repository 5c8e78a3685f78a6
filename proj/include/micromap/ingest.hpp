#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "micromap/model.hpp"

namespace micromap {

// ─── CSV ────────────────────────────────────────────────────────────────────

/// RFC 4180 records: quoted fields, doubled quotes, CRLF or LF, optional UTF-8 BOM.
/// Throws InputError for an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Numeric cell: thousands separators, a leading "$" and a trailing "%" are stripped.
/// Returns nullopt when the text is not a number.
std::optional<double> parse_number(std::string_view cell);

/// A cell that failed to parse, with 1-based data row and the source column name.
class CellError : public InputError {
public:
    CellError(const std::string& message, std::size_t row, std::string column)
        : InputError(message), row_(row), column_(std::move(column)) {}
    std::size_t row() const { return row_; }
    const std::string& column() const { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

// ─── Adapters ───────────────────────────────────────────────────────────────

struct ColumnMapping {
    std::string source;
    std::string name;
    std::string unit;
};

/// Columns matching `pattern` (with "{label}" standing for the time label) become one time group.
struct WideTimeSpec {
    std::string group;
    std::string pattern;
};

/// One row per (key, time); each mapped column becomes a time group named after it.
struct LongTimeSpec {
    std::string time_column;
};

struct AdapterConfig {
    std::string key_column;
    std::vector<ColumnMapping> columns;
    std::vector<std::string> missing_markers = {""};
    std::vector<WideTimeSpec> wide_time;
    std::optional<LongTimeSpec> long_time;
};

/// Throws InputError when the key is unnamed, nothing is mapped, or both time specs are set.
void check_adapter(const AdapterConfig& adapter);

AdapterConfig adapter_from_json(const nlohmann::json& j);

/// Throws CellError for unparseable cells, InputError for duplicate keys or missing columns.
DataTable load_csv_text(std::string_view text, const AdapterConfig& adapter);
DataTable load_csv_dataset(const std::filesystem::path& file, const AdapterConfig& adapter);

// ─── Registry ───────────────────────────────────────────────────────────────

struct Provenance {
    std::string url;
    std::string vintage;
    std::string note;
};

struct DatasetSource {
    std::string file;
    AdapterConfig adapter;
};

struct DatasetManifest {
    std::string id;
    std::string title;
    std::string atlas;
    Provenance provenance;
    std::map<std::string, double> national;
    std::vector<DatasetSource> sources;
    std::filesystem::path directory;
    std::string error;  // non-empty: manifest unusable

    bool ok() const { return error.empty(); }
};

DatasetManifest manifest_from_json(const nlohmann::json& j, std::filesystem::path directory);
DatasetManifest read_manifest(const std::filesystem::path& directory);

/// Manifests under root/datasets/*/manifest.json ordered by id. A malformed manifest, or a
/// repeated id, yields an entry whose `error` explains the problem.
std::vector<DatasetManifest> registry_list(const std::filesystem::path& root);

/// Loads every source and joins them on the key, in first-seen key order.
/// Throws InputError when a referenced file is missing or two sources define the same column.
DataTable load_dataset(const DatasetManifest& manifest);

// ─── Canonical CSV ──────────────────────────────────────────────────────────

/// Key column first, then columns in name order; time group columns are "group@label";
/// missing values are empty cells; numbers use the shortest round-trip form.
std::string write_canonical_csv(const DataTable& table);
DataTable read_canonical_csv(std::string_view text);

}  // namespace micromap
