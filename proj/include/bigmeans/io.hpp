#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bigmeans/core.hpp"

namespace bigmeans {
namespace io {

enum class Format { csv, whitespace, tsplib };

Format parse_format(const std::string& name);  // "csv" | "whitespace" | "tsplib"
std::string format_name(Format format);

struct DatasetSpec {
    std::string path;
    Format format = Format::csv;
    bool has_header = false;
    bool normalize = false;
    // 0-based indices into the parsed fields; absent means all columns.
    std::optional<std::vector<std::size_t>> columns;
};

// Parses the file per spec: csv splits on commas, whitespace on runs of
// spaces/tabs, tsplib reads "index x y" lines between NODE_COORD_SECTION and
// EOF (index column dropped). Row order is preserved; no row is ever silently
// skipped. Applies column selection, then min-max normalization when
// spec.normalize is set. ParseError carries the 1-based line and field
// numbers of the offending cell.
Dataset load(const DatasetSpec& spec);

// Per column: (x - min) / (max - min); constant columns map to 0.0 so the
// output stays finite.
Dataset min_max_normalize(const Dataset& data);

// CSV with 17 significant digits per value and \n line endings; reloading
// reproduces the matrix bit-exactly.
void save_csv(const Dataset& data, const std::string& path);
std::string to_csv(const Dataset& data);

struct RegistryEntry {
    DatasetSpec spec;
    std::map<std::size_t, double> f_best;  // best-known objective per k
};

// JSON registry mapping dataset names to load specs and best-known objective
// values; relative paths resolve against the registry file's directory.
std::map<std::string, RegistryEntry> load_registry(const std::string& path);

}  // namespace io
}  // namespace bigmeans
