#include "bigmeans/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace bigmeans {
namespace io {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return s.substr(b, e - b);
}

double parse_cell(const std::string& cell, std::size_t line, std::size_t column) {
    const std::string t = trim(cell);
    if (t.empty()) {
        throw ParseError("missing value", line, column);
    }
    const char* begin = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + t.size()) {
        throw ParseError("malformed numeric cell '" + t + "'", line, column);
    }
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::vector<std::string> split_whitespace(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (in >> field) {
        fields.push_back(field);
    }
    return fields;
}

Dataset from_rows(std::vector<std::vector<double>>& rows, std::size_t first_line) {
    if (rows.empty()) {
        throw ParseError("no data rows", first_line, 1);
    }
    const std::size_t n = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * n);
    for (const auto& row : rows) {
        values.insert(values.end(), row.begin(), row.end());
    }
    return Dataset(std::move(values), rows.size(), n);
}

Dataset load_delimited(const DatasetSpec& spec, bool csv) {
    std::ifstream in(spec.path);
    if (!in) {
        throw StateError("cannot open dataset file '" + spec.path + "'");
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected = 0;
    bool header_pending = spec.has_header;
    std::size_t first_data_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (header_pending) {
            header_pending = false;
            continue;
        }
        if (csv ? line.empty() : trim(line).empty()) {
            continue;  // blank lines are not rows
        }
        const std::vector<std::string> fields = csv ? split_csv(line) : split_whitespace(line);
        std::vector<double> parsed;
        parsed.reserve(fields.size());
        for (std::size_t f = 0; f < fields.size(); ++f) {
            parsed.push_back(parse_cell(fields[f], line_no, f + 1));
        }
        if (rows.empty()) {
            expected = parsed.size();
            first_data_line = line_no;
        } else if (parsed.size() != expected) {
            throw ParseError("ragged row: expected " + std::to_string(expected) + " fields, got " +
                                 std::to_string(parsed.size()),
                             line_no, parsed.size() + 1);
        }
        rows.push_back(std::move(parsed));
    }
    return from_rows(rows, first_data_line == 0 ? line_no + 1 : first_data_line);
}

Dataset load_tsplib(const DatasetSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) {
        throw StateError("cannot open dataset file '" + spec.path + "'");
    }
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> dimension;
    bool in_coords = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const std::string t = trim(line);
        if (!in_coords) {
            if (t == "NODE_COORD_SECTION") {
                in_coords = true;
                continue;
            }
            const std::size_t colon = t.find(':');
            if (colon != std::string::npos && trim(t.substr(0, colon)) == "DIMENSION") {
                dimension = static_cast<std::size_t>(
                    parse_cell(t.substr(colon + 1), line_no, 2));
            }
            continue;
        }
        if (t.empty()) {
            continue;
        }
        if (t == "EOF") {
            break;
        }
        const std::vector<std::string> fields = split_whitespace(t);
        if (fields.size() != 3) {
            throw ParseError("node line must be 'index x y'", line_no,
                             fields.size() < 3 ? fields.size() + 1 : 4);
        }
        parse_cell(fields[0], line_no, 1);  // index column: validated, then dropped
        rows.push_back({parse_cell(fields[1], line_no, 2), parse_cell(fields[2], line_no, 3)});
    }
    if (!in_coords) {
        throw ParseError("NODE_COORD_SECTION not found", line_no, 1);
    }
    if (dimension.has_value() && rows.size() != *dimension) {
        throw ParseError("DIMENSION says " + std::to_string(*dimension) + " nodes but " +
                             std::to_string(rows.size()) + " were read",
                         line_no, 1);
    }
    return from_rows(rows, line_no);
}

Dataset select_columns(const Dataset& data, const std::vector<std::size_t>& columns) {
    if (columns.empty()) {
        throw ConfigError("column selection must not be empty");
    }
    for (std::size_t c : columns) {
        if (c >= data.n()) {
            throw ConfigError("selected column " + std::to_string(c) + " does not exist (n=" +
                              std::to_string(data.n()) + ")");
        }
    }
    std::vector<double> values;
    values.reserve(data.m() * columns.size());
    for (std::size_t i = 0; i < data.m(); ++i) {
        for (std::size_t c : columns) {
            values.push_back(data.value(i, c));
        }
    }
    return Dataset(std::move(values), data.m(), columns.size());
}

}  // namespace

Format parse_format(const std::string& name) {
    if (name == "csv") {
        return Format::csv;
    }
    if (name == "whitespace") {
        return Format::whitespace;
    }
    if (name == "tsplib") {
        return Format::tsplib;
    }
    throw ConfigError("unknown dataset format '" + name + "'");
}

std::string format_name(Format format) {
    switch (format) {
        case Format::csv:
            return "csv";
        case Format::whitespace:
            return "whitespace";
        case Format::tsplib:
            return "tsplib";
    }
    return "csv";
}

Dataset load(const DatasetSpec& spec) {
    Dataset data = [&] {
        switch (spec.format) {
            case Format::csv:
                return load_delimited(spec, true);
            case Format::whitespace:
                return load_delimited(spec, false);
            case Format::tsplib:
                return load_tsplib(spec);
        }
        throw ConfigError("unknown dataset format");
    }();
    if (spec.columns.has_value()) {
        data = select_columns(data, *spec.columns);
    }
    if (spec.normalize) {
        data = min_max_normalize(data);
    }
    return data;
}

Dataset min_max_normalize(const Dataset& data) {
    const std::size_t m = data.m();
    const std::size_t n = data.n();
    std::vector<double> lo(n, std::numeric_limits<double>::infinity());
    std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t d = 0; d < n; ++d) {
            const double v = data.value(i, d);
            lo[d] = std::min(lo[d], v);
            hi[d] = std::max(hi[d], v);
        }
    }
    std::vector<double> values(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t d = 0; d < n; ++d) {
            const double range = hi[d] - lo[d];
            values[i * n + d] = range > 0.0 ? (data.value(i, d) - lo[d]) / range : 0.0;
        }
    }
    return Dataset(std::move(values), m, n);
}

std::string to_csv(const Dataset& data) {
    std::ostringstream out;
    char buf[64];
    for (std::size_t i = 0; i < data.m(); ++i) {
        for (std::size_t d = 0; d < data.n(); ++d) {
            std::snprintf(buf, sizeof(buf), "%.17g", data.value(i, d));
            if (d > 0) {
                out << ',';
            }
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw StateError("cannot open '" + path + "' for writing");
    }
    out << to_csv(data);
    if (!out) {
        throw StateError("failed writing '" + path + "'");
    }
}

std::map<std::string, RegistryEntry> load_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw StateError("cannot open registry '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("registry is not valid JSON: ") + e.what(), 1, 1);
    }
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    std::map<std::string, RegistryEntry> registry;
    if (!doc.contains("datasets") || !doc["datasets"].is_object()) {
        throw ParseError("registry must contain a 'datasets' object", 1, 1);
    }
    for (const auto& [name, entry] : doc["datasets"].items()) {
        RegistryEntry reg;
        const std::filesystem::path p = entry.at("path").get<std::string>();
        reg.spec.path = (p.is_absolute() ? p : base / p).string();
        reg.spec.format = parse_format(entry.at("format").get<std::string>());
        reg.spec.has_header = entry.value("has_header", false);
        reg.spec.normalize = entry.value("normalize", false);
        if (entry.contains("columns")) {
            reg.spec.columns = entry["columns"].get<std::vector<std::size_t>>();
        }
        if (entry.contains("f_best")) {
            for (const auto& [k_str, v] : entry["f_best"].items()) {
                reg.f_best[static_cast<std::size_t>(std::stoull(k_str))] = v.get<double>();
            }
        }
        registry[name] = reg;
    }
    return registry;
}

}  // namespace io
}  // namespace bigmeans
