#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "bigmeans/io.hpp"

using namespace bigmeans;
namespace fs = std::filesystem;

#ifndef BIGMEANS_DATA_DIR
#define BIGMEANS_DATA_DIR "data"
#endif

namespace {

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path(fs::temp_directory_path() / name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::error_code ec; fs::remove(path, ec); }
};

io::DatasetSpec spec_for(const fs::path& p, io::Format format, bool header = false) {
    io::DatasetSpec spec;
    spec.path = p.string();
    spec.format = format;
    spec.has_header = header;
    return spec;
}

}  // namespace

TEST_CASE("format names round-trip") {
    CHECK(io::parse_format("csv") == io::Format::csv);
    CHECK(io::parse_format("whitespace") == io::Format::whitespace);
    CHECK(io::parse_format("tsplib") == io::Format::tsplib);
    CHECK(io::format_name(io::Format::tsplib) == "tsplib");
    CHECK_THROWS_AS(io::parse_format("parquet"), ConfigError);
}

TEST_CASE("csv loads rows in order and skips blank lines") {
    TempFile f("io_basic.csv", "1.5,2.5\n\n3.5,4.5\n");
    Dataset d = io::load(spec_for(f.path, io::Format::csv));
    CHECK(d.m() == 2);
    CHECK(d.n() == 2);
    CHECK(d.value(0, 0) == 1.5);
    CHECK(d.value(1, 1) == 4.5);
}

TEST_CASE("csv header toggle drops exactly one line") {
    TempFile f("io_header.csv", "x,y\n1,2\n3,4\n");
    Dataset d = io::load(spec_for(f.path, io::Format::csv, true));
    CHECK(d.m() == 2);
    CHECK_THROWS_AS(io::load(spec_for(f.path, io::Format::csv, false)), ParseError);
}

TEST_CASE("parse errors carry one-based line and field positions") {
    TempFile f("io_bad.csv", "1,2\n3,oops\n");
    try {
        io::load(spec_for(f.path, io::Format::csv));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 2);
    }

    TempFile ragged("io_ragged.csv", "1,2\n3\n");
    CHECK_THROWS_AS(io::load(spec_for(ragged.path, io::Format::csv)), ParseError);

    TempFile empty("io_empty.csv", "\n\n");
    CHECK_THROWS_AS(io::load(spec_for(empty.path, io::Format::csv)), ParseError);

    CHECK_THROWS_AS(io::load(spec_for("no_such_file.csv", io::Format::csv)), StateError);
}

TEST_CASE("whitespace format splits on runs of spaces and tabs") {
    TempFile f("io_ws.txt", "  1.0\t2.0\n3.0   4.0\n");
    Dataset d = io::load(spec_for(f.path, io::Format::whitespace));
    CHECK(d.m() == 2);
    CHECK(d.value(1, 0) == 3.0);
}

TEST_CASE("node coordinate format reads the declared point block") {
    TempFile f("io_mini.tsp",
               "NAME : mini\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\n"
               "NODE_COORD_SECTION\n1 10.0 20.0\n2 30.0 40.0\n3 50.0 60.0\nEOF\n");
    Dataset d = io::load(spec_for(f.path, io::Format::tsplib));
    CHECK(d.m() == 3);
    CHECK(d.n() == 2);  // the index column is dropped
    CHECK(d.value(0, 0) == 10.0);
    CHECK(d.value(2, 1) == 60.0);
}

TEST_CASE("node coordinate format rejects malformed inputs") {
    TempFile wrong_dim("io_dim.tsp",
                       "DIMENSION : 4\nNODE_COORD_SECTION\n1 1 1\n2 2 2\nEOF\n");
    CHECK_THROWS_AS(io::load(spec_for(wrong_dim.path, io::Format::tsplib)), ParseError);

    TempFile bad_line("io_line.tsp",
                      "DIMENSION : 2\nNODE_COORD_SECTION\n1 1 1\n2 2\nEOF\n");
    try {
        io::load(spec_for(bad_line.path, io::Format::tsplib));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }

    TempFile no_section("io_nosec.tsp", "DIMENSION : 2\n1 1 1\n2 2 2\n");
    CHECK_THROWS_AS(io::load(spec_for(no_section.path, io::Format::tsplib)), ParseError);
}

TEST_CASE("column selection picks the listed fields in order") {
    TempFile f("io_cols.csv", "1,2,3\n4,5,6\n");
    io::DatasetSpec spec = spec_for(f.path, io::Format::csv);
    spec.columns = std::vector<std::size_t>{2, 0};
    Dataset d = io::load(spec);
    CHECK(d.n() == 2);
    CHECK(d.value(0, 0) == 3.0);
    CHECK(d.value(1, 1) == 4.0);

    spec.columns = std::vector<std::size_t>{3};
    CHECK_THROWS_AS(io::load(spec), ConfigError);
}

TEST_CASE("min-max normalization maps columns into the unit interval") {
    Dataset d({0.0, 5.0, 10.0, 5.0, 20.0, 5.0}, 3, 2);
    Dataset norm = io::min_max_normalize(d);
    CHECK(norm.value(0, 0) == 0.0);
    CHECK(norm.value(1, 0) == 0.5);
    CHECK(norm.value(2, 0) == 1.0);
    CHECK(norm.value(0, 1) == 0.0);  // constant column maps to zero
    CHECK(norm.value(2, 1) == 0.0);
}

TEST_CASE("normalize flag applies after column selection") {
    TempFile f("io_normcols.csv", "0,100\n10,100\n");
    io::DatasetSpec spec = spec_for(f.path, io::Format::csv);
    spec.columns = std::vector<std::size_t>{0};
    spec.normalize = true;
    Dataset d = io::load(spec);
    CHECK(d.n() == 1);
    CHECK(d.value(0, 0) == 0.0);
    CHECK(d.value(1, 0) == 1.0);
}

TEST_CASE("csv save and reload reproduce the matrix bitwise") {
    Dataset d({0.1 + 0.2, 1.0 / 3.0, 2.0 / 7.0, 1e-300}, 2, 2);
    fs::path p = fs::temp_directory_path() / "io_roundtrip.csv";
    io::save_csv(d, p.string());
    Dataset back = io::load(spec_for(p, io::Format::csv));
    CHECK(back.values() == d.values());
    std::error_code ec;
    fs::remove(p, ec);
}

TEST_CASE("bundled city coordinates load at full size") {
    io::DatasetSpec spec;
    spec.path = std::string(BIGMEANS_DATA_DIR) + "/d15112.tsp";
    spec.format = io::Format::tsplib;
    Dataset d = io::load(spec);
    CHECK(d.m() == 15112);
    CHECK(d.n() == 2);
}

TEST_CASE("registry resolves specs and best-known objectives") {
    auto reg = io::load_registry(std::string(BIGMEANS_DATA_DIR) + "/registry.json");
    REQUIRE(reg.count("d15112") == 1);
    REQUIRE(reg.count("pla85900") == 1);

    const io::RegistryEntry& entry = reg.at("d15112");
    CHECK(entry.spec.format == io::Format::tsplib);
    CHECK(fs::path(entry.spec.path).is_absolute());  // resolved against the registry dir
    CHECK(entry.f_best.at(2) == doctest::Approx(3.68403e11).epsilon(1e-9));
    CHECK(entry.f_best.at(25) == doctest::Approx(0.25308e11).epsilon(1e-9));

    Dataset d = io::load(entry.spec);
    CHECK(d.m() == 15112);
}
