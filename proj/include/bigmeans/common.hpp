#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace bigmeans {

// Deterministic PRNG used across the toolkit. Every stochastic operation is a
// pure function of (inputs, config, seed); reproducibility depends on the
// stream being consumed in a documented order.
using Rng = std::mt19937_64;

// Reproducibility-first default: runs are repeatable unless the caller opts
// into an entropy-derived seed.
inline constexpr std::uint64_t kDefaultSeed = 123456789ULL;

// Invalid configuration or usage (bad sizes, out-of-range parameters,
// malformed requests). Mapped to process exit code 2 by the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Failure while reading external input; carries 1-based line/column where the
// input stopped making sense.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// An operation was invoked on an object whose state cannot support it
// (e.g. assignment against an all-degenerate centroid set).
class StateError : public std::runtime_error {
public:
    explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bigmeans
