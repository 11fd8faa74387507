#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace edcs {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
using Weight = std::int64_t;

inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or argument. `line()` is 0 when not tied to a file line.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class OracleBudgetExceeded : public Error {
 public:
  OracleBudgetExceeded() : Error("instance too large for exact oracle") {}
};

/// Exact non-negative rational p/q, used for epsilon.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// Parses "0.1", "1/10" or "3".
  static Fraction parse(const std::string& text);
};

/// Seedable generator with a portable bounded draw (std::uniform_int_distribution
/// is implementation-defined, so results would differ across standard libraries).
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/rejection";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace edcs
