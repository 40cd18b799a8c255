#pragma once

// Exception hierarchy shared by all drivol modules. Fatal conditions throw;
// recoverable per-row problems are counted by the lenient parse path instead.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drivol {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- file / parse errors -------------------------------------------------

class MissingFileError : public Error {
 public:
  explicit MissingFileError(const std::string& path)
      : Error("missing file: " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class MissingColumnError : public Error {
 public:
  explicit MissingColumnError(const std::string& column)
      : Error("missing required column: " + column), column_(column) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class MalformedRowError : public Error {
 public:
  MalformedRowError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

// --- statistics errors ---------------------------------------------------

class EmptySeriesError : public Error {
 public:
  EmptySeriesError() : Error("statistic of an empty series is undefined") {}
};

class InvalidFractionError : public Error {
 public:
  explicit InvalidFractionError(double p)
      : Error("quantile fraction " + std::to_string(p) + " outside [0, 1]") {}
};

class ZeroMeanError : public Error {
 public:
  ZeroMeanError() : Error("coefficient of variation undefined for zero mean") {}
};

class ZeroQuartileSumError : public Error {
 public:
  ZeroQuartileSumError()
      : Error("quantile coefficient of variation undefined: Q1 + Q3 = 0") {}
};

class SeriesTooShortError : public Error {
 public:
  SeriesTooShortError(std::size_t length, std::size_t required)
      : Error("series of length " + std::to_string(length) +
              " shorter than required " + std::to_string(required)),
        length_(length),
        required_(required) {}
  std::size_t length() const noexcept { return length_; }
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t length_;
  std::size_t required_;
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& measure)
      : Error("fewer than 2 defined values for measure " + measure),
        measure_(measure) {}
  const std::string& measure() const noexcept { return measure_; }

 private:
  std::string measure_;
};

// --- clustering errors ---------------------------------------------------

class ZeroVarianceFeatureError : public Error {
 public:
  explicit ZeroVarianceFeatureError(std::size_t index)
      : Error("feature column " + std::to_string(index) +
              " has zero variance; cannot standardize"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class TooFewPointsError : public Error {
 public:
  TooFewPointsError(std::size_t points, std::size_t k)
      : Error("cannot fit k=" + std::to_string(k) + " clusters to " +
              std::to_string(points) + " points") {}
};

}  // namespace drivol
