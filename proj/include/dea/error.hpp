#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dea {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or configuration. Row and column are 1-based; 0 means
/// "not tied to a cell".
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::size_t row = 0,
                           std::size_t column = 0);

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// An iteration or node limit was hit while analysing a DMU.
class SolverLimitError : public Error {
 public:
  SolverLimitError(const std::string& message, std::string dmu,
                   std::size_t stage = 0);

  const std::string& dmu() const noexcept { return dmu_; }
  /// LMOP stage (1-based), 0 outside the lexicographic sequence.
  std::size_t stage() const noexcept { return stage_; }

 private:
  std::string dmu_;
  std::size_t stage_;
};

/// A model that must be solvable was not: a broken invariant or a violated
/// call contract.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

}  // namespace dea
