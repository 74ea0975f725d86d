#pragma once

#include <stdexcept>
#include <string>

namespace massmc {

struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientSamples : std::runtime_error {
  explicit InsufficientSamples(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteValue : std::runtime_error {
  explicit NonFiniteValue(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyBatch : std::runtime_error {
  explicit EmptyBatch(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, long row, long col)
      : std::runtime_error(what + " (row " + std::to_string(row) + ", column " +
                           std::to_string(col) + ")"),
        row(row),
        col(col) {}
  long row;
  long col;
};

struct LabelDomainError : std::runtime_error {
  explicit LabelDomainError(const std::string& what) : std::runtime_error(what) {}
};

struct ThermostatBlowup : std::runtime_error {
  explicit ThermostatBlowup(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyTrace : std::runtime_error {
  explicit EmptyTrace(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace massmc
