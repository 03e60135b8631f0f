#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace convdist {

/// Base for every failure caused by input data (files, annotations, embeddings).
/// The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A record in a line-delimited file could not be parsed.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : DataError("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

/// A cost callback produced a negative or non-finite weight.
class CostModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingEmbedding : public DataError {
 public:
  using DataError::DataError;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class UnannotatedUtterance : public DataError {
 public:
  using DataError::DataError;
};

/// Correlation or test statistic is undefined for the given input (e.g. constant series).
class UndefinedStatistic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace convdist
