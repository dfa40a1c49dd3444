// Copyright 2026 The scatterblur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCATTERBLUR_ERRORS_HPP
#define SCATTERBLUR_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scatterblur {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or parameter outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The RBF system could not be solved to the requested tolerance.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Least-squares design matrix without full column rank.
class RankDeficientError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Geometry lacks the rotational symmetry the circulant diagnostic needs.
class NotCirculantError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A dense materialization was refused because N exceeds the size guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// Two measurement locations coincide. Indices are zero-based.
class DuplicateLocationError : public DomainError {
 public:
  DuplicateLocationError(std::size_t first, std::size_t second)
      : DomainError("duplicate location at indices " + std::to_string(first) + " and " +
                    std::to_string(second)),
        first_(first),
        second_(second) {}

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// Malformed input file. `row` is the 1-based line number in the file, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& reason)
      : Error("line " + std::to_string(row) + ", column " + std::to_string(column) + ": " +
              reason),
        row_(row),
        column_(column) {}
  explicit ParseError(const std::string& reason) : Error(reason), row_(0), column_(0) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Input file with no header or no data rows.
class EmptyInputError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace scatterblur

#endif  // SCATTERBLUR_ERRORS_HPP
