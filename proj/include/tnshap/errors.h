// Copyright 2026 The tnshap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TNSHAP_ERRORS_H_
#define TNSHAP_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tnshap {

// Base class for all library errors. Callers that only care about "bad input"
// versus "bug" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or precondition violation supplied by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An input vector does not match the physical dimension of its mode.
class DimensionMismatch : public InvalidArgument {
 public:
  DimensionMismatch(std::size_t mode, std::size_t expected, std::size_t got)
      : InvalidArgument("dimension mismatch at mode " + std::to_string(mode) +
                        ": expected " + std::to_string(expected) + ", got " +
                        std::to_string(got)),
        mode_(mode) {}

  std::size_t mode() const { return mode_; }

 private:
  std::size_t mode_;
};

// A dense object would exceed a configured size guard.
class SizeLimitExceeded : public Error {
 public:
  SizeLimitExceeded(const std::string& what, unsigned long long required,
                    unsigned long long limit)
      : Error(what + " requires " + std::to_string(required) +
              " entries, limit is " + std::to_string(limit)),
        required_(required) {}

  unsigned long long required() const { return required_; }

 private:
  unsigned long long required_;
};

// Malformed file content. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " +
              what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A file could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tnshap

#endif  // TNSHAP_ERRORS_H_
