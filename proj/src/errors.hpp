// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace transferlab {

enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  config = 3,
  io = 4,
  numeric = 5,
  replicate = 6,
};

/// Base exception for everything the library throws on purpose. The code is
/// what the C API reports back as a status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::config, what) {}
};

/// Adaptive quadrature stopped at maximum depth with too large an error.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : Error(ErrorCode::numeric, what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A replicate task threw. Carries the replicate index.
class ReplicateError : public Error {
 public:
  ReplicateError(std::size_t index, const std::string& what)
      : Error(ErrorCode::replicate,
              "replicate " + std::to_string(index) + " failed: " + what),
        index_(index) {}
  std::size_t replicate_index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace transferlab
