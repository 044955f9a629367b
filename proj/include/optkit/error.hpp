// Copyright 2026 The optkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OPTKIT_ERROR_HPP
#define OPTKIT_ERROR_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace optkit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t lhs, std::size_t rhs)
        : Error("dimension mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)),
          lhs_(lhs), rhs_(rhs) {}

    std::size_t lhs() const noexcept { return lhs_; }
    std::size_t rhs() const noexcept { return rhs_; }

private:
    std::size_t lhs_;
    std::size_t rhs_;
};

/// An argument lies outside the domain of an operation (e.g. sqrt of a
/// negative entry). `index` names the offending coordinate.
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::size_t index)
        : Error(what + " at index " + std::to_string(index)), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Invalid configuration value or construction parameter.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A NaN or Inf appeared where the optimizer requires finite values.
class NumericError : public Error {
public:
    NumericError(const std::string& what, std::uint64_t step, std::size_t coordinate)
        : Error(what + " (step " + std::to_string(step) + ", coordinate " +
                std::to_string(coordinate) + ")"),
          step_(step), coordinate_(coordinate) {}

    std::uint64_t step() const noexcept { return step_; }
    std::size_t coordinate() const noexcept { return coordinate_; }

private:
    std::uint64_t step_;
    std::size_t coordinate_;
};

/// A runtime monitor detected a broken invariant.
class InvariantViolation : public Error {
public:
    InvariantViolation(const std::string& what, std::uint64_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::uint64_t step() const noexcept { return step_; }

private:
    std::uint64_t step_;
};

}  // namespace optkit

#endif  // OPTKIT_ERROR_HPP
