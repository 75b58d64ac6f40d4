// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cirauth {

/// Shape mismatch between matrices or between a layer and its input.
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation (e.g. sigma <= 0).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed, truncated or incompatible file content.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid user-facing configuration (unknown key, bad value, missing field).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Training produced a non-finite loss; carries where it happened.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, std::size_t epoch, std::size_t batch,
                 const std::string& term)
        : std::runtime_error(what), epoch(epoch), batch(batch), term(term) {}

    std::size_t epoch;
    std::size_t batch;
    std::string term;
};

}  // namespace cirauth
