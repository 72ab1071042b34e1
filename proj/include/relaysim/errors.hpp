// SPDX-License-Identifier: Apache-2.0
//
// relay-sim: link-level simulator for multi-hop MIMO relay channels with
// end-to-end antenna selection.

#pragma once

#include <stdexcept>
#include <string>

namespace relaysim {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid topology description or run configuration.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error("config: " + what) {}
};

/// Half-duplex alternation requested on a topology with no antenna-disjoint
/// second path (beta = 0).
class NoDisjointPathError : public Error {
  public:
    explicit NoDisjointPathError(const std::string& what) : Error("no disjoint path: " + what) {}
};

/// Strategy instantiated on a topology it does not support.
class UnsupportedTopologyError : public Error {
  public:
    explicit UnsupportedTopologyError(const std::string& what) : Error("unsupported topology: " + what) {}
};

/// Strategy/metric combination that has no defined estimator.
class UnsupportedStrategyError : public Error {
  public:
    explicit UnsupportedStrategyError(const std::string& what) : Error("unsupported strategy: " + what) {}
};

/// Slope fit requested with fewer qualifying points than the regression needs.
class InsufficientDataError : public Error {
  public:
    explicit InsufficientDataError(const std::string& what) : Error("insufficient data: " + what) {}
};

/// Output file or directory could not be read or written.
class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error("io: " + what) {}
};

}  // namespace relaysim
