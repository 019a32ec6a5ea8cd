#pragma once

#include <stdexcept>
#include <string>

namespace anytime {

// Invalid experiment configuration: incompatible algorithm/learner/schedule
// combinations, learners lacking a required capability, malformed options.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite or otherwise unusable numeric data produced during a run.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Operation on an object that has not been initialized.
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& what) : std::logic_error(what) {}
};

// Hint/gradient delivered out of order within a round.
class ProtocolError : public std::logic_error {
 public:
  explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

// Post-run analysis impossible with the data at hand (e.g. too few points to fit).
class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace anytime
