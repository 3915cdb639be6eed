#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace leosim {

/// Scenario cannot be simulated (e.g. a gateway without a usable GSL).
class InfeasibleScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A link with zero rate was asked to carry a packet.
class InfeasibleLink : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NoRoute : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A router asked the simulator to use an edge that does not exist.
class RoutingContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Agent has no feasible action at the current topology.
class IsolatedNode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration; `field()` names the offending key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace leosim
