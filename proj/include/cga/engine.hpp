#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "cga/automaton.hpp"

namespace cga {

struct Configuration {
  StateId state = 0;
  std::vector<Counter> counters;
  bool diamond = false;

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration&) const = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

using ConfigurationSet = std::unordered_set<Configuration, ConfigurationHash>;

struct ValidationReport {
  std::optional<std::size_t> epsilon_bound;  // K; empty when an epsilon cycle exists
  bool blind = true;
  bool deterministic = true;
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
};

ValidationReport validate(const CounterAutomaton& m);
// Longest epsilon-only path; throws std::runtime_error on an epsilon cycle.
std::size_t epsilon_bound(const CounterAutomaton& m);

struct EngineOptions {
  bool evaluate_guards = true;
};

bool is_accepting(const CounterAutomaton& m, const Configuration& c);
Configuration start_configuration(const CounterAutomaton& m);

bool apply_transition(const Transition& t, Configuration& c, const EngineOptions& opts = {});
void epsilon_close(const CounterAutomaton& m, ConfigurationSet& set, const EngineOptions& opts = {});
ConfigurationSet step(const CounterAutomaton& m, const ConfigurationSet& set, Letter letter,
                      const EngineOptions& opts = {});

ConfigurationSet reachable_configurations(const CounterAutomaton& m, std::span<const Letter> w,
                                          const EngineOptions& opts = {});
ConfigurationSet reachable_configurations(const CounterAutomaton& m, const Word& w,
                                          const EngineOptions& opts = {});
bool accepts(const CounterAutomaton& m, std::span<const Letter> w, const EngineOptions& opts = {});
bool accepts(const CounterAutomaton& m, const Word& w, const EngineOptions& opts = {});

// F with |counter| <= F * n after n letters (n >= 1).
Counter growth_constant(const CounterAutomaton& m);
Counter counter_growth_bound(const CounterAutomaton& m, std::size_t n);

}  // namespace cga
