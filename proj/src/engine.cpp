#include "cga/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace cga {

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::size_t h = std::hash<std::uint64_t>{}((std::uint64_t{c.state} << 1) | (c.diamond ? 1u : 0u));
  for (Counter v : c.counters) h ^= std::hash<Counter>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

namespace {

// Kahn order over the epsilon subgraph; returns nullopt when a cycle remains.
std::optional<std::size_t> longest_epsilon_path(const CounterAutomaton& m) {
  std::size_t n = m.num_states();
  std::vector<std::size_t> indeg(n, 0), longest(n, 0);
  for (const auto& t : m.transitions())
    if (t.label == kEpsilon) ++indeg[t.to];
  std::vector<StateId> queue;
  for (StateId s = 0; s < n; ++s)
    if (indeg[s] == 0) queue.push_back(s);
  std::size_t seen = 0, best = 0;
  while (!queue.empty()) {
    StateId s = queue.back();
    queue.pop_back();
    ++seen;
    for (auto ti : m.out(s, kEpsilon)) {
      StateId t = m.transitions()[ti].to;
      longest[t] = std::max(longest[t], longest[s] + 1);
      best = std::max(best, longest[t]);
      if (--indeg[t] == 0) queue.push_back(t);
    }
  }
  if (seen != n) return std::nullopt;
  return best;
}

bool contradictory(const InstructionProgram& a, const InstructionProgram& b) {
  if (a.empty() || b.empty()) return false;
  auto sa = a.step(0), sb = b.step(0);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    using K = CounterInstruction::Kind;
    if ((sa[i].kind == K::test_zero && sb[i].kind == K::test_nonzero) ||
        (sa[i].kind == K::test_nonzero && sb[i].kind == K::test_zero))
      return true;
  }
  return false;
}

}  // namespace

ValidationReport validate(const CounterAutomaton& m) {
  ValidationReport r;
  r.epsilon_bound = longest_epsilon_path(m);
  if (!r.epsilon_bound) r.errors.push_back("epsilon cycle detected (not quasi-realtime)");
  for (const auto& t : m.transitions()) {
    if (t.program.reads()) r.blind = false;
    if (!t.program.empty() && t.program.width() != m.counters())
      r.errors.push_back("program width does not match counter count");
  }
  if (m.declared_blind() && !r.blind) r.errors.push_back("declared blind but an instruction reads a counter");
  for (StateId s = 0; s < m.num_states() && r.deterministic; ++s) {
    auto out = m.out(s);
    for (std::size_t i = 0; i < out.size() && r.deterministic; ++i) {
      const auto& a = m.transitions()[out[i]];
      for (std::size_t j = i + 1; j < out.size(); ++j) {
        const auto& b = m.transitions()[out[j]];
        bool clash = a.label == b.label || a.label == kEpsilon || b.label == kEpsilon;
        if (clash && !contradictory(a.program, b.program)) {
          r.deterministic = false;
          break;
        }
      }
    }
  }
  return r;
}

std::size_t epsilon_bound(const CounterAutomaton& m) {
  auto k = longest_epsilon_path(m);
  if (!k) throw std::runtime_error("automaton '" + m.name() + "' has an epsilon cycle");
  return *k;
}

bool is_accepting(const CounterAutomaton& m, const Configuration& c) {
  return m.is_accepting(c.state) &&
         std::all_of(c.counters.begin(), c.counters.end(), [](Counter v) { return v == 0; });
}

Configuration start_configuration(const CounterAutomaton& m) {
  return {m.start(), std::vector<Counter>(m.counters(), 0), false};
}

bool apply_transition(const Transition& t, Configuration& c, const EngineOptions& opts) {
  c.state = t.to;
  return opts.evaluate_guards ? t.program.apply(c.counters) : t.program.apply_ignoring_guards(c.counters);
}

void epsilon_close(const CounterAutomaton& m, ConfigurationSet& set, const EngineOptions& opts) {
  if (!m.has_epsilon()) return;
  std::vector<Configuration> frontier(set.begin(), set.end());
  while (!frontier.empty()) {
    Configuration c = std::move(frontier.back());
    frontier.pop_back();
    for (auto ti : m.out(c.state, kEpsilon)) {
      Configuration d = c;
      if (apply_transition(m.transitions()[ti], d, opts) && set.insert(d).second)
        frontier.push_back(std::move(d));
    }
  }
}

ConfigurationSet step(const CounterAutomaton& m, const ConfigurationSet& set, Letter letter,
                      const EngineOptions& opts) {
  ConfigurationSet next;
  for (const auto& c : set) {
    for (auto ti : m.out(c.state, letter)) {
      Configuration d = c;
      if (apply_transition(m.transitions()[ti], d, opts)) next.insert(std::move(d));
    }
  }
  epsilon_close(m, next, opts);
  return next;
}

ConfigurationSet reachable_configurations(const CounterAutomaton& m, std::span<const Letter> w,
                                          const EngineOptions& opts) {
  ConfigurationSet set{start_configuration(m)};
  epsilon_close(m, set, opts);
  for (Letter l : w) {
    if (set.empty()) break;
    set = step(m, set, l, opts);
  }
  return set;
}

ConfigurationSet reachable_configurations(const CounterAutomaton& m, const Word& w,
                                          const EngineOptions& opts) {
  auto letters = m.alphabet().encode(w);
  return reachable_configurations(m, std::span<const Letter>(letters), opts);
}

bool accepts(const CounterAutomaton& m, std::span<const Letter> w, const EngineOptions& opts) {
  auto set = reachable_configurations(m, w, opts);
  return std::any_of(set.begin(), set.end(), [&](const Configuration& c) { return is_accepting(m, c); });
}

bool accepts(const CounterAutomaton& m, const Word& w, const EngineOptions& opts) {
  auto letters = m.alphabet().encode(w);
  return accepts(m, std::span<const Letter>(letters), opts);
}

Counter growth_constant(const CounterAutomaton& m) {
  Counter change = 0;
  for (const auto& t : m.transitions()) change = std::max(change, t.program.max_abs_change());
  Counter k = static_cast<Counter>(std::max<std::size_t>(epsilon_bound(m), 1));
  return 3 * k * change;
}

Counter counter_growth_bound(const CounterAutomaton& m, std::size_t n) {
  return growth_constant(m) * static_cast<Counter>(n);
}

}  // namespace cga
