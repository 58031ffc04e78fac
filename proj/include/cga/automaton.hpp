#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cga/alphabet.hpp"

namespace cga {

using StateId = std::uint32_t;
using Counter = std::int64_t;

struct CounterInstruction {
  enum class Kind : std::uint8_t { noop, inc, dec, test_zero, test_nonzero, set_zero };
  Kind kind = Kind::noop;
  std::int32_t amount = 0;

  static CounterInstruction noop() { return {}; }
  static CounterInstruction inc(std::int32_t c) { return {Kind::inc, c}; }
  static CounterInstruction dec(std::int32_t c) { return {Kind::dec, c}; }
  static CounterInstruction test_zero() { return {Kind::test_zero, 0}; }
  static CounterInstruction test_nonzero() { return {Kind::test_nonzero, 0}; }
  static CounterInstruction set_zero() { return {Kind::set_zero, 0}; }

  bool is_guard() const { return kind == Kind::test_zero || kind == Kind::test_nonzero; }
  bool reads() const { return is_guard() || kind == Kind::set_zero; }
  bool operator==(const CounterInstruction&) const = default;
  auto operator<=>(const CounterInstruction&) const = default;
};

// A sequence of steps, each a k-vector of instructions, stored row-major.
class InstructionProgram {
 public:
  InstructionProgram() = default;
  explicit InstructionProgram(std::size_t width) : width_(width) {}
  InstructionProgram(std::size_t width, std::vector<CounterInstruction> cells);

  static InstructionProgram single(std::size_t width, std::size_t counter, CounterInstruction ins);
  static InstructionProgram all(std::size_t width, CounterInstruction ins);

  std::size_t width() const { return width_; }
  std::size_t steps() const { return width_ == 0 ? 0 : cells_.size() / width_; }
  bool empty() const { return cells_.empty(); }
  std::span<const CounterInstruction> step(std::size_t i) const {
    return {cells_.data() + i * width_, width_};
  }
  const std::vector<CounterInstruction>& cells() const { return cells_; }

  void add_step(std::span<const CounterInstruction> step);
  InstructionProgram then(const InstructionProgram& next) const;
  // Re-homes this program into a wider counter vector at the given offset.
  InstructionProgram embed(std::size_t width, std::size_t offset) const;
  // Runs both programs side by side on disjoint counters (this one first in the vector).
  static InstructionProgram parallel(const InstructionProgram& a, const InstructionProgram& b);

  // Applies in place; on a failed guard the counters are left untouched.
  bool apply(std::span<Counter> counters) const;
  bool apply_ignoring_guards(std::span<Counter> counters) const;

  bool reads() const;
  // Largest total |inc|+|dec| on a single counter.
  Counter max_abs_change() const;

  bool operator==(const InstructionProgram&) const = default;
  auto operator<=>(const InstructionProgram&) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<CounterInstruction> cells_;
};

struct Transition {
  StateId from = 0;
  Letter label = kEpsilon;
  InstructionProgram program;
  StateId to = 0;
};

class CounterAutomaton {
 public:
  CounterAutomaton() = default;

  const std::string& name() const { return name_; }
  const AlphabetPtr& alphabet_ptr() const { return alphabet_; }
  const Alphabet& alphabet() const { return *alphabet_; }
  std::size_t counters() const { return counters_; }
  std::size_t num_states() const { return state_names_.size(); }
  const std::string& state_name(StateId s) const { return state_names_[s]; }
  StateId start() const { return start_; }
  bool is_accepting(StateId s) const { return accepting_[s]; }
  std::vector<StateId> accepting_states() const;
  bool declared_blind() const { return declared_blind_; }
  bool declared_deterministic() const { return declared_deterministic_; }

  const std::vector<Transition>& transitions() const { return transitions_; }
  // Outgoing transition indices of s, sorted by label (epsilon first).
  std::span<const std::uint32_t> out(StateId s) const {
    return {out_index_.data() + out_begin_[s], out_index_.data() + out_begin_[s + 1]};
  }
  std::span<const std::uint32_t> out(StateId s, Letter label) const;
  bool has_epsilon() const { return has_epsilon_; }

  void set_name(std::string name) { name_ = std::move(name); }

 private:
  friend class AutomatonBuilder;
  void index();

  std::string name_;
  AlphabetPtr alphabet_;
  std::size_t counters_ = 0;
  std::vector<std::string> state_names_;
  std::vector<bool> accepting_;
  StateId start_ = 0;
  std::vector<Transition> transitions_;
  std::vector<std::uint32_t> out_begin_;
  std::vector<std::uint32_t> out_index_;
  bool declared_blind_ = false;
  bool declared_deterministic_ = false;
  bool has_epsilon_ = false;
};

class AutomatonBuilder {
 public:
  AutomatonBuilder(std::string name, AlphabetPtr alphabet, std::size_t counters);

  StateId add_state(std::string name, bool accepting = false);
  std::size_t num_states() const { return names_.size(); }
  void set_start(StateId s) { start_ = s; }
  void set_accepting(StateId s, bool acc = true) { accepting_[s] = acc; }
  void set_blind(bool b) { blind_ = b; }
  void set_deterministic(bool d) { deterministic_ = d; }
  // Programs of width 0 or with no steps are stored as empty.
  void add_transition(StateId from, Letter label, InstructionProgram program, StateId to);
  void add_transition(StateId from, Letter label, StateId to) {
    add_transition(from, label, InstructionProgram(counters_), to);
  }
  std::size_t counters() const { return counters_; }
  const AlphabetPtr& alphabet() const { return alphabet_; }

  // Validates references and widths. Duplicate transitions are merged.
  CounterAutomaton build() &&;

 private:
  std::string name_;
  AlphabetPtr alphabet_;
  std::size_t counters_;
  std::vector<std::string> names_;
  std::vector<bool> accepting_;
  StateId start_ = 0;
  std::vector<Transition> transitions_;
  bool blind_ = false;
  bool deterministic_ = false;
};

// Keeps only states that are reachable and co-reachable (ignoring counters).
CounterAutomaton trim(const CounterAutomaton& m);
// Same machine over another alphabet containing every token it uses.
CounterAutomaton relabel_alphabet(const CounterAutomaton& m, const AlphabetPtr& target);
// A copy whose declared flags reflect what the instructions actually do.
CounterAutomaton with_inferred_flags(const CounterAutomaton& m);

}  // namespace cga
