#include "cga/automaton.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cga {

namespace {

Counter checked_add(Counter a, Counter b) {
  Counter r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("counter overflow");
  return r;
}

}  // namespace

InstructionProgram::InstructionProgram(std::size_t width, std::vector<CounterInstruction> cells)
    : width_(width), cells_(std::move(cells)) {
  if (width_ == 0 ? !cells_.empty() : cells_.size() % width_ != 0)
    throw std::invalid_argument("program cells do not form whole steps");
}

InstructionProgram InstructionProgram::single(std::size_t width, std::size_t counter,
                                              CounterInstruction ins) {
  InstructionProgram p(width);
  std::vector<CounterInstruction> step(width);
  step.at(counter) = ins;
  p.add_step(step);
  return p;
}

InstructionProgram InstructionProgram::all(std::size_t width, CounterInstruction ins) {
  InstructionProgram p(width);
  std::vector<CounterInstruction> step(width, ins);
  p.add_step(step);
  return p;
}

void InstructionProgram::add_step(std::span<const CounterInstruction> step) {
  if (step.size() != width_) throw std::invalid_argument("step width does not match program width");
  if (width_ == 0) return;
  cells_.insert(cells_.end(), step.begin(), step.end());
}

InstructionProgram InstructionProgram::then(const InstructionProgram& next) const {
  if (next.empty()) return *this;
  if (empty()) return next;
  if (width_ != next.width_) throw std::invalid_argument("program width mismatch");
  InstructionProgram r = *this;
  r.cells_.insert(r.cells_.end(), next.cells_.begin(), next.cells_.end());
  return r;
}

InstructionProgram InstructionProgram::embed(std::size_t width, std::size_t offset) const {
  if (offset + width_ > width) throw std::invalid_argument("program does not fit");
  InstructionProgram r(width);
  if (empty()) return r;
  r.cells_.assign(steps() * width, CounterInstruction{});
  for (std::size_t s = 0; s < steps(); ++s)
    for (std::size_t i = 0; i < width_; ++i) r.cells_[s * width + offset + i] = cells_[s * width_ + i];
  return r;
}

InstructionProgram InstructionProgram::parallel(const InstructionProgram& a, const InstructionProgram& b) {
  std::size_t w = a.width_ + b.width_;
  InstructionProgram r(w);
  std::size_t n = std::max(a.steps(), b.steps());
  if (n == 0) return r;
  r.cells_.assign(n * w, CounterInstruction{});
  for (std::size_t s = 0; s < a.steps(); ++s)
    for (std::size_t i = 0; i < a.width_; ++i) r.cells_[s * w + i] = a.cells_[s * a.width_ + i];
  for (std::size_t s = 0; s < b.steps(); ++s)
    for (std::size_t i = 0; i < b.width_; ++i) r.cells_[s * w + a.width_ + i] = b.cells_[s * b.width_ + i];
  return r;
}

namespace {

template <bool Guards>
bool run_program(const std::vector<CounterInstruction>& cells, std::size_t width,
                 std::span<Counter> counters) {
  if (cells.empty()) return true;
  std::size_t n = cells.size() / width;
  // Only copy when a later guard could fail after an earlier mutation.
  std::vector<Counter> scratch;
  std::span<Counter> c = counters;
  if (Guards && n > 1) {
    scratch.assign(counters.begin(), counters.end());
    c = scratch;
  }
  for (std::size_t s = 0; s < n; ++s) {
    const CounterInstruction* step = cells.data() + s * width;
    if constexpr (Guards) {
      for (std::size_t i = 0; i < width; ++i) {
        if (step[i].kind == CounterInstruction::Kind::test_zero && c[i] != 0) return false;
        if (step[i].kind == CounterInstruction::Kind::test_nonzero && c[i] == 0) return false;
      }
    }
    for (std::size_t i = 0; i < width; ++i) {
      switch (step[i].kind) {
        case CounterInstruction::Kind::inc: c[i] = checked_add(c[i], step[i].amount); break;
        case CounterInstruction::Kind::dec: c[i] = checked_add(c[i], -Counter{step[i].amount}); break;
        case CounterInstruction::Kind::set_zero: c[i] = 0; break;
        default: break;
      }
    }
  }
  if (Guards && n > 1) std::copy(scratch.begin(), scratch.end(), counters.begin());
  return true;
}

}  // namespace

bool InstructionProgram::apply(std::span<Counter> counters) const {
  return run_program<true>(cells_, width_, counters);
}

bool InstructionProgram::apply_ignoring_guards(std::span<Counter> counters) const {
  return run_program<false>(cells_, width_, counters);
}

bool InstructionProgram::reads() const {
  return std::any_of(cells_.begin(), cells_.end(), [](const auto& c) { return c.reads(); });
}

Counter InstructionProgram::max_abs_change() const {
  Counter best = 0;
  for (std::size_t i = 0; i < width_; ++i) {
    Counter total = 0;
    for (std::size_t s = 0; s < steps(); ++s) {
      const auto& c = cells_[s * width_ + i];
      if (c.kind == CounterInstruction::Kind::inc || c.kind == CounterInstruction::Kind::dec)
        total += c.amount;
    }
    best = std::max(best, total);
  }
  return best;
}

std::vector<StateId> CounterAutomaton::accepting_states() const {
  std::vector<StateId> out;
  for (StateId s = 0; s < num_states(); ++s)
    if (accepting_[s]) out.push_back(s);
  return out;
}

std::span<const std::uint32_t> CounterAutomaton::out(StateId s, Letter label) const {
  auto all = out(s);
  auto lo = std::lower_bound(all.begin(), all.end(), label,
                             [&](std::uint32_t t, Letter l) { return transitions_[t].label < l; });
  auto hi = std::upper_bound(lo, all.end(), label,
                             [&](Letter l, std::uint32_t t) { return l < transitions_[t].label; });
  return {lo, hi};
}

void CounterAutomaton::index() {
  std::size_t n = state_names_.size();
  out_begin_.assign(n + 1, 0);
  for (const auto& t : transitions_) ++out_begin_[t.from + 1];
  std::partial_sum(out_begin_.begin(), out_begin_.end(), out_begin_.begin());
  out_index_.assign(transitions_.size(), 0);
  std::vector<std::uint32_t> fill(out_begin_.begin(), out_begin_.end() - 1);
  for (std::uint32_t i = 0; i < transitions_.size(); ++i) out_index_[fill[transitions_[i].from]++] = i;
  for (std::size_t s = 0; s < n; ++s) {
    std::stable_sort(out_index_.begin() + out_begin_[s], out_index_.begin() + out_begin_[s + 1],
                     [&](std::uint32_t a, std::uint32_t b) { return transitions_[a].label < transitions_[b].label; });
  }
  has_epsilon_ = std::any_of(transitions_.begin(), transitions_.end(),
                             [](const Transition& t) { return t.label == kEpsilon; });
}

AutomatonBuilder::AutomatonBuilder(std::string name, AlphabetPtr alphabet, std::size_t counters)
    : name_(std::move(name)), alphabet_(std::move(alphabet)), counters_(counters) {
  if (!alphabet_) throw std::invalid_argument("automaton needs an alphabet");
}

StateId AutomatonBuilder::add_state(std::string name, bool accepting) {
  names_.push_back(std::move(name));
  accepting_.push_back(accepting);
  return static_cast<StateId>(names_.size() - 1);
}

void AutomatonBuilder::add_transition(StateId from, Letter label, InstructionProgram program, StateId to) {
  if (program.empty()) {
    program = InstructionProgram(counters_);
  } else if (program.width() != counters_) {
    throw std::invalid_argument("program width " + std::to_string(program.width()) +
                                " does not match counter count " + std::to_string(counters_));
  }
  transitions_.push_back({from, label, std::move(program), to});
}

CounterAutomaton AutomatonBuilder::build() && {
  std::size_t n = names_.size();
  if (n == 0) throw std::invalid_argument("automaton '" + name_ + "' has no states");
  if (start_ >= n) throw std::invalid_argument("start state out of range");
  for (const auto& t : transitions_) {
    if (t.from >= n || t.to >= n) throw std::invalid_argument("transition references a missing state");
    if (t.label != kEpsilon && (t.label < 0 || static_cast<std::size_t>(t.label) >= alphabet_->size()))
      throw std::invalid_argument("transition label outside the alphabet");
  }
  std::sort(transitions_.begin(), transitions_.end(), [](const Transition& a, const Transition& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.label != b.label) return a.label < b.label;
    if (a.to != b.to) return a.to < b.to;
    return a.program < b.program;
  });
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end(),
                                 [](const Transition& a, const Transition& b) {
                                   return a.from == b.from && a.label == b.label && a.to == b.to &&
                                          a.program == b.program;
                                 }),
                     transitions_.end());
  CounterAutomaton m;
  m.name_ = std::move(name_);
  m.alphabet_ = std::move(alphabet_);
  m.counters_ = counters_;
  m.state_names_ = std::move(names_);
  m.accepting_ = std::move(accepting_);
  m.start_ = start_;
  m.transitions_ = std::move(transitions_);
  m.declared_blind_ = blind_;
  m.declared_deterministic_ = deterministic_;
  m.index();
  return m;
}

CounterAutomaton trim(const CounterAutomaton& m) {
  std::size_t n = m.num_states();
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::vector<StateId> stack{m.start()};
  fwd[m.start()] = 1;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (auto ti : m.out(s)) {
      StateId t = m.transitions()[ti].to;
      if (!fwd[t]) fwd[t] = 1, stack.push_back(t);
    }
  }
  std::vector<std::vector<StateId>> rev(n);
  for (const auto& t : m.transitions()) rev[t.to].push_back(t.from);
  for (StateId s = 0; s < n; ++s)
    if (m.is_accepting(s)) bwd[s] = 1, stack.push_back(s);
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : rev[s])
      if (!bwd[p]) bwd[p] = 1, stack.push_back(p);
  }
  std::vector<StateId> remap(n, std::numeric_limits<StateId>::max());
  AutomatonBuilder b(m.name(), m.alphabet_ptr(), m.counters());
  b.set_blind(m.declared_blind());
  b.set_deterministic(m.declared_deterministic());
  // The start state always survives so that an empty language stays representable.
  remap[m.start()] = b.add_state(m.state_name(m.start()), m.is_accepting(m.start()) && bwd[m.start()]);
  b.set_start(remap[m.start()]);
  for (StateId s = 0; s < n; ++s)
    if (s != m.start() && fwd[s] && bwd[s]) remap[s] = b.add_state(m.state_name(s), m.is_accepting(s));
  if (bwd[m.start()]) {
    for (const auto& t : m.transitions()) {
      if (fwd[t.from] && bwd[t.from] && fwd[t.to] && bwd[t.to])
        b.add_transition(remap[t.from], t.label, t.program, remap[t.to]);
    }
  }
  return std::move(b).build();
}

CounterAutomaton relabel_alphabet(const CounterAutomaton& m, const AlphabetPtr& target) {
  if (same_alphabet(m.alphabet_ptr(), target) && m.alphabet_ptr() == target) return m;
  std::vector<Letter> map(m.alphabet().size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    auto l = target->find(m.alphabet().token(static_cast<Letter>(i)));
    map[i] = l ? *l : kPad;
  }
  AutomatonBuilder b(m.name(), target, m.counters());
  b.set_blind(m.declared_blind());
  b.set_deterministic(m.declared_deterministic());
  for (StateId s = 0; s < m.num_states(); ++s) b.add_state(m.state_name(s), m.is_accepting(s));
  b.set_start(m.start());
  for (const auto& t : m.transitions()) {
    Letter l = kEpsilon;
    if (t.label != kEpsilon) {
      l = map[static_cast<std::size_t>(t.label)];
      if (l == kPad)
        throw std::invalid_argument("token '" + m.alphabet().token(t.label) + "' is missing from the target alphabet");
    }
    b.add_transition(t.from, l, t.program, t.to);
  }
  return std::move(b).build();
}

CounterAutomaton with_inferred_flags(const CounterAutomaton& m) {
  bool blind = std::none_of(m.transitions().begin(), m.transitions().end(),
                            [](const Transition& t) { return t.program.reads(); });
  AutomatonBuilder b(m.name(), m.alphabet_ptr(), m.counters());
  b.set_blind(blind);
  for (StateId s = 0; s < m.num_states(); ++s) b.add_state(m.state_name(s), m.is_accepting(s));
  b.set_start(m.start());
  for (const auto& t : m.transitions()) b.add_transition(t.from, t.label, t.program, t.to);
  return std::move(b).build();
}

}  // namespace cga
