#include "cga/finf.hpp"

#include <stdexcept>

#include "cga/langops.hpp"

namespace cga {

namespace {

const AlphabetPtr& finf_lambda() {
  static const AlphabetPtr lambda = make_alphabet({"p", "n", "1"});
  return lambda;
}

std::size_t generator_index(const Token& x, bool& inverse) {
  std::string_view s(x);
  inverse = s.ends_with('-');
  if (inverse) s.remove_suffix(1);
  if (s.size() < 2 || s[0] != 'x' || s[1] == '0') throw std::invalid_argument("'" + x + "' is not a generator x<i>");
  std::size_t i = 0;
  for (char c : s.substr(1)) {
    if (c < '0' || c > '9') throw std::invalid_argument("'" + x + "' is not a generator x<i>");
    i = i * 10 + static_cast<std::size_t>(c - '0');
  }
  return i;
}

}  // namespace

Word finf_encode(const Word& w) {
  Word out;
  for (const auto& x : w) {
    bool inv = false;
    std::size_t i = generator_index(x, inv);
    out.push_back(inv ? "n" : "p");
    out.insert(out.end(), i, "1");
  }
  return out;
}

CounterAutomaton finf_block_automaton(const std::string& start) {
  if (start != "s2" && start != "s3") throw std::invalid_argument("start must be s2 or s3");
  const auto& lambda = finf_lambda();
  AutomatonBuilder b("Finf." + start, lambda, 1);
  b.set_deterministic(false);
  Letter p = lambda->index("p"), n = lambda->index("n"), one = lambda->index("1");
  auto inc = InstructionProgram::single(1, 0, CounterInstruction::inc(1));
  auto dec = InstructionProgram::single(1, 0, CounterInstruction::dec(1));
  auto zero = InstructionProgram::single(1, 0, CounterInstruction::set_zero());
  auto nonzero_then_zero = InstructionProgram::single(1, 0, CounterInstruction::test_nonzero()).then(zero);

  StateId s2 = b.add_state("s2", true);
  StateId s3 = b.add_state("s3", true);
  StateId S = b.add_state("S");
  b.add_transition(s3, p, S);
  b.add_transition(s3, n, S);
  b.add_transition(S, one, S);
  b.add_transition(S, one, s2);
  // One half per sign of the first block of a pair.
  for (int half = 0; half < 2; ++half) {
    Letter same = half == 0 ? p : n, other = half == 0 ? n : p;
    std::string tag = half == 0 ? "+" : "-";
    StateId first = b.add_state("first" + tag);
    StateId open = b.add_state(half == 0 ? "a" : "b", true);
    StateId flip = b.add_state("flip" + tag);
    StateId keep = b.add_state("keep" + tag);
    StateId end = b.add_state(half == 0 ? "r" : "t", true);
    b.add_transition(s2, same, first);
    b.add_transition(first, one, open);
    b.add_transition(open, one, inc, open);
    b.add_transition(open, one, zero, end);
    b.add_transition(open, other, flip);
    b.add_transition(flip, one, dec, flip);
    b.add_transition(flip, one, nonzero_then_zero, s2);
    b.add_transition(open, same, zero, keep);
    b.add_transition(keep, one, keep);
    b.add_transition(keep, one, s2);
  }
  b.set_start(start == "s2" ? s2 : s3);
  return std::move(b).build();
}

CounterAutomaton finf_nf_automaton() {
  auto out = intersect(finf_block_automaton("s2"), finf_block_automaton("s3"));
  out.set_name("Finf.L");
  return out;
}

CounterAutomaton finf_multiplier(std::size_t i, bool inverse) {
  if (i == 0) throw std::invalid_argument("generator index must be positive");
  if (inverse) return swap_rows(finf_multiplier(i, false));
  const auto& lambda = finf_lambda();
  auto pairs = tuple_alphabet({lambda, lambda});
  auto letter = [&](Letter x, Letter y) {
    Letter c[2] = {x, y};
    return *pairs->letter(c);
  };
  Letter p = lambda->index("p"), n = lambda->index("n"), one = lambda->index("1");
  // Shared diagonal prefix, then either append p1^i below or strip n1^i above.
  auto tail = [&](bool append) {
    AutomatonBuilder b(append ? "Finf.L+" : "Finf.L-", pairs->letters(), 0);
    b.set_blind(true);
    StateId diag = b.add_state("diag");
    for (Letter l : {p, n, one}) b.add_transition(diag, letter(l, l), diag);
    StateId cur = b.add_state("t0");
    b.add_transition(diag, append ? letter(kPad, p) : letter(n, kPad), cur);
    for (std::size_t k = 1; k <= i; ++k) {
      StateId next = b.add_state("t" + std::to_string(k));
      b.add_transition(cur, append ? letter(kPad, one) : letter(one, kPad), next);
      cur = next;
    }
    b.set_accepting(cur);
    return std::move(b).build();
  };
  CounterAutomaton nf = finf_nf_automaton();
  CounterAutomaton plus = intersect(tail(true), pad_lift(nf, Side::right));
  CounterAutomaton minus = intersect(tail(false), pad_lift(nf, Side::left));
  auto out = unite(plus, minus);
  out.set_name("Finf.L_x" + std::to_string(i));
  return out;
}

StructurePtr finf_structure() {
  StructureDefinition def;
  def.name = "finf";
  def.lambda = finf_lambda();
  def.generators.set_family({"x"});
  def.nf = finf_nf_automaton();
  def.multiplier = [](const GraphAutomaticStructure& s, const Token& x) {
    bool inv = false;
    std::size_t i = generator_index(x, inv);
    if (inv) return swap_rows(s.multiplier(x.substr(0, x.size() - 1)));
    return finf_multiplier(i);
  };
  def.growth = {1, 1, 1};
  def.overhang = [](const Token& x) {
    bool inv = false;
    std::size_t i = generator_index(x, inv);
    Overhang o{i + 1, i + 1};
    return o;
  };
  return GraphAutomaticStructure::create(std::move(def));
}

}  // namespace cga
