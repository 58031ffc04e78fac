#include "cga/zgroup.hpp"

#include "cga/langops.hpp"

namespace cga {

namespace {

CounterAutomaton z_nf(const AlphabetPtr& lambda) {
  AutomatonBuilder b("Z.L", lambda, 0);
  b.set_blind(true);
  b.set_deterministic(true);
  StateId s = b.add_state("s", true), pos = b.add_state("pos", true), neg = b.add_state("neg", true);
  Letter a = lambda->index("a"), A = lambda->index("A");
  b.add_transition(s, a, pos);
  b.add_transition(pos, a, pos);
  b.add_transition(s, A, neg);
  b.add_transition(neg, A, neg);
  return std::move(b).build();
}

CounterAutomaton z_mult_a(const AlphabetPtr& lambda) {
  auto pairs = tuple_alphabet({lambda, lambda});
  auto letter = [&](Letter x, Letter y) {
    Letter c[2] = {x, y};
    return *pairs->letter(c);
  };
  Letter a = lambda->index("a"), A = lambda->index("A");
  AutomatonBuilder b("Z.L_a", pairs->letters(), 0);
  b.set_blind(true);
  StateId s = b.add_state("s"), pos = b.add_state("pos"), neg = b.add_state("neg"), done = b.add_state("done", true);
  b.add_transition(s, kEpsilon, pos);
  b.add_transition(s, kEpsilon, neg);
  b.add_transition(pos, letter(a, a), pos);
  b.add_transition(pos, letter(kPad, a), done);
  b.add_transition(neg, letter(A, A), neg);
  b.add_transition(neg, letter(A, kPad), done);
  return std::move(b).build();
}

}  // namespace

StructurePtr z_structure() {
  StructureDefinition def;
  def.name = "z";
  def.lambda = make_alphabet({"a", "A"});
  def.generators.add("a", "a-");
  def.nf = z_nf(def.lambda);
  def.multiplier = [lambda = def.lambda](const GraphAutomaticStructure& s, const Token& x) {
    if (x == "a-") return swap_rows(s.multiplier("a"));
    return z_mult_a(lambda);
  };
  def.quasigeodesic_c = 1;
  def.growth = {1, 1, 0};
  def.overhang = [](const Token&) { return Overhang{1, 1}; };
  return GraphAutomaticStructure::create(std::move(def));
}

}  // namespace cga
