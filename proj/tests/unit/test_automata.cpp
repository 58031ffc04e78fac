#include <doctest.h>

#include <random>
#include <set>

#include "cga/automaton_io.hpp"
#include "cga/bs.hpp"
#include "cga/engine.hpp"
#include "cga/errors.hpp"
#include "cga/finf.hpp"

using namespace cga;

namespace {

const char* kAnBn = R"(# a^n b^n with one blind counter
automaton anbn
alphabet a b
counters 1
blind true
states p q
start p
accept p q
trans p a +1 p
trans p b -1 q
trans q b -1 q
)";

// Independent subset-construction membership for 0-counter machines.
bool subset_accepts(const CounterAutomaton& m, const std::vector<Letter>& w) {
  auto close = [&](std::set<StateId> s) {
    std::vector<StateId> todo(s.begin(), s.end());
    while (!todo.empty()) {
      StateId q = todo.back();
      todo.pop_back();
      for (const auto& t : m.transitions())
        if (t.from == q && t.label == kEpsilon && s.insert(t.to).second) todo.push_back(t.to);
    }
    return s;
  };
  std::set<StateId> cur = close({m.start()});
  for (Letter l : w) {
    std::set<StateId> next;
    for (const auto& t : m.transitions())
      if (cur.count(t.from) && t.label == l) next.insert(t.to);
    cur = close(next);
  }
  for (StateId q : cur)
    if (m.is_accepting(q)) return true;
  return false;
}

CounterAutomaton random_machine(std::mt19937& rng, const AlphabetPtr& a, std::size_t counters, bool allow_guards) {
  std::uniform_int_distribution<int> states_d(1, 4);
  int n = states_d(rng);
  AutomatonBuilder b("random", a, counters);
  for (int i = 0; i < n; ++i) b.add_state("s" + std::to_string(i), rng() % 2 == 0);
  b.set_start(0);
  int edges = static_cast<int>(rng() % 8) + 1;
  for (int e = 0; e < edges; ++e) {
    StateId from = static_cast<StateId>(rng() % n), to = static_cast<StateId>(rng() % n);
    // Epsilon edges only go forward so the machine stays quasi-realtime.
    Letter l = static_cast<Letter>(rng() % (a->size() + 1)) - 1;
    if (l == kEpsilon && to <= from) l = 0;
    InstructionProgram p(counters);
    if (counters) {
      int k = static_cast<int>(rng() % (allow_guards ? 6 : 3));
      CounterInstruction ins = k == 0   ? CounterInstruction::inc(1)
                               : k == 1 ? CounterInstruction::dec(1)
                               : k == 2 ? CounterInstruction::noop()
                               : k == 3 ? CounterInstruction::test_zero()
                               : k == 4 ? CounterInstruction::test_nonzero()
                                        : CounterInstruction::set_zero();
      p = InstructionProgram::single(counters, 0, ins);
    }
    b.add_transition(from, l, p, to);
  }
  return std::move(b).build();
}

std::vector<std::vector<Letter>> all_words(std::size_t alphabet, std::size_t max_len) {
  std::vector<std::vector<Letter>> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_len) continue;
    for (Letter l = 0; l < static_cast<Letter>(alphabet); ++l) {
      auto w = out[i];
      w.push_back(l);
      out.push_back(w);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("automaton text format round trips") {
  auto m = parse_automaton(kAnBn);
  CHECK(m.name() == "anbn");
  CHECK(m.counters() == 1);
  CHECK(m.num_states() == 2);
  auto again = parse_automaton(format_automaton(m));
  for (const char* w : {"", "a b", "a a b b", "a b b", "b a", "a a a b b b"})
    CHECK(accepts(m, split_words(w)) == accepts(again, split_words(w)));
  CHECK(accepts(m, split_words("a a b b")));
  CHECK_FALSE(accepts(m, split_words("a a b")));
  CHECK_FALSE(accepts(m, split_words("b a")));
  CHECK(accepts(m, Word{}));
}

TEST_CASE("parse errors carry line and column") {
  std::string bad = "automaton x\nalphabet a\ncounters 1\nstates s\nstart s\naccept s\ntrans s a +1,+1 s\n";
  try {
    parse_automaton(bad, "bad.aut");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
    CHECK(e.column() > 1);
    CHECK(std::string(e.what()).find("bad.aut:7:") == 0);
  }
  CHECK_THROWS_AS(parse_automaton("automaton x\nalphabet a\ncounters 0\nstates s\nstart t\n"), ParseError);
  CHECK_THROWS_AS(parse_automaton("automaton x\nalphabet a\ncounters 0\nstates s\nstart s\ntrans s b - s\n"),
                  ParseError);
}

TEST_CASE("validate reports epsilon bound, blindness and determinism") {
  SUBCASE("empty machine") {
    auto m = parse_automaton("automaton e\nalphabet a\ncounters 0\nstates s\nstart s\naccept s\n");
    auto r = validate(m);
    CHECK(r.ok());
    CHECK(r.epsilon_bound == 0u);
    CHECK(r.blind);
    CHECK(r.deterministic);
    CHECK(accepts(m, Word{}));
    CHECK_FALSE(accepts(m, Word{"a"}));
    auto reach = reachable_configurations(m, Word{});
    REQUIRE(reach.size() == 1);
    CHECK(reach.begin()->state == m.start());
  }
  SUBCASE("L1 of BS") {
    auto r = validate(bs_l1_automaton(2, 3));
    CHECK(r.ok());
    CHECK(r.epsilon_bound == 0u);
    CHECK(r.blind);
  }
  SUBCASE("epsilon cycle") {
    auto m = parse_automaton(
        "automaton c\nalphabet a\ncounters 0\nstates s t\nstart s\naccept s\ntrans s EPS - t\ntrans t EPS - s\n");
    auto r = validate(m);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.epsilon_bound.has_value());
  }
  SUBCASE("blind flag contradicted") {
    auto m = parse_automaton("automaton c\nalphabet a\ncounters 1\nblind true\nstates s\nstart s\naccept s\n"
                             "trans s a =0 s\n");
    CHECK_FALSE(validate(m).ok());
  }
  SUBCASE("epsilon edges raise K") {
    auto m = parse_automaton("automaton c\nalphabet a\ncounters 0\nstates s t u\nstart s\naccept u\n"
                             "trans s EPS - t\ntrans t EPS - u\ntrans s a - u\n");
    auto r = validate(m);
    CHECK(r.epsilon_bound == 2u);
    CHECK_FALSE(r.deterministic);
  }
}

TEST_CASE("acceptance needs every counter at zero, guards included") {
  auto m = parse_automaton("automaton g\nalphabet a b\ncounters 1\nstates s t\nstart s\naccept t\n"
                           "trans s a +1 s\ntrans s b !0;Z t\n");
  CHECK(accepts(m, split_words("a a b")));
  CHECK_FALSE(accepts(m, split_words("b")));  // guard fails on zero
  auto plain = parse_automaton("automaton h\nalphabet a\ncounters 1\nstates s\nstart s\naccept s\ntrans s a +1 s\n");
  CHECK_FALSE(accepts(plain, split_words("a")));
  CHECK(accepts(plain, Word{}));
  // A failed guard everywhere leaves no configurations.
  CHECK(reachable_configurations(m, split_words("b")).empty());
}

TEST_CASE("non-blind instructions") {
  InstructionProgram p(2);
  std::vector<CounterInstruction> s1 = {CounterInstruction::inc(3), CounterInstruction::test_zero()};
  std::vector<CounterInstruction> s2 = {CounterInstruction::test_nonzero(), CounterInstruction::dec(2)};
  p.add_step(s1);
  p.add_step(s2);
  std::vector<Counter> c = {0, 0};
  CHECK(p.apply(c));
  CHECK(c == std::vector<Counter>{3, -2});
  std::vector<Counter> d = {0, 1};
  CHECK_FALSE(p.apply(d));
  CHECK(d == std::vector<Counter>{0, 1});
  CHECK(p.max_abs_change() == 3);
  auto wide = p.embed(4, 1);
  CHECK(wide.width() == 4);
  CHECK(parse_program(format_program(p), 2) == p);
}

TEST_CASE("reachable configurations of BS L1 on # 1 1") {
  auto m = bs_l1_automaton(2, 3);
  auto set = reachable_configurations(m, split_words("# 1 1"));
  REQUIRE(set.size() == 1);
  const auto& c = *set.begin();
  CHECK(m.state_name(c.state) == "r+");
  CHECK(c.counters == std::vector<Counter>{2});
}

TEST_CASE("counter growth bound") {
  auto m = parse_automaton("automaton h\nalphabet a\ncounters 1\nstates s\nstart s\naccept s\ntrans s a +1 s\n");
  CHECK(counter_growth_bound(m, 10) == 30);
  auto none = parse_automaton("automaton n\nalphabet a\ncounters 1\nstates s\nstart s\naccept s\ntrans s a - s\n");
  CHECK(counter_growth_bound(none, 50) == 0);

  // Exhaustive configuration search over every word of length <= 20.
  auto l1 = bs_l1_automaton(2, 3);
  ConfigurationSet cur{start_configuration(l1)};
  epsilon_close(l1, cur);
  for (std::size_t n = 1; n <= 20; ++n) {
    ConfigurationSet next;
    for (Letter l = 0; l < static_cast<Letter>(l1.alphabet().size()); ++l)
      for (auto& c : step(l1, cur, l)) next.insert(c);
    for (const auto& c : next) CHECK(std::abs(c.counters[0]) <= counter_growth_bound(l1, n));
    cur = std::move(next);
  }
}

TEST_CASE("0-counter acceptance agrees with subset construction") {
  std::mt19937 rng(7);
  auto a = make_alphabet({"a", "b"});
  auto words = all_words(2, 6);
  for (int trial = 0; trial < 60; ++trial) {
    auto m = random_machine(rng, a, 0, false);
    for (const auto& w : words) REQUIRE(accepts(m, std::span<const Letter>(w)) == subset_accepts(m, w));
  }
}

TEST_CASE("blind machines ignore guard evaluation") {
  std::mt19937 rng(11);
  auto a = make_alphabet({"a", "b"});
  auto words = all_words(2, 6);
  EngineOptions no_guards{false};
  for (int trial = 0; trial < 40; ++trial) {
    auto m = random_machine(rng, a, 1, false);
    for (const auto& w : words) {
      std::span<const Letter> s(w);
      REQUIRE(accepts(m, s) == accepts(m, s, no_guards));
      REQUIRE(accepts(m, s) == accepts(m, s));
    }
  }
}

TEST_CASE("the F-infinity block machine is nondeterministic on 1") {
  auto m = finf_block_automaton("s2");
  auto r = validate(m);
  CHECK(r.ok());
  CHECK_FALSE(r.blind);
  CHECK(m.counters() == 1);
}
