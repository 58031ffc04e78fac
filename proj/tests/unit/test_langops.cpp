#include <doctest.h>

#include <random>

#include "cga/automaton_io.hpp"
#include "cga/bs.hpp"
#include "cga/engine.hpp"
#include "cga/errors.hpp"
#include "cga/finf.hpp"
#include "cga/langops.hpp"
#include "cga/zgroup.hpp"

using namespace cga;

namespace {

std::vector<Word> words_over(const std::vector<Token>& symbols, std::size_t max_len) {
  std::vector<Word> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_len) continue;
    for (const auto& s : symbols) {
      auto w = out[i];
      w.push_back(s);
      out.push_back(w);
    }
  }
  return out;
}

CounterAutomaton random_machine(std::mt19937& rng, const AlphabetPtr& a) {
  int n = static_cast<int>(rng() % 4) + 1;
  std::size_t k = rng() % 2;
  AutomatonBuilder b("random", a, k);
  for (int i = 0; i < n; ++i) b.add_state("s" + std::to_string(i), rng() % 2 == 0);
  int edges = static_cast<int>(rng() % 9) + 1;
  for (int e = 0; e < edges; ++e) {
    StateId from = static_cast<StateId>(rng() % n), to = static_cast<StateId>(rng() % n);
    Letter l = static_cast<Letter>(rng() % (a->size() + 1)) - 1;
    if (l == kEpsilon && to <= from) l = 0;
    InstructionProgram p(k);
    if (k) {
      static const CounterInstruction choices[] = {CounterInstruction::inc(1), CounterInstruction::dec(1),
                                                   CounterInstruction::noop(), CounterInstruction::test_zero(),
                                                   CounterInstruction::test_nonzero(), CounterInstruction::set_zero()};
      p = InstructionProgram::single(k, 0, choices[rng() % 6]);
    }
    b.add_transition(from, l, p, to);
  }
  return std::move(b).build();
}

LetterHomomorphism swap_homomorphism(const AlphabetPtr& pairs) {
  auto ta = as_tuple_alphabet(pairs);
  LetterHomomorphism h{pairs, pairs, std::vector<std::vector<Letter>>(pairs->size())};
  for (Letter l = 0; l < static_cast<Letter>(pairs->size()); ++l) {
    Letter c[2] = {ta->component(l, 1), ta->component(l, 0)};
    h.images[l] = {*ta->letter(c)};
  }
  return h;
}

}  // namespace

TEST_CASE("convolution of aa, bbb, a") {
  Word w = convolve({split_words("a a"), split_words("b b b"), split_words("a")});
  CHECK(join(w) == "(a|b|a) (a|b|_) (_|b|_)");
  CHECK(join(project(w, 1)) == "b b b");
  CHECK(join(project(w, 2)) == "a");
  CHECK(convolve({Word{}, Word{}}).empty());
  CHECK(join(convolve({split_words("a b"), split_words("a b")})) == "(a|a) (b|b)");
  CHECK(join(project(split_words("(a|_) (_|b)"), 0)) == "a");
}

TEST_CASE("convolve and project round trip") {
  auto words = words_over({"a", "b"}, 3);
  for (const auto& u : words)
    for (const auto& v : words) {
      Word c = convolve({u, v});
      CHECK(c.size() == std::max(u.size(), v.size()));
      CHECK(project(c, 0) == u);
      CHECK(project(c, 1) == v);
    }
}

TEST_CASE("intersection of the two BS languages") {
  auto l = intersect(bs_l1_automaton(4, 7), bs_l2_automaton(4, 7));
  CHECK(l.counters() == 1);
  CHECK(validate(l).blind);
  CHECK(accepts(l, split_words("at # 1 1 1 # 1 # # 1")));
  auto all = universal_automaton(l.alphabet_ptr());
  auto same = intersect(l, all);
  for (const char* w : {"at # 1 1 1 # 1 # # 1", "at # 1 1 1 1 1 # 1 # # 1", "# # # #", "t # # -1 # -1 -1 -1 -1 #"})
    CHECK(accepts(same, split_words(w)) == accepts(l, split_words(w)));
}

TEST_CASE("intersection of the two F-infinity block machines") {
  auto l = intersect(finf_block_automaton("s2"), finf_block_automaton("s3"));
  CHECK(l.counters() == 2);
  CHECK_FALSE(accepts(l, split_words("n 1 p 1 1 n 1 1 p 1")));
  CHECK(accepts(l, split_words("p 1 1 p 1 1 p 1 1 n 1 1 1 1 1")));
}

TEST_CASE("intersect and unite agree with brute force") {
  std::mt19937 rng(3);
  auto a = make_alphabet({"a", "b"});
  auto words = words_over({"a", "b"}, 6);
  for (int trial = 0; trial < 40; ++trial) {
    auto m = with_inferred_flags(random_machine(rng, a)), n = with_inferred_flags(random_machine(rng, a));
    auto both = intersect(m, n);
    auto either = unite(m, n);
    CHECK(both.counters() == m.counters() + n.counters());
    CHECK(either.counters() == std::max(m.counters(), n.counters()));
    // The product may prune unreachable guarded edges, so blindness is checked as declared.
    CHECK(both.declared_blind() == (m.declared_blind() && n.declared_blind()));
    if (m.declared_blind() && n.declared_blind()) CHECK(validate(both).blind);
    for (const auto& w : words) {
      bool x = accepts(m, w), y = accepts(n, w);
      REQUIRE(accepts(both, w) == (x && y));
      REQUIRE(accepts(either, w) == (x || y));
    }
  }
}

TEST_CASE("union identities") {
  auto m = parse_automaton(
      "automaton anbn\nalphabet a b\ncounters 1\nstates p q\nstart p\naccept p q\n"
      "trans p a +1 p\ntrans p b -1 q\ntrans q b -1 q\n");
  auto with_empty = unite(m, empty_automaton(m.alphabet_ptr()));
  auto twice = unite(m, m);
  CHECK(*validate(twice).epsilon_bound == *validate(m).epsilon_bound + 1);
  for (const auto& w : words_over({"a", "b"}, 6)) {
    CHECK(accepts(with_empty, w) == accepts(m, w));
    CHECK(accepts(twice, w) == accepts(m, w));
  }
}

TEST_CASE("homomorphism text and identity") {
  auto src = make_alphabet({"a", "A"});
  auto dst = make_alphabet({"p", "n", "1"});
  auto h = parse_homomorphism("map a -> p 1\nmap A -> n 1\n", src, dst);
  CHECK(h.epsilon_free());
  CHECK_THROWS_AS(parse_homomorphism("map a -> p\n", src, dst), ParseError);
  CHECK_THROWS_AS(parse_homomorphism("map a -> q\nmap A -> n\n", src, dst), ParseError);
  auto e = parse_homomorphism("map a -> EPS\nmap A -> n\n", src, dst);
  CHECK_FALSE(e.epsilon_free());

  auto z = z_structure()->nf_automaton();
  auto id = LetterHomomorphism::identity(z.alphabet_ptr());
  auto img = image(z, id), pre = preimage(z, id);
  for (const auto& w : words_over({"a", "A"}, 5)) {
    CHECK(accepts(img, w) == accepts(z, w));
    CHECK(accepts(pre, w) == accepts(z, w));
  }
}

TEST_CASE("image of the unary normal forms lands in the rank-1 F-infinity fragment") {
  auto z = z_structure()->nf_automaton();
  auto finf = finf_nf_automaton();
  auto h = parse_homomorphism("map a -> p 1\nmap A -> n 1\n", z.alphabet_ptr(), finf.alphabet_ptr());
  auto img = image(z, h);
  auto in_fragment = [](const Word& w) {
    if (w.size() % 2) return false;
    for (std::size_t i = 0; i < w.size(); i += 2)
      if (w[i] == "1" || w[i + 1] != "1") return false;
    return true;
  };
  for (const auto& w : words_over({"p", "n", "1"}, 8))
    REQUIRE(accepts(img, w) == (accepts(finf, w) && in_fragment(w)));
}

TEST_CASE("erasing image rejects epsilon cycles") {
  auto src = make_alphabet({"a"});
  auto m = parse_automaton("automaton loop\nalphabet a\ncounters 0\nstates s\nstart s\naccept s\ntrans s a - s\n");
  LetterHomomorphism erase{m.alphabet_ptr(), src, {{}}};
  CHECK_THROWS_AS(image(m, erase), std::runtime_error);
}

TEST_CASE("preimage of a^n b^n under c -> a b") {
  auto m = parse_automaton(
      "automaton anbn\nalphabet a b\ncounters 1\nstates p q\nstart p\naccept p q\n"
      "trans p a +1 p\ntrans p b -1 q\ntrans q b -1 q\n");
  auto src = make_alphabet({"c", "d"});
  auto h = parse_homomorphism("map c -> a b\nmap d -> EPS\n", src, m.alphabet_ptr());
  auto pre = preimage(m, h);
  for (const auto& w : words_over({"c", "d"}, 6)) {
    Word image_word;
    for (const auto& x : w)
      if (x == "c") image_word.insert(image_word.end(), {"a", "b"});
    REQUIRE(accepts(pre, w) == accepts(m, image_word));
  }
}

TEST_CASE("pad lift tracks one row and keeps pads as suffixes") {
  auto l = finf_nf_automaton();
  auto right = pad_lift(l, Side::right);
  auto left = pad_lift(l, Side::left);
  Word p1 = split_words("p 1"), p11 = split_words("p 1 1"), bad = split_words("n 1 p 1 1 n 1 1 p 1");
  CHECK(accepts(right, convolve({p1, p11})));
  CHECK(accepts(right, convolve({bad, p11})));
  CHECK_FALSE(accepts(right, convolve({p11, bad})));
  CHECK(accepts(left, convolve({p11, bad})));
  CHECK_FALSE(accepts(left, convolve({bad, p11})));
  // A pad followed by a letter in the free row is not a convolution.
  CHECK_FALSE(accepts(right, split_words("(_|p) (p|1)")));

  auto bs = bs_nf_automaton(2, 3);
  auto both = intersect(pad_lift(bs, Side::left), pad_lift(bs, Side::right));
  std::mt19937 rng(5);
  BSOracle oracle(2, 3);
  std::vector<Word> forms;
  for (const auto& w : words_over({"a", "a-", "t", "t-"}, 3)) forms.push_back(bs_encode(bs_canonicalize(w, 2, 3), 2, 3));
  for (int i = 0; i < 20; ++i) {
    const auto& u = forms[rng() % forms.size()];
    const auto& v = forms[rng() % forms.size()];
    CHECK(accepts(both, convolve({u, v})));
    Word broken = v;
    broken.push_back("#");
    CHECK_FALSE(accepts(both, convolve({u, broken})));
  }
}

TEST_CASE("row swap is an involution and matches the swap image") {
  auto m = bs_multiplier(2, 3, "a");
  auto sw = swap_homomorphism(m.alphabet_ptr());
  auto once = image(m, sw);
  auto twice = image(once, sw);
  auto direct = swap_rows(m);
  std::vector<Word> forms;
  for (const auto& w : words_over({"a", "a-", "t", "t-"}, 2)) forms.push_back(bs_encode(bs_canonicalize(w, 2, 3), 2, 3));
  for (const auto& u : forms)
    for (const auto& v : forms) {
      Word uv = convolve({u, v}), vu = convolve({v, u});
      bool x = accepts(m, uv);
      CHECK(accepts(twice, uv) == x);
      CHECK(accepts(once, vu) == x);
      CHECK(accepts(direct, vu) == x);
    }
}

TEST_CASE("diagonal and convolution validity") {
  auto z = z_structure()->nf_automaton();
  auto d = diagonal(z);
  CHECK(accepts(d, convolve({split_words("a a"), split_words("a a")})));
  CHECK_FALSE(accepts(d, convolve({split_words("a a"), split_words("a")})));
  CHECK_FALSE(accepts(d, convolve({split_words("a A"), split_words("a A")})));
  auto ta = tuple_alphabet({z.alphabet_ptr(), z.alphabet_ptr(), z.alphabet_ptr()});
  auto v = convolution_validity(ta);
  CHECK(accepts(v, convolve({split_words("a a"), split_words("A"), Word{}})));
  CHECK_FALSE(accepts(v, split_words("(_|a|a) (a|a|a)")));
}
