#include <doctest.h>

#include <random>

#include "cga/bs.hpp"
#include "cga/combinators.hpp"
#include "cga/engine.hpp"
#include "cga/expression.hpp"
#include "cga/finf.hpp"
#include "cga/langops.hpp"
#include "cga/normal_form.hpp"
#include "cga/oracle.hpp"
#include "cga/verify.hpp"
#include "cga/zgroup.hpp"

using namespace cga;

namespace {

Word random_word(std::mt19937& rng, const std::vector<Token>& gens, std::size_t len) {
  Word w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(gens[rng() % gens.size()]);
  return w;
}

const std::vector<Token> kBS = {"a", "a-", "t", "t-"};

}  // namespace

TEST_CASE("free reduction") {
  CHECK(free_reduce(split_words("x2 x2-")).empty());
  CHECK(join(free_reduce(split_words("x1 x2 x2- x1"))) == "x1 x1");
  CHECK(join(free_reduce(split_words("x2 x2 x2 x5-"))) == "x2 x2 x2 x5-");
  FreeGroupOracle o;
  CHECK(o.is_identity(split_words("a b b- a-")));
}

TEST_CASE("BS canonical pairs") {
  auto p = bs_canonicalize(split_words("a a a a a a a t"), 4, 7);
  CHECK(p.P == std::vector<PiLetter>{{0, 1}});
  CHECK(p.N == 4);
  auto q = bs_canonicalize(split_words("a t a a a a a a a"), 4, 7);
  CHECK(q.P == std::vector<PiLetter>{{1, 1}});
  CHECK(q.N == 7);
  auto e = bs_canonicalize(split_words("t t-"), 4, 7);
  CHECK(e.P.empty());
  CHECK(e.N == 0);
}

TEST_CASE("BS oracle respects the defining identities") {
  std::mt19937 rng(1);
  for (auto [m, n] : {std::pair{2, 3}, std::pair{4, 7}}) {
    BSOracle o(m, n);
    Word am(static_cast<std::size_t>(m), "a"), an(static_cast<std::size_t>(n), "a");
    Word am_(static_cast<std::size_t>(m), "a-"), an_(static_cast<std::size_t>(n), "a-");
    auto cat = [](std::initializer_list<Word> parts) {
      Word out;
      for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
      return out;
    };
    // a^{+-n} t = t a^{+-m}, t- a^{+-n} = a^{+-m} t-, and both free cancellations.
    std::vector<std::pair<Word, Word>> rules = {
        {cat({an, {"t"}}), cat({{"t"}, am})},       {cat({an_, {"t"}}), cat({{"t"}, am_})},
        {cat({{"t-"}, an}), cat({am, {"t-"}})},     {cat({{"t-"}, an_}), cat({am_, {"t-"}})},
        {{"t", "t-"}, {}},                          {{"a", "a-"}, {}}};
    for (int trial = 0; trial < 50; ++trial) {
      Word pre = random_word(rng, kBS, rng() % 5), post = random_word(rng, kBS, rng() % 5);
      for (const auto& [l, r] : rules) REQUIRE(o.equal(cat({pre, l, post}), cat({pre, r, post})));
      Word w = random_word(rng, kBS, 6);
      REQUIRE(o.canonicalize(o.canonicalize(w)) == o.canonicalize(w));
      REQUIRE(o.is_identity(cat({w, o.inverse_word(w)})));
    }
  }
}

TEST_CASE("BS encoding") {
  CHECK(join(bs_encode({{{1, 1}}, 7}, 4, 7), "") == "at#111#1##1");
  CHECK(join(bs_encode({{}, 0}, 4, 7), "") == "####");
  CHECK(join(bs_encode({{{0, 1}}, -4}, 4, 7)) == "t # # -1 # -1 -1 -1 -1 #");
  CHECK(pi_token({2, -1}) == "a2t-");
  CHECK(pi_token({0, 1}) == "t");
  REQUIRE(parse_pi_token("a3t", 4, 7));
  CHECK(*parse_pi_token("a3t", 4, 7) == PiLetter{3, 1});
  CHECK_FALSE(parse_pi_token("a4t-", 4, 7));
}

TEST_CASE("BS decode diagnostics") {
  auto ok = bs_decode(split_words("at # 1 1 1 # 1 # # 1"), 4, 7);
  REQUIRE(ok.pair);
  CHECK(ok.pair->N == 7);
  auto r = bs_decode(split_words("at # 1 1 1 1 1 # 1 # # 1"), 4, 7);
  CHECK(r.error == BSDecodeError::r_not_below_m);
  CHECK(r.message == "r=5 is not less than m=4");
  auto mm = bs_decode(split_words("at # 1 1 # 1 1 # 1 # 1"), 4, 7);
  CHECK(mm.error == BSDecodeError::mismatch);
  CHECK(mm.message == "r+pm=10 whereas s+qn=8");
  CHECK(bs_decode(split_words("t t- # # # #"), 4, 7).error == BSDecodeError::not_reduced);
  CHECK(bs_decode(split_words("# 1 # -1 # #"), 4, 7).error == BSDecodeError::mixed_signs);
  CHECK(bs_decode(split_words("# # #"), 4, 7).error == BSDecodeError::malformed);
}

TEST_CASE("BS encode and decode are inverse and land in L") {
  std::mt19937 rng(2);
  for (auto [m, n] : {std::pair{2, 3}, std::pair{4, 7}}) {
    auto nf = bs_nf_automaton(m, n);
    for (int trial = 0; trial < 80; ++trial) {
      auto pair = bs_canonicalize(random_word(rng, kBS, rng() % 9), m, n);
      Word enc = bs_encode(pair, m, n);
      auto dec = bs_decode(enc, m, n);
      REQUIRE(dec.pair);
      REQUIRE(*dec.pair == pair);
      REQUIRE(accepts(nf, enc));
    }
  }
}

TEST_CASE("BS literals against the normal-form machine") {
  auto nf = bs_nf_automaton(4, 7);
  CHECK(accepts(nf, split_words("at # 1 1 1 # 1 # # 1")));
  CHECK_FALSE(accepts(nf, split_words("at # 1 1 1 1 1 # 1 # # 1")));
  CHECK_FALSE(accepts(nf, split_words("at # 1 1 # 1 1 # 1 # 1")));
  CHECK(accepts(nf, split_words("# # # #")));
}

TEST_CASE("BS structure") {
  auto s = bs_structure(4, 7);
  CHECK(join(s->identity()) == "# # # #");
  CHECK(join(step_normal_form(*s, s->identity(), "a")) == "# 1 # # 1 #");
  CHECK(join(normal_form(*s, split_words("a a a a a a a"))) == "# 1 1 1 # 1 # # 1");
  CHECK(normal_form(*s, split_words("a a a a a a a t")) ==
        bs_encode(bs_canonicalize(split_words("t a a a a"), 4, 7), 4, 7));
  for (const auto& x : kBS) CHECK(s->multiplier(x).counters() <= 3);
  CHECK(validate(s->multiplier("a")).blind);
  auto s23 = bs_structure(2, 3);
  CHECK(normal_form(*s23, split_words("t a a t-")) == normal_form(*s23, split_words("a a a")));
  CHECK(word_problem(*s23, split_words("t a a t- a- a- a-")));
  CHECK_FALSE(word_problem(*s23, split_words("a")));
  CHECK_THROWS(bs_structure(3, 3));
  CHECK_THROWS(bs_structure(1, 3));
}

TEST_CASE("F-infinity structure") {
  CHECK(join(finf_encode(split_words("x2 x2 x2 x5-")), "") == "p11p11p11n11111");
  auto w = split_words("n 1 p 1 1 n 1 1 p 1");
  CHECK(accepts(finf_block_automaton("s2"), w));
  CHECK_FALSE(accepts(finf_block_automaton("s3"), w));
  CHECK_FALSE(accepts(finf_nf_automaton(), w));
  auto s = finf_structure();
  CHECK(s->identity().empty());
  CHECK(join(normal_form(*s, split_words("x2 x2 x2 x5-")), "") == "p11p11p11n11111");
  CHECK(normal_form(*s, split_words("x3 x3-")).empty());
  CHECK(step_normal_form(*s, split_words("p 1 1"), "x2-").empty());
  CHECK(are_equal(*s, split_words("x1 x2 x2-"), split_words("x1")));
  CHECK(join(normal_form_enumerative(*s, Word{}, "x1")) == "p 1");
  CHECK(s->nf_automaton().counters() == 2);
}

TEST_CASE("unary Z structure") {
  auto s = z_structure();
  CHECK(s->nf_automaton().counters() == 0);
  CHECK(join(normal_form(*s, split_words("a a- a- a-"))) == "A A");
  auto rep = verify(*s, 6, FreeGroupOracle({"a"}));
  CHECK(rep.ok());
  CHECK(rep.classes == 13);
}

TEST_CASE("direct product of two copies of Z") {
  auto z = z_structure();
  auto p = direct_product(z, z);
  CHECK(p->identity() == convolve({z->identity(), z->identity()}));
  CHECK(are_equal(*p, split_words("1.a 2.a"), split_words("2.a 1.a")));
  CHECK_FALSE(are_equal(*p, split_words("1.a"), split_words("2.a")));
  auto built = build_expression("product(z,z)");
  auto rep = verify(*built.structure, 4, *built.oracle);
  CHECK(rep.ok());
}

TEST_CASE("free product of two copies of Z") {
  auto z = z_structure();
  auto f = free_product(z, z);
  CHECK(f->identity().empty());
  CHECK(f->nf_automaton().counters() == 0);
  CHECK_FALSE(are_equal(*f, split_words("1.a 2.a"), split_words("2.a 1.a")));
  CHECK(word_problem(*f, split_words("1.a 2.a 2.a- 1.a-")));
  auto rep = verify(*f, 4, FreeGroupOracle());
  CHECK(rep.ok());
}

TEST_CASE("free product counter count is the maximum of the factors") {
  auto f = free_product(finf_structure(), z_structure());
  CHECK(f->nf_automaton().counters() == 2);
  CHECK(word_problem(*f, split_words("x2 a x2- a-")) == false);
  CHECK(word_problem(*f, split_words("x2 a a- x2-")));
}

TEST_CASE("free product of BS(2,3) with Z keeps the relator") {
  auto built = build_expression("free(bs:2,3,z)");
  const auto& s = *built.structure;
  CHECK(s.generators().contains("1.t"));
  CHECK(s.nf_automaton().counters() == 1);
  CHECK(word_problem(s, split_words("1.t 1.a 1.a 1.t- 1.a- 1.a- 1.a-")));
  CHECK_FALSE(word_problem(s, split_words("1.a 2.a 1.a- 2.a-")));
  CHECK(built.oracle->is_identity(split_words("1.t 1.a 1.a 1.t- 1.a- 1.a- 1.a-")));
}

TEST_CASE("changing generators") {
  auto bs = bs_structure(2, 3);
  SUBCASE("identity change keeps the multiplier languages") {
    auto same = change_generators(bs, {{"a", Word{"a"}}, {"t", Word{"t"}}});
    std::vector<Word> forms;
    for (const auto& w : ball(kBS, 3)) forms.push_back(normal_form(*bs, w));
    for (const auto& x : kBS)
      for (std::size_t i = 0; i < forms.size(); i += 3)
        for (std::size_t j = 0; j < forms.size(); j += 5) {
          Word c = convolve({forms[i], forms[j]});
          REQUIRE(accepts(same->multiplier(x), c) == accepts(bs->multiplier(x), c));
        }
  }
  SUBCASE("a trivial generator gets the diagonal") {
    auto with_e = change_generators(bs, {{"a", Word{"a"}}, {"t", Word{"t"}}, {"e", std::nullopt}});
    Word u = normal_form(*bs, split_words("a t a"));
    CHECK(accepts(with_e->multiplier("e"), convolve({u, u})));
    CHECK(normal_form(*with_e, split_words("a e t e- a")) == u);
  }
  SUBCASE("y = a t") {
    auto built = build_expression("regen(bs:2,3; a=a; t=t; u=at)");
    CHECK(built.structure->generators().contains("u-"));
    CHECK(are_equal(*built.structure, split_words("u"), split_words("a t")));
    auto rep = verify(*built.structure, 2, *built.oracle);
    CHECK(rep.ok());
  }
}
