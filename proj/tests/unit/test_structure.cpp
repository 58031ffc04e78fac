#include <doctest.h>

#include <chrono>
#include <cmath>
#include <thread>

#include "cga/bs.hpp"
#include "cga/errors.hpp"
#include "cga/finf.hpp"
#include "cga/normal_form.hpp"
#include "cga/verify.hpp"
#include "cga/zgroup.hpp"

using namespace cga;

namespace {

const std::vector<Token> kBS = {"a", "a-", "t", "t-"};

double bound_configurations(const StepTrace& t, std::size_t j) {
  return 2.0 * static_cast<double>(t.states) *
         std::pow(2.0 * static_cast<double>(t.growth) * static_cast<double>(j) + 1.0, static_cast<double>(t.counters));
}

}  // namespace

TEST_CASE("generator sets") {
  GeneratorSet g;
  g.add("a");
  g.add("s", "s");
  g.set_family({"x"});
  CHECK(g.inverse("a") == "a-");
  CHECK(g.inverse("a-") == "a");
  CHECK(g.inverse("s") == "s");
  CHECK(g.contains("x12-"));
  CHECK(g.family_index("x12-") == 12u);
  CHECK_FALSE(g.contains("x0"));
  CHECK_FALSE(g.contains("x"));
  CHECK_FALSE(g.contains("x01"));
  CHECK(g.inverse("x3") == "x3-");
  CHECK_THROWS(g.add("a"));
  CHECK(g.finite_symbols() == std::vector<Token>{"a", "a-", "s"});
}

TEST_CASE("identity normal forms") {
  CHECK(join(identity_normal_form(*bs_structure(4, 7))) == "# # # #");
  CHECK(identity_normal_form(*finf_structure()).empty());
  SUBCASE("a shifted seed is normalised at load time") {
    auto base = bs_structure(2, 3);
    StructureDefinition def = base->definition();
    def.seed_p = {"a"};
    def.seed_q = bs_encode({{}, 1}, 2, 3);
    auto s = GraphAutomaticStructure::create(std::move(def));
    CHECK(join(s->identity()) == "# # # #");
    CHECK(word_problem(*s, split_words("t a a t- a- a- a-")));
  }
  SUBCASE("a seed outside L is refused") {
    StructureDefinition def = bs_structure(2, 3)->definition();
    def.seed_q = {"#"};
    CHECK_THROWS_AS(GraphAutomaticStructure::create(std::move(def)), StructureError);
  }
}

TEST_CASE("single steps") {
  auto s = bs_structure(4, 7);
  CHECK(join(step_normal_form(*s, split_words("# # # #"), "a")) == "# 1 # # 1 #");
  Word u = normal_form(*s, Word(7, "a"));
  CHECK(step_normal_form(*s, u, "t") == bs_encode(bs_canonicalize(split_words("t a a a a"), 4, 7), 4, 7));
  auto f = finf_structure();
  CHECK(step_normal_form(*f, split_words("p 1 1"), "x2-").empty());
  CHECK_THROWS(step_normal_form(*s, split_words("# #"), "a"));
  CHECK_THROWS(normal_form(*s, split_words("b")));
}

TEST_CASE("inverse round trip and right-multiplication coherence") {
  auto s = bs_structure(2, 3);
  for (const auto& w : ball(kBS, 3)) {
    Word ww = w;
    for (auto it = w.rbegin(); it != w.rend(); ++it) ww.push_back(s->generators().inverse(*it));
    REQUIRE(normal_form(*s, ww) == s->identity());
    Word u = normal_form(*s, w);
    for (const auto& x : kBS)
      REQUIRE(step_normal_form(*s, step_normal_form(*s, u, x), s->generators().inverse(x)) == u);
  }
}

TEST_CASE("enumerative steps agree with the configuration-graph search") {
  auto s = bs_structure(2, 3);
  std::size_t compared = 0;
  for (const auto& w : ball(kBS, 4)) {
    Word u = normal_form(*s, w);
    if (u.size() > 8) continue;
    for (const auto& x : kBS) {
      REQUIRE(normal_form_enumerative(*s, u, x) == step_normal_form(*s, u, x));
      ++compared;
    }
  }
  CHECK(compared > 100);
  // The identity round trip also holds on the enumerative path.
  Word back = normal_form_enumerative(*s, normal_form_enumerative(*s, s->identity(), "t"), "t-");
  CHECK(back == s->identity());
  CHECK(normal_form(*s, split_words("a t a- t-"), nullptr, Algorithm::enumerative) ==
        normal_form(*s, split_words("a t a- t-")));
}

TEST_CASE("traces respect the configuration and counter bounds") {
  auto s = bs_structure(2, 3);
  NormalFormTrace trace;
  normal_form(*s, split_words("a a t a- t- t- a a a"), &trace);
  CHECK(trace.forms.size() == trace.steps.size() + 1);
  CHECK(trace.forms.front() == s->identity());
  for (const auto& st : trace.steps) {
    CHECK(st.counters <= 3);
    for (std::size_t j = 0; j < st.levels.size(); ++j) {
      CHECK(static_cast<double>(st.levels[j].configurations) <= bound_configurations(st, j));
      CHECK(st.levels[j].max_abs_counter <= st.growth * static_cast<Counter>(j));
    }
  }
}

TEST_CASE("a growth policy that is too tight reports the bound") {
  StructureDefinition def = bs_structure(2, 3)->definition();
  def.growth = {1, 0, 0};
  auto s = GraphAutomaticStructure::create(std::move(def));
  try {
    normal_form(*s, split_words("a"));
    FAIL("expected the search to give up");
  } catch (const SearchBoundExceeded& e) {
    CHECK(e.bound() == 4);
  }
}

TEST_CASE("family multipliers are instantiated lazily") {
  auto s = finf_structure();
  CHECK(s->instantiated_multipliers().empty());
  normal_form(*s, split_words("x2 x7-"));
  auto made = s->instantiated_multipliers();
  std::sort(made.begin(), made.end());
  CHECK(made == std::vector<Token>{"x2", "x7", "x7-"});
}

TEST_CASE("concurrent normal forms share one structure") {
  auto s = bs_structure(2, 3);
  auto words = ball(kBS, 4);
  std::vector<Word> serial;
  for (const auto& w : words) serial.push_back(normal_form(*bs_structure(2, 3), w));
  std::vector<Word> parallel(words.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < words.size(); i += 4) parallel[i] = normal_form(*s, words[i]);
    });
  for (auto& th : pool) th.join();
  CHECK(parallel == serial);

  BSOracle o(2, 3);
  VerifyOptions one, four;
  four.threads = 4;
  CHECK(verify(*s, 3, o, one).summary() == verify(*bs_structure(2, 3), 3, o, four).summary());
}

TEST_CASE("verify reports") {
  auto s = bs_structure(2, 3);
  BSOracle o(2, 3);
  auto rep = verify(*s, 3, o);
  CHECK(rep.ok());
  CHECK(rep.words == 85);
  CHECK(rep.classes == rep.normal_forms);
  SUBCASE("quasigeodesic constant 1 fails") {
    VerifyOptions opts;
    opts.quasigeodesic_c = 1;
    auto bad = verify(*s, 4, o, opts);
    CHECK(bad.count(VerificationFailure::Kind::quasigeodesic) > 0);
    CHECK(bad.count(VerificationFailure::Kind::soundness) == 0);
  }
  SUBCASE("a wrong oracle is caught") {
    FreeGroupOracle free;
    auto bad = verify(*s, 4, free);
    CHECK(bad.count(VerificationFailure::Kind::merged_classes) > 0);
  }
  SUBCASE("F-infinity needs explicit generators") {
    FreeGroupOracle free;
    CHECK_THROWS(verify(*finf_structure(), 2, free));
  }
}

TEST_CASE("quasigeodesic runtime grows polynomially") {
  // Doubling the word length on Z (C = 1) should cost about four times as much.
  auto s = z_structure();
  auto time_for = [&](std::size_t n) {
    auto t0 = std::chrono::steady_clock::now();
    for (int rep = 0; rep < 3; ++rep) normal_form(*s, Word(n, "a"));
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  time_for(50);
  double small = std::max(time_for(100), 1e-4), large = time_for(800);
  CHECK(large <= small * 8 * 8 * 8);
}
