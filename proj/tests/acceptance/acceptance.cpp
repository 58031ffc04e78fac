// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "cga/bs.hpp"
#include "cga/engine.hpp"
#include "cga/expression.hpp"
#include "cga/finf.hpp"
#include "cga/langops.hpp"
#include "cga/normal_form.hpp"
#include "cga/oracle.hpp"
#include "cga/shortlex.hpp"
#include "cga/verify.hpp"

using namespace cga;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note = what;
    pass = pass && ok;
  }
};

const std::vector<Token> kBS = {"a", "a-", "t", "t-"};

// Data gathered once by the length-5 sweep over BS(2,3) and BS(4,7).
struct SweepResult {
  Outcome partition, cross_check, bounds;
  std::size_t steps = 0;
};

SweepResult sweep(const std::vector<std::pair<int, int>>& params) {
  SweepResult r;
  for (auto [m, n] : params) {
    auto s = bs_structure(m, n);
    BSOracle oracle(m, n);
    std::string tag = "BS(" + std::to_string(m) + "," + std::to_string(n) + ")";
    auto words = ball(kBS, 5);
    r.partition.require(words.size() == 1365, tag + ": ball has " + std::to_string(words.size()) + " words");
    std::map<Word, std::size_t> index;
    for (std::size_t i = 0; i < words.size(); ++i) index[words[i]] = i;
    std::vector<Word> nf(words.size());
    nf[0] = s->identity();
    for (std::size_t i = 1; i < words.size(); ++i) {
      Word parent(words[i].begin(), words[i].end() - 1);
      const Word& u = nf[index.at(parent)];
      const Token& x = words[i].back();
      StepTrace trace;
      nf[i] = step_normal_form(*s, u, x, &trace);
      ++r.steps;
      Word e = normal_form_enumerative(*s, u, x);
      r.cross_check.require(e == nf[i], tag + ": algorithms differ on " + join(u) + " * " + x);
      for (std::size_t j = 0; j < trace.levels.size(); ++j) {
        double cap = 2.0 * static_cast<double>(trace.states) *
                     std::pow(2.0 * static_cast<double>(trace.growth) * static_cast<double>(j) + 1.0,
                              static_cast<double>(trace.counters));
        r.bounds.require(static_cast<double>(trace.levels[j].configurations) <= cap,
                         tag + ": |S_j| above bound on " + join(u) + " * " + x);
        r.bounds.require(trace.levels[j].max_abs_counter <= trace.growth * static_cast<Counter>(j),
                         tag + ": counter above F*j on " + join(u) + " * " + x);
      }
    }
    std::map<Word, Word> nf_of_class, class_of_nf;
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      Word c = oracle.canonicalize(words[i]);
      auto [a, fresh_a] = nf_of_class.emplace(c, nf[i]);
      auto [b, fresh_b] = class_of_nf.emplace(nf[i], c);
      if (a->second != nf[i] || b->second != c) ++mismatches;
    }
    r.partition.require(mismatches == 0, tag + ": " + std::to_string(mismatches) + " partition mismatches");

    auto report = verify(*s, 4, oracle);
    std::size_t bad = report.count(VerificationFailure::Kind::soundness) +
                      report.count(VerificationFailure::Kind::completeness);
    r.partition.require(bad == 0, tag + ": " + std::to_string(bad) + " multiplier failures at radius 4");
    r.partition.require(report.ok(), tag + ": verify at radius 4 reported failures");
  }
  return r;
}

Outcome verify_clean(const std::string& expr, std::size_t radius, const GroupOracle* oracle = nullptr) {
  Outcome o;
  auto built = build_expression(expr);
  auto report = verify(*built.structure, radius, oracle ? *oracle : *built.oracle);
  o.require(report.ok(), expr + ": " + std::to_string(report.failures.size()) + " failures at radius " +
                             std::to_string(radius));
  return o;
}

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;  // 0 means no stated budget
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  std::optional<SweepResult> shared;
  auto get_sweep = [&]() -> SweepResult& {
    if (!shared) shared = sweep({{2, 3}, {4, 7}});
    return *shared;
  };
  // Criteria 4 to 6 share one sweep; its time is charged to criterion 4.
  std::vector<Criterion> criteria = {
      {1, "convolution of (aa, bbb, a)", 0,
       [] {
         Outcome o;
         Word w = convolve({split_words("a a"), split_words("b b b"), split_words("a")});
         o.require(join(w) == "(a|b|a) (a|b|_) (_|b|_)", "got " + join(w));
         return o;
       }},
      {2, "F-infinity encoding and the L2/L3 literal", 0,
       [] {
         Outcome o;
         std::string enc = join(finf_encode(split_words("x2 x2 x2 x5-")), "");
         o.require(enc == "p11p11p11n11111", "encoding " + enc);
         Word w = split_words("n 1 p 1 1 n 1 1 p 1");
         o.require(accepts(finf_block_automaton("s2"), w), "L2 rejects n1p11n11p1");
         o.require(!accepts(finf_block_automaton("s3"), w), "L3 accepts n1p11n11p1");
         o.require(!accepts(finf_nf_automaton(), w), "L accepts n1p11n11p1");
         return o;
       }},
      {3, "BS(4,7) literals and decode diagnostics", 0,
       [] {
         Outcome o;
         auto nf = bs_nf_automaton(4, 7);
         Word good = split_words("at # 1 1 1 # 1 # # 1");
         Word big_r = split_words("at # 1 1 1 1 1 # 1 # # 1");
         Word mismatch = split_words("at # 1 1 # 1 1 # 1 # 1");
         o.require(accepts(nf, good), "at#111#1##1 rejected");
         o.require(!accepts(nf, big_r), "at#11111#1##1 accepted");
         o.require(!accepts(nf, mismatch), "at#11#11#1#1 accepted");
         auto d1 = bs_decode(big_r, 4, 7);
         o.require(d1.error == BSDecodeError::r_not_below_m && d1.r == 5, "diagnostic: " + d1.message);
         auto d2 = bs_decode(mismatch, 4, 7);
         o.require(d2.error == BSDecodeError::mismatch && d2.message == "r+pm=10 whereas s+qn=8",
                   "diagnostic: " + d2.message);
         return o;
       }},
      {4, "BS(2,3), BS(4,7): length-5 partition and radius-4 verify", 300, [&] { return get_sweep().partition; }},
      {5, "graph search and enumeration agree on every sweep step", 0, [&] { return get_sweep().cross_check; }},
      {6, "trace bounds |S_j| <= 2D(2Fj+1)^k and |counter| <= Fj", 0, [&] { return get_sweep().bounds; }},
      {7, "free(z,z) r5, product(z,z) r5, regen(bs:2,3; a=a; t=t; u=at) r3", 600,
       [] {
         Outcome o;
         FreeGroupOracle free;
         for (auto part : {verify_clean("free(z,z)", 5, &free), verify_clean("product(z,z)", 5),
                           verify_clean("regen(bs:2,3; a=a; t=t; u=at)", 3)})
           o.require(part.pass, part.note);
         return o;
       }},
      {8, "BS(2,3) is not quasigeodesic with C = 1; geodesic of a^9 has length 8", 0,
       [] {
         Outcome o;
         auto s = bs_structure(2, 3);
         BSOracle oracle(2, 3);
         VerifyOptions opts;
         opts.quasigeodesic_c = 1;
         opts.check_multipliers = false;
         std::optional<std::size_t> found;
         for (std::size_t r = 1; r <= 6 && !found; ++r)
           if (verify(*s, r, oracle, opts).count(VerificationFailure::Kind::quasigeodesic)) found = r;
         o.require(found.has_value(), "no quasigeodesic witness up to radius 6");
         if (found) o.note = "witness at radius " + std::to_string(*found);
         auto g = geodesic_normal_form(oracle, OrderedAlphabet(kBS), Word(9, "a"));
         o.require(g && g->size() == 8, "geodesic of a^9 has length " + (g ? std::to_string(g->size()) : "?"));
         return o;
       }},
      {9, "successor over {a<b} reproduces the first 500 strings", 0,
       [] {
         Outcome o;
         std::vector<Word> all{{}};
         for (std::size_t i = 0; all.size() < 1000; ++i)
           for (const char* c : {"a", "b"}) {
             Word w = all[i];
             w.push_back(c);
             all.push_back(w);
           }
         std::stable_sort(all.begin(), all.end(), [](const Word& u, const Word& v) {
           return u.size() != v.size() ? u.size() < v.size() : u < v;
         });
         OrderedAlphabet ab({"a", "b"});
         Word v;
         for (std::size_t i = 0; i < 500 && o.pass; ++i, v = successor(v, ab))
           o.require(v == all[i], "string " + std::to_string(i) + " is " + join(v));
         return o;
       }},
      {10, "F-infinity over x1..x3 at radius 4; lazy multipliers", 0,
       [] {
         Outcome o;
         auto s = finf_structure();
         FreeGroupOracle free;
         VerifyOptions opts;
         opts.generators = {"x1", "x1-", "x2", "x2-", "x3", "x3-"};
         auto report = verify(*s, 4, free, opts);
         o.require(report.ok(), std::to_string(report.failures.size()) + " failures");
         std::set<Token> allowed(opts.generators.begin(), opts.generators.end());
         auto made = s->instantiated_multipliers();
         for (const auto& x : made) o.require(allowed.count(x) > 0, "instantiated " + x);
         o.require(made.size() == allowed.size(), std::to_string(made.size()) + " multipliers instantiated");
         return o;
       }},
  };

  bool all_pass = true;
  for (const auto& c : criteria) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      o.pass = false;
      o.note = "over the " + std::to_string(static_cast<int>(c.budget_seconds)) + "s budget";
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << "  (" << secs << "s";
    if (!o.note.empty()) line << "; " << o.note;
    line << ")";
    std::cout << line.str() << std::endl;
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
