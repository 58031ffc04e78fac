#include "cga/verify.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <thread>

#include "cga/engine.hpp"
#include "cga/normal_form.hpp"
#include "cga/shortlex.hpp"

namespace cga {

namespace {

std::string show(const Word& w) { return w.empty() ? std::string("EPS") : join(w); }

// Runs f(i) for i in [0, n), split across threads in contiguous blocks.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& f) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct Trie {
  struct Node {
    std::vector<std::pair<Letter, std::uint32_t>> children;
    std::int64_t terminal = -1;
  };
  std::vector<Node> nodes{Node{}};

  void insert(const std::vector<Letter>& w, std::size_t id) {
    std::uint32_t cur = 0;
    for (Letter l : w) {
      auto& ch = nodes[cur].children;
      auto it = std::find_if(ch.begin(), ch.end(), [&](const auto& p) { return p.first == l; });
      if (it == ch.end()) {
        nodes.push_back(Node{});
        auto idx = static_cast<std::uint32_t>(nodes.size() - 1);
        nodes[cur].children.emplace_back(l, idx);
        cur = idx;
      } else {
        cur = it->second;
      }
    }
    nodes[cur].terminal = static_cast<std::int64_t>(id);
  }
};

// Indices of trie words v with the convolution of (u, v) accepted.
void accepted_partners(const GraphAutomaticStructure& s, const CounterAutomaton& m, const Trie& trie,
                       const std::vector<Letter>& u, std::uint32_t node, std::size_t depth, const ConfigurationSet& set,
                       std::vector<std::size_t>& out) {
  const auto& n = trie.nodes[node];
  if (n.terminal >= 0) {
    ConfigurationSet tail = set;
    for (std::size_t d = depth; d < u.size() && !tail.empty(); ++d) tail = step(m, tail, s.pair_letter(u[d], kPad));
    if (std::any_of(tail.begin(), tail.end(), [&](const Configuration& c) { return is_accepting(m, c); }))
      out.push_back(static_cast<std::size_t>(n.terminal));
  }
  Letter row0 = depth < u.size() ? u[depth] : kPad;
  for (const auto& [l, child] : n.children) {
    ConfigurationSet next = step(m, set, s.pair_letter(row0, l));
    if (!next.empty()) accepted_partners(s, m, trie, u, child, depth + 1, next, out);
  }
}

}  // namespace

bool VerificationFailure::operator<(const VerificationFailure& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (word.size() != o.word.size()) return word.size() < o.word.size();
  if (word != o.word) return word < o.word;
  if (other.size() != o.other.size()) return other.size() < o.other.size();
  if (other != o.other) return other < o.other;
  return detail < o.detail;
}

std::string to_string(VerificationFailure::Kind k) {
  switch (k) {
    case VerificationFailure::Kind::termination: return "termination";
    case VerificationFailure::Kind::merged_classes: return "merged-classes";
    case VerificationFailure::Kind::split_class: return "split-class";
    case VerificationFailure::Kind::soundness: return "soundness";
    case VerificationFailure::Kind::completeness: return "completeness";
    case VerificationFailure::Kind::quasigeodesic: return "quasigeodesic";
  }
  return "unknown";
}

std::size_t VerificationReport::count(VerificationFailure::Kind k) const {
  return static_cast<std::size_t>(
      std::count_if(failures.begin(), failures.end(), [&](const auto& f) { return f.kind == k; }));
}

std::string VerificationReport::summary() const {
  std::ostringstream out;
  out << "radius " << radius << "\n"
      << "words " << words << "\n"
      << "classes " << classes << "\n"
      << "normal-forms " << normal_forms << "\n"
      << "multiplier-pairs " << pairs_checked << "\n"
      << "multiplier-accepts " << multiplier_accepts << "\n"
      << "quasigeodesic-C " << (quasigeodesic_c ? std::to_string(*quasigeodesic_c) : std::string("none")) << "\n"
      << "failures " << failures.size() << "\n";
  for (const auto& f : failures) {
    out << "failure " << to_string(f.kind) << " " << show(f.word);
    if (!f.other.empty() || f.kind == VerificationFailure::Kind::merged_classes ||
        f.kind == VerificationFailure::Kind::split_class)
      out << " | " << show(f.other);
    if (!f.detail.empty()) out << " : " << f.detail;
    out << "\n";
  }
  return out.str();
}

std::vector<Word> ball(const std::vector<Token>& symbols, std::size_t radius) {
  std::vector<Word> out{Word{}};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= radius; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (const auto& x : symbols) {
        Word w = out[i];
        w.push_back(x);
        out.push_back(std::move(w));
      }
    }
    level_begin = level_end;
  }
  return out;
}

VerificationReport verify(const GraphAutomaticStructure& s, std::size_t radius, const GroupOracle& oracle,
                          const VerifyOptions& opts) {
  using Kind = VerificationFailure::Kind;
  std::vector<Token> symbols = opts.generators.empty() ? s.generators().finite_symbols() : opts.generators;
  if (symbols.empty()) throw std::invalid_argument("verify needs an explicit generator list for " + s.name());
  for (const auto& x : symbols)
    if (!s.generators().contains(x)) throw std::invalid_argument("unknown generator '" + x + "'");

  VerificationReport report;
  report.radius = radius;
  report.quasigeodesic_c = opts.quasigeodesic_c ? opts.quasigeodesic_c : s.quasigeodesic_c();
  std::vector<VerificationFailure> failures;

  // (1) Normal forms by prefix: the ball lists each word after its parent.
  const auto words = ball(symbols, radius);
  report.words = words.size();
  std::vector<std::size_t> parent(words.size(), 0);
  {
    std::size_t level_begin = 0, idx = 1;
    for (std::size_t len = 1; len <= radius; ++len) {
      std::size_t level_end = idx;
      for (std::size_t i = level_begin; i < level_end; ++i)
        for (std::size_t k = 0; k < symbols.size(); ++k) parent[idx++] = i;
      level_begin = level_end;
    }
  }
  for (const auto& x : symbols) s.multiplier(x);
  std::vector<std::optional<std::vector<Letter>>> nf(words.size());
  std::vector<std::string> errors(words.size());
  nf[0] = s.identity_letters();
  {
    std::size_t lo = 1;
    while (lo < words.size()) {
      std::size_t len = words[lo].size(), hi = lo;
      while (hi < words.size() && words[hi].size() == len) ++hi;
      parallel_for(hi - lo, opts.threads, [&](std::size_t k) {
        std::size_t i = lo + k;
        const auto& base = nf[parent[i]];
        if (!base) return;
        try {
          nf[i] = step_normal_form(s, std::span<const Letter>(*base), words[i].back());
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      });
      lo = hi;
    }
  }
  for (std::size_t i = 0; i < words.size(); ++i)
    if (!errors[i].empty()) failures.push_back({Kind::termination, words[i], {}, errors[i]});

  // (2) Bijection on the ball.
  std::vector<Word> canon(words.size());
  parallel_for(words.size(), opts.threads, [&](std::size_t i) { canon[i] = oracle.canonicalize(words[i]); });
  std::map<Word, std::size_t> class_rep;
  std::map<std::vector<Letter>, std::size_t> nf_rep;
  for (std::size_t i = 0; i < words.size(); ++i) {
    class_rep.emplace(canon[i], i);
    if (nf[i]) nf_rep.emplace(*nf[i], i);
  }
  report.classes = class_rep.size();
  report.normal_forms = nf_rep.size();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!nf[i]) continue;
    std::size_t c = class_rep.at(canon[i]);
    if (c != i && nf[c] && *nf[c] != *nf[i])
      failures.push_back({Kind::split_class, words[i], words[c], "equal elements with different normal forms"});
    std::size_t n = nf_rep.at(*nf[i]);
    if (n != i && canon[n] != canon[i])
      failures.push_back({Kind::merged_classes, words[i], words[n], "distinct elements share a normal form"});
  }

  // (3) Multipliers over all pairs of ball normal forms.
  if (opts.check_multipliers) {
    std::vector<std::vector<Letter>> forms;
    std::vector<std::size_t> form_word;
    for (const auto& [f, i] : nf_rep) {
      forms.push_back(f);
      form_word.push_back(i);
    }
    Trie trie;
    for (std::size_t k = 0; k < forms.size(); ++k) trie.insert(forms[k], k);
    std::map<Word, std::size_t> form_of_class;  // canonical word -> index into forms
    for (std::size_t k = 0; k < forms.size(); ++k) form_of_class.emplace(canon[form_word[k]], k);

    struct Job {
      std::size_t form;
      std::size_t gen;
    };
    std::vector<Job> jobs;
    for (std::size_t k = 0; k < forms.size(); ++k)
      for (std::size_t g = 0; g < symbols.size(); ++g) jobs.push_back({k, g});
    report.pairs_checked = jobs.size();
    std::vector<std::vector<VerificationFailure>> found(jobs.size());
    std::vector<std::size_t> accepted_count(jobs.size(), 0);
    parallel_for(jobs.size(), opts.threads, [&](std::size_t j) {
      const auto& job = jobs[j];
      const Token& x = symbols[job.gen];
      const CounterAutomaton& m = s.multiplier(x);
      const Word& rep = words[form_word[job.form]];
      Word moved = rep;
      moved.push_back(x);
      Word target = oracle.canonicalize(moved);
      std::optional<std::size_t> expected;
      if (auto it = form_of_class.find(target); it != form_of_class.end()) expected = it->second;
      ConfigurationSet start{start_configuration(m)};
      epsilon_close(m, start);
      std::vector<std::size_t> hits;
      accepted_partners(s, m, trie, forms[job.form], 0, 0, start, hits);
      accepted_count[j] = hits.size();
      bool saw_expected = false;
      for (std::size_t h : hits) {
        if (expected && h == *expected) {
          saw_expected = true;
          continue;
        }
        found[j].push_back({Kind::soundness, moved, words[form_word[h]],
                             "accepts (" + show(s.lambda()->decode(forms[job.form])) + ", " +
                                 show(s.lambda()->decode(forms[h])) + ")"});
      }
      if (expected && !saw_expected)
        found[j].push_back({Kind::completeness, moved, words[form_word[*expected]],
                            "rejects (" + show(s.lambda()->decode(forms[job.form])) + ", " +
                                show(s.lambda()->decode(forms[*expected])) + ")"});
    });
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      report.multiplier_accepts += accepted_count[j];
      failures.insert(failures.end(), found[j].begin(), found[j].end());
    }
  }

  // (4) Quasigeodesic bound against Shortlex geodesics.
  if (report.quasigeodesic_c) {
    GeodesicTable table(oracle, OrderedAlphabet(symbols), radius);
    std::size_t c = *report.quasigeodesic_c;
    for (const auto& [f, i] : nf_rep) {
      const Word* g = table.lookup(words[i]);
      if (!g) continue;
      if (f.size() > c * (g->size() + 1))
        failures.push_back({Kind::quasigeodesic, words[i], *g,
                            "normal form length " + std::to_string(f.size()) + " > " + std::to_string(c) +
                                " * (" + std::to_string(g->size()) + " + 1)"});
    }
  }

  std::sort(failures.begin(), failures.end());
  std::map<Kind, std::size_t> per_kind;
  for (auto& f : failures)
    if (per_kind[f.kind]++ < opts.max_failures) report.failures.push_back(std::move(f));
  return report;
}

}  // namespace cga
