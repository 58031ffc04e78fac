#include "cga/normal_form.hpp"

#include <algorithm>
#include <unordered_map>

#include "cga/engine.hpp"
#include "cga/errors.hpp"
#include "cga/shortlex.hpp"

namespace cga {

std::size_t StepTrace::max_configurations() const {
  std::size_t best = 0;
  for (const auto& l : levels) best = std::max(best, l.configurations);
  return best;
}

std::size_t StepTrace::max_edges() const {
  std::size_t best = 0;
  for (const auto& l : levels) best = std::max(best, l.edges);
  return best;
}

namespace {

struct Edge {
  std::uint32_t from;
  Letter sigma;  // kPad once v has ended
};

struct Level {
  std::vector<Configuration> configs;
  std::unordered_map<Configuration, std::uint32_t, ConfigurationHash> index;
  std::vector<std::vector<Edge>> preds;
  std::size_t edges = 0;

  std::uint32_t add(Configuration c) {
    auto [it, inserted] = index.emplace(c, static_cast<std::uint32_t>(configs.size()));
    if (inserted) {
      configs.push_back(std::move(c));
      preds.emplace_back();
    }
    return it->second;
  }
};

LevelStats stats_of(const Level& l) {
  LevelStats s{l.configs.size(), l.edges, 0};
  for (const auto& c : l.configs)
    for (Counter v : c.counters) s.max_abs_counter = std::max(s.max_abs_counter, v < 0 ? -v : v);
  return s;
}

bool has_accepting(const CounterAutomaton& m, const Level& l) {
  return std::any_of(l.configs.begin(), l.configs.end(), [&](const Configuration& c) { return is_accepting(m, c); });
}

void extend(const CounterAutomaton& m, const Level& cur, Level& next, std::uint32_t from, Letter pair_letter,
            Letter sigma, bool diamond) {
  const Configuration& c = cur.configs[from];
  ConfigurationSet reached;
  for (auto ti : m.out(c.state, pair_letter)) {
    Configuration d = c;
    d.diamond = false;
    if (apply_transition(m.transitions()[ti], d)) reached.insert(std::move(d));
  }
  if (reached.empty()) return;
  epsilon_close(m, reached);
  for (auto d : reached) {
    d.diamond = diamond;
    std::uint32_t to = next.add(std::move(d));
    next.preds[to].push_back({from, sigma});
    ++next.edges;
  }
}

void require_normal_form(const GraphAutomaticStructure& s, std::span<const Letter> u) {
  if (!accepts(s.nf_automaton(), u))
    throw std::invalid_argument("input '" + join(s.lambda()->decode(u)) + "' is not a normal form of " + s.name());
}

std::vector<Letter> step_unchecked(const GraphAutomaticStructure& s, std::span<const Letter> u, const Token& x,
                                   StepTrace* trace) {
  const CounterAutomaton& m = s.multiplier(x);
  const std::size_t lam = s.lambda()->size();
  const std::size_t len = u.size();
  const std::size_t bound = std::max(s.growth_bound(len, x), len);
  std::vector<Level> levels(1);
  {
    ConfigurationSet start{start_configuration(m)};
    epsilon_close(m, start);
    for (const auto& c : start) levels[0].add(c);
  }
  auto finish_trace = [&](std::size_t out_len) {
    if (!trace) return;
    trace->generator = x;
    trace->input_length = len;
    trace->output_length = out_len;
    trace->bound = bound;
    trace->states = m.num_states();
    trace->counters = m.counters();
    trace->growth = growth_constant(m);
    trace->levels.clear();
    for (const auto& l : levels) trace->levels.push_back(stats_of(l));
  };

  // Reading (u_j | sigma): live configurations branch on sigma or on the pad;
  // flagged ones only continue with the pad.
  for (std::size_t j = 0; j < len; ++j) {
    Level next;
    const Level& cur = levels[j];
    for (std::uint32_t i = 0; i < cur.configs.size(); ++i) {
      if (!cur.configs[i].diamond)
        for (std::size_t sig = 0; sig < lam; ++sig)
          extend(m, cur, next, i, s.pair_letter(u[j], static_cast<Letter>(sig)), static_cast<Letter>(sig), false);
      extend(m, cur, next, i, s.pair_letter(u[j], kPad), kPad, true);
    }
    levels.push_back(std::move(next));
    if (levels.back().configs.empty()) {
      finish_trace(0);
      throw StructureError("multiplier for '" + x + "' rejects every continuation of the input");
    }
  }
  std::size_t j = len;
  if (!has_accepting(m, levels[len])) {
    // Flagged configurations at |u| cannot be extended.
    Level& last = levels[len];
    Level kept;
    for (std::uint32_t i = 0; i < last.configs.size(); ++i) {
      if (last.configs[i].diamond) continue;
      std::uint32_t k = kept.add(last.configs[i]);
      kept.preds[k] = last.preds[i];
      kept.edges += last.preds[i].size();
    }
    last = std::move(kept);
    while (true) {
      if (levels[j].configs.empty()) {
        finish_trace(0);
        throw StructureError("multiplier for '" + x + "' accepts no result for '" + join(s.lambda()->decode(u)) + "'");
      }
      if (j >= bound) {
        finish_trace(0);
        throw SearchBoundExceeded("normal form search for '" + x + "' exceeded bound " + std::to_string(bound) +
                                      " (reached length " + std::to_string(j) + ")",
                                  bound, j);
      }
      Level next;
      const Level& cur = levels[j];
      for (std::uint32_t i = 0; i < cur.configs.size(); ++i)
        for (std::size_t sig = 0; sig < lam; ++sig)
          extend(m, cur, next, i, s.pair_letter(kPad, static_cast<Letter>(sig)), static_cast<Letter>(sig), false);
      levels.push_back(std::move(next));
      ++j;
      if (has_accepting(m, levels[j])) break;
    }
  }

  // Every accepting path spells the same v; insist on it while reading it off.
  std::vector<char> marked(levels[j].configs.size(), 0);
  for (std::uint32_t i = 0; i < levels[j].configs.size(); ++i) marked[i] = is_accepting(m, levels[j].configs[i]);
  std::vector<Letter> reversed;
  for (std::size_t lv = j; lv > 0; --lv) {
    std::optional<Letter> label;
    std::vector<char> prev(levels[lv - 1].configs.size(), 0);
    for (std::uint32_t i = 0; i < marked.size(); ++i) {
      if (!marked[i]) continue;
      for (const auto& e : levels[lv].preds[i]) {
        if (label && *label != e.sigma)
          throw StructureError("multiplier for '" + x + "' accepts two different results for '" +
                               join(s.lambda()->decode(u)) + "'");
        label = e.sigma;
        prev[e.from] = 1;
      }
    }
    if (*label != kPad) reversed.push_back(*label);
    marked = std::move(prev);
  }
  std::vector<Letter> v(reversed.rbegin(), reversed.rend());
  finish_trace(v.size());
  return v;
}

}  // namespace

std::vector<Letter> step_normal_form(const GraphAutomaticStructure& s, std::span<const Letter> u, const Token& x,
                                     StepTrace* trace) {
  require_normal_form(s, u);
  return step_unchecked(s, u, x, trace);
}

Word step_normal_form(const GraphAutomaticStructure& s, const Word& u, const Token& x, StepTrace* trace) {
  auto letters = s.lambda()->encode(u);
  return s.lambda()->decode(step_normal_form(s, std::span<const Letter>(letters), x, trace));
}

Word normal_form_enumerative(const GraphAutomaticStructure& s, const Word& u_word, const Token& x,
                             EnumerationOptions opts) {
  auto u = s.lambda()->encode(u_word);
  require_normal_form(s, u);
  const CounterAutomaton& m = s.multiplier(x);
  const OrderedAlphabet order(s.order());
  const std::size_t bound = std::max(s.growth_bound(u.size(), x), u.size());
  auto row0 = [&](std::size_t d) { return d < u.size() ? u[d] : kPad; };

  // sets[d]: configurations after the first d letters of the convolution, valid for d <= valid.
  std::vector<ConfigurationSet> sets(1);
  sets[0].insert(start_configuration(m));
  epsilon_close(m, sets[0]);
  std::size_t valid = 0;
  Word v;
  while (v.size() <= bound) {
    std::vector<Letter> vl;
    vl.reserve(v.size());
    for (const auto& t : v) vl.push_back(s.lambda()->index(t));
    if (sets.size() < v.size() + 1) sets.resize(v.size() + 1);
    std::optional<std::size_t> dead;
    for (std::size_t d = valid; d < v.size(); ++d) {
      sets[d + 1] = sets[d].empty() ? ConfigurationSet{} : step(m, sets[d], s.pair_letter(row0(d), vl[d]));
      valid = d + 1;
      if (sets[d + 1].empty() && opts.prune) {
        dead = d + 1;
        break;
      }
    }
    auto common = [&](const Word& a, const Word& b) {
      std::size_t c = 0;
      while (c < a.size() && c < b.size() && a[c] == b[c]) ++c;
      return c;
    };
    if (dead) {
      Word next = skip_prefix(v, *dead, order);
      valid = std::min(valid, common(v, next));
      v = std::move(next);
      continue;
    }
    ConfigurationSet tail = sets[v.size()];
    for (std::size_t d = v.size(); d < u.size() && !tail.empty(); ++d) tail = step(m, tail, s.pair_letter(u[d], kPad));
    if (std::any_of(tail.begin(), tail.end(), [&](const Configuration& c) { return is_accepting(m, c); })) return v;
    Word next = successor(v, order);
    valid = std::min(valid, common(v, next));
    v = std::move(next);
  }
  throw SearchBoundExceeded("enumerative search for '" + x + "' exceeded bound " + std::to_string(bound), bound,
                            bound + 1);
}

Word normalize_seed(const GraphAutomaticStructure& s, const Word& p, const Word& q) {
  auto u = s.lambda()->encode(q);
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    u = step_unchecked(s, u, s.generators().inverse(*it), nullptr);
  return s.lambda()->decode(u);
}

Word normal_form(const GraphAutomaticStructure& s, const Word& w, NormalFormTrace* trace, Algorithm algo) {
  for (const auto& x : w)
    if (!s.generators().contains(x)) throw std::invalid_argument("unknown generator '" + x + "' for " + s.name());
  if (trace) {
    trace->input = w;
    trace->forms = {s.identity()};
    trace->steps.clear();
  }
  if (algo == Algorithm::enumerative) {
    Word u = s.identity();
    for (const auto& x : w) {
      u = normal_form_enumerative(s, u, x);
      if (trace) trace->forms.push_back(u);
    }
    return u;
  }
  std::vector<Letter> u = s.identity_letters();
  for (const auto& x : w) {
    StepTrace st;
    u = step_unchecked(s, u, x, trace ? &st : nullptr);
    if (trace) {
      trace->forms.push_back(s.lambda()->decode(u));
      trace->steps.push_back(std::move(st));
    }
  }
  return s.lambda()->decode(u);
}

const Word& identity_normal_form(const GraphAutomaticStructure& s) { return s.identity(); }

bool word_problem(const GraphAutomaticStructure& s, const Word& w) { return normal_form(s, w) == s.identity(); }

bool are_equal(const GraphAutomaticStructure& s, const Word& w1, const Word& w2) {
  return normal_form(s, w1) == normal_form(s, w2);
}

}  // namespace cga
