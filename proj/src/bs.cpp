#include "cga/bs.hpp"

#include <charconv>
#include <map>
#include <stdexcept>
#include <tuple>

#include "cga/engine.hpp"
#include "cga/langops.hpp"

namespace cga {

namespace {

void check_parameters(int m, int n) {
  if (m < 2 || n <= m) throw std::invalid_argument("BS(m,n) needs 2 <= m < n");
}

Counter floor_div(Counter a, Counter b) {
  Counter q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Counter checked_add(Counter a, Counter b) {
  Counter r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("BS exponent overflow");
  return r;
}

Counter checked_mul(Counter a, Counter b) {
  Counter r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("BS exponent overflow");
  return r;
}

const Token kHash = "#";
const Token kOne = "1";
const Token kMinusOne = "-1";

}  // namespace

Token pi_token(const PiLetter& x) {
  std::string out;
  if (x.power == 1) out = "a";
  else if (x.power > 1) out = "a" + std::to_string(x.power);
  out += x.sign > 0 ? "t" : "t-";
  return out;
}

std::optional<PiLetter> parse_pi_token(const Token& t, int m, int n) {
  std::string_view s(t);
  PiLetter x;
  if (s.ends_with("t-")) {
    x.sign = -1;
    s.remove_suffix(2);
  } else if (s.ends_with("t")) {
    s.remove_suffix(1);
  } else {
    return std::nullopt;
  }
  if (!s.empty()) {
    if (s[0] != 'a') return std::nullopt;
    s.remove_prefix(1);
    if (s.empty()) {
      x.power = 1;
    } else {
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x.power);
      if (ec != std::errc() || p != s.data() + s.size() || x.power < 2 || s[0] == '0') return std::nullopt;
    }
  }
  if (x.power >= (x.sign > 0 ? n : m)) return std::nullopt;
  return x;
}

std::vector<Token> bs_symbols(int m, int n) {
  check_parameters(m, n);
  std::vector<Token> out;
  for (int c = 0; c < n; ++c) out.push_back(pi_token({c, 1}));
  for (int c = 0; c < m; ++c) out.push_back(pi_token({c, -1}));
  out.insert(out.end(), {kOne, kMinusOne, kHash});
  return out;
}

BSNormalPair bs_canonicalize(const Word& w, int m, int n) {
  check_parameters(m, n);
  BSNormalPair out;
  auto& P = out.P;
  Counter& N = out.N;
  for (const auto& x : w) {
    if (x == "a") {
      N = checked_add(N, 1);
    } else if (x == "a-") {
      N = checked_add(N, -1);
    } else if (x == "t") {
      Counter q = floor_div(N, n), s = N - q * n;
      if (s == 0 && !P.empty() && P.back().sign < 0) {
        N = checked_add(P.back().power, checked_mul(q, m));
        P.pop_back();
      } else {
        P.push_back({static_cast<int>(s), 1});
        N = checked_mul(q, m);
      }
    } else if (x == "t-") {
      Counter q = floor_div(N, m), s = N - q * m;
      if (s == 0 && !P.empty() && P.back().sign > 0) {
        N = checked_add(P.back().power, checked_mul(q, n));
        P.pop_back();
      } else {
        P.push_back({static_cast<int>(s), -1});
        N = checked_mul(q, n);
      }
    } else {
      throw std::invalid_argument("'" + x + "' is not a generator of BS(m,n)");
    }
  }
  return out;
}

Word bs_group_word(const BSNormalPair& pair) {
  Word out;
  for (const auto& x : pair.P) {
    out.insert(out.end(), static_cast<std::size_t>(x.power), "a");
    out.push_back(x.sign > 0 ? "t" : "t-");
  }
  Counter k = pair.N < 0 ? -pair.N : pair.N;
  out.insert(out.end(), static_cast<std::size_t>(k), pair.N < 0 ? "a-" : "a");
  return out;
}

Word bs_encode(const BSNormalPair& pair, int m, int n) {
  check_parameters(m, n);
  Word out;
  for (std::size_t i = 0; i < pair.P.size(); ++i) {
    const auto& x = pair.P[i];
    if (x.power < 0 || x.power >= (x.sign > 0 ? n : m) || (x.sign != 1 && x.sign != -1))
      throw std::invalid_argument("malformed pair: bad letter " + std::to_string(i));
    if (i > 0 && x.power == 0 && x.sign == -pair.P[i - 1].sign)
      throw std::invalid_argument("malformed pair: P is not reduced");
    out.push_back(pi_token(x));
  }
  Counter a = pair.N < 0 ? -pair.N : pair.N;
  const Token& x = pair.N < 0 ? kMinusOne : kOne;
  auto run = [&](Counter k) { out.insert(out.end(), static_cast<std::size_t>(k), x); };
  out.push_back(kHash);
  run(a % m);
  out.push_back(kHash);
  run(a / m);
  out.push_back(kHash);
  run(a % n);
  out.push_back(kHash);
  run(a / n);
  return out;
}

BSDecodeResult bs_decode(const Word& w, int m, int n) {
  check_parameters(m, n);
  BSDecodeResult res;
  auto fail = [&](BSDecodeError e, std::string msg) {
    res.error = e;
    res.message = std::move(msg);
    return res;
  };
  BSNormalPair pair;
  std::size_t i = 0;
  for (; i < w.size() && w[i] != kHash; ++i) {
    auto x = parse_pi_token(w[i], m, n);
    if (!x) return fail(BSDecodeError::bad_pi_letter, "'" + w[i] + "' is not a letter of Pi");
    pair.P.push_back(*x);
  }
  Counter runs[4] = {0, 0, 0, 0};
  int sign = 0;
  for (int block = 0; block < 4; ++block) {
    if (i >= w.size() || w[i] != kHash) return fail(BSDecodeError::malformed, "expected four '#' separators");
    ++i;
    for (; i < w.size() && w[i] != kHash; ++i) {
      int s = w[i] == kOne ? 1 : w[i] == kMinusOne ? -1 : 0;
      if (s == 0) return fail(BSDecodeError::malformed, "unexpected symbol '" + w[i] + "' after the first '#'");
      if (sign != 0 && s != sign) return fail(BSDecodeError::mixed_signs, "runs mix 1 and -1");
      sign = s;
      ++runs[block];
    }
  }
  if (i != w.size()) return fail(BSDecodeError::malformed, "more than four '#' separators");
  res.r = runs[0];
  res.p = runs[1];
  res.s = runs[2];
  res.q = runs[3];
  for (std::size_t j = 1; j < pair.P.size(); ++j)
    if (pair.P[j].power == 0 && pair.P[j].sign == -pair.P[j - 1].sign)
      return fail(BSDecodeError::not_reduced, "P contains a pinch at position " + std::to_string(j));
  if (res.r >= m) return fail(BSDecodeError::r_not_below_m, "r=" + std::to_string(res.r) + " is not less than m=" + std::to_string(m));
  if (res.s >= n) return fail(BSDecodeError::s_not_below_n, "s=" + std::to_string(res.s) + " is not less than n=" + std::to_string(n));
  Counter lhs = res.r + res.p * m, rhs = res.s + res.q * n;
  if (lhs != rhs)
    return fail(BSDecodeError::mismatch, "r+pm=" + std::to_string(lhs) + " whereas s+qn=" + std::to_string(rhs));
  pair.N = sign < 0 ? -lhs : lhs;
  res.pair = std::move(pair);
  return res;
}

BSOracle::BSOracle(int m, int n) : m_(m), n_(n) { check_parameters(m, n); }

std::string BSOracle::name() const { return "bs:" + std::to_string(m_) + "," + std::to_string(n_); }

Word BSOracle::canonicalize(const Word& w) const { return bs_group_word(bs_canonicalize(w, m_, n_)); }

bool BSOracle::owns(const Token& x) const { return x == "a" || x == "a-" || x == "t" || x == "t-"; }

CounterAutomaton bs_l1_automaton(int m, int n) {
  auto lambda = make_alphabet(bs_symbols(m, n));
  AutomatonBuilder b("L1", lambda, 1);
  b.set_blind(true);
  b.set_deterministic(true);
  auto inc = [](std::int32_t c) { return InstructionProgram::single(1, 0, CounterInstruction::inc(c)); };
  auto dec = [](std::int32_t c) { return InstructionProgram::single(1, 0, CounterInstruction::dec(c)); };
  Letter hash = lambda->index(kHash), one = lambda->index(kOne), minus = lambda->index(kMinusOne);

  StateId S = b.add_state("S");
  StateId r = b.add_state("r");
  StateId r0 = b.add_state("r0");
  StateId s0 = b.add_state("s0");
  StateId q0 = b.add_state("q0", true);
  for (Letter l = 0; l < static_cast<Letter>(lambda->size()); ++l)
    if (l != hash && l != one && l != minus) b.add_transition(S, l, S);
  b.add_transition(S, hash, r);
  b.add_transition(r, hash, r0);
  b.add_transition(r0, hash, s0);
  b.add_transition(s0, hash, q0);
  for (int sgn : {1, -1}) {
    std::string tag = sgn > 0 ? "+" : "-";
    Letter x = sgn > 0 ? one : minus;
    StateId rs = b.add_state("r" + tag);
    StateId ps = b.add_state("p" + tag);
    StateId ss = b.add_state("s" + tag);
    StateId qs = b.add_state("q" + tag, true);
    b.add_transition(r, x, inc(1), rs);
    b.add_transition(rs, x, inc(1), rs);
    b.add_transition(rs, hash, ps);
    b.add_transition(r0, x, inc(m), ps);
    b.add_transition(ps, x, inc(m), ps);
    b.add_transition(ps, hash, ss);
    b.add_transition(ss, x, dec(1), ss);
    b.add_transition(ss, hash, qs);
    b.add_transition(qs, x, dec(n), qs);
  }
  return std::move(b).build();
}

CounterAutomaton bs_l2_automaton(int m, int n) {
  auto lambda = make_alphabet(bs_symbols(m, n));
  // phase 0 reads P (aux = sign of the last letter), phases 1..4 read the runs r p s q (aux = sign so far).
  using Key = std::tuple<int, int, int>;  // phase, aux, count
  std::vector<std::optional<PiLetter>> pis(lambda->size());
  for (Letter l = 0; l < static_cast<Letter>(lambda->size()); ++l) pis[l] = parse_pi_token(lambda->token(l), m, n);
  Letter hash = lambda->index(kHash), one = lambda->index(kOne);

  auto delta = [&](const Key& k, Letter l) -> std::optional<Key> {
    auto [phase, aux, count] = k;
    if (phase == 0) {
      if (l == hash) return Key{1, 0, 0};
      if (!pis[l]) return std::nullopt;
      int s = pis[l]->sign;
      if (pis[l]->power == 0 && aux == -s) return std::nullopt;
      return Key{0, s, 0};
    }
    if (l == hash) {
      if (phase == 4) return std::nullopt;
      return Key{phase + 1, aux, 0};
    }
    if (pis[l]) return std::nullopt;
    int s = l == one ? 1 : -1;
    if (aux != 0 && aux != s) return std::nullopt;
    int c = phase == 1 || phase == 3 ? count + 1 : 0;
    if (phase == 1 && c >= m) return std::nullopt;
    if (phase == 3 && c >= n) return std::nullopt;
    return Key{phase, s, c};
  };

  AutomatonBuilder b("L2", lambda, 0);
  b.set_blind(true);
  b.set_deterministic(true);
  std::map<Key, StateId> ids;
  std::vector<Key> todo;
  auto id_of = [&](const Key& k) {
    auto [it, fresh] = ids.emplace(k, 0);
    if (fresh) {
      auto [phase, aux, count] = k;
      it->second = b.add_state("L2." + std::to_string(phase) + "." + std::to_string(aux) + "." + std::to_string(count),
                               phase == 4);
      todo.push_back(k);
    }
    return it->second;
  };
  b.set_start(id_of(Key{0, 0, 0}));
  while (!todo.empty()) {
    Key k = todo.back();
    todo.pop_back();
    StateId from = ids[k];
    for (Letter l = 0; l < static_cast<Letter>(lambda->size()); ++l)
      if (auto next = delta(k, l)) b.add_transition(from, l, id_of(*next));
  }
  return std::move(b).build();
}

CounterAutomaton bs_nf_automaton(int m, int n) {
  auto out = intersect(bs_l1_automaton(m, n), bs_l2_automaton(m, n));
  out.set_name("BS(" + std::to_string(m) + "," + std::to_string(n) + ").L");
  return out;
}

namespace {

// One row of a case pattern: literal blocks and counted loops.
struct Segment {
  Token token;
  int count = 0;       // literal copies when !loop
  bool loop = false;
  int delta = 0;       // counter change per loop letter
};

using Pattern = std::vector<Segment>;

Segment lit(const Token& t, int k = 1) { return {t, k, false, 0}; }
Segment loop(const Token& t, int delta = 0) { return {t, 0, true, delta}; }

// A chain machine over one row.
struct Chain {
  struct Edge {
    Letter label;
    int delta;
    int to;
  };
  std::vector<std::vector<Edge>> out;
  int accept = 0;
};

Chain make_chain(const Pattern& p, const Alphabet& lambda) {
  Chain c;
  c.out.emplace_back();
  int cur = 0;
  bool last_loop = false;
  for (const auto& seg : p) {
    Letter l = lambda.index(seg.token);
    if (seg.loop) {
      if (last_loop) throw std::logic_error("adjacent loops in a case pattern");
      c.out[cur].push_back({l, seg.delta, cur});
      last_loop = true;
      continue;
    }
    for (int i = 0; i < seg.count; ++i) {
      c.out.emplace_back();
      int next = static_cast<int>(c.out.size()) - 1;
      c.out[cur].push_back({l, 0, next});
      cur = next;
      last_loop = false;
    }
  }
  c.accept = cur;
  return c;
}

// Diagonal prefix over Pi, then both rows follow their patterns in lockstep, each
// padded once its row is exhausted. One shared counter.
CounterAutomaton case_machine(const std::string& name, const AlphabetPtr& lambda,
                              const std::shared_ptr<const TupleAlphabet>& pairs, int m, int n, const Pattern& row0,
                              const Pattern& row1) {
  Chain c0 = make_chain(row0, *lambda), c1 = make_chain(row1, *lambda);
  AutomatonBuilder b(name, pairs->letters(), 1);
  b.set_blind(true);
  auto pair = [&](Letter x, Letter y) {
    Letter comps[2] = {x, y};
    return *pairs->letter(comps);
  };
  auto program = [](int d) {
    if (d > 0) return InstructionProgram::single(1, 0, CounterInstruction::inc(d));
    if (d < 0) return InstructionProgram::single(1, 0, CounterInstruction::dec(-d));
    return InstructionProgram(1);
  };
  StateId pre = b.add_state("pre");
  for (Letter l = 0; l < static_cast<Letter>(lambda->size()); ++l)
    if (parse_pi_token(lambda->token(l), m, n)) b.add_transition(pre, pair(l, l), pre);

  using Key = std::tuple<int, int, bool, bool>;
  std::map<Key, StateId> ids;
  std::vector<Key> todo;
  auto id_of = [&](const Key& k) {
    auto [it, fresh] = ids.emplace(k, 0);
    if (fresh) {
      auto [q0, q1, f0, f1] = k;
      it->second = b.add_state(std::to_string(q0) + "." + std::to_string(q1) + (f0 ? ".e0" : "") + (f1 ? ".e1" : ""),
                               q0 == c0.accept && q1 == c1.accept);
      todo.push_back(k);
    }
    return it->second;
  };
  b.add_transition(pre, kEpsilon, id_of(Key{0, 0, false, false}));
  while (!todo.empty()) {
    Key k = todo.back();
    todo.pop_back();
    auto [q0, q1, f0, f1] = k;
    StateId from = ids[k];
    if (!f0 && !f1)
      for (const auto& e0 : c0.out[q0])
        for (const auto& e1 : c1.out[q1])
          b.add_transition(from, pair(e0.label, e1.label), program(e0.delta + e1.delta), id_of(Key{e0.to, e1.to, false, false}));
    if (!f0 && q1 == c1.accept)
      for (const auto& e0 : c0.out[q0])
        b.add_transition(from, pair(e0.label, kPad), program(e0.delta), id_of(Key{e0.to, q1, false, true}));
    if (!f1 && q0 == c0.accept)
      for (const auto& e1 : c1.out[q1])
        b.add_transition(from, pair(kPad, e1.label), program(e1.delta), id_of(Key{q0, e1.to, true, false}));
  }
  return trim(std::move(b).build());
}

Pattern cat(std::initializer_list<Pattern> parts) {
  Pattern out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// x*#x*
Pattern free_pair(const Token& x) { return {loop(x), lit(kHash), loop(x)}; }

CounterAutomaton build_union(std::vector<CounterAutomaton> parts, const std::string& name) {
  std::vector<const CounterAutomaton*> ptrs;
  for (const auto& p : parts) ptrs.push_back(&p);
  return unite(ptrs, name);
}

struct CaseContext {
  int m, n;
  AlphabetPtr lambda;
  std::shared_ptr<const TupleAlphabet> pairs;

  CaseContext(int m_, int n_) : m(m_), n(n_) {
    lambda = make_alphabet(bs_symbols(m, n));
    pairs = tuple_alphabet({lambda, lambda});
  }
  CounterAutomaton machine(const std::string& name, const Pattern& row0, const Pattern& row1) const {
    return case_machine(name, lambda, pairs, m, n, row0, row1);
  }
};

}  // namespace

CounterAutomaton bs_cases_a(int m, int n) {
  CaseContext cx(m, n);
  const Token& P = kOne;
  const Token& M = kMinusOne;
  const Token& H = kHash;
  std::vector<CounterAutomaton> parts;
  // Non-negative u: the r block grows, or wraps into p.
  for (int r = 0; r + 1 < m; ++r)
    parts.push_back(cx.machine("La" + std::to_string(r),
                               cat({{lit(H), lit(P, r), lit(H), loop(P, 1), lit(H)}, free_pair(P)}),
                               cat({{lit(H), lit(P, r + 1), lit(H), loop(P, -1), lit(H)}, free_pair(P)})));
  parts.push_back(cx.machine("La" + std::to_string(m - 1),
                             cat({{lit(H), lit(P, m - 1), lit(H), loop(P, 1), lit(H)}, free_pair(P)}),
                             cat({{lit(H), lit(H), lit(P), loop(P, -1), lit(H)}, free_pair(P)})));
  // Negative u: the r block shrinks, or borrows from p.
  for (int r = 1; r < m; ++r)
    parts.push_back(cx.machine("Ka" + std::to_string(r),
                               cat({{lit(H), lit(M, r), lit(H), loop(M, 1), lit(H)}, free_pair(M)}),
                               cat({{lit(H), lit(M, r - 1), lit(H), loop(M, -1), lit(H)}, free_pair(M)})));
  parts.push_back(cx.machine("Ka0", cat({{lit(H), lit(H), lit(M), loop(M, 1), lit(H)}, free_pair(M)}),
                             cat({{lit(H), lit(M, m - 1), lit(H), loop(M, -1), lit(H)}, free_pair(M)})));
  return build_union(std::move(parts), "cases_a");
}

CounterAutomaton bs_cases_t(int m, int n) {
  CaseContext cx(m, n);
  const Token& P = kOne;
  const Token& M = kMinusOne;
  const Token& H = kHash;
  std::vector<CounterAutomaton> parts;
  // u = P#Q#1^s#1^q, N >= 0: v = P(a^s t)##1^q#R.
  for (int s = 0; s < n; ++s)
    parts.push_back(cx.machine("U" + std::to_string(s),
                               cat({{lit(H)}, free_pair(P), {lit(H), lit(P, s), lit(H), loop(P, 1)}}),
                               cat({{lit(pi_token({s, 1})), lit(H), lit(H), loop(P, -1), lit(H)}, free_pair(P)})));
  // u = P(a^c t-)#Q##1^q: the pinch gives v = P#1^c#1^q#R.
  for (int c = 0; c < m; ++c)
    parts.push_back(cx.machine("Y" + std::to_string(c),
                               cat({{lit(pi_token({c, -1})), lit(H)}, free_pair(P), {lit(H), lit(H), loop(P, 1)}}),
                               cat({{lit(H), lit(P, c), lit(H), loop(P, -1), lit(H)}, free_pair(P)})));
  // N < 0 with 0 < s < n: v = P(a^{n-s} t)##(-1)^{q+1}#R.
  for (int s = 1; s < n; ++s)
    parts.push_back(cx.machine("W" + std::to_string(s),
                               cat({{lit(H)}, free_pair(M), {lit(H), lit(M, s), lit(H), loop(M, 1)}}),
                               cat({{lit(pi_token({n - s, 1})), lit(H), lit(H), lit(M), loop(M, -1), lit(H)}, free_pair(M)})));
  // N < 0 with s = 0 and no pinch: v = Pt##(-1)^q#R.
  parts.push_back(cx.machine("X", cat({{lit(H)}, free_pair(M), {lit(H), lit(H), lit(M), loop(M, 1)}}),
                             cat({{lit(pi_token({0, 1})), lit(H), lit(H), lit(M), loop(M, -1), lit(H)}, free_pair(M)})));
  // N < 0 with s = 0 after a^c t-: the pinch leaves a^{c - qm}.
  parts.push_back(cx.machine("Z0", cat({{lit(pi_token({0, -1})), lit(H)}, free_pair(M), {lit(H), lit(H), lit(M), loop(M, 1)}}),
                             cat({{lit(H), lit(H), lit(M), loop(M, -1), lit(H)}, free_pair(M)})));
  for (int c = 1; c < m; ++c)
    parts.push_back(cx.machine("Z" + std::to_string(c),
                               cat({{lit(pi_token({c, -1})), lit(H)}, free_pair(M), {lit(H), lit(H), lit(M), loop(M, 1)}}),
                               cat({{lit(H), lit(M, m - c), lit(H), loop(M, -1), lit(H)}, free_pair(M)})));
  return build_union(std::move(parts), "cases_t");
}

CounterAutomaton bs_multiplier(int m, int n, const Token& x) {
  if (x == "a-") return swap_rows(bs_multiplier(m, n, "a"));
  if (x == "t-") return swap_rows(bs_multiplier(m, n, "t"));
  if (x != "a" && x != "t") throw std::invalid_argument("'" + x + "' is not a generator of BS(m,n)");
  CounterAutomaton nf = bs_nf_automaton(m, n);
  CounterAutomaton cases = x == "a" ? bs_cases_a(m, n) : bs_cases_t(m, n);
  CounterAutomaton out = intersect(intersect(cases, pad_lift(nf, Side::left)), pad_lift(nf, Side::right));
  out.set_name("L_" + x);
  return out;
}

StructurePtr bs_structure(int m, int n) {
  check_parameters(m, n);
  StructureDefinition def;
  def.name = "bs:" + std::to_string(m) + "," + std::to_string(n);
  def.lambda = make_alphabet(bs_symbols(m, n));
  def.generators.add("a", "a-");
  def.generators.add("t", "t-");
  def.nf = bs_nf_automaton(m, n);
  def.multiplier = [m, n](const GraphAutomaticStructure& s, const Token& x) {
    if (x == "a-") return swap_rows(s.multiplier("a"));
    if (x == "t-") return swap_rows(s.multiplier("t"));
    return bs_multiplier(m, n, x);
  };
  def.seed_q = {kHash, kHash, kHash, kHash};
  def.growth = {static_cast<std::size_t>((n + m - 1) / m + 1), static_cast<std::size_t>(4 * (m + n)), 0};
  std::size_t hang = 2 * static_cast<std::size_t>(m + n);
  def.overhang = [hang](const Token& x) {
    Overhang o;
    if (x == "a" || x == "a-" || x == "t") o.right = hang;
    if (x == "a" || x == "a-" || x == "t-") o.left = hang;
    return o;
  };
  return GraphAutomaticStructure::create(std::move(def));
}

}  // namespace cga
