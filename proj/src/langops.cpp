#include "cga/langops.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "cga/engine.hpp"
#include "cga/errors.hpp"

namespace cga {

namespace {

std::string pair_name(const std::string& a, const std::string& b) {
  std::string n = a + "&" + b;
  return n.size() <= 48 ? n : std::string();
}

std::string fallback_name(std::string n, std::size_t idx) {
  return n.empty() ? "q" + std::to_string(idx) : n;
}

void require_same_alphabet(const CounterAutomaton& m, const CounterAutomaton& n) {
  if (!same_alphabet(m.alphabet_ptr(), n.alphabet_ptr()))
    throw std::invalid_argument("alphabet mismatch between '" + m.name() + "' and '" + n.name() + "'");
}

}  // namespace

Word convolve(const std::vector<Word>& words) {
  std::size_t len = 0;
  for (const auto& w : words) len = std::max(len, w.size());
  Word out;
  out.reserve(len);
  std::vector<std::string_view> parts(words.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t r = 0; r < words.size(); ++r)
      parts[r] = i < words[r].size() ? std::string_view(words[r][i]) : kPadToken;
    out.push_back(TupleAlphabet::tuple_token(parts));
  }
  return out;
}

Word project(const Word& convolved, std::size_t coordinate) {
  Word out;
  for (const auto& tok : convolved) {
    auto parts = TupleAlphabet::split_tuple_token(tok);
    if (!parts || coordinate >= parts->size())
      throw std::invalid_argument("'" + tok + "' is not a tuple token with row " + std::to_string(coordinate));
    if ((*parts)[coordinate] != kPadToken) out.push_back((*parts)[coordinate]);
  }
  return out;
}

std::vector<Letter> convolve(const TupleAlphabet& ta, const std::vector<std::vector<Letter>>& rows) {
  std::size_t len = 0;
  for (const auto& w : rows) len = std::max(len, w.size());
  std::vector<Letter> out;
  out.reserve(len);
  std::vector<Letter> comps(rows.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t r = 0; r < rows.size(); ++r) comps[r] = i < rows[r].size() ? rows[r][i] : kPad;
    out.push_back(*ta.letter(comps));
  }
  return out;
}

std::vector<Letter> project(const TupleAlphabet& ta, std::span<const Letter> convolved, std::size_t coordinate) {
  std::vector<Letter> out;
  for (Letter l : convolved) {
    Letter c = ta.component(l, coordinate);
    if (c != kPad) out.push_back(c);
  }
  return out;
}

bool LetterHomomorphism::epsilon_free() const {
  return std::none_of(images.begin(), images.end(), [](const auto& w) { return w.empty(); });
}

LetterHomomorphism LetterHomomorphism::identity(const AlphabetPtr& a) {
  LetterHomomorphism h{a, a, {}};
  for (std::size_t i = 0; i < a->size(); ++i) h.images.push_back({static_cast<Letter>(i)});
  return h;
}

LetterHomomorphism parse_homomorphism(std::string_view text, const AlphabetPtr& source,
                                      const AlphabetPtr& target, const std::string& where) {
  LetterHomomorphism h{source, target, std::vector<std::vector<Letter>>(source->size())};
  std::vector<bool> seen(source->size(), false);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string dir;
    if (!(ls >> dir) || dir[0] == '#') continue;
    if (dir == "target") continue;  // informational
    if (dir != "map") throw ParseError(where, line_no, line.find(dir) + 1, "unknown directive '" + dir + "'");
    std::string from, arrow, tok;
    if (!(ls >> from >> arrow) || arrow != "->")
      throw ParseError(where, line_no, 1, "expected 'map <letter> -> <tokens|EPS>'");
    auto l = source->find(from);
    if (!l) throw ParseError(where, line_no, line.find(from) + 1, "unknown source letter '" + from + "'");
    if (seen[*l]) throw ParseError(where, line_no, line.find(from) + 1, "letter '" + from + "' mapped twice");
    seen[*l] = true;
    Word img;
    while (ls >> tok) img.push_back(tok);
    if (img.empty()) throw ParseError(where, line_no, line.size() + 1, "missing image");
    if (img.size() == 1 && img[0] == "EPS") continue;
    for (const auto& t : img) {
      auto tl = target->find(t);
      if (!tl) throw ParseError(where, line_no, line.find(t) + 1, "unknown target letter '" + t + "'");
      h.images[*l].push_back(*tl);
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ParseError(where, line_no, 1, "letter '" + source->token(static_cast<Letter>(i)) + "' is unmapped");
  return h;
}

CounterAutomaton universal_automaton(const AlphabetPtr& a, const std::string& name) {
  AutomatonBuilder b(name, a, 0);
  StateId s = b.add_state("all", true);
  for (std::size_t i = 0; i < a->size(); ++i) b.add_transition(s, static_cast<Letter>(i), s);
  b.set_blind(true);
  b.set_deterministic(true);
  return std::move(b).build();
}

CounterAutomaton empty_automaton(const AlphabetPtr& a, const std::string& name) {
  AutomatonBuilder b(name, a, 0);
  b.add_state("dead");
  b.set_blind(true);
  b.set_deterministic(true);
  return std::move(b).build();
}

CounterAutomaton intersect(const CounterAutomaton& m, const CounterAutomaton& n) {
  require_same_alphabet(m, n);
  std::size_t k = m.counters(), l = n.counters();
  AutomatonBuilder b("(" + m.name() + "&" + n.name() + ")", m.alphabet_ptr(), k + l);
  b.set_blind(m.declared_blind() && n.declared_blind());
  b.set_deterministic(m.declared_deterministic() && n.declared_deterministic());
  std::unordered_map<std::uint64_t, StateId> ids;
  std::vector<std::pair<StateId, StateId>> queue;
  auto id = [&](StateId s, StateId t) {
    std::uint64_t key = (std::uint64_t{s} << 32) | t;
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    StateId x = b.add_state(fallback_name(pair_name(m.state_name(s), n.state_name(t)), b.num_states()),
                            m.is_accepting(s) && n.is_accepting(t));
    ids.emplace(key, x);
    queue.emplace_back(s, t);
    return x;
  };
  b.set_start(id(m.start(), n.start()));
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto [s, t] = queue[qi];
    StateId from = ids.at((std::uint64_t{s} << 32) | t);
    auto os = m.out(s), ot = n.out(t);
    std::size_t i = 0, j = 0;
    while (i < os.size() && m.transitions()[os[i]].label == kEpsilon) {
      const auto& tr = m.transitions()[os[i]];
      b.add_transition(from, kEpsilon, tr.program.empty() ? InstructionProgram(k + l) : tr.program.embed(k + l, 0),
                       id(tr.to, t));
      ++i;
    }
    while (j < ot.size() && n.transitions()[ot[j]].label == kEpsilon) {
      const auto& tr = n.transitions()[ot[j]];
      b.add_transition(from, kEpsilon, tr.program.empty() ? InstructionProgram(k + l) : tr.program.embed(k + l, k),
                       id(s, tr.to));
      ++j;
    }
    while (i < os.size() && j < ot.size()) {
      Letter a = m.transitions()[os[i]].label, c = n.transitions()[ot[j]].label;
      if (a < c) { ++i; continue; }
      if (c < a) { ++j; continue; }
      std::size_t i2 = i, j2 = j;
      while (i2 < os.size() && m.transitions()[os[i2]].label == a) ++i2;
      while (j2 < ot.size() && n.transitions()[ot[j2]].label == a) ++j2;
      for (std::size_t x = i; x < i2; ++x) {
        for (std::size_t y = j; y < j2; ++y) {
          const auto& t1 = m.transitions()[os[x]];
          const auto& t2 = n.transitions()[ot[y]];
          InstructionProgram p = (t1.program.empty() && t2.program.empty())
                                     ? InstructionProgram(k + l)
                                     : InstructionProgram::parallel(t1.program.empty() ? InstructionProgram(k) : t1.program,
                                                                    t2.program.empty() ? InstructionProgram(l) : t2.program);
          b.add_transition(from, a, std::move(p), id(t1.to, t2.to));
        }
      }
      i = i2;
      j = j2;
    }
  }
  return trim(std::move(b).build());
}

CounterAutomaton unite(const std::vector<const CounterAutomaton*>& machines, const std::string& name) {
  if (machines.empty()) throw std::invalid_argument("union of no machines");
  std::size_t k = 0;
  bool blind = true;
  for (const auto* m : machines) {
    require_same_alphabet(*machines[0], *m);
    k = std::max(k, m->counters());
    blind = blind && m->declared_blind();
  }
  AutomatonBuilder b(name, machines[0]->alphabet_ptr(), k);
  b.set_blind(blind);
  StateId start = b.add_state("u0");
  b.set_start(start);
  for (std::size_t i = 0; i < machines.size(); ++i) {
    const auto& m = *machines[i];
    StateId base = static_cast<StateId>(b.num_states());
    std::string prefix = "u" + std::to_string(i + 1) + ".";
    for (StateId s = 0; s < m.num_states(); ++s) b.add_state(prefix + m.state_name(s), m.is_accepting(s));
    for (const auto& t : m.transitions())
      b.add_transition(base + t.from, t.label, t.program.empty() ? InstructionProgram(k) : t.program.embed(k, 0),
                       base + t.to);
    b.add_transition(start, kEpsilon, base + m.start());
  }
  return trim(std::move(b).build());
}

CounterAutomaton unite(const CounterAutomaton& m, const CounterAutomaton& n) {
  return unite({&m, &n}, "(" + m.name() + "|" + n.name() + ")");
}

CounterAutomaton image(const CounterAutomaton& m, const LetterHomomorphism& phi) {
  if (!same_alphabet(phi.source, m.alphabet_ptr())) throw std::invalid_argument("homomorphism source mismatch");
  AutomatonBuilder b(m.name(), phi.target, m.counters());
  b.set_blind(m.declared_blind());
  for (StateId s = 0; s < m.num_states(); ++s) b.add_state(m.state_name(s), m.is_accepting(s));
  b.set_start(m.start());
  std::size_t fresh = 0;
  for (const auto& t : m.transitions()) {
    if (t.label == kEpsilon) {
      b.add_transition(t.from, kEpsilon, t.program, t.to);
      continue;
    }
    const auto& img = phi.images[static_cast<std::size_t>(t.label)];
    if (img.empty()) {
      b.add_transition(t.from, kEpsilon, t.program, t.to);
      continue;
    }
    StateId cur = t.from;
    for (std::size_t i = 0; i < img.size(); ++i) {
      StateId next = t.to;
      if (i + 1 < img.size()) next = b.add_state("~" + std::to_string(fresh++));
      b.add_transition(cur, img[i], i == 0 ? t.program : InstructionProgram(m.counters()), next);
      cur = next;
    }
  }
  CounterAutomaton r = std::move(b).build();
  if (!validate(r).epsilon_bound)
    throw std::runtime_error("image of '" + m.name() + "' has an epsilon cycle (erasing map is not quasi-realtime)");
  return trim(r);
}

CounterAutomaton preimage(const CounterAutomaton& m, const LetterHomomorphism& phi) {
  if (!same_alphabet(phi.target, m.alphabet_ptr())) throw std::invalid_argument("homomorphism target mismatch");
  std::size_t k = m.counters();
  AutomatonBuilder b(m.name(), phi.source, k);
  b.set_blind(m.declared_blind());
  for (StateId s = 0; s < m.num_states(); ++s) b.add_state(m.state_name(s), m.is_accepting(s));
  b.set_start(m.start());
  for (const auto& t : m.transitions())
    if (t.label == kEpsilon) b.add_transition(t.from, kEpsilon, t.program, t.to);

  // Group source letters by image so each image word is walked once per state.
  std::map<std::vector<Letter>, std::vector<Letter>> groups;
  for (std::size_t i = 0; i < phi.images.size(); ++i) groups[phi.images[i]].push_back(static_cast<Letter>(i));

  struct Partial {
    StateId state;
    InstructionProgram program;
  };
  // All ways to read `img` from s: letters separated by epsilon runs (leading and
  // trailing epsilons come from the copied epsilon transitions).
  auto walk = [&](StateId s, const std::vector<Letter>& img) {
    std::vector<Partial> cur{{s, InstructionProgram(k)}};
    for (std::size_t i = 0; i < img.size() && !cur.empty(); ++i) {
      if (i > 0) {
        std::vector<Partial> closed = cur;
        for (std::size_t x = 0; x < closed.size(); ++x) {
          for (auto ti : m.out(closed[x].state, kEpsilon)) {
            const auto& tr = m.transitions()[ti];
            closed.push_back({tr.to, closed[x].program.then(tr.program)});
          }
        }
        cur = std::move(closed);
      }
      std::vector<Partial> next;
      for (const auto& p : cur)
        for (auto ti : m.out(p.state, img[i])) {
          const auto& tr = m.transitions()[ti];
          next.push_back({tr.to, p.program.then(tr.program)});
        }
      cur = std::move(next);
    }
    return cur;
  };
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (const auto& [img, letters] : groups) {
      if (img.empty()) {
        for (Letter l : letters) b.add_transition(s, l, s);
        continue;
      }
      for (const auto& p : walk(s, img))
        for (Letter l : letters) b.add_transition(s, l, p.program, p.state);
    }
  }
  return trim(std::move(b).build());
}

CounterAutomaton pad_lift(const CounterAutomaton& m, Side side, const AlphabetPtr& free_alphabet) {
  std::size_t tracked = side == Side::left ? 0 : 1;
  std::size_t free_row = 1 - tracked;
  std::vector<AlphabetPtr> rows(2);
  rows[tracked] = m.alphabet_ptr();
  rows[free_row] = free_alphabet;
  auto ta = tuple_alphabet(rows);
  std::size_t k = m.counters();
  AutomatonBuilder b(m.name() + (side == Side::left ? "<" : ">"), ta->letters(), k);
  b.set_blind(m.declared_blind());
  std::size_t n = m.num_states();
  // live: free row still running; done: free row padded.
  for (StateId s = 0; s < n; ++s) b.add_state(m.state_name(s) + "+", m.is_accepting(s));
  for (StateId s = 0; s < n; ++s) b.add_state(m.state_name(s) + "_", m.is_accepting(s));
  StateId tail = b.add_state("tail", true);
  b.set_start(m.start());
  std::vector<Letter> comps(2);
  auto letter = [&](Letter tracked_c, Letter free_c) {
    comps[tracked] = tracked_c;
    comps[free_row] = free_c;
    return *ta->letter(comps);
  };
  for (const auto& t : m.transitions()) {
    StateId live_from = t.from, live_to = t.to;
    StateId done_from = static_cast<StateId>(n + t.from), done_to = static_cast<StateId>(n + t.to);
    if (t.label == kEpsilon) {
      b.add_transition(live_from, kEpsilon, t.program, live_to);
      b.add_transition(done_from, kEpsilon, t.program, done_to);
      continue;
    }
    for (std::size_t y = 0; y < free_alphabet->size(); ++y)
      b.add_transition(live_from, letter(t.label, static_cast<Letter>(y)), t.program, live_to);
    b.add_transition(live_from, letter(t.label, kPad), t.program, done_to);
    b.add_transition(done_from, letter(t.label, kPad), t.program, done_to);
  }
  for (StateId s = 0; s < n; ++s) {
    if (!m.is_accepting(s)) continue;
    for (std::size_t y = 0; y < free_alphabet->size(); ++y)
      b.add_transition(s, letter(kPad, static_cast<Letter>(y)), tail);
  }
  for (std::size_t y = 0; y < free_alphabet->size(); ++y) b.add_transition(tail, letter(kPad, static_cast<Letter>(y)), tail);
  return trim(std::move(b).build());
}

CounterAutomaton pad_lift(const CounterAutomaton& m, Side side) { return pad_lift(m, side, m.alphabet_ptr()); }

CounterAutomaton swap_rows(const CounterAutomaton& m) {
  auto ta = as_tuple_alphabet(m.alphabet_ptr());
  if (!ta || ta->arity() != 2) throw std::invalid_argument("swap_rows needs a two-row tuple alphabet");
  auto swapped = tuple_alphabet({ta->row_ptr(1), ta->row_ptr(0)});
  LetterHomomorphism phi{m.alphabet_ptr(), swapped->letters(), {}};
  for (std::size_t i = 0; i < ta->size(); ++i) {
    auto c = ta->components(static_cast<Letter>(i));
    Letter flipped[2] = {c[1], c[0]};
    phi.images.push_back({*swapped->letter(flipped)});
  }
  CounterAutomaton r = image(m, phi);
  r.set_name(m.name() + "~");
  return r;
}

CounterAutomaton diagonal(const CounterAutomaton& m) {
  auto ta = tuple_alphabet({m.alphabet_ptr(), m.alphabet_ptr()});
  LetterHomomorphism phi{m.alphabet_ptr(), ta->letters(), {}};
  for (std::size_t i = 0; i < m.alphabet().size(); ++i) {
    Letter c[2] = {static_cast<Letter>(i), static_cast<Letter>(i)};
    phi.images.push_back({*ta->letter(c)});
  }
  return image(m, phi);
}

CounterAutomaton convolution_validity(const std::shared_ptr<const TupleAlphabet>& ta) {
  AutomatonBuilder b("valid", ta->letters(), 0);
  b.set_blind(true);
  b.set_deterministic(true);
  std::unordered_map<std::uint32_t, StateId> ids;
  std::vector<std::uint32_t> queue{0};
  ids[0] = b.add_state("m0", true);
  b.set_start(0);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::uint32_t mask = queue[qi];
    for (std::size_t l = 0; l < ta->size(); ++l) {
      auto c = ta->components(static_cast<Letter>(l));
      std::uint32_t next = mask;
      bool ok = true;
      for (std::size_t r = 0; r < c.size(); ++r) {
        if (c[r] == kPad) next |= 1u << r;
        else if (mask & (1u << r)) ok = false;
      }
      if (!ok) continue;
      auto it = ids.find(next);
      if (it == ids.end()) {
        it = ids.emplace(next, b.add_state("m" + std::to_string(next), true)).first;
        queue.push_back(next);
      }
      b.add_transition(ids[mask], static_cast<Letter>(l), it->second);
    }
  }
  return std::move(b).build();
}

}  // namespace cga
