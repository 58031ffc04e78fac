#include "cga/combinators.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "cga/engine.hpp"
#include "cga/errors.hpp"
#include "cga/langops.hpp"
#include "cga/normal_form.hpp"

namespace cga {

namespace {

using LetterMap = std::function<Letter(Letter)>;

// Copies m's states and transitions into b, relabelling letters and widening programs.
std::vector<StateId> copy_into(AutomatonBuilder& b, const CounterAutomaton& m, const LetterMap& relabel,
                               const std::string& prefix) {
  std::vector<StateId> ids(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s) ids[s] = b.add_state(prefix + m.state_name(s));
  for (const auto& t : m.transitions()) {
    Letter l = t.label == kEpsilon ? kEpsilon : relabel(t.label);
    b.add_transition(ids[t.from], l, t.program.embed(b.counters(), 0), ids[t.to]);
  }
  return ids;
}

// Every word over `a` except `w`.
CounterAutomaton all_but(const AlphabetPtr& a, const std::vector<Letter>& w) {
  AutomatonBuilder b("not-identity", a, 0);
  b.set_blind(true);
  b.set_deterministic(true);
  std::vector<StateId> prefix;
  for (std::size_t i = 0; i <= w.size(); ++i) prefix.push_back(b.add_state("m" + std::to_string(i), i != w.size()));
  StateId other = b.add_state("other", true);
  for (Letter l = 0; l < static_cast<Letter>(a->size()); ++l) {
    b.add_transition(other, l, other);
    for (std::size_t i = 0; i <= w.size(); ++i)
      b.add_transition(prefix[i], l, i < w.size() && w[i] == l ? prefix[i + 1] : other);
  }
  b.set_start(prefix[0]);
  return std::move(b).build();
}

bool generators_collide(const GeneratorSet& a, const GeneratorSet& b) {
  for (const auto& x : a.finite_symbols())
    if (b.contains(x)) return true;
  for (const auto& x : b.finite_symbols())
    if (a.contains(x)) return true;
  if (a.family() && b.family()) {
    const auto& p = a.family()->base;
    const auto& q = b.family()->base;
    if (p.starts_with(q) || q.starts_with(p)) return true;
  }
  return false;
}

void add_tagged(GeneratorSet& out, const GeneratorSet& in, const std::string& tag) {
  for (const auto& [g, inv] : in.pairs()) out.add(tag + g, tag + inv);
  if (in.family()) {
    if (out.family()) throw std::invalid_argument("at most one generator family is supported per structure");
    out.set_family({tag + in.family()->base});
  }
}

// Which factor a combined generator belongs to, and its name there.
struct Route {
  std::size_t side;
  Token base;
};

struct Factors {
  StructurePtr f[2];
  std::string tag[2];

  Route route(const Token& x) const {
    for (std::size_t s = 0; s < 2; ++s) {
      if (!x.starts_with(tag[s])) continue;
      Token base = x.substr(tag[s].size());
      if (f[s]->generators().contains(base)) return {s, base};
    }
    throw std::invalid_argument("unknown generator '" + x + "'");
  }
};

std::size_t max_opt(const std::optional<std::size_t>& a, const std::optional<std::size_t>& b) {
  return std::max(a.value_or(0), b.value_or(0));
}

}  // namespace

ProductTags product_tags(const GraphAutomaticStructure& g, const GraphAutomaticStructure& h) {
  ProductTags t;
  if (generators_collide(g.generators(), h.generators())) {
    t.g_generators = "1.";
    t.h_generators = "2.";
  }
  return t;
}

ProductTags free_product_tags(const GraphAutomaticStructure& g, const GraphAutomaticStructure& h) {
  ProductTags t = product_tags(g, h);
  bool clash = g.lambda()->contains("#") || h.lambda()->contains("#");
  for (const auto& x : g.lambda()->tokens()) clash = clash || h.lambda()->contains(x);
  if (clash) {
    t.g_symbols = "1.";
    t.h_symbols = "2.";
  }
  return t;
}

// ---------------------------------------------------------------- direct product

StructurePtr direct_product(const StructurePtr& g, const StructurePtr& h) {
  ProductTags tags = product_tags(*g, *h);
  Factors fs{{g, h}, {tags.g_generators, tags.h_generators}};
  auto rows = tuple_alphabet({g->lambda(), h->lambda()});

  StructureDefinition def;
  def.name = "product(" + g->name() + "," + h->name() + ")";
  def.lambda = rows->letters();
  add_tagged(def.generators, g->generators(), tags.g_generators);
  add_tagged(def.generators, h->generators(), tags.h_generators);
  def.nf = intersect(pad_lift(g->nf_automaton(), Side::left, h->lambda()),
                     pad_lift(h->nf_automaton(), Side::right, g->lambda()));
  def.nf.set_name(def.name + ".L");
  def.seed_q = convolve({g->identity(), h->identity()});
  if (g->quasigeodesic_c() && h->quasigeodesic_c())
    def.quasigeodesic_c = std::max(*g->quasigeodesic_c(), *h->quasigeodesic_c());
  def.growth = {std::max(g->growth().alpha, h->growth().alpha), std::max(g->growth().beta, h->growth().beta),
                std::max(g->growth().per_index, h->growth().per_index)};
  def.overhang = [fs](const Token& x) {
    Route r = fs.route(x);
    return fs.f[r.side]->overhang(r.base);
  };

  def.multiplier = [fs, rows](const GraphAutomaticStructure& self, const Token& x) {
    if (x.ends_with('-') && self.generators().inverse(x) + "-" == x) return swap_rows(self.multiplier(self.generators().inverse(x)));
    Route r = fs.route(x);
    const auto& pair = self.pair_alphabet();
    const auto& letters = pair->letters();
    std::size_t n = letters->size();
    // Leaves (a, b, c, d): factor rows of the upper word, then of the lower word.
    std::vector<std::array<Letter, 4>> leaves(n);
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t row = 0; row < 2; ++row) {
        Letter t = pair->component(static_cast<Letter>(l), row);
        leaves[l][2 * row] = t == kPad ? kPad : rows->component(t, 0);
        leaves[l][2 * row + 1] = t == kPad ? kPad : rows->component(t, 1);
      }
    }
    std::size_t mine = r.side, other = 1 - r.side;
    const auto& factor = *fs.f[mine];
    const auto& rest = *fs.f[other];

    // Pads only as suffixes on every leaf, and the other factor's rows equal.
    AutomatonBuilder vb("shape", letters, 0);
    vb.set_blind(true);
    vb.set_deterministic(true);
    std::vector<StateId> mask(16);
    for (int m = 0; m < 16; ++m) mask[m] = vb.add_state("e" + std::to_string(m), true);
    for (int m = 0; m < 16; ++m) {
      for (std::size_t l = 0; l < n; ++l) {
        const auto& lv = leaves[l];
        if (lv[other] != lv[2 + other]) continue;
        int next = m;
        bool ok = true;
        for (int i = 0; i < 4; ++i) {
          if (lv[i] == kPad) next |= 1 << i;
          else if (m & (1 << i)) ok = false;
        }
        if (ok) vb.add_transition(mask[m], static_cast<Letter>(l), mask[next]);
      }
    }
    CounterAutomaton shape = std::move(vb).build();

    LetterHomomorphism to_rest{letters, rest.lambda(), std::vector<std::vector<Letter>>(n)};
    const auto& fpair = factor.pair_alphabet();
    LetterHomomorphism to_factor{letters, fpair->letters(), std::vector<std::vector<Letter>>(n)};
    for (std::size_t l = 0; l < n; ++l) {
      const auto& lv = leaves[l];
      if (lv[other] != kPad) to_rest.images[l] = {lv[other]};
      Letter c[2] = {lv[mine], lv[2 + mine]};
      if (auto fl = fpair->letter(c)) to_factor.images[l] = {*fl};
    }
    CounterAutomaton out = intersect(shape, preimage(factor.multiplier(r.base), to_factor));
    out = intersect(out, preimage(rest.nf_automaton(), to_rest));
    out.set_name("L_" + x);
    return out;
  };
  return GraphAutomaticStructure::create(std::move(def));
}

// ---------------------------------------------------------------- free product

namespace {

// Reads row-0 letters of m's pairs while row 1 is pinned to `fixed`.
CounterAutomaton pin_lower_row(const CounterAutomaton& m, const AlphabetPtr& row, const std::vector<Letter>& fixed) {
  auto pairs = as_tuple_alphabet(m.alphabet_ptr());
  AutomatonBuilder b(m.name() + ".pinned", row, m.counters());
  using Key = std::tuple<StateId, std::size_t, bool>;
  std::map<Key, StateId> ids;
  std::vector<Key> todo;
  auto id_of = [&](const Key& k) {
    auto [it, fresh] = ids.emplace(k, 0);
    if (fresh) {
      auto [s, j, ended] = k;
      it->second = b.add_state(m.state_name(s) + "@" + std::to_string(j) + (ended ? "!" : ""),
                               m.is_accepting(s) && j == fixed.size());
      todo.push_back(k);
    }
    return it->second;
  };
  b.set_start(id_of(Key{m.start(), 0, false}));
  while (!todo.empty()) {
    Key k = todo.back();
    todo.pop_back();
    auto [s, j, ended] = k;
    StateId from = ids[k];
    for (auto ti : m.out(s, kEpsilon)) {
      const auto& t = m.transitions()[ti];
      b.add_transition(from, kEpsilon, t.program, id_of(Key{t.to, j, ended}));
    }
    Letter lower = j < fixed.size() ? fixed[j] : kPad;
    std::size_t nj = std::min(j + 1, fixed.size());
    if (!ended) {
      for (Letter l = 0; l < static_cast<Letter>(row->size()); ++l) {
        Letter c[2] = {l, lower};
        Letter pl = *pairs->letter(c);
        for (auto ti : m.out(s, pl)) {
          const auto& t = m.transitions()[ti];
          b.add_transition(from, l, t.program, id_of(Key{t.to, nj, false}));
        }
      }
    }
    if (j < fixed.size()) {
      Letter c[2] = {kPad, lower};
      Letter pl = *pairs->letter(c);
      for (auto ti : m.out(s, pl)) {
        const auto& t = m.transitions()[ti];
        b.add_transition(from, kEpsilon, t.program, id_of(Key{t.to, j + 1, true}));
      }
    }
  }
  return trim(std::move(b).build());
}

struct FreeParts {
  Factors fs;
  AlphabetPtr omega;
  std::vector<Letter> into[2];  // factor symbol -> omega letter
  Letter hash = 0;
  CounterAutomaton nf;
  StateId kappa[2] = {0, 0};     // kappa[s]: the next block may come from factor s
};

std::shared_ptr<FreeParts> build_free_parts(const StructurePtr& g, const StructurePtr& h, const ProductTags& tags) {
  auto fp = std::make_shared<FreeParts>();
  fp->fs = Factors{{g, h}, {tags.g_generators, tags.h_generators}};
  std::string sym[2] = {tags.g_symbols, tags.h_symbols};
  std::vector<Token> omega{"#"};
  for (std::size_t s = 0; s < 2; ++s)
    for (const auto& t : fp->fs.f[s]->lambda()->tokens()) omega.push_back(sym[s] + t);
  fp->omega = make_alphabet(omega);
  fp->hash = fp->omega->index("#");
  for (std::size_t s = 0; s < 2; ++s)
    for (const auto& t : fp->fs.f[s]->lambda()->tokens()) fp->into[s].push_back(fp->omega->index(sym[s] + t));

  std::size_t width = std::max(g->nf_automaton().counters(), h->nf_automaton().counters());
  AutomatonBuilder b("free(" + g->name() + "," + h->name() + ").L", fp->omega, width);
  StateId k0 = b.add_state("k0");
  StateId k[2] = {b.add_state("k1", true), b.add_state("k2", true)};
  b.add_transition(k0, kEpsilon, k[0]);
  b.add_transition(k0, kEpsilon, k[1]);
  auto all_zero = InstructionProgram::all(width, CounterInstruction::test_zero());
  for (std::size_t s = 0; s < 2; ++s) {
    const auto& f = *fp->fs.f[s];
    CounterAutomaton block = intersect(f.nf_automaton(), all_but(f.lambda(), f.identity_letters()));
    const auto& into = fp->into[s];
    auto ids = copy_into(b, block, [&](Letter l) { return into[l]; }, s == 0 ? "g." : "h.");
    b.add_transition(k[s], fp->hash, ids[block.start()]);
    for (StateId a = 0; a < block.num_states(); ++a)
      if (block.is_accepting(a)) b.add_transition(ids[a], kEpsilon, all_zero, k[1 - s]);
  }
  fp->nf = std::move(b).build();
  fp->kappa[0] = k[0];
  fp->kappa[1] = k[1];
  return fp;
}

CounterAutomaton free_multiplier(const FreeParts& fp, const GraphAutomaticStructure& self, const Token& x) {
  Route r = fp.fs.route(x);
  const auto& f = *fp.fs.f[r.side];
  const auto& into = fp.into[r.side];
  auto lambda0 = f.identity_letters();
  auto lam = f.lambda()->encode(step_normal_form(f, f.identity(), r.base));
  if (lam == lambda0) return diagonal(fp.nf);

  const auto& mx = f.multiplier(r.base);
  const auto& pair = self.pair_alphabet();
  auto pl = [&](Letter a, Letter b) {
    Letter c[2] = {a, b};
    return *pair->letter(c);
  };
  auto fpair = f.pair_alphabet();
  LetterMap lift_pair = [&](Letter l) {
    Letter a = fpair->component(l, 0), b = fpair->component(l, 1);
    return pl(a == kPad ? kPad : into[a], b == kPad ? kPad : into[b]);
  };

  std::size_t width = std::max(fp.nf.counters(), mx.counters());
  AutomatonBuilder b("L_" + x, pair->letters(), width);
  auto prefix = copy_into(b, fp.nf, [&](Letter l) { return pl(l, l); }, "d.");
  b.set_start(prefix[fp.nf.start()]);
  StateId kappa = prefix[fp.kappa[r.side]];

  // The last block belongs to the other factor (or u is empty): append a new block.
  StateId cur = b.add_state("new#");
  b.add_transition(kappa, pl(kPad, fp.hash), cur);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    StateId next = b.add_state("new" + std::to_string(i));
    b.add_transition(cur, pl(kPad, into[lam[i]]), next);
    cur = next;
  }
  b.set_accepting(cur);

  // The last block is ours and stays nontrivial.
  // Both rows are excluded from being the identity so the machine stays inside the
  // pairs of normal forms, which the row swap for inverses relies on.
  CounterAutomaton nontrivial = all_but(f.lambda(), lambda0);
  CounterAutomaton keep = intersect(intersect(mx, pad_lift(nontrivial, Side::right, f.lambda())),
                                    pad_lift(nontrivial, Side::left, f.lambda()));
  auto ids = copy_into(b, keep, lift_pair, "keep.");
  b.add_transition(kappa, pl(fp.hash, fp.hash), ids[keep.start()]);
  for (StateId s = 0; s < keep.num_states(); ++s)
    if (keep.is_accepting(s)) b.set_accepting(ids[s]);

  // The last block cancels.
  CounterAutomaton drop = intersect(pin_lower_row(mx, f.lambda(), lambda0), nontrivial);
  ids = copy_into(b, drop, [&](Letter l) { return pl(into[l], kPad); }, "drop.");
  b.add_transition(kappa, pl(fp.hash, kPad), ids[drop.start()]);
  for (StateId s = 0; s < drop.num_states(); ++s)
    if (drop.is_accepting(s)) b.set_accepting(ids[s]);
  return trim(std::move(b).build());
}

}  // namespace

StructurePtr free_product(const StructurePtr& g, const StructurePtr& h) {
  ProductTags tags = free_product_tags(*g, *h);
  auto fp = build_free_parts(g, h, tags);

  StructureDefinition def;
  def.name = "free(" + g->name() + "," + h->name() + ")";
  def.lambda = fp->omega;
  add_tagged(def.generators, g->generators(), tags.g_generators);
  add_tagged(def.generators, h->generators(), tags.h_generators);
  def.nf = fp->nf;
  if (g->quasigeodesic_c() && h->quasigeodesic_c())
    def.quasigeodesic_c = 2 * std::max(*g->quasigeodesic_c(), *h->quasigeodesic_c()) + 1;
  std::size_t block = 1 + std::max(g->growth_bound(g->identity().size(), ""), h->growth_bound(h->identity().size(), ""));
  def.growth = {std::max(g->growth().alpha, h->growth().alpha),
                std::max(g->growth().beta, h->growth().beta) + block,
                std::max(g->growth().per_index, h->growth().per_index)};
  def.overhang = [fp](const Token& x) {
    Route r = fp->fs.route(x);
    const auto& f = *fp->fs.f[r.side];
    Overhang o = f.overhang(r.base);
    std::size_t fresh = 1 + f.growth_bound(f.identity().size(), r.base);
    if (o.right) o.right = std::max(*o.right, fresh);
    if (o.left) o.left = std::max(*o.left, fresh);
    return o;
  };
  def.multiplier = [fp](const GraphAutomaticStructure& self, const Token& x) {
    Token inv = self.generators().inverse(x);
    if (x.ends_with('-') && inv + "-" == x) return swap_rows(self.multiplier(inv));
    return free_multiplier(*fp, self, x);
  };
  return GraphAutomaticStructure::create(std::move(def));
}

// ---------------------------------------------------------------- change of generators

namespace {

// Words over `a`'s tuple alphabet with at most `limit` letters whose rows `r0` and `r1` both pad.
CounterAutomaton outer_tail_limit(const std::shared_ptr<const TupleAlphabet>& ta, std::size_t r0, std::size_t r1,
                                  std::size_t limit) {
  AutomatonBuilder b("tail-limit", ta->letters(), 0);
  b.set_blind(true);
  b.set_deterministic(true);
  std::vector<StateId> c;
  for (std::size_t i = 0; i <= limit; ++i) c.push_back(b.add_state("c" + std::to_string(i), true));
  for (Letter l = 0; l < static_cast<Letter>(ta->size()); ++l) {
    bool tail = ta->component(l, r0) == kPad && ta->component(l, r1) == kPad;
    for (std::size_t i = 0; i <= limit; ++i) {
      if (!tail) {
        if (i == 0) b.add_transition(c[0], l, c[0]);
      } else if (i < limit) {
        b.add_transition(c[i], l, c[i + 1]);
      }
    }
  }
  return std::move(b).build();
}

}  // namespace

StructurePtr change_generators(const StructurePtr& s, const std::vector<GeneratorDefinition>& defs) {
  if (defs.empty()) throw std::invalid_argument("change of generators needs at least one generator");
  std::map<Token, std::optional<Word>> table;
  StructureDefinition def;
  std::string desc;
  std::size_t longest = 1;
  for (const auto& d : defs) {
    if (d.name.empty() || d.name.ends_with('-')) throw std::invalid_argument("bad generator name '" + d.name + "'");
    if (d.word) {
      if (d.word->empty()) throw std::invalid_argument("generator '" + d.name + "' needs a nonempty word or EPS");
      for (const auto& x : *d.word)
        if (!s->generators().contains(x))
          throw std::invalid_argument("'" + x + "' in the word for '" + d.name + "' is not a generator");
      longest = std::max(longest, d.word->size());
    }
    def.generators.add(d.name);
    table[d.name] = d.word;
    desc += "; " + d.name + "=" + (d.word ? join(*d.word, " ") : std::string("EPS"));
  }
  def.name = "regen(" + s->name() + desc + ")";
  def.lambda = s->lambda();
  def.nf = s->nf_automaton();
  def.seed_q = s->identity();
  def.order = s->order();
  if (s->quasigeodesic_c()) def.quasigeodesic_c = *s->quasigeodesic_c() * longest;

  // Apply the base bound once per letter of the longest word.
  std::size_t alpha = 1, beta = 0;
  for (const auto& [name, w] : table) {
    if (!w) continue;
    std::size_t a = 1, b = 0;
    for (const auto& x : *w) {
      a *= s->growth().alpha;
      b = s->growth().alpha * b + s->growth_bound(0, x);
    }
    alpha = std::max(alpha, a);
    beta = std::max(beta, b);
  }
  def.growth = {alpha, beta, 0};

  auto overhang_of = [s, table](const Token& y) {
    Overhang o{0, 0};
    const auto& w = table.at(y);
    if (!w) return o;
    for (const auto& x : *w) {
      Overhang ox = s->overhang(x);
      o.right = o.right && ox.right ? std::optional<std::size_t>(*o.right + *ox.right) : std::nullopt;
      o.left = o.left && ox.left ? std::optional<std::size_t>(*o.left + *ox.left) : std::nullopt;
    }
    return o;
  };
  def.overhang = [overhang_of](const Token& y) {
    if (y.ends_with('-')) {
      Overhang o = overhang_of(y.substr(0, y.size() - 1));
      return Overhang{o.left, o.right};
    }
    return overhang_of(y);
  };

  def.multiplier = [s, table](const GraphAutomaticStructure& self, const Token& y) {
    if (y.ends_with('-')) return swap_rows(self.multiplier(y.substr(0, y.size() - 1)));
    const auto& w = table.at(y);
    if (!w) return diagonal(s->nf_automaton());
    if (w->size() == 1) return s->multiplier(w->front());
    std::size_t k = w->size();
    auto rows = tuple_alphabet(std::vector<AlphabetPtr>(k + 1, s->lambda()));
    const auto& pair = s->pair_alphabet();
    std::size_t n = rows->size();

    // Letters after both outer rows end come from intermediate words only; their
    // number is bounded by the per-step overhangs, which keeps the projection quasi-realtime.
    std::optional<std::size_t> limit;
    for (std::size_t j = 1; j < k; ++j) {
      std::optional<std::size_t> from_left = 0, from_right = 0;
      for (std::size_t i = 0; i < j && from_left; ++i) {
        auto r = s->overhang((*w)[i]).right;
        from_left = r ? std::optional<std::size_t>(*from_left + *r) : std::nullopt;
      }
      for (std::size_t i = j; i < k && from_right; ++i) {
        auto l = s->overhang((*w)[i]).left;
        from_right = l ? std::optional<std::size_t>(*from_right + *l) : std::nullopt;
      }
      std::optional<std::size_t> bound;
      if (from_left && from_right) bound = std::min(*from_left, *from_right);
      else bound = from_left ? from_left : from_right;
      if (!bound) {
        limit.reset();
        break;
      }
      limit = std::max(limit.value_or(0), *bound);
    }

    CounterAutomaton acc = convolution_validity(rows);
    if (limit) acc = intersect(acc, outer_tail_limit(rows, 0, k, *limit));
    for (std::size_t i = 1; i <= k; ++i) {
      LetterHomomorphism phi{rows->letters(), pair->letters(), std::vector<std::vector<Letter>>(n)};
      for (std::size_t l = 0; l < n; ++l) {
        Letter c[2] = {rows->component(static_cast<Letter>(l), i - 1), rows->component(static_cast<Letter>(l), i)};
        if (auto pl = pair->letter(c)) phi.images[l] = {*pl};
      }
      acc = intersect(acc, preimage(s->multiplier((*w)[i - 1]), phi));
    }
    LetterHomomorphism outer{rows->letters(), pair->letters(), std::vector<std::vector<Letter>>(n)};
    for (std::size_t l = 0; l < n; ++l) {
      Letter c[2] = {rows->component(static_cast<Letter>(l), 0), rows->component(static_cast<Letter>(l), k)};
      if (auto pl = pair->letter(c)) outer.images[l] = {*pl};
    }
    CounterAutomaton out = image(acc, outer);
    out.set_name("L_" + y);
    return out;
  };
  return GraphAutomaticStructure::create(std::move(def));
}

}  // namespace cga
