#include "cga/structure.hpp"

#include <charconv>
#include <stdexcept>

#include "cga/engine.hpp"
#include "cga/errors.hpp"
#include "cga/langops.hpp"
#include "cga/normal_form.hpp"

namespace cga {

void GeneratorSet::add(Token generator, Token inverse) {
  if (inverse_.count(generator) || (generator != inverse && inverse_.count(inverse)))
    throw std::invalid_argument("generator '" + generator + "' declared twice");
  inverse_[generator] = inverse;
  inverse_[inverse] = generator;
  pairs_.emplace_back(std::move(generator), std::move(inverse));
}

std::optional<std::size_t> GeneratorSet::family_index(const Token& x) const {
  if (!family_) return std::nullopt;
  const auto& base = family_->base;
  if (x.size() <= base.size() || x.compare(0, base.size(), base) != 0) return std::nullopt;
  std::string_view rest(x);
  rest.remove_prefix(base.size());
  if (!rest.empty() && rest.back() == '-') rest.remove_suffix(1);
  if (rest.empty() || rest[0] == '0') return std::nullopt;
  std::size_t i = 0;
  auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), i);
  if (ec != std::errc() || p != rest.data() + rest.size() || i == 0) return std::nullopt;
  return i;
}

bool GeneratorSet::contains(const Token& x) const { return inverse_.count(x) > 0 || is_family_member(x); }

Token GeneratorSet::inverse(const Token& x) const {
  if (auto it = inverse_.find(x); it != inverse_.end()) return it->second;
  if (is_family_member(x)) return x.back() == '-' ? x.substr(0, x.size() - 1) : x + "-";
  throw std::invalid_argument("unknown generator '" + x + "'");
}

std::vector<Token> GeneratorSet::finite_symbols() const {
  std::vector<Token> out;
  for (const auto& [g, inv] : pairs_) {
    out.push_back(g);
    if (inv != g) out.push_back(inv);
  }
  return out;
}

GraphAutomaticStructure::GraphAutomaticStructure(StructureDefinition def) : def_(std::move(def)) {
  if (!def_.lambda) throw std::invalid_argument("structure needs a symbol alphabet");
  if (!def_.multiplier) throw std::invalid_argument("structure needs a multiplier factory");
  if (!same_alphabet(def_.nf.alphabet_ptr(), def_.lambda))
    throw std::invalid_argument("normal-form automaton is not over the symbol alphabet");
  def_.nf = relabel_alphabet(def_.nf, def_.lambda);
  pairs_ = tuple_alphabet({def_.lambda, def_.lambda});
  order_ = def_.order.empty() ? def_.lambda->tokens() : def_.order;
  if (order_.size() != def_.lambda->size()) throw std::invalid_argument("order must list every symbol exactly once");
  rank_.assign(def_.lambda->size(), order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) {
    Letter l = def_.lambda->index(order_[i]);
    if (rank_[l] != order_.size()) throw std::invalid_argument("order lists '" + order_[i] + "' twice");
    rank_[l] = i;
    order_letters_.push_back(l);
  }
  if (def_.growth.alpha < 1) throw std::invalid_argument("growth alpha must be at least 1");
  auto report = validate(def_.nf);
  if (!report.ok()) throw StructureError("normal-form automaton invalid: " + report.errors.front());
}

StructurePtr GraphAutomaticStructure::create(StructureDefinition def) {
  std::shared_ptr<GraphAutomaticStructure> s(new GraphAutomaticStructure(std::move(def)));
  for (const auto& t : s->def_.seed_q)
    if (!s->def_.lambda->contains(t)) throw StructureError("seed q uses unknown symbol '" + t + "'");
  if (!accepts(s->def_.nf, s->def_.seed_q)) throw StructureError("seed q is not a normal form");
  for (const auto& x : s->def_.seed_p)
    if (!s->def_.generators.contains(x)) throw StructureError("seed p uses unknown generator '" + x + "'");
  s->mu_ = normalize_seed(*s, s->def_.seed_p, s->def_.seed_q);
  s->mu_letters_ = s->def_.lambda->encode(s->mu_);
  return s;
}

const CounterAutomaton& GraphAutomaticStructure::multiplier(const Token& x) const {
  {
    std::lock_guard lock(mu_cache_);
    if (auto it = cache_.find(x); it != cache_.end()) return *it->second;
  }
  if (!def_.generators.contains(x)) throw std::invalid_argument("unknown generator '" + x + "'");
  CounterAutomaton m = relabel_alphabet(def_.multiplier(*this, x), pairs_->letters());
  auto report = validate(m);
  if (!report.ok()) throw StructureError("multiplier for '" + x + "' invalid: " + report.errors.front());
  auto made = std::make_shared<const CounterAutomaton>(std::move(m));
  std::lock_guard lock(mu_cache_);
  // A concurrent builder may have won; both results are equivalent.
  return *cache_.emplace(x, std::move(made)).first->second;
}

std::vector<Token> GraphAutomaticStructure::instantiated_multipliers() const {
  std::lock_guard lock(mu_cache_);
  std::vector<Token> out;
  for (const auto& [x, m] : cache_) out.push_back(x);
  return out;
}

Overhang GraphAutomaticStructure::overhang(const Token& x) const {
  if (!def_.overhang) return {};
  return def_.overhang(x);
}

std::size_t GraphAutomaticStructure::growth_bound(std::size_t len, const Token& x) const {
  return def_.growth.bound(len, def_.generators.family_index(x).value_or(0));
}

}  // namespace cga
