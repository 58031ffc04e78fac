#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cga/automaton.hpp"

namespace cga {

class GeneratorSet {
 public:
  struct Family {
    std::string base;  // x in x1, x2, ... with inverses x1-, x2-, ...
  };

  GeneratorSet() = default;
  // Each pair is (generator, formal inverse); a generator equal to its inverse is self-inverse.
  void add(Token generator, Token inverse);
  void add(Token generator) { add(generator, generator + "-"); }
  void set_family(Family f) { family_ = std::move(f); }

  bool contains(const Token& x) const;
  Token inverse(const Token& x) const;
  // Index i when x is x<i> or x<i>- of the family.
  std::optional<std::size_t> family_index(const Token& x) const;
  bool is_family_member(const Token& x) const { return family_index(x).has_value(); }
  const std::optional<Family>& family() const { return family_; }
  // Generators then inverses interleaved: a a- t t- ...
  const std::vector<std::pair<Token, Token>>& pairs() const { return pairs_; }
  std::vector<Token> finite_symbols() const;

 private:
  std::vector<std::pair<Token, Token>> pairs_;
  std::map<Token, Token> inverse_;
  std::optional<Family> family_;
};

struct GrowthPolicy {
  std::size_t alpha = 1;
  std::size_t beta = 0;
  std::size_t per_index = 0;  // added per unit of a family index

  std::size_t bound(std::size_t len, std::size_t index = 0) const { return alpha * len + beta + per_index * index; }
};

// Largest number of trailing letters of an accepted pair with row 0 padded (right)
// or row 1 padded (left). Unknown bounds stay empty.
struct Overhang {
  std::optional<std::size_t> right;
  std::optional<std::size_t> left;
};

class GraphAutomaticStructure;
using StructurePtr = std::shared_ptr<const GraphAutomaticStructure>;

struct StructureDefinition {
  std::string name;
  AlphabetPtr lambda;
  GeneratorSet generators;
  CounterAutomaton nf;
  // Builds L_x over the pair alphabet of lambda for a generator or inverse x;
  // may ask the structure for other (cached) multipliers.
  std::function<CounterAutomaton(const GraphAutomaticStructure&, const Token&)> multiplier;
  Word seed_p;
  Word seed_q;
  std::optional<std::size_t> quasigeodesic_c;
  GrowthPolicy growth;
  std::vector<Token> order;  // Shortlex order on lambda; lambda's order when empty
  std::function<Overhang(const Token&)> overhang;
  std::function<CounterAutomaton(const Token&)> left_multiplier;
};

class GraphAutomaticStructure {
 public:
  // Checks the seed and computes the identity's normal form.
  static StructurePtr create(StructureDefinition def);

  const std::string& name() const { return def_.name; }
  const AlphabetPtr& lambda() const { return def_.lambda; }
  const std::shared_ptr<const TupleAlphabet>& pair_alphabet() const { return pairs_; }
  const GeneratorSet& generators() const { return def_.generators; }
  const CounterAutomaton& nf_automaton() const { return def_.nf; }
  const Word& seed_p() const { return def_.seed_p; }
  const Word& seed_q() const { return def_.seed_q; }
  std::optional<std::size_t> quasigeodesic_c() const { return def_.quasigeodesic_c; }
  const GrowthPolicy& growth() const { return def_.growth; }
  const std::vector<Token>& order() const { return order_; }
  std::size_t order_rank(Letter l) const { return rank_[static_cast<std::size_t>(l)]; }
  const std::vector<Letter>& order_letters() const { return order_letters_; }
  bool has_left_multipliers() const { return static_cast<bool>(def_.left_multiplier); }

  // Normal form of the identity.
  const Word& identity() const { return mu_; }
  const std::vector<Letter>& identity_letters() const { return mu_letters_; }

  // Lazily built and cached; safe to call concurrently.
  const CounterAutomaton& multiplier(const Token& x) const;
  std::vector<Token> instantiated_multipliers() const;
  Overhang overhang(const Token& x) const;
  std::size_t growth_bound(std::size_t len, const Token& x) const;
  Letter pair_letter(Letter row0, Letter row1) const {
    Letter c[2] = {row0, row1};
    return *pairs_->letter(c);
  }

  const StructureDefinition& definition() const { return def_; }

 private:
  explicit GraphAutomaticStructure(StructureDefinition def);

  StructureDefinition def_;
  std::shared_ptr<const TupleAlphabet> pairs_;
  std::vector<Token> order_;
  std::vector<Letter> order_letters_;
  std::vector<std::size_t> rank_;
  Word mu_;
  std::vector<Letter> mu_letters_;
  mutable std::mutex mu_cache_;
  mutable std::map<Token, std::shared_ptr<const CounterAutomaton>> cache_;
};

}  // namespace cga
