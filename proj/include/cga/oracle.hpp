#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cga/alphabet.hpp"

namespace cga {

// Ground truth for group equality. Words use the "x-" convention for inverses.
class GroupOracle {
 public:
  virtual ~GroupOracle() = default;
  virtual std::string name() const = 0;
  // Idempotent; equal group elements give identical canonical words.
  virtual Word canonicalize(const Word& w) const = 0;
  virtual bool owns(const Token& generator) const = 0;
  // Symmetric generator list in a fixed order; empty when the set is unbounded.
  virtual std::vector<Token> generators() const { return {}; }
  virtual Token inverse(const Token& x) const;

  Word inverse_word(const Word& w) const;
  bool equal(const Word& u, const Word& v) const { return canonicalize(u) == canonicalize(v); }
  bool is_identity(const Word& w) const { return canonicalize(w) == canonicalize({}); }
};

using OraclePtr = std::shared_ptr<const GroupOracle>;

Token toggle_inverse(const Token& x);

// Free group on the given generators, or on every token when the list is empty.
class FreeGroupOracle : public GroupOracle {
 public:
  explicit FreeGroupOracle(std::vector<Token> generators = {}, std::string name = "free");
  std::string name() const override { return name_; }
  Word canonicalize(const Word& w) const override;
  bool owns(const Token& x) const override;
  std::vector<Token> generators() const override;

 private:
  std::vector<Token> gens_;
  std::string name_;
};

Word free_reduce(const Word& w);

// Commuting factors; the canonical word lists the first factor's part first.
class ProductOracle : public GroupOracle {
 public:
  ProductOracle(OraclePtr g, OraclePtr h) : g_(std::move(g)), h_(std::move(h)) {}
  std::string name() const override { return "product(" + g_->name() + "," + h_->name() + ")"; }
  Word canonicalize(const Word& w) const override;
  bool owns(const Token& x) const override { return g_->owns(x) || h_->owns(x); }
  std::vector<Token> generators() const override;

 private:
  OraclePtr g_, h_;
};

// Reduces syllable by syllable until nothing changes.
class FreeProductOracle : public GroupOracle {
 public:
  FreeProductOracle(OraclePtr g, OraclePtr h) : g_(std::move(g)), h_(std::move(h)) {}
  std::string name() const override { return "free(" + g_->name() + "," + h_->name() + ")"; }
  Word canonicalize(const Word& w) const override;
  bool owns(const Token& x) const override { return g_->owns(x) || h_->owns(x); }
  std::vector<Token> generators() const override;

 private:
  OraclePtr g_, h_;
};

// Renames generators by prefixing a tag; canonical words keep the tag.
class TaggedOracle : public GroupOracle {
 public:
  TaggedOracle(OraclePtr base, std::string tag) : base_(std::move(base)), tag_(std::move(tag)) {}
  std::string name() const override { return tag_ + base_->name(); }
  Word canonicalize(const Word& w) const override;
  bool owns(const Token& x) const override;
  std::vector<Token> generators() const override;

 private:
  OraclePtr base_;
  std::string tag_;
};

// New generators y defined by words over the base generators.
class RegenOracle : public GroupOracle {
 public:
  RegenOracle(OraclePtr base, std::vector<std::pair<Token, Word>> definitions);
  std::string name() const override { return "regen(" + base_->name() + ")"; }
  Word canonicalize(const Word& w) const override;
  bool owns(const Token& x) const override;
  std::vector<Token> generators() const override;
  Word expand(const Word& w) const;

 private:
  OraclePtr base_;
  std::vector<std::pair<Token, Word>> defs_;
  std::map<Token, Word> expansion_;
};

}  // namespace cga
