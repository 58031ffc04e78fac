#include "cga/oracle.hpp"

#include <stdexcept>

namespace cga {

Token toggle_inverse(const Token& x) {
  if (!x.empty() && x.back() == '-') return x.substr(0, x.size() - 1);
  return x + "-";
}

Token GroupOracle::inverse(const Token& x) const { return toggle_inverse(x); }

Word GroupOracle::inverse_word(const Word& w) const {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inverse(*it));
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const auto& x : w) {
    if (!out.empty() && out.back() == toggle_inverse(x)) out.pop_back();
    else out.push_back(x);
  }
  return out;
}

FreeGroupOracle::FreeGroupOracle(std::vector<Token> generators, std::string name)
    : gens_(std::move(generators)), name_(std::move(name)) {}

Word FreeGroupOracle::canonicalize(const Word& w) const {
  for (const auto& x : w)
    if (!owns(x)) throw std::invalid_argument("oracle '" + name_ + "' does not know generator '" + x + "'");
  return free_reduce(w);
}

bool FreeGroupOracle::owns(const Token& x) const {
  if (x.empty() || x == "-") return false;
  if (gens_.empty()) return true;
  Token base = x.back() == '-' ? x.substr(0, x.size() - 1) : x;
  for (const auto& g : gens_)
    if (g == base) return true;
  return false;
}

std::vector<Token> FreeGroupOracle::generators() const {
  std::vector<Token> out;
  for (const auto& g : gens_) {
    out.push_back(g);
    out.push_back(g + "-");
  }
  return out;
}

Word ProductOracle::canonicalize(const Word& w) const {
  Word a, b;
  for (const auto& x : w) {
    if (g_->owns(x)) a.push_back(x);
    else if (h_->owns(x)) b.push_back(x);
    else throw std::invalid_argument("product oracle does not know generator '" + x + "'");
  }
  Word out = g_->canonicalize(a);
  Word hb = h_->canonicalize(b);
  out.push_back("|");
  out.insert(out.end(), hb.begin(), hb.end());
  return out;
}

std::vector<Token> ProductOracle::generators() const {
  auto a = g_->generators(), b = h_->generators();
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Word FreeProductOracle::canonicalize(const Word& w) const {
  for (const auto& x : w)
    if (!owns(x)) throw std::invalid_argument("free product oracle does not know generator '" + x + "'");
  const Word g_one = g_->canonicalize({});
  const Word h_one = h_->canonicalize({});
  Word cur = w;
  while (true) {
    // Split into maximal single-factor syllables, reduce each, drop trivial ones.
    Word next;
    bool changed = false;
    std::size_t i = 0;
    while (i < cur.size()) {
      bool in_g = g_->owns(cur[i]);
      std::size_t j = i;
      while (j < cur.size() && g_->owns(cur[j]) == in_g) ++j;
      Word syl(cur.begin() + static_cast<std::ptrdiff_t>(i), cur.begin() + static_cast<std::ptrdiff_t>(j));
      bool trivial = in_g ? g_->canonicalize(syl) == g_one : h_->canonicalize(syl) == h_one;
      if (trivial) changed = true;
      else next.insert(next.end(), syl.begin(), syl.end());
      i = j;
    }
    cur = std::move(next);
    if (!changed) break;
  }
  // Canonical: each syllable replaced by its factor's canonical word, bracketed.
  Word out;
  std::size_t i = 0;
  while (i < cur.size()) {
    bool in_g = g_->owns(cur[i]);
    std::size_t j = i;
    while (j < cur.size() && g_->owns(cur[j]) == in_g) ++j;
    Word syl(cur.begin() + static_cast<std::ptrdiff_t>(i), cur.begin() + static_cast<std::ptrdiff_t>(j));
    Word c = in_g ? g_->canonicalize(syl) : h_->canonicalize(syl);
    out.push_back(in_g ? "[1" : "[2");
    out.insert(out.end(), c.begin(), c.end());
    out.push_back("]");
    i = j;
  }
  return out;
}

std::vector<Token> FreeProductOracle::generators() const {
  auto a = g_->generators(), b = h_->generators();
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Word TaggedOracle::canonicalize(const Word& w) const {
  Word inner;
  for (const auto& x : w) {
    if (!owns(x)) throw std::invalid_argument("tagged oracle does not know generator '" + x + "'");
    inner.push_back(x.substr(tag_.size()));
  }
  Word out;
  for (const auto& x : base_->canonicalize(inner)) out.push_back(tag_ + x);
  return out;
}

bool TaggedOracle::owns(const Token& x) const {
  return x.size() > tag_.size() && x.compare(0, tag_.size(), tag_) == 0 && base_->owns(x.substr(tag_.size()));
}

std::vector<Token> TaggedOracle::generators() const {
  std::vector<Token> out;
  for (const auto& g : base_->generators()) out.push_back(tag_ + g);
  return out;
}

RegenOracle::RegenOracle(OraclePtr base, std::vector<std::pair<Token, Word>> definitions)
    : base_(std::move(base)), defs_(std::move(definitions)) {
  for (const auto& [y, u] : defs_) {
    expansion_[y] = u;
    expansion_[y + "-"] = base_->inverse_word(u);
  }
}

Word RegenOracle::expand(const Word& w) const {
  Word out;
  for (const auto& x : w) {
    auto it = expansion_.find(x);
    if (it == expansion_.end()) throw std::invalid_argument("regen oracle does not know generator '" + x + "'");
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

Word RegenOracle::canonicalize(const Word& w) const { return base_->canonicalize(expand(w)); }

bool RegenOracle::owns(const Token& x) const { return expansion_.count(x) > 0; }

std::vector<Token> RegenOracle::generators() const {
  std::vector<Token> out;
  for (const auto& [y, u] : defs_) {
    out.push_back(y);
    out.push_back(y + "-");
  }
  return out;
}

}  // namespace cga
