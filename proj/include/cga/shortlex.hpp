#pragma once

#include <compare>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cga/alphabet.hpp"
#include "cga/oracle.hpp"

namespace cga {

class OrderedAlphabet {
 public:
  explicit OrderedAlphabet(std::vector<Token> letters);
  std::size_t size() const { return letters_.size(); }
  const Token& operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<Token>& letters() const { return letters_; }
  std::size_t rank(const Token& t) const;
  const Token& first() const { return letters_.front(); }
  const Token& last() const { return letters_.back(); }

 private:
  std::vector<Token> letters_;
  std::unordered_map<Token, std::size_t> rank_;
};

Word successor(const Word& v, const OrderedAlphabet& a);
// Least word after v that does not start with v's first `keep` letters;
// the length grows only when every such prefix of this length is exhausted.
Word skip_prefix(const Word& v, std::size_t keep, const OrderedAlphabet& a);
std::strong_ordering compare(const Word& u, const Word& v, const OrderedAlphabet& a);

// Shortlex-least word equal to w, searching lengths up to max_len; nullopt on a cap hit.
std::optional<Word> geodesic_normal_form(const GroupOracle& oracle, const OrderedAlphabet& x, const Word& w,
                                         std::optional<std::size_t> max_len = std::nullopt);
std::optional<std::size_t> geodesic_length(const GroupOracle& oracle, const OrderedAlphabet& x, const Word& w,
                                           std::optional<std::size_t> max_len = std::nullopt);

// One successor sweep up to max_len, recording the first word of every element met.
class GeodesicTable {
 public:
  GeodesicTable(const GroupOracle& oracle, const OrderedAlphabet& x, std::size_t max_len);
  // Geodesic normal form of the element, if its geodesic length is at most max_len.
  const Word* lookup(const Word& w) const;
  std::size_t size() const { return first_.size(); }

 private:
  const GroupOracle& oracle_;
  std::map<Word, Word> first_;
};

}  // namespace cga
