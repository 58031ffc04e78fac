#include "cga/shortlex.hpp"

#include <stdexcept>

namespace cga {

OrderedAlphabet::OrderedAlphabet(std::vector<Token> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw std::invalid_argument("ordered alphabet must be nonempty");
  for (std::size_t i = 0; i < letters_.size(); ++i)
    if (!rank_.emplace(letters_[i], i).second)
      throw std::invalid_argument("duplicate letter '" + letters_[i] + "' in ordered alphabet");
}

std::size_t OrderedAlphabet::rank(const Token& t) const {
  auto it = rank_.find(t);
  if (it == rank_.end()) throw std::invalid_argument("letter '" + t + "' is not in the ordered alphabet");
  return it->second;
}

Word successor(const Word& v, const OrderedAlphabet& a) {
  Word w = v;
  std::size_t i = w.size();
  while (i > 0 && w[i - 1] == a.last()) --i;
  if (i == 0) return Word(v.size() + 1, a.first());
  w[i - 1] = a[a.rank(w[i - 1]) + 1];
  for (std::size_t j = i; j < w.size(); ++j) w[j] = a.first();
  return w;
}

Word skip_prefix(const Word& v, std::size_t keep, const OrderedAlphabet& a) {
  if (keep == 0) return Word(v.size() + 1, a.first());
  Word prefix(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(keep));
  Word next = successor(prefix, a);
  if (next.size() > prefix.size()) return Word(v.size() + 1, a.first());
  next.resize(v.size(), a.first());
  return next;
}

std::strong_ordering compare(const Word& u, const Word& v, const OrderedAlphabet& a) {
  if (u.size() != v.size()) return u.size() <=> v.size();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == v[i]) continue;
    return a.rank(u[i]) <=> a.rank(v[i]);
  }
  return std::strong_ordering::equal;
}

std::optional<Word> geodesic_normal_form(const GroupOracle& oracle, const OrderedAlphabet& x, const Word& w,
                                         std::optional<std::size_t> max_len) {
  std::size_t cap = max_len.value_or(w.size());
  Word v;
  while (v.size() <= cap) {
    Word probe = w;
    Word inv = oracle.inverse_word(v);
    probe.insert(probe.end(), inv.begin(), inv.end());
    if (oracle.is_identity(probe)) return v;
    v = successor(v, x);
  }
  return std::nullopt;
}

std::optional<std::size_t> geodesic_length(const GroupOracle& oracle, const OrderedAlphabet& x, const Word& w,
                                           std::optional<std::size_t> max_len) {
  auto g = geodesic_normal_form(oracle, x, w, max_len);
  if (!g) return std::nullopt;
  return g->size();
}

GeodesicTable::GeodesicTable(const GroupOracle& oracle, const OrderedAlphabet& x, std::size_t max_len)
    : oracle_(oracle) {
  Word v;
  while (v.size() <= max_len) {
    first_.emplace(oracle.canonicalize(v), v);
    v = successor(v, x);
  }
}

const Word* GeodesicTable::lookup(const Word& w) const {
  auto it = first_.find(oracle_.canonicalize(w));
  return it == first_.end() ? nullptr : &it->second;
}

}  // namespace cga
