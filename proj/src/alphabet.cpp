#include "cga/alphabet.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace cga {

Alphabet::Alphabet(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const Token& t = tokens_[i];
    if (t.empty()) throw std::invalid_argument("empty token in alphabet");
    if (t == "EPS") throw std::invalid_argument("EPS is reserved and cannot be a token");
    if (!index_.emplace(t, static_cast<Letter>(i)).second)
      throw std::invalid_argument("duplicate token '" + t + "' in alphabet");
  }
}

std::optional<Letter> Alphabet::find(std::string_view tok) const {
  auto it = index_.find(std::string(tok));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Letter Alphabet::index(std::string_view tok) const {
  auto l = find(tok);
  if (!l) throw std::invalid_argument("token '" + std::string(tok) + "' is not in the alphabet");
  return *l;
}

std::vector<Letter> Alphabet::encode(const Word& w) const {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (const auto& t : w) out.push_back(index(t));
  return out;
}

Word Alphabet::decode(std::span<const Letter> letters) const {
  Word out;
  out.reserve(letters.size());
  for (Letter l : letters) out.push_back(token(l));
  return out;
}

AlphabetPtr make_alphabet(std::vector<Token> tokens) {
  return std::make_shared<const Alphabet>(std::move(tokens));
}

bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  return a == b || (a && b && *a == *b);
}

TupleAlphabet::TupleAlphabet(std::vector<AlphabetPtr> rows) : rows_(std::move(rows)) {
  if (rows_.size() < 2) throw std::invalid_argument("tuple alphabet needs at least two rows");
  std::size_t total = 1;
  radix_.resize(rows_.size());
  for (std::size_t i = rows_.size(); i-- > 0;) {
    if (rows_[i]->contains(kPadToken)) throw std::invalid_argument("row alphabet contains the pad token");
    radix_[i] = total;
    total *= rows_[i]->size() + 1;
  }
  std::size_t count = total - 1;  // the all-pad tuple is the last index
  std::vector<Token> tokens;
  tokens.reserve(count);
  components_.resize(count * rows_.size());
  std::vector<std::string_view> parts(rows_.size());
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::size_t digit = rest / radix_[r];
      rest %= radix_[r];
      bool pad = digit == rows_[r]->size();
      components_[idx * rows_.size() + r] = pad ? kPad : static_cast<Letter>(digit);
      parts[r] = pad ? kPadToken : std::string_view(rows_[r]->token(static_cast<Letter>(digit)));
    }
    tokens.push_back(tuple_token(parts));
  }
  letters_ = make_alphabet(std::move(tokens));
}

TupleAlphabet TupleAlphabet::uniform(AlphabetPtr base, std::size_t arity) {
  return TupleAlphabet(std::vector<AlphabetPtr>(arity, std::move(base)));
}

std::optional<Letter> TupleAlphabet::letter(std::span<const Letter> comps) const {
  std::size_t idx = 0;
  bool all_pad = true;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    std::size_t digit = comps[r] == kPad ? rows_[r]->size() : static_cast<std::size_t>(comps[r]);
    all_pad = all_pad && comps[r] == kPad;
    idx += digit * radix_[r];
  }
  if (all_pad) return std::nullopt;
  return static_cast<Letter>(idx);
}

Token TupleAlphabet::tuple_token(const std::vector<std::string_view>& parts) {
  Token t = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) t += '|';
    t += parts[i];
  }
  t += ')';
  return t;
}

std::optional<std::vector<std::string>> TupleAlphabet::split_tuple_token(std::string_view tok) {
  if (tok.size() < 2 || tok.front() != '(' || tok.back() != ')') return std::nullopt;
  // Nested tuple tokens are split at the top level only.
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
    char c = tok[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == '|' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2 || depth != 0) return std::nullopt;
  return parts;
}

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::vector<const Alphabet*>, std::shared_ptr<const TupleAlphabet>> by_rows;
  std::map<const Alphabet*, std::shared_ptr<const TupleAlphabet>> by_letters;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

std::shared_ptr<const TupleAlphabet> tuple_alphabet(const std::vector<AlphabetPtr>& rows) {
  std::vector<const Alphabet*> key;
  for (const auto& r : rows) key.push_back(r.get());
  auto& reg = registry();
  {
    std::lock_guard lock(reg.mu);
    if (auto it = reg.by_rows.find(key); it != reg.by_rows.end()) return it->second;
  }
  auto made = std::make_shared<const TupleAlphabet>(rows);
  std::lock_guard lock(reg.mu);
  auto [it, inserted] = reg.by_rows.emplace(key, made);
  if (inserted) reg.by_letters.emplace(made->letters().get(), made);
  return it->second;
}

std::shared_ptr<const TupleAlphabet> as_tuple_alphabet(const AlphabetPtr& alpha) {
  auto& reg = registry();
  {
    std::lock_guard lock(reg.mu);
    if (auto it = reg.by_letters.find(alpha.get()); it != reg.by_letters.end()) return it->second;
  }
  // Infer rows from first appearance, then insist on the canonical letter order.
  std::vector<std::vector<Token>> rows;
  for (const auto& tok : alpha->tokens()) {
    auto parts = TupleAlphabet::split_tuple_token(tok);
    if (!parts) return nullptr;
    if (rows.empty()) rows.resize(parts->size());
    if (parts->size() != rows.size()) return nullptr;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& p = (*parts)[r];
      if (p == kPadToken) continue;
      bool seen = false;
      for (const auto& q : rows[r]) seen = seen || q == p;
      if (!seen) rows[r].push_back(p);
    }
  }
  if (rows.size() < 2) return nullptr;
  std::vector<AlphabetPtr> row_ptrs;
  for (auto& r : rows) row_ptrs.push_back(make_alphabet(std::move(r)));
  auto made = std::make_shared<const TupleAlphabet>(row_ptrs);
  if (!(*made->letters() == *alpha)) return nullptr;
  return made;
}

std::string join(const Word& w, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += w[i];
  }
  return out;
}

Word split_words(std::string_view text) {
  Word out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace cga
