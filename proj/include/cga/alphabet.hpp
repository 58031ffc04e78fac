#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cga {

using Token = std::string;
using Word = std::vector<Token>;
using Letter = std::int32_t;

inline constexpr Letter kEpsilon = -1;
// Component value standing for the padding symbol in a tuple letter.
inline constexpr Letter kPad = -2;
inline constexpr std::string_view kPadToken = "_";

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Token> tokens);

  std::size_t size() const { return tokens_.size(); }
  const Token& token(Letter l) const { return tokens_[static_cast<std::size_t>(l)]; }
  const std::vector<Token>& tokens() const { return tokens_; }

  std::optional<Letter> find(std::string_view tok) const;
  // Throws std::invalid_argument for unknown tokens.
  Letter index(std::string_view tok) const;
  bool contains(std::string_view tok) const { return find(tok).has_value(); }

  std::vector<Letter> encode(const Word& w) const;
  Word decode(std::span<const Letter> letters) const;

  bool operator==(const Alphabet& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<Token> tokens_;
  std::unordered_map<std::string, Letter> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

AlphabetPtr make_alphabet(std::vector<Token> tokens);
bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b);

// Letters are all tuples over (row alphabet + pad) except the all-pad tuple.
// Rows may use different base alphabets.
class TupleAlphabet {
 public:
  explicit TupleAlphabet(std::vector<AlphabetPtr> rows);
  static TupleAlphabet uniform(AlphabetPtr base, std::size_t arity);

  std::size_t arity() const { return rows_.size(); }
  const Alphabet& row(std::size_t i) const { return *rows_[i]; }
  const AlphabetPtr& row_ptr(std::size_t i) const { return rows_[i]; }
  const std::vector<AlphabetPtr>& rows() const { return rows_; }
  std::size_t size() const { return letters_->size(); }
  const AlphabetPtr& letters() const { return letters_; }

  // Components use kPad for the padding symbol; returns nullopt for all-pad.
  std::optional<Letter> letter(std::span<const Letter> components) const;
  Letter component(Letter l, std::size_t row) const {
    return components_[static_cast<std::size_t>(l) * rows_.size() + row];
  }
  std::span<const Letter> components(Letter l) const {
    return {components_.data() + static_cast<std::size_t>(l) * rows_.size(), rows_.size()};
  }

  static Token tuple_token(const std::vector<std::string_view>& parts);
  // Splits "(x|y)" into its parts; nullopt when not a tuple token.
  static std::optional<std::vector<std::string>> split_tuple_token(std::string_view tok);

 private:
  std::vector<AlphabetPtr> rows_;
  std::vector<std::size_t> radix_;
  AlphabetPtr letters_;
  std::vector<Letter> components_;
};

// Shares tuple alphabets between constructions that ask for the same rows.
std::shared_ptr<const TupleAlphabet> tuple_alphabet(const std::vector<AlphabetPtr>& rows);
// Recovers the tuple structure of an alphabet whose tokens are tuple tokens.
std::shared_ptr<const TupleAlphabet> as_tuple_alphabet(const AlphabetPtr& alpha);

std::string join(const Word& w, std::string_view sep = " ");
Word split_words(std::string_view text);

}  // namespace cga
