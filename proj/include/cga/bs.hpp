#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cga/oracle.hpp"
#include "cga/structure.hpp"

namespace cga {

// a^power t^sign with 0 <= power < n (sign +1) or < m (sign -1).
struct PiLetter {
  int power = 0;
  int sign = 1;
  bool operator==(const PiLetter&) const = default;
};

struct BSNormalPair {
  std::vector<PiLetter> P;
  Counter N = 0;
  bool operator==(const BSNormalPair&) const = default;
};

Token pi_token(const PiLetter& x);
std::optional<PiLetter> parse_pi_token(const Token& t, int m, int n);
// Pi tokens, then 1, -1, #.
std::vector<Token> bs_symbols(int m, int n);

BSNormalPair bs_canonicalize(const Word& w, int m, int n);
// The pair as a word over a, a-, t, t-.
Word bs_group_word(const BSNormalPair& pair);

Word bs_encode(const BSNormalPair& pair, int m, int n);

enum class BSDecodeError { none, malformed, mixed_signs, bad_pi_letter, not_reduced, r_not_below_m, s_not_below_n, mismatch };

struct BSDecodeResult {
  std::optional<BSNormalPair> pair;
  BSDecodeError error = BSDecodeError::none;
  std::string message;
  Counter r = 0, p = 0, s = 0, q = 0;  // run lengths when the shape parsed
};

BSDecodeResult bs_decode(const Word& w, int m, int n);

class BSOracle : public GroupOracle {
 public:
  BSOracle(int m, int n);
  std::string name() const override;
  Word canonicalize(const Word& w) const override;
  bool owns(const Token& x) const override;
  std::vector<Token> generators() const override { return {"a", "a-", "t", "t-"}; }

 private:
  int m_, n_;
};

CounterAutomaton bs_l1_automaton(int m, int n);
CounterAutomaton bs_l2_automaton(int m, int n);
CounterAutomaton bs_nf_automaton(int m, int n);
// Union of the case languages for right multiplication by a or t, before intersecting with the pair language.
CounterAutomaton bs_cases_a(int m, int n);
CounterAutomaton bs_cases_t(int m, int n);
CounterAutomaton bs_multiplier(int m, int n, const Token& x);

StructurePtr bs_structure(int m, int n);

}  // namespace cga
