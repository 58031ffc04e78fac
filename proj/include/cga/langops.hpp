#pragma once

#include <string_view>
#include <vector>

#include "cga/automaton.hpp"

namespace cga {

// Token-level convolution: tuple tokens "(x|y|_)".
Word convolve(const std::vector<Word>& words);
Word project(const Word& convolved, std::size_t coordinate);

// Letter-level versions over a tuple alphabet; rows are letter indices of each row alphabet.
std::vector<Letter> convolve(const TupleAlphabet& ta, const std::vector<std::vector<Letter>>& rows);
std::vector<Letter> project(const TupleAlphabet& ta, std::span<const Letter> convolved, std::size_t coordinate);

struct LetterHomomorphism {
  AlphabetPtr source;
  AlphabetPtr target;
  std::vector<std::vector<Letter>> images;  // indexed by source letter

  bool epsilon_free() const;
  static LetterHomomorphism identity(const AlphabetPtr& a);
};

// Lines "map <letter> -> <tokens|EPS>"; every source letter must be mapped exactly once.
LetterHomomorphism parse_homomorphism(std::string_view text, const AlphabetPtr& source,
                                      const AlphabetPtr& target, const std::string& where = "<input>");

CounterAutomaton universal_automaton(const AlphabetPtr& a, const std::string& name = "all");
CounterAutomaton empty_automaton(const AlphabetPtr& a, const std::string& name = "none");

CounterAutomaton intersect(const CounterAutomaton& m, const CounterAutomaton& n);
CounterAutomaton unite(const std::vector<const CounterAutomaton*>& machines, const std::string& name = "union");
CounterAutomaton unite(const CounterAutomaton& m, const CounterAutomaton& n);

// Throws std::runtime_error if an erasing map closes an epsilon cycle.
CounterAutomaton image(const CounterAutomaton& m, const LetterHomomorphism& phi);
CounterAutomaton preimage(const CounterAutomaton& m, const LetterHomomorphism& phi);

enum class Side { left, right };
// left: the machine reads row 0 and row 1 is free; right: the reverse.
CounterAutomaton pad_lift(const CounterAutomaton& m, Side side, const AlphabetPtr& free_alphabet);
CounterAutomaton pad_lift(const CounterAutomaton& m, Side side);

// Swaps the two rows of a machine over a two-row tuple alphabet.
CounterAutomaton swap_rows(const CounterAutomaton& m);
// Reads (x|x) wherever m reads x.
CounterAutomaton diagonal(const CounterAutomaton& m);
// Accepts exactly the convolutions over ta with pads only as row suffixes.
CounterAutomaton convolution_validity(const std::shared_ptr<const TupleAlphabet>& ta);

}  // namespace cga
