#pragma once

#include <string>

#include "cga/structure.hpp"

namespace cga {

// x<i> -> p 1^i and x<i>- -> n 1^i.
Word finf_encode(const Word& w);

// The one-counter block-pair machine started at "s2" or "s3".
CounterAutomaton finf_block_automaton(const std::string& start);
CounterAutomaton finf_nf_automaton();
CounterAutomaton finf_multiplier(std::size_t i, bool inverse = false);

StructurePtr finf_structure();

}  // namespace cga
