#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cga/structure.hpp"

namespace cga {

// Normal forms are convolutions of a G normal form over a H normal form.
// Colliding generator names are tagged "1." and "2.".
StructurePtr direct_product(const StructurePtr& g, const StructurePtr& h);

// Blocks "#u" alternate between the factors. Colliding symbols or generators are tagged.
StructurePtr free_product(const StructurePtr& g, const StructurePtr& h);

struct GeneratorDefinition {
  Token name;                 // inverse is name + "-"
  std::optional<Word> word;   // over the base generators; empty optional marks a trivial generator
};

StructurePtr change_generators(const StructurePtr& s, const std::vector<GeneratorDefinition>& defs);

// Tags chosen by the combinators, shared with oracle construction.
struct ProductTags {
  std::string g_generators, h_generators;  // prefixes, empty when untouched
  std::string g_symbols, h_symbols;        // free product only
};
ProductTags product_tags(const GraphAutomaticStructure& g, const GraphAutomaticStructure& h);
ProductTags free_product_tags(const GraphAutomaticStructure& g, const GraphAutomaticStructure& h);

}  // namespace cga
