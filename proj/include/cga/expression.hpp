#pragma once

#include <string>
#include <string_view>

#include "cga/oracle.hpp"
#include "cga/structure.hpp"

namespace cga {

// Builtins bs:<m>,<n>, finf, z and the combinators product(A,B), free(A,B),
// regen(A; y1=word; y2=word; ...). A regen word is whitespace separated, or a
// single run split greedily into base generator names; EPS defines a trivial generator.
struct BuiltStructure {
  StructurePtr structure;
  OraclePtr oracle;  // ground truth with the structure's generator names
};

// Throws ParseError (source "<expr>", line 1) on malformed text.
BuiltStructure build_expression(std::string_view text);

// A structure expression's oracle, or "free" for plain free reduction over any tokens.
OraclePtr oracle_expression(std::string_view text);

}  // namespace cga
