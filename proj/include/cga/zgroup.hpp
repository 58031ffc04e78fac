#pragma once

#include "cga/structure.hpp"

namespace cga {

// Infinite cyclic group on generator a with normal forms a^k and A^k over {a, A}.
StructurePtr z_structure();

}  // namespace cga
