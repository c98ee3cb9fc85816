#pragma once

#include <cstdint>
#include <vector>

#include "cubic/code.hpp"

namespace cubic {

struct OrderedElimStats {
  std::size_t rank = 0;
  std::size_t sparse_pivots = 0;
  std::size_t dense_pivots = 0;
  std::size_t reduction_adds = 0;
  std::size_t peak_bytes = 0;
};

// Rank of the lattice generator matrix computed with the tunnel-derived row
// and column ordering: generators are processed line by line outward from a
// 1x2 tunnel so that almost every row lands on a fresh leading column and is
// stored sparse; only the tunnel rows (processed last) densify. Memory stays
// O(L^4) instead of the O(L^6) dense matrix. Returns the same rank as the
// dense elimination for any ordering; the ordering only affects cost.
//
// For CSS codes the rank of the Z block is returned; k = 2L^3 - 2*rank.
// For the non-CSS code the full 2L^3-row system is eliminated; k = 2L^3 - rank.
OrderedElimStats ordered_elimination_rank(const CubicCode& code, int L);

// k(L) derived from ordered_elimination_rank.
int ordered_elimination_k(const CubicCode& code, int L);

}  // namespace cubic
