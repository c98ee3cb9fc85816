#pragma once

#include <array>
#include <set>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubic/code.hpp"
#include "cubic/f2.hpp"

namespace cubic {

// 8x8 matrix over F2 packed into a word, bit index r*8 + c.
using Mat8 = std::uint64_t;

inline bool m8_get(Mat8 m, int r, int c) { return (m >> (r * 8 + c)) & 1u; }
inline Mat8 m8_set(Mat8 m, int r, int c) { return m | (Mat8(1) << (r * 8 + c)); }
Mat8 m8_from_bitmat(const BitMat& b);
BitMat m8_to_bitmat(Mat8 m);
Mat8 m8_transpose(Mat8 m);
int m8_rank(Mat8 m);

// Homogeneous linear system on the entries of the commutation matrix that
// expresses commutativity of all pairs of generator placements.
struct ConstraintSystem {
  CodeKind kind;
  int num_vars;       // 28 upper-triangle vars (non-CSS) or 64 (CSS)
  BitMat equations;   // one row per equation
  int rank;
  int solution_dim;
};

ConstraintSystem constraint_system(CodeKind kind);

// Whether a commutation matrix satisfies its constraint system.
bool satisfies_constraints(Mat8 omega, CodeKind kind);

// Row grouping for a period-one line direction: one row per translate class
// of corners along the direction.
struct DirectionMatrix {
  Site dir;
  std::vector<std::uint8_t> rows;  // bitmask over corners A..D'
};

// The 13 directions: 3 axes, 6 face diagonals, 4 body diagonals.
const std::vector<DirectionMatrix>& direction_matrices();

struct ConditionReport {
  bool pass = false;
  std::string reason;
};

// Conditions on a commutation matrix beyond the constraint system:
// rank = 2m (non-CSS) or m (CSS), all 13 direction ranks, and the
// corner-product-identity parity condition.
ConditionReport check_conditions(Mat8 omega, CodeKind kind, int m);

// Lexicographic minimum over the 48 cube symmetries acting as simultaneous
// row/column permutations; CSS additionally minimizes over the transpose.
Mat8 canonical_form(Mat8 omega, CodeKind kind);
// All distinct images under the same group action.
std::set<Mat8> symmetry_orbit(Mat8 omega, CodeKind kind);

// Realizes a valid CSS commutation matrix: Z corners from a rank
// factorization, X corners from the inversion duality, verified against
// omega'. Returns the code with generators filled in.
CubicCode realize_css(Mat8 omega_prime, std::string name);
CubicCode realize_noncss(Mat8 omega, std::string name);

struct EnumeratedClass {
  Mat8 canonical;
  int m;
  CubicCode realized;
  int catalog_index = -1;  // matching catalog entry, or -1
};

// Complete duplicate-free enumeration of equivalence classes passing all
// conditions, for m in {1,2}. Sorted by canonical form.
std::vector<EnumeratedClass> enumerate_codes(CodeKind kind);

// Commutation matrix of a catalog code in Mat8 form (CSS: omega').
Mat8 catalog_omega(int index);

// 2D square-lattice variant: the two-parameter family.
struct TwoDResult {
  int i, j;
  int rank;
  bool accepted;       // rank == 2m with m = 1
  int m;               // rank/2 when rank > 0
  BitMat realization;  // 2m x 4, empty when rank == 0
  bool doubled;        // commutation graph = two disjoint anticommuting pairs
};

std::vector<TwoDResult> enumerate_2d();

}  // namespace cubic
