#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubic/code.hpp"
#include "cubic/f2.hpp"
#include "cubic/lattice.hpp"
#include "cubic/pauli.hpp"

namespace cubic {

// Three-fold symmetry of the non-CSS code: 120-degree rotation about the
// main diagonal composed with the X->Y->Z->X cycle on the second qubit.
struct ThreefoldCheck {
  bool symplectic_ok = false;   // S^T lambda S == lambda for the 4x4 maps
  bool fixes_generator = false; // symmetry permutes the corner assignment
  bool order_three = false;     // the cube of the symmetry is the identity
  bool pass() const { return symplectic_ok && fixes_generator && order_three; }
};
ThreefoldCheck verify_threefold_symmetry();

// The symmetry applied to a finite operator (sites rotated, second-qubit
// Pauli cycled).
PauliOp apply_threefold(const PauliOp& o);
Site rotate_threefold(Site s);

enum class RelationKind { R1, R2 };

struct RelationLattice {
  std::vector<Site> basis;
  Site partner_offset;  // inverted generator relative to the primary one
};
const RelationLattice& relation_lattice(RelationKind kind);

// Phase-tracked product of every placement of the embedded relation on
// Z_L^3. Must be the identity with phase +1. R2 requires 2 | L.
PauliOp relation_product(RelationKind kind, int L);

struct LowerBoundReport {
  int L;
  int relation_rank;  // independent embedded relations found
  int bound;          // L + 6 q_2(L)
  bool pass() const { return relation_rank >= bound; }
};
LowerBoundReport lower_bound_k(int L);

enum class BasicKind { ThetaZ, ThetaX, ThetaY };
// Basic string logical operators; ThetaX/ThetaY are the symmetry images of
// ThetaZ (tests assert they match the explicit line constructions).
PauliOp basic_string(BasicKind kind, Site p, int L);

struct GammaReport {
  int L = 0;
  int k_h_explicit = -1;    // rank of omega' from string commutation on Z_L^3
  int k_h_structural = -1;  // rank of the +-2 circulant
  int expected = -1;        // L-1 for odd L, 4*ceil(L/4)-4 for even L
  bool circulant_matches = false;  // omega'_{ij} = [i = j+2] + [i = j-2]
  bool pass() const {
    return k_h_explicit == expected && k_h_structural == expected &&
           circulant_matches;
  }
};
GammaReport gamma_rank(int L);

struct ResidualReport {
  int L = 0;
  int k = 0;
  int k_h = 0;
  int k_i_bound = 0;
  int residual = 0;  // k - (k_h + k_i_bound)
  bool pass() const { return residual >= 1; }
};
// At least one logical qubit survives gauging out the basic strings.
ResidualReport residual_qubit_check(int L);

struct ChainReport {
  int cycle_length = 0;
  std::vector<std::string> cycle;  // site-operator labels around the cycle
  int num_nontrivial_cycles = 0;
};
// Inference chains of the two tunnel line types (0: the line through the
// middle of the tunnel cross-section, 1: the adjacent line one step below).
ChainReport code0_tunnel_chain(int which);

// Cyclic-sequence comparison up to rotation and reversal.
bool cyclic_equal(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace cubic
