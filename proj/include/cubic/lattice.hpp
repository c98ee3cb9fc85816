#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubic/code.hpp"
#include "cubic/f2.hpp"
#include "cubic/pauli.hpp"

namespace cubic {

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cubic code instantiated on the periodic lattice Z_L^3. Generator
// matrices are built bit-packed; echelon forms are cached on first use.
class LatticeCode {
 public:
  LatticeCode(const CubicCode& code, int L,
              std::size_t mem_budget_bytes = std::size_t(4) << 30);

  const CubicCode& code() const { return code_; }
  int L() const { return L_; }
  int num_sites() const { return L_ * L_ * L_; }
  int site_index(Site s) const {
    Site w = wrap(s, L_);
    return (w.z * L_ + w.y) * L_ + w.x;
  }
  Site site_at(int idx) const {
    return {idx % L_, (idx / L_) % L_, idx / (L_ * L_)};
  }

  // Number of encoded qubits: physical qubits minus generator rank. For CSS
  // codes this is m*L^3 - 2*rank(Z block).
  int count_logical_qubits();

  bool is_logical(const PauliOp& o) const;
  bool is_stabilizer_element(const PauliOp& o);
  // Coefficients over generator placements reproducing o, if o is in the
  // group (abelianized; phases ignored). Index layout: type*L^3 + site.
  std::optional<BitVec> stabilizer_decomposition(const PauliOp& o);

  // Placements violated by o: ((type, placement site), 1) entries only.
  std::vector<std::pair<int, Site>> syndrome(const PauliOp& o) const;

  // Symplectic coordinate vectors. CSS splits into pure-X / pure-Z parts.
  BitVec full_vector(const PauliOp& o) const;   // 2m L^3 components
  BitVec xpart_vector(const PauliOp& o) const;  // m L^3
  BitVec zpart_vector(const PauliOp& o) const;  // m L^3
  PauliOp op_from_full_vector(const BitVec& v) const;

  // Generator matrices (rows = placements). For CSS: block 0 = Z-type over
  // z-coordinates, block 1 = X-type over x-coordinates. For non-CSS a single
  // full-symplectic matrix with 2L^3 rows.
  const BitMat& generator_matrix(int block);
  std::size_t generator_rank(int block);

 private:
  RowSpace& solver(int block);

  CubicCode code_;
  int L_;
  std::size_t mem_budget_;
  std::array<std::optional<BitMat>, 2> gen_;
  std::array<std::unique_ptr<RowSpace>, 2> solver_;
  std::array<std::optional<std::size_t>, 2> rank_;
};

// Table of exact k(L) formulas for catalog codes 0..4.
int predicted_k(int code_index, int L);
bool has_predicted_k(int code_index);
// Largest power of 2 dividing L and the divisibility indicator.
int two_adic_valuation(int L);
inline int q_divides(int n, int L) { return L % n == 0 ? 1 : 0; }

// sigma^{[normal]}_E is logical iff every corner class of each generator,
// grouped by plane membership, commutes with E. Lattice-free check.
bool plane_logical_check(SiteOp e, Site normal, const CubicCode& code);

// Logical operators anticommuting with o, drawn from the plane catalog plus
// any extra candidates supplied; returns the first found.
std::optional<PauliOp> nontriviality_witness(const PauliOp& o, LatticeCode& lat,
                                             const std::vector<PauliOp>& extra = {});

// All logical plane operators sigma^{[n]}_E of the code at this lattice size
// (13 normals, nonzero E, every anchor class).
std::vector<PauliOp> plane_catalog(LatticeCode& lat);

struct BoxTrivialityReport {
  int dim = 0;             // dimension of the box-supported logical space
  bool all_trivial = true;
  int num_nontrivial = 0;
};
BoxTrivialityReport box_logical_triviality(const CubicCode& code, int w, int L);

struct DistanceResult {
  int d;
  std::int64_t candidates_checked;
};
// Minimum site-weight of a nontrivial logical operator, by exhaustive
// enumeration in increasing weight. Throws ResourceError when the search
// space exceeds the candidate bound, std::domain_error when k = 0.
DistanceResult brute_force_distance(const CubicCode& code, int L, int max_weight = 4,
                                    std::int64_t candidate_bound = 80000000,
                                    bool reverse_order = false);

struct PartialPlaneStats {
  int excitations = 0;
  int boundary_sites = 0;
  int max_excitation_distance = 0;  // Chebyshev distance to region boundary
};
// Restricts sigma^{[normal]}_E to an R1 x R2 patch of the plane and reports
// the syndrome statistics.
PartialPlaneStats partial_plane_energy(SiteOp e, Site normal, int r1, int r2,
                                       LatticeCode& lat);

// Table III string logical operators (codes 11..17) in textual notation:
// {string, complement at L=5}.
std::optional<std::pair<std::string, std::string>> table3_strings(int code_index);

}  // namespace cubic
