#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubic/code.hpp"
#include "cubic/f2.hpp"
#include "cubic/pauli.hpp"

namespace cubic {

// Axis-aligned site box, lo inclusive, hi exclusive.
struct Box {
  Site lo, hi;
  bool contains(Site s) const {
    return s.x >= lo.x && s.x < hi.x && s.y >= lo.y && s.y < hi.y && s.z >= lo.z &&
           s.z < hi.z;
  }
  bool empty() const { return hi.x <= lo.x || hi.y <= lo.y || hi.z <= lo.z; }
};

Box cube_box(Site lo, int w);
Box bounding_box(const PauliOp& o);
Box box_union(Box a, Box b);
bool boxes_intersect(Box a, Box b);

// Logical string segment: O together with two congruent anchor cubes.
struct Segment {
  PauliOp op;
  Box anchor1, anchor2;
  int w = 0;

  Site directional_vector() const { return anchor1.lo - anchor2.lo; }
  int length() const {
    Site d = directional_vector();
    return std::abs(d.x) + std::abs(d.y) + std::abs(d.z);
  }
};

// Every generator placement acting trivially (by identity) on both anchors
// must commute with o. Only placements touching supp(o) are examined.
bool is_segment(const PauliOp& o, Box a1, Box a2, const CubicCode& code);

// Whether some pair of anchor sites is joined by a path through supp(o).
bool segment_connected(const PauliOp& o, Box a1, Box a2, const CubicCode& code);

// Erasing data: an edge is good when the corner operators at its ends give
// independent constraints (Z corners for CSS; both generator types' corners
// for non-CSS).
struct EdgeGoodness {
  int c1, c2;   // corner labels
  Site axis;    // edge direction
  bool good;
};
std::vector<EdgeGoodness> good_edges(const CubicCode& code);
// Faces keyed by (axis, side in {0,1}); true when the face has two good
// edges in different directions.
std::array<std::array<bool, 2>, 3> faces_with_orthogonal_good_edges(
    const CubicCode& code);
int count_good_edges_on_face(const CubicCode& code, int axis, int side);

// Exact in-region erasure: finds a product T of generator placements whose
// action stays inside `region` such that (o * T)(s) = 0 for all s in
// `zero_sites`. Pure-X operators of CSS codes use X-type placements only.
struct EraseResult {
  bool ok = false;
  PauliOp product;   // the stabilizer element multiplied in
  PauliOp result;    // o * product
  int placements_used = 0;
};
EraseResult erase_region(const PauliOp& o, const CubicCode& code, Box region,
                         const std::vector<Site>& zero_sites, bool xtype_only);

// Multiplies stabilizer generators acting inside the current bounding region
// until supp(o) fits in `target`. Fails (ok = false) when no product does it.
EraseResult shrink_to_box(const PauliOp& o, const CubicCode& code, Box target);

// Deforms a segment into at most three axis-aligned segments joined corner to
// corner. The leg order is chosen from the six axis permutations; the first
// feasible one wins. Equivalence holds by construction (only stabilizer
// products are multiplied); each returned piece satisfies is_segment.
struct FlatDecomposition {
  bool ok = false;
  std::vector<Segment> pieces;
  PauliOp product;
  std::string note;
};
FlatDecomposition reduce_to_flat(const Segment& seg, const CubicCode& code);

// Disconnection certificate: an equivalent operator whose support separates
// the anchors, plus the stabilizer product used. Sound, not complete.
struct DisconnectCertificate {
  PauliOp disconnected;
  PauliOp product;
};
std::optional<DisconnectCertificate> disconnect_certificate(const Segment& seg,
                                                            const CubicCode& code);

// Membership of a finite operator in the group of finite generator products,
// solved over placements within `margin` of the bounding box. Success is a
// sound certificate of membership.
std::optional<PauliOp> finite_region_membership(const PauliOp& o,
                                                const CubicCode& code,
                                                int margin = 2);

// ---- sequence machinery ----

// Pair constraint on two consecutive sites along a line: an X-type unknown
// pair (a, b) must satisfy a.z(g1) + b.z(g2) = 0.
struct TwoSiteConstraint {
  SiteOp g1, g2;
};

enum class SeqClass { Trivial, Confusing, Periodic };

struct SequenceAnalysis {
  SeqClass cls = SeqClass::Trivial;
  int period = 0;
  // Solution pairs (a, b) over single-site X vectors.
  std::vector<std::pair<unsigned, unsigned>> solutions;
  std::vector<unsigned> cycle;  // the nontrivial cycle when Periodic
};

SequenceAnalysis edge_constraint_automaton(const std::vector<TwoSiteConstraint>& cons,
                                           int m);

struct QuasiPeriod {
  bool periodic = false;
  int period = 0;
  int offset = 0;
};
// Minimal period and minimal offset exhibited on the window. On a finite
// window a large offset can make short spurious lags look periodic; when the
// caller knows a bound on the true offset, passing max_offset restores the
// gcd/divisibility structure of genuine quasi-periods.
QuasiPeriod quasi_period_detect(const std::vector<unsigned>& seq, int max_offset = -1);
// All t <= max_t valid on the window (offset-capped when requested);
// used for the period-divisibility property.
std::vector<int> quasi_periods_on_window(const std::vector<unsigned>& seq, int max_t,
                                         int max_offset = -1);

// 2x2 matrix over F2 packed into 4 bits, row-major.
using Mat2 = unsigned;
inline unsigned mat2_apply(Mat2 m, unsigned v) {
  unsigned r0 = ((m >> 0) & 1u) * (v & 1u) ^ ((m >> 1) & 1u) * ((v >> 1) & 1u);
  unsigned r1 = ((m >> 2) & 1u) * (v & 1u) ^ ((m >> 3) & 1u) * ((v >> 1) & 1u);
  return r0 | (r1 << 1);
}
Mat2 mat2_mul(Mat2 a, Mat2 b);
bool mat2_idempotent(Mat2 m);
bool mat2_involutive(Mat2 m);

// a_{j+1} = M a_j + B1 prev_{j+1} + B2 prev_j, seeded with a_0.
std::vector<unsigned> row_recursion(Mat2 m, const std::vector<unsigned>& prev,
                                    Mat2 b1, Mat2 b2, unsigned a0);

// ---- scans ----

struct PhiScanCell {
  int w = 0;
  Site dir;
  int len = 0;
  bool disconnectable = false;
  bool forced_empty = false;  // slice analysis alone empties the middle
  int space_dim = -1;         // explicit segment space dimension, if computed
  int cert_support = 0;       // largest certificate support
  bool verified = false;      // membership re-verification of certificates
};

struct PhiScanResult {
  int code_index;
  std::vector<PhiScanCell> cells;
  // max length with a non-disconnectable verdict per direction (dir, len)
  std::vector<std::pair<Site, int>> max_nontrivial;
};

// Basis of the space of operators supported in the anchor bounding box that
// commute with every placement acting trivially on both anchors (X-type for
// CSS codes, full symplectic otherwise).
struct SegmentBasis {
  Box a1, a2, b0;
  int w = 0;
  std::vector<PauliOp> ops;
};
SegmentBasis segment_basis(const CubicCode& code, int w, Site dir, int len);

// Explicit pipeline: basis of the segment space in the anchor bounding box,
// a disconnection certificate per basis element, union-support separation,
// and independent membership re-verification of every certificate.
PhiScanResult phi_scan(int code_index, int w, int l_max,
                       const std::vector<Site>& dirs, bool verify_membership = true);

// Slice-transfer analysis: forward/backward subspace iteration over slice
// value spaces. forced_empty(l): some interior slice space is zero, so every
// supported segment is already disconnected. covered(l): the achievable
// interior slice values lie in the span of band-confined stabilizer products,
// so every segment can be emptied on that slice and disconnected.
struct SliceScan {
  int w;
  Site dir;
  std::vector<std::size_t> fwd_dims;   // dim after k propagation steps
  std::vector<std::size_t> bwd_dims;
  std::size_t cover_dim = 0;           // dim of band-confined product values
  bool cover_verified = false;         // covering products re-verified
  int first_forced_len = -1;           // least l with a forced-empty slice
  int first_covered_len = -1;          // least l with a coverable slice
  bool forced_empty(int len) const;
  bool covered(int len) const;
};
SliceScan slice_scan(int code_index, int w, Site dir, int l_max);

}  // namespace cubic
