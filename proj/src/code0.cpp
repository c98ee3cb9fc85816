#include "cubic/code0.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace cubic {

namespace {

// X -> Y -> Z -> X on the second qubit, as a linear map on (x1,x2|z1,z2).
unsigned cycle_second_qubit(unsigned bits) {
  const int m = 2;
  unsigned x = bits & 3u, z = bits >> m;
  unsigned x2 = (x >> 1) & 1u, z2 = (z >> 1) & 1u;
  unsigned nx2 = x2 ^ z2;  // X2 -> X2+Z2, Z2 -> X2
  unsigned nz2 = x2;
  unsigned nx = (x & 1u) | (nx2 << 1);
  unsigned nz = (z & 1u) | (nz2 << 1);
  return nx | (nz << m);
}

}  // namespace

Site rotate_threefold(Site s) { return {s.z, s.x, s.y}; }

PauliOp apply_threefold(const PauliOp& o) {
  PauliOp out(o.m());
  for (const auto& [s, op] : o.support())
    out.set(rotate_threefold(s), SiteOp{static_cast<std::uint8_t>(cycle_second_qubit(op.bits))});
  return out;
}

ThreefoldCheck verify_threefold_symmetry() {
  ThreefoldCheck chk;

  // The 4x4 maps in the (X1, Z1, X2, Z2) ordering.
  BitMat s(4, 4), lambda(4, 4);
  int sdata[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 0}};
  int ldata[4][4] = {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (sdata[i][j]) s.set(i, j, true);
      if (ldata[i][j]) lambda.set(i, j, true);
    }
  chk.symplectic_ok = mat_mul(mat_mul(s.transposed(), lambda), s) == lambda;

  const CubicCode& code = catalog_code(0);
  bool fixes = true;
  for (int c = 0; c < kNumCorners; ++c) {
    int image = corner_at(rotate_threefold(corner_positions()[c]));
    unsigned want = code.gen[0].corners[image].bits;
    unsigned got = cycle_second_qubit(code.gen[0].corners[c].bits);
    if (want != got) fixes = false;
  }
  chk.fixes_generator = fixes;

  bool order3 = true;
  for (int c = 0; c < kNumCorners; ++c) {
    Site p = corner_positions()[c];
    if (!(rotate_threefold(rotate_threefold(rotate_threefold(p))) == p)) order3 = false;
  }
  for (unsigned bits = 0; bits < 16 && order3; ++bits)
    if (cycle_second_qubit(cycle_second_qubit(cycle_second_qubit(bits))) != bits)
      order3 = false;
  chk.order_three = order3;
  return chk;
}

const RelationLattice& relation_lattice(RelationKind kind) {
  static const RelationLattice r1{{{1, 0, -1}, {0, 1, -1}}, {0, 0, 1}};
  static const RelationLattice r2{{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}, {1, 1, 1}};
  return kind == RelationKind::R1 ? r1 : r2;
}

namespace {

PauliOp phased_generator(const CubicCode& code, int type, Site p, int L) {
  PauliOp op(code.m);
  for (int c = 0; c < kNumCorners; ++c) {
    SiteOp g = code.gen[type].corners[c];
    if (g.bits == 0) continue;
    op.mul_site_phased(wrap(p + corner_positions()[c], L), g);
  }
  return op;
}

}  // namespace

PauliOp relation_product(RelationKind kind, int L) {
  const CubicCode& code = catalog_code(0);
  const RelationLattice& rel = relation_lattice(kind);
  std::set<Site> points;
  if (kind == RelationKind::R1) {
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j)
        points.insert(wrap(i * rel.basis[0] + j * rel.basis[1], L));
  } else {
    if (L % 2 != 0)
      throw std::invalid_argument("relation_product: R2 embeds only for even L");
    for (int i = 0; i < L / 2; ++i)
      for (int j = 0; j < L / 2; ++j)
        for (int k = 0; k < L / 2; ++k)
          points.insert(wrap(i * rel.basis[0] + j * rel.basis[1] + k * rel.basis[2], L));
  }

  PauliOp prod(code.m);
  for (Site p : points)
    prod = multiply_with_phase(prod, phased_generator(code, 0, p, L));
  for (Site p : points)
    prod = multiply_with_phase(prod,
                               phased_generator(code, 1, wrap(p + rel.partner_offset, L), L));
  return prod;
}

LowerBoundReport lower_bound_k(int L) {
  const int n = L * L * L;
  LowerBoundReport rep;
  rep.L = L;
  rep.bound = L + 6 * q_divides(2, L);

  auto placement_index = [&](int type, Site p) {
    Site w = wrap(p, L);
    return std::size_t(type) * n + (w.z * L + w.y) * L + w.x;
  };

  std::vector<BitVec> rows;
  const RelationLattice& r1 = relation_lattice(RelationKind::R1);
  for (int t = 0; t < L; ++t) {
    BitVec row(2 * n);
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) {
        Site p = wrap(i * r1.basis[0] + j * r1.basis[1] + Site{t, 0, 0}, L);
        row.flip(placement_index(0, p));
        row.flip(placement_index(1, wrap(p + r1.partner_offset, L)));
      }
    rows.push_back(std::move(row));
  }
  if (L % 2 == 0) {
    const RelationLattice& r2 = relation_lattice(RelationKind::R2);
    for (int ox = 0; ox < 2; ++ox)
      for (int oy = 0; oy < 2; ++oy)
        for (int oz = 0; oz < 2; ++oz) {
          BitVec row(2 * n);
          for (int i = 0; i < L / 2; ++i)
            for (int j = 0; j < L / 2; ++j)
              for (int k = 0; k < L / 2; ++k) {
                Site p = wrap(i * r2.basis[0] + j * r2.basis[1] + k * r2.basis[2] +
                                  Site{ox, oy, oz},
                              L);
                row.flip(placement_index(0, p));
                row.flip(placement_index(1, wrap(p + r2.partner_offset, L)));
              }
          rows.push_back(std::move(row));
        }
  }
  rep.relation_rank = static_cast<int>(gf2_rank(BitMat::from_rows(rows, 2 * n)));
  return rep;
}

PauliOp basic_string(BasicKind kind, Site p, int L) {
  const int m = 2;
  if (kind == BasicKind::ThetaZ) {
    PauliOp out(m);
    SiteOp zz = site_op_from_string("ZZ", m);
    SiteOp xi = site_op_from_string("XI", m);
    Site v{1, 0, -1};
    auto add_line = [&](SiteOp e, Site base) {
      PauliOp line = instantiate_line({e, v, base}, m, L);
      out = multiply(out, line);
    };
    add_line(zz, p + Site{0, 0, 1});
    add_line(xi, p);
    add_line(zz, p - Site{0, 0, 1});
    return out;
  }
  // theta^X = symmetry image of theta^Z, theta^Y of theta^X.
  Site pre = kind == BasicKind::ThetaX
                 ? Site{p.y, p.z, p.x}   // rotate_threefold inverse
                 : Site{p.z, p.x, p.y};
  PauliOp base = basic_string(BasicKind::ThetaZ, pre, L);
  PauliOp img = apply_threefold(base).reduced(L);
  if (kind == BasicKind::ThetaY) img = apply_threefold(img).reduced(L);
  return img;
}

GammaReport gamma_rank(int L) {
  GammaReport rep;
  rep.L = L;
  if (L <= 4) throw std::invalid_argument("gamma_rank: needs L > 4");
  rep.expected = L % 2 == 1 ? L - 1 : 4 * ((L + 3) / 4) - 4;

  std::vector<PauliOp> thetas_z, thetas_x;
  for (int i = 0; i < L; ++i) {
    thetas_z.push_back(basic_string(BasicKind::ThetaZ, {0, i, 0}, L));
    thetas_x.push_back(basic_string(BasicKind::ThetaX, {0, 0, i}, L));
  }

  // Same-type strings must commute pairwise.
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) {
      if (anticommute(thetas_z[i], thetas_z[j]))
        throw std::logic_error("gamma_rank: theta^Z pair anticommutes");
      if (anticommute(thetas_x[i], thetas_x[j]))
        throw std::logic_error("gamma_rank: theta^X pair anticommutes");
    }

  BitMat omega_prime(L, L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      omega_prime.set(i, j, anticommute(thetas_z[i], thetas_x[j]));
  rep.k_h_explicit = static_cast<int>(gf2_rank(omega_prime));

  BitMat circulant(L, L);
  for (int i = 0; i < L; ++i) {
    circulant.set(i, mod(i + 2, L), true);
    circulant.set(i, mod(i - 2, L), true);
  }
  rep.k_h_structural = static_cast<int>(gf2_rank(circulant));

  // The explicit matrix should be the circulant up to a fixed index shift.
  rep.circulant_matches = false;
  for (int shift = 0; shift < L && !rep.circulant_matches; ++shift) {
    bool match = true;
    for (int i = 0; i < L && match; ++i)
      for (int j = 0; j < L; ++j)
        if (omega_prime.get(i, j) != circulant.get(i, mod(j + shift, L))) {
          match = false;
          break;
        }
    if (match) rep.circulant_matches = true;
  }
  return rep;
}

ResidualReport residual_qubit_check(int L) {
  ResidualReport rep;
  rep.L = L;
  LatticeCode lat(catalog_code(0), L);
  rep.k = lat.count_logical_qubits();
  GammaReport g = gamma_rank(L);
  rep.k_h = g.k_h_explicit;
  int cap = L % 2 == 1 ? 2 * L - 2 : 2 * L;  // bound on 2 k_h + k_i
  rep.k_i_bound = cap - 2 * rep.k_h;
  rep.residual = rep.k - (rep.k_h + rep.k_i_bound);
  return rep;
}

ChainReport code0_tunnel_chain(int which) {
  const CubicCode& code = catalog_code(0);
  const int m = code.m;

  // Tunnel along y with cross-section cells (x,z) in {(0,-1),(0,0)}.
  // Line 0 runs through (x,z) = (0,0) with unknown placements at
  // x = -1, z in {-1,0}; line 1 runs through (0,-1) with unknowns at
  // z = -2, x in {-1,0}.
  Site line_site = which == 0 ? Site{0, 0, 0} : Site{0, 0, -1};
  std::vector<std::pair<int, Site>> classes;
  if (which == 0) {
    classes = {{0, {-1, 0, -1}}, {1, {-1, 0, -1}}, {0, {-1, 0, 0}}, {1, {-1, 0, 0}}};
  } else {
    classes = {{0, {-1, 0, -2}}, {1, {-1, 0, -2}}, {0, {0, 0, -2}}, {1, {0, 0, -2}}};
  }

  // Action of each class on the two line sites (y-offset 0 and 1).
  std::vector<unsigned> lower, upper;
  for (auto [type, p] : classes) {
    SiteOp lo = generator_action(code, type, p, line_site, 0);
    SiteOp hi = generator_action(code, type, p, line_site + Site{0, 1, 0}, 0);
    lower.push_back(lo.bits);
    upper.push_back(hi.bits);
  }

  // The lower parts must form a basis so the inference is deterministic.
  {
    std::vector<unsigned> copy = lower;
    int rank = 0;
    for (int b = 0; b < 4; ++b) {
      unsigned bit = 1u << b;
      int piv = -1;
      for (std::size_t i = rank; i < copy.size(); ++i)
        if (copy[i] & bit) { piv = static_cast<int>(i); break; }
      if (piv < 0) continue;
      std::swap(copy[rank], copy[piv]);
      for (std::size_t i = 0; i < copy.size(); ++i)
        if (static_cast<int>(i) != rank && (copy[i] & bit)) copy[i] ^= copy[rank];
      ++rank;
    }
    if (rank != 4)
      throw std::logic_error("code0_tunnel_chain: edge actions are not a basis");
  }

  auto transfer = [&](unsigned v) -> unsigned {
    // express v in the lower basis, return the matching upper combination
    for (unsigned sel = 0; sel < 16; ++sel) {
      unsigned acc = 0;
      for (int i = 0; i < 4; ++i)
        if ((sel >> i) & 1u) acc ^= lower[i];
      if (acc == v) {
        unsigned up = 0;
        for (int i = 0; i < 4; ++i)
          if ((sel >> i) & 1u) up ^= upper[i];
        return up;
      }
    }
    throw std::logic_error("code0_tunnel_chain: unsolvable value");
  };

  ChainReport rep;
  std::set<std::vector<unsigned>> cycles;
  for (unsigned start = 1; start < 16; ++start) {
    std::map<unsigned, int> seen;
    std::vector<unsigned> path;
    unsigned v = start;
    while (!seen.count(v)) {
      seen[v] = static_cast<int>(path.size());
      path.push_back(v);
      v = transfer(v);
    }
    if (v == 0) continue;
    std::vector<unsigned> cyc(path.begin() + seen[v], path.end());
    // canonical rotation: smallest element first
    auto mn = std::min_element(cyc.begin(), cyc.end());
    std::rotate(cyc.begin(), mn, cyc.end());
    cycles.insert(cyc);
  }
  rep.num_nontrivial_cycles = static_cast<int>(cycles.size());
  if (!cycles.empty()) {
    const auto& cyc = *cycles.begin();
    rep.cycle_length = static_cast<int>(cyc.size());
    for (unsigned v : cyc)
      rep.cycle.push_back(site_op_to_string(SiteOp{static_cast<std::uint8_t>(v)}, m));
  }
  return rep;
}

bool cyclic_equal(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) return false;
  const std::size_t n = a.size();
  for (int dirn = 0; dirn < 2; ++dirn) {
    std::vector<std::string> bb = b;
    if (dirn == 1) std::reverse(bb.begin(), bb.end());
    for (std::size_t shift = 0; shift < n; ++shift) {
      bool match = true;
      for (std::size_t i = 0; i < n; ++i)
        if (a[i] != bb[(i + shift) % n]) { match = false; break; }
      if (match) return true;
    }
  }
  return false;
}

}  // namespace cubic
