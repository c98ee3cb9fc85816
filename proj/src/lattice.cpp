#include "cubic/lattice.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cubic {

LatticeCode::LatticeCode(const CubicCode& code, int L, std::size_t mem_budget_bytes)
    : code_(code), L_(L), mem_budget_(mem_budget_bytes) {
  if (L < 2) throw std::invalid_argument("LatticeCode: L must be >= 2");
}

const BitMat& LatticeCode::generator_matrix(int block) {
  if (gen_[block]) return *gen_[block];
  const int n = num_sites();
  const int m = code_.m;
  std::size_t rows, cols;
  if (code_.kind == CodeKind::CSS) {
    rows = n;
    cols = std::size_t(m) * n;
  } else {
    if (block != 0) throw std::invalid_argument("non-CSS code has a single block");
    rows = std::size_t(2) * n;
    cols = std::size_t(2 * m) * n;
  }
  std::size_t bytes = rows * words_for(cols) * sizeof(Word);
  if (bytes > mem_budget_)
    throw ResourceError("generator matrix needs " + std::to_string(bytes >> 20) +
                        " MiB, over the " + std::to_string(mem_budget_ >> 20) +
                        " MiB budget");

  BitMat u(rows, cols);
  for (int p = 0; p < n; ++p) {
    Site ps = site_at(p);
    if (code_.kind == CodeKind::CSS) {
      for (int c = 0; c < kNumCorners; ++c) {
        SiteOp g = code_.gen[block].corners[c];
        if (g.bits == 0) continue;
        int s = site_index(ps + corner_positions()[c]);
        unsigned part = block == 0 ? z_part(g, m) : x_part(g, m);
        for (int q = 0; q < m; ++q)
          if ((part >> q) & 1u) u.flip(p, std::size_t(s) * m + q);
      }
    } else {
      for (int type = 0; type < 2; ++type) {
        const std::size_t row = std::size_t(type) * n + p;
        for (int c = 0; c < kNumCorners; ++c) {
          SiteOp g = code_.gen[type].corners[c];
          if (g.bits == 0) continue;
          int s = site_index(ps + corner_positions()[c]);
          for (int q = 0; q < m; ++q) {
            if ((x_part(g, m) >> q) & 1u) u.flip(row, std::size_t(s) * 2 * m + q);
            if ((z_part(g, m) >> q) & 1u) u.flip(row, std::size_t(s) * 2 * m + m + q);
          }
        }
      }
    }
  }
  gen_[block] = std::move(u);
  return *gen_[block];
}

std::size_t LatticeCode::generator_rank(int block) {
  if (!rank_[block]) {
    if (solver_[block]) {
      rank_[block] = solver_[block]->rank();
    } else {
      rank_[block] = gf2_rank(generator_matrix(block));
    }
  }
  return *rank_[block];
}

RowSpace& LatticeCode::solver(int block) {
  if (!solver_[block]) {
    const BitMat& u = generator_matrix(block);
    std::size_t bytes =
        u.rows() * (u.stride() + words_for(u.rows())) * sizeof(Word);
    if (bytes > mem_budget_)
      throw ResourceError("membership solver over memory budget");
    solver_[block] = std::make_unique<RowSpace>(u, true);
    rank_[block] = solver_[block]->rank();
  }
  return *solver_[block];
}

int LatticeCode::count_logical_qubits() {
  const int n = num_sites();
  if (code_.kind == CodeKind::CSS)
    return code_.m * n - 2 * static_cast<int>(generator_rank(0));
  return code_.m * n - static_cast<int>(generator_rank(0));
}

bool LatticeCode::is_logical(const PauliOp& o) const {
  PauliOp r = o.reduced(L_);
  std::set<std::pair<int, Site>> placements;
  for (const auto& [s, op] : r.support()) {
    for (int c = 0; c < kNumCorners; ++c) {
      Site p = wrap(s - corner_positions()[c], L_);
      for (int type = 0; type < 2; ++type) placements.insert({type, p});
    }
  }
  for (const auto& [type, p] : placements)
    if (commutes_with_generator_bit(r, code_, type, p, L_)) return false;
  return true;
}

std::vector<std::pair<int, Site>> LatticeCode::syndrome(const PauliOp& o) const {
  PauliOp r = o.reduced(L_);
  std::set<std::pair<int, Site>> placements;
  for (const auto& [s, op] : r.support())
    for (int c = 0; c < kNumCorners; ++c) {
      Site p = wrap(s - corner_positions()[c], L_);
      placements.insert({0, p});
      placements.insert({1, p});
    }
  std::vector<std::pair<int, Site>> out;
  for (const auto& [type, p] : placements)
    if (commutes_with_generator_bit(r, code_, type, p, L_)) out.emplace_back(type, p);
  return out;
}

BitVec LatticeCode::full_vector(const PauliOp& o) const {
  const int m = code_.m;
  BitVec v(std::size_t(2 * m) * num_sites());
  const PauliOp red = o.reduced(L_);
  for (const auto& [s, op] : red.support()) {
    int idx = site_index(s);
    for (int q = 0; q < m; ++q) {
      if ((x_part(op, m) >> q) & 1u) v.set(std::size_t(idx) * 2 * m + q, true);
      if ((z_part(op, m) >> q) & 1u) v.set(std::size_t(idx) * 2 * m + m + q, true);
    }
  }
  return v;
}

BitVec LatticeCode::xpart_vector(const PauliOp& o) const {
  const int m = code_.m;
  BitVec v(std::size_t(m) * num_sites());
  const PauliOp red = o.reduced(L_);
  for (const auto& [s, op] : red.support()) {
    int idx = site_index(s);
    for (int q = 0; q < m; ++q)
      if ((x_part(op, m) >> q) & 1u) v.set(std::size_t(idx) * m + q, true);
  }
  return v;
}

BitVec LatticeCode::zpart_vector(const PauliOp& o) const {
  const int m = code_.m;
  BitVec v(std::size_t(m) * num_sites());
  const PauliOp red = o.reduced(L_);
  for (const auto& [s, op] : red.support()) {
    int idx = site_index(s);
    for (int q = 0; q < m; ++q)
      if ((z_part(op, m) >> q) & 1u) v.set(std::size_t(idx) * m + q, true);
  }
  return v;
}

PauliOp LatticeCode::op_from_full_vector(const BitVec& v) const {
  const int m = code_.m;
  PauliOp o(m);
  for (int idx = 0; idx < num_sites(); ++idx) {
    unsigned x = 0, z = 0;
    for (int q = 0; q < m; ++q) {
      if (v.get(std::size_t(idx) * 2 * m + q)) x |= 1u << q;
      if (v.get(std::size_t(idx) * 2 * m + m + q)) z |= 1u << q;
    }
    if (x || z) o.set(site_at(idx), make_site_op(x, z, m));
  }
  return o;
}

bool LatticeCode::is_stabilizer_element(const PauliOp& o) {
  if (code_.kind == CodeKind::CSS) {
    return solver(0).contains(zpart_vector(o)) && solver(1).contains(xpart_vector(o));
  }
  return solver(0).contains(full_vector(o));
}

std::optional<BitVec> LatticeCode::stabilizer_decomposition(const PauliOp& o) {
  const int n = num_sites();
  BitVec out(2 * n);
  if (code_.kind == CodeKind::CSS) {
    auto zc = solver(0).express(zpart_vector(o));
    auto xc = solver(1).express(xpart_vector(o));
    if (!zc || !xc) return std::nullopt;
    for (int i = 0; i < n; ++i) {
      if (zc->get(i)) out.set(i, true);
      if (xc->get(i)) out.set(n + i, true);
    }
    return out;
  }
  auto c = solver(0).express(full_vector(o));
  if (!c) return std::nullopt;
  return c;
}

int two_adic_valuation(int L) {
  int r = 0;
  while (L % 2 == 0) {
    L /= 2;
    ++r;
  }
  return r;
}

bool has_predicted_k(int code_index) { return code_index >= 0 && code_index <= 4; }

int predicted_k(int code_index, int L) {
  const int r = two_adic_valuation(L);
  auto q = [L](int n) { return q_divides(n, L); };
  switch (code_index) {
    case 0:
      return L + 3 * (1 << r) *
                     (q(2) + 2 * q(7) + 8 * q(9) + 48 * q(63) + 64 * q(65) +
                      18 * q(171));
    case 1:
      return 2 * (1 - 2 * q(2) + (1 << (r + 1)) * (q(2) + 12 * q(15) + 60 * q(63)));
    case 2:
      return (1 << (r + 1)) *
             (1 + 6 * q(7) + 6 * q(21) + 30 * q(31) + 60 * q(63) + 126 * q(127));
    case 3:
      return (1 << (r + 1)) * (1 + 8 * q(15) + 6 * q(21) + 40 * q(31) + 42 * q(63) +
                               16 * q(85) + 112 * q(127));
    case 4:
      return (1 << (r + 1)) *
             (1 + 2 * q(3) + 8 * q(15) + 40 * q(31) + 48 * q(63) + 112 * q(127));
    default:
      throw std::invalid_argument("predicted_k: no formula for code " +
                                  std::to_string(code_index));
  }
}

bool plane_logical_check(SiteOp e, Site normal, const CubicCode& code) {
  for (int type = 0; type < 2; ++type) {
    std::map<int, unsigned> class_sum;  // plane value -> xor of corner bits
    for (int c = 0; c < kNumCorners; ++c) {
      Site q = corner_positions()[c];
      int v = normal.x * q.x + normal.y * q.y + normal.z * q.z;
      class_sum[v] ^= code.gen[type].corners[c].bits;
    }
    for (auto& [v, bits] : class_sum)
      if (site_commutes_bit(SiteOp{static_cast<std::uint8_t>(bits)}, e, code.m))
        return false;
  }
  return true;
}

namespace {

const std::vector<Site>& thirteen_directions() {
  static const std::vector<Site> dirs = {
      {1, 0, 0},  {0, 1, 0},  {0, 0, 1},  {1, 1, 0},  {1, -1, 0},
      {1, 0, 1},  {1, 0, -1}, {0, 1, 1},  {0, 1, -1}, {1, 1, 1},
      {1, 1, -1}, {1, -1, 1}, {-1, 1, 1},
  };
  return dirs;
}

// Plane with residue class n.s = t (mod L).
PauliOp plane_residue(SiteOp e, Site n, int t, int m, int L) {
  PauliOp r(m);
  for (int x = 0; x < L; ++x)
    for (int y = 0; y < L; ++y)
      for (int z = 0; z < L; ++z)
        if (mod(n.x * x + n.y * y + n.z * z, L) == mod(t, L))
          r.set({x, y, z}, e);
  return r;
}

}  // namespace

std::vector<PauliOp> plane_catalog(LatticeCode& lat) {
  const CubicCode& code = lat.code();
  const int m = code.m;
  std::vector<PauliOp> out;
  for (Site n : thirteen_directions())
    for (unsigned bits = 1; bits < (1u << (2 * m)); ++bits) {
      SiteOp e{static_cast<std::uint8_t>(bits)};
      if (!plane_logical_check(e, n, code)) continue;
      for (int t = 0; t < lat.L(); ++t) {
        PauliOp plane = plane_residue(e, n, t, m, lat.L());
        if (lat.is_logical(plane)) out.push_back(std::move(plane));
      }
    }
  return out;
}

std::optional<PauliOp> nontriviality_witness(const PauliOp& o, LatticeCode& lat,
                                             const std::vector<PauliOp>& extra) {
  const CubicCode& code = lat.code();
  const int m = code.m;
  PauliOp r = o.reduced(lat.L());
  for (const auto& cand : extra) {
    if (!lat.is_logical(cand)) continue;
    PauliOp c = cand.reduced(lat.L());
    if (anticommute(r, c)) return c;
  }
  for (Site n : thirteen_directions()) {
    for (unsigned bits = 1; bits < (1u << (2 * m)); ++bits) {
      SiteOp e{static_cast<std::uint8_t>(bits)};
      if (!plane_logical_check(e, n, code)) continue;
      for (int t = 0; t < lat.L(); ++t) {
        PauliOp plane = plane_residue(e, n, t, m, lat.L());
        if (!lat.is_logical(plane)) continue;  // wraparound can spoil it
        if (anticommute(r, plane)) return plane;
      }
    }
  }
  return std::nullopt;
}

BoxTrivialityReport box_logical_triviality(const CubicCode& code, int w, int L) {
  BoxTrivialityReport rep;
  if (w == 0) return rep;
  if (L < w + 4) throw std::invalid_argument("box_logical_triviality: L < w + 4");
  const int m = code.m;
  const int nvars_per_site = 2 * m;
  const int bw = w * w * w;

  auto var_index = [&](Site s, int comp) {
    return ((s.z * w + s.y) * w + s.x) * nvars_per_site + comp;
  };

  // Constraints: commutation with every placement touching the box.
  std::vector<BitVec> rows;
  for (int px = -1; px < w; ++px)
    for (int py = -1; py < w; ++py)
      for (int pz = -1; pz < w; ++pz)
        for (int type = 0; type < 2; ++type) {
          BitVec row(std::size_t(bw) * nvars_per_site);
          bool nonzero = false;
          for (int c = 0; c < kNumCorners; ++c) {
            SiteOp g = code.gen[type].corners[c];
            if (g.bits == 0) continue;
            Site s = Site{px, py, pz} + corner_positions()[c];
            if (s.x < 0 || s.x >= w || s.y < 0 || s.y >= w || s.z < 0 || s.z >= w)
              continue;
            for (int q = 0; q < m; ++q) {
              // lambda(g, o) couples g's z-part to o's x-part and vice versa.
              if ((z_part(g, m) >> q) & 1u) {
                row.flip(var_index(s, q));
                nonzero = true;
              }
              if ((x_part(g, m) >> q) & 1u) {
                row.flip(var_index(s, m + q));
                nonzero = true;
              }
            }
          }
          if (nonzero) rows.push_back(std::move(row));
        }

  BitMat sys = BitMat::from_rows(rows, std::size_t(bw) * nvars_per_site);
  std::vector<BitVec> basis = kernel_basis(sys);
  rep.dim = static_cast<int>(basis.size());

  LatticeCode lat(code, L);
  for (const auto& v : basis) {
    PauliOp o(m);
    for (int x = 0; x < w; ++x)
      for (int y = 0; y < w; ++y)
        for (int z = 0; z < w; ++z) {
          unsigned xb = 0, zb = 0;
          for (int q = 0; q < m; ++q) {
            if (v.get(var_index({x, y, z}, q))) xb |= 1u << q;
            if (v.get(var_index({x, y, z}, m + q))) zb |= 1u << q;
          }
          if (xb || zb) o.set({x, y, z}, make_site_op(xb, zb, m));
        }
    if (!lat.is_stabilizer_element(o)) {
      rep.all_trivial = false;
      ++rep.num_nontrivial;
    }
  }
  return rep;
}

DistanceResult brute_force_distance(const CubicCode& code, int L, int max_weight,
                                    std::int64_t candidate_bound, bool reverse_order) {
  LatticeCode lat(code, L);
  if (lat.count_logical_qubits() == 0)
    throw std::domain_error("brute_force_distance: code has no logical qubits");

  const int n = lat.num_sites();
  const int m = code.m;
  std::vector<int> site_order(n);
  for (int i = 0; i < n; ++i) site_order[i] = reverse_order ? n - 1 - i : i;

  // Per-site candidate operators: pure X and pure Z for CSS, everything
  // otherwise.
  std::vector<SiteOp> site_ops;
  for (unsigned bits = 1; bits < (1u << (2 * m)); ++bits) {
    SiteOp op{static_cast<std::uint8_t>(bits)};
    if (code.kind == CodeKind::CSS && x_part(op, m) != 0 && z_part(op, m) != 0) continue;
    site_ops.push_back(op);
  }

  std::int64_t checked = 0;
  for (int w = 1; w <= max_weight; ++w) {
    // Rough candidate count for this weight.
    double count = 1;
    for (int i = 0; i < w; ++i) count *= double(n - i) / (i + 1);
    for (int i = 0; i < w; ++i) count *= site_ops.size();
    if (count > double(candidate_bound))
      throw ResourceError("brute_force_distance: weight " + std::to_string(w) +
                          " exceeds the candidate bound");

    std::vector<int> comb(w);
    for (int i = 0; i < w; ++i) comb[i] = i;
    while (true) {
      std::vector<int> assign(w, 0);
      while (true) {
        PauliOp o(m);
        for (int i = 0; i < w; ++i)
          o.set(lat.site_at(site_order[comb[i]]), site_ops[assign[i]]);
        ++checked;
        if (lat.is_logical(o) && !lat.is_stabilizer_element(o))
          return {w, checked};
        int i = w - 1;
        while (i >= 0 && assign[i] + 1 == static_cast<int>(site_ops.size())) {
          assign[i] = 0;
          --i;
        }
        if (i < 0) break;
        ++assign[i];
      }
      int i = w - 1;
      while (i >= 0 && comb[i] == n - w + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < w; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  throw ResourceError("brute_force_distance: no logical operator up to weight " +
                      std::to_string(max_weight));
}

PartialPlaneStats partial_plane_energy(SiteOp e, Site normal, int r1, int r2,
                                       LatticeCode& lat) {
  // Parameterize the plane by two independent in-plane lattice vectors.
  auto in_plane = [&](Site v) {
    return normal.x * v.x + normal.y * v.y + normal.z * v.z == 0;
  };
  std::vector<Site> basis;
  for (int x = -1; x <= 1 && basis.size() < 2; ++x)
    for (int y = -1; y <= 1 && basis.size() < 2; ++y)
      for (int z = -1; z <= 1 && basis.size() < 2; ++z) {
        Site v{x, y, z};
        if (v == Site{0, 0, 0} || !in_plane(v)) continue;
        if (basis.empty()) {
          basis.push_back(v);
        } else {
          Site a = basis[0];
          // reject parallel candidates
          Site cross{a.y * v.z - a.z * v.y, a.z * v.x - a.x * v.z,
                     a.x * v.y - a.y * v.x};
          if (!(cross == Site{0, 0, 0})) basis.push_back(v);
        }
      }
  if (basis.size() < 2)
    throw std::invalid_argument("partial_plane_energy: degenerate normal");

  PauliOp o(lat.code().m);
  std::set<Site> region;
  for (int i = 0; i < r1; ++i)
    for (int j = 0; j < r2; ++j) {
      Site s = wrap(i * basis[0] + j * basis[1], lat.L());
      region.insert(s);
      o.set(s, e);
    }

  PartialPlaneStats stats;
  std::set<Site> boundary;
  for (int i = 0; i < r1; ++i)
    for (int j = 0; j < r2; ++j)
      if (i == 0 || i == r1 - 1 || j == 0 || j == r2 - 1)
        boundary.insert(wrap(i * basis[0] + j * basis[1], lat.L()));
  stats.boundary_sites = static_cast<int>(boundary.size());

  auto cheb_torus = [&](Site a, Site b) {
    auto d1 = [&](int u, int v) {
      int d = mod(u - v, lat.L());
      return std::min(d, lat.L() - d);
    };
    return std::max({d1(a.x, b.x), d1(a.y, b.y), d1(a.z, b.z)});
  };

  for (const auto& [type, p] : lat.syndrome(o)) {
    ++stats.excitations;
    int best = 1 << 30;
    for (int c = 0; c < kNumCorners; ++c) {
      if (lat.code().gen[type].corners[c].bits == 0) continue;
      Site s = wrap(p + corner_positions()[c], lat.L());
      for (Site b : boundary) best = std::min(best, cheb_torus(s, b));
    }
    stats.max_excitation_distance = std::max(stats.max_excitation_distance, best);
  }
  return stats;
}

std::optional<std::pair<std::string, std::string>> table3_strings(int code_index) {
  switch (code_index) {
    case 11: return {{"ZZ[z]_(0,0,0) ZI[z]_(1,0,0)", "XI[y]_(0,0,0) IX[y]_(1,0,0)"}};
    case 12: return {{"IZ[z]_(0,0,0) ZI[z]_(0,1,0)", "XI[x]_(0,0,0) XX[x]_(0,1,0)"}};
    case 13: return {{"ZZ[z]_(0,0,0) IZ[z]_(0,1,0)", "sigma[0,1,0]_IX(0,0,0)"}};
    case 14: return {{"IX[z]_(0,0,0) XI[z]_(0,1,0)", "sigma[0,0,1]_IZ(0,0,0)"}};
    case 15: return {{"ZI[y]_(0,0,0) ZZ[y]_(1,0,0)", "IX[z]_(0,0,0) XI[z]_(1,0,0)"}};
    case 16: return {{"ZZ[1,0,1]_(0,0,0) IZ[1,0,1]_(1,0,0)",
                      "IX[1,1,0]_(0,0,0) XI[1,1,0]_(1,0,0)"}};
    case 17: return {{"ZZ[x]_(0,0,0) IZ[x]_(0,0,1)", "sigma[0,0,1]_IX(0,0,0)"}};
    default: return std::nullopt;
  }
}

}  // namespace cubic
