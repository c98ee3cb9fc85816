#include "cubic/classify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace cubic {

Mat8 m8_from_bitmat(const BitMat& b) {
  Mat8 m = 0;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      if (b.get(r, c)) m = m8_set(m, r, c);
  return m;
}

BitMat m8_to_bitmat(Mat8 m) {
  BitMat b(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      if (m8_get(m, r, c)) b.set(r, c, true);
  return b;
}

Mat8 m8_transpose(Mat8 m) {
  Mat8 t = 0;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      if (m8_get(m, r, c)) t = m8_set(t, c, r);
  return t;
}

namespace {

inline std::uint8_t m8_row(Mat8 m, int r) { return (m >> (r * 8)) & 0xffu; }

int rank_rows8(std::vector<std::uint8_t> rows) {
  int rank = 0;
  for (int c = 0; c < 8; ++c) {
    std::uint8_t bit = 1u << c;
    int piv = -1;
    for (std::size_t i = rank; i < rows.size(); ++i)
      if (rows[i] & bit) { piv = static_cast<int>(i); break; }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (static_cast<int>(i) != rank && (rows[i] & bit)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

std::vector<std::uint8_t> mat8_rows(Mat8 m) {
  std::vector<std::uint8_t> rows(8);
  for (int r = 0; r < 8; ++r) rows[r] = m8_row(m, r);
  return rows;
}

// Rows of R * omega: XOR of omega rows selected by each grouping mask.
std::vector<std::uint8_t> apply_grouping(const std::vector<std::uint8_t>& groups,
                                         Mat8 omega) {
  std::vector<std::uint8_t> out;
  out.reserve(groups.size());
  for (std::uint8_t mask : groups) {
    std::uint8_t acc = 0;
    for (int i = 0; i < 8; ++i)
      if (mask & (1u << i)) acc ^= m8_row(omega, i);
    out.push_back(acc);
  }
  return out;
}

// Label permutations induced by the 48 isometries of the unit cube.
const std::vector<std::array<int, 8>>& cube_symmetries() {
  static std::vector<std::array<int, 8>> syms = [] {
    std::vector<std::array<int, 8>> out;
    int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& pr : perm) {
      for (int signs = 0; signs < 8; ++signs) {
        std::array<int, 8> sigma{};
        for (int ell = 0; ell < kNumCorners; ++ell) {
          Site q = corner_positions()[ell];
          int u[3] = {2 * q.x - 1, 2 * q.y - 1, 2 * q.z - 1};
          int v[3];
          for (int r = 0; r < 3; ++r) {
            int s = (signs >> r) & 1 ? -1 : 1;
            v[r] = s * u[pr[r]];
          }
          Site qq{(v[0] + 1) / 2, (v[1] + 1) / 2, (v[2] + 1) / 2};
          sigma[ell] = corner_at(qq);
        }
        out.push_back(sigma);
      }
    }
    return out;
  }();
  return syms;
}

Mat8 m8_permute(Mat8 m, const std::array<int, 8>& sigma) {
  Mat8 out = 0;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      if (m8_get(m, r, c)) out = m8_set(out, sigma[r], sigma[c]);
  return out;
}

int upper_var(int i, int j) {
  if (i > j) std::swap(i, j);
  // index of (i,j), i<j, in row-major upper triangle
  return i * 8 - i * (i + 1) / 2 + (j - i - 1);
}

}  // namespace

int m8_rank(Mat8 m) { return rank_rows8(mat8_rows(m)); }

ConstraintSystem constraint_system(CodeKind kind) {
  ConstraintSystem cs;
  cs.kind = kind;
  cs.num_vars = kind == CodeKind::NonCSS ? 28 : 64;
  std::vector<BitVec> eqs;
  std::set<std::vector<int>> seen;

  auto add_equation = [&](const std::vector<std::pair<int, int>>& terms) {
    BitVec eq(cs.num_vars);
    for (auto [a, b] : terms) {
      int var = kind == CodeKind::NonCSS ? upper_var(a, b) : a * 8 + b;
      eq.flip(var);
    }
    if (!eq.any()) return;
    std::vector<int> key;
    for (int v = 0; v < cs.num_vars; ++v)
      if (eq.get(v)) key.push_back(v);
    if (seen.insert(key).second) eqs.push_back(std::move(eq));
  };

  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz) {
        Site d{dx, dy, dz};
        if (kind == CodeKind::NonCSS && d == Site{0, 0, 0}) continue;
        std::vector<std::pair<int, int>> terms;
        for (int c = 0; c < kNumCorners; ++c) {
          int c2 = corner_at(corner_positions()[c] - d);
          if (c2 >= 0) terms.emplace_back(c, c2);
        }
        add_equation(terms);
      }

  cs.equations = BitMat::from_rows(eqs, cs.num_vars);
  cs.rank = static_cast<int>(gf2_rank(cs.equations));
  cs.solution_dim = cs.num_vars - cs.rank;
  return cs;
}

bool satisfies_constraints(Mat8 omega, CodeKind kind) {
  static const ConstraintSystem noncss = constraint_system(CodeKind::NonCSS);
  static const ConstraintSystem css = constraint_system(CodeKind::CSS);
  const ConstraintSystem& cs = kind == CodeKind::NonCSS ? noncss : css;
  BitVec v(cs.num_vars);
  if (kind == CodeKind::NonCSS) {
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j)
        if (m8_get(omega, i, j)) v.set(upper_var(i, j), true);
  } else {
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        if (m8_get(omega, i, j)) v.set(i * 8 + j, true);
  }
  for (std::size_t r = 0; r < cs.equations.rows(); ++r) {
    bool acc = false;
    for (int c = 0; c < cs.num_vars; ++c)
      if (cs.equations.get(r, c) && v.get(c)) acc = !acc;
    if (acc) return false;
  }
  return true;
}

const std::vector<DirectionMatrix>& direction_matrices() {
  static const std::vector<DirectionMatrix> dirs = [] {
    std::vector<Site> vs = {
        {1, 0, 0},  {0, 1, 0},  {0, 0, 1},                            // axes
        {1, 1, 0},  {1, -1, 0}, {1, 0, 1}, {1, 0, -1}, {0, 1, 1}, {0, 1, -1},
        {1, 1, 1},  {1, 1, -1}, {1, -1, 1}, {-1, 1, 1},               // body
    };
    std::vector<DirectionMatrix> out;
    for (Site v : vs) {
      // Union corners connected by +-v steps.
      std::array<int, 8> parent;
      for (int i = 0; i < 8; ++i) parent[i] = i;
      auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
      };
      for (int c = 0; c < 8; ++c) {
        int c2 = corner_at(corner_positions()[c] + v);
        if (c2 >= 0) {
          int a = find(c), b = find(c2);
          if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
      }
      std::map<int, std::uint8_t> groups;
      for (int c = 0; c < 8; ++c) groups[find(c)] |= 1u << c;
      DirectionMatrix dm;
      dm.dir = v;
      for (auto& [root, mask] : groups) dm.rows.push_back(mask);
      out.push_back(std::move(dm));
    }
    return out;
  }();
  return dirs;
}

ConditionReport check_conditions(Mat8 omega, CodeKind kind, int m) {
  ConditionReport rep;
  const int want_rank = kind == CodeKind::NonCSS ? 2 * m : m;
  if (m8_rank(omega) != want_rank) {
    rep.reason = "rank(omega) != " + std::to_string(want_rank);
    return rep;
  }
  for (const auto& dm : direction_matrices()) {
    if (rank_rows8(apply_grouping(dm.rows, omega)) != want_rank) {
      rep.reason = "line condition fails along (" + std::to_string(dm.dir.x) + "," +
                   std::to_string(dm.dir.y) + "," + std::to_string(dm.dir.z) + ")";
      return rep;
    }
    if (kind == CodeKind::CSS &&
        rank_rows8(apply_grouping(dm.rows, m8_transpose(omega))) != want_rank) {
      rep.reason = "transposed line condition fails along (" + std::to_string(dm.dir.x) +
                   "," + std::to_string(dm.dir.y) + "," + std::to_string(dm.dir.z) + ")";
      return rep;
    }
  }
  // Product of all corner operators = identity. For CSS codes this is the
  // nontrivial constraint that every row and column of omega' has even
  // weight (row space of omega' = row space of P_X, and of omega'^T = P_Z).
  // For non-CSS codes the product over both generators is a square, hence
  // the condition holds with no constraint on omega.
  if (kind == CodeKind::CSS) {
    for (int r = 0; r < 8; ++r) {
      if (__builtin_popcount(m8_row(omega, r)) & 1) {
        rep.reason = "corner product check fails (odd row)";
        return rep;
      }
      if (__builtin_popcount(m8_row(m8_transpose(omega), r)) & 1) {
        rep.reason = "corner product check fails (odd column)";
        return rep;
      }
    }
  }
  rep.pass = true;
  rep.reason = "ok";
  return rep;
}

Mat8 canonical_form(Mat8 omega, CodeKind kind) {
  Mat8 best = ~Mat8(0);
  for (const auto& sigma : cube_symmetries()) {
    Mat8 p = m8_permute(omega, sigma);
    best = std::min(best, p);
    if (kind == CodeKind::CSS) best = std::min(best, m8_transpose(p));
  }
  return best;
}

std::set<Mat8> symmetry_orbit(Mat8 omega, CodeKind kind) {
  std::set<Mat8> orbit;
  for (const auto& sigma : cube_symmetries()) {
    Mat8 p = m8_permute(omega, sigma);
    orbit.insert(p);
    if (kind == CodeKind::CSS) orbit.insert(m8_transpose(p));
  }
  return orbit;
}

CubicCode realize_css(Mat8 omega_prime, std::string name) {
  BitMat w = m8_to_bitmat(omega_prime);
  Echelon e = echelonize(w, false, true, false);
  const int m = static_cast<int>(e.rank);
  if (m < 1 || m > 2) throw std::invalid_argument("realize_css: rank out of range");

  // omega' = U * E with E the reduced-echelon rows: row i of U holds the
  // coefficients, read off at the pivot columns.
  GeneratorSpec gz;
  for (int i = 0; i < kNumCorners; ++i) {
    unsigned z = 0;
    for (int t = 0; t < m; ++t)
      if (w.get(i, e.pivot_cols[t])) z |= 1u << t;
    gz.corners[i] = make_site_op(0, z, m);
  }
  CubicCode code;
  if (m == 2) {
    code = make_css_code(gz, m, std::move(name));
    if (m8_from_bitmat(omega_css(code.gen[0], code.gen[1], m)) == omega_prime) return code;
  }
  // Duality-constructed X generator does not reproduce omega'; fall back to
  // the rank-factorization X corners.
  code.kind = CodeKind::CSS;
  code.m = m;
  code.gen[0] = gz;
  for (int j = 0; j < kNumCorners; ++j) {
    unsigned x = 0;
    for (int t = 0; t < m; ++t)
      if (e.mat.get(t, j)) x |= 1u << t;
    code.gen[1].corners[j] = make_site_op(x, 0, m);
  }
  code.name = std::move(name);
  if (m8_from_bitmat(omega_css(code.gen[0], code.gen[1], m)) != omega_prime)
    throw std::logic_error("realize_css: factorization failed");
  return code;
}

CubicCode realize_noncss(Mat8 omega, std::string name) {
  BitMat p = realize_commutation(m8_to_bitmat(omega));
  const int m = static_cast<int>(p.rows()) / 2;
  GeneratorSpec g;
  for (int c = 0; c < kNumCorners; ++c) {
    unsigned x = 0, z = 0;
    for (int t = 0; t < m; ++t) {
      if (p.get(t, c)) x |= 1u << t;
      if (p.get(m + t, c)) z |= 1u << t;
    }
    g.corners[c] = make_site_op(x, z, m);
  }
  return make_noncss_code(g, m, std::move(name));
}

Mat8 catalog_omega(int index) {
  const CubicCode& code = catalog_code(index);
  if (code.kind == CodeKind::NonCSS)
    return m8_from_bitmat(omega_noncss(code.gen[0], code.m));
  return m8_from_bitmat(omega_css(code.gen[0], code.gen[1], code.m));
}

namespace {

void match_catalog(std::vector<EnumeratedClass>& classes, CodeKind kind) {
  for (int idx = 0; idx < catalog_size(); ++idx) {
    const CubicCode& code = catalog_code(idx);
    if (code.kind != kind) continue;
    Mat8 canon = canonical_form(catalog_omega(idx), kind);
    for (auto& cls : classes)
      if (cls.canonical == canon) cls.catalog_index = idx;
  }
}

}  // namespace

std::vector<EnumeratedClass> enumerate_codes(CodeKind kind) {
  // Classes keyed (and realized) by canonical form, so results do not depend
  // on enumeration order.
  std::set<Mat8> classes;

  auto consider = [&](Mat8 omega, int m) {
    if (check_conditions(omega, kind, m).pass)
      classes.insert(canonical_form(omega, kind));
  };

  if (kind == CodeKind::NonCSS) {
    ConstraintSystem cs = constraint_system(kind);
    std::vector<BitVec> basis = kernel_basis(cs.equations);
    const std::size_t dim = basis.size();
    for (std::uint64_t sel = 1; sel < (std::uint64_t(1) << dim); ++sel) {
      BitVec v(cs.num_vars);
      for (std::size_t b = 0; b < dim; ++b)
        if ((sel >> b) & 1u) v ^= basis[b];
      Mat8 omega = 0;
      for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j)
          if (v.get(upper_var(i, j))) {
            omega = m8_set(omega, i, j);
            omega = m8_set(omega, j, i);
          }
      int r = m8_rank(omega);
      if (r == 2 || r == 4) consider(omega, r / 2);
    }
  } else {
    // Condition 3 forces rank(omega') = m <= 2, so enumerate matrices of
    // rank 1 and 2 by column space and solve the placement constraints for
    // the coefficient rows.
    ConstraintSystem cs = constraint_system(kind);

    auto solve_for = [&](const std::vector<BitVec>& colspace) {
      // omega' = sum_t colspace[t] * coeff[t]^T; unknowns are the coeff rows.
      const int k = static_cast<int>(colspace.size());
      BitMat sys(cs.equations.rows(), 8 * k);
      for (std::size_t r = 0; r < cs.equations.rows(); ++r) {
        for (int var = 0; var < 64; ++var) {
          if (!cs.equations.get(r, var)) continue;
          int i = var / 8, j = var % 8;
          for (int t = 0; t < k; ++t)
            if (colspace[t].get(i)) sys.flip(r, t * 8 + j);
        }
      }
      return kernel_basis(sys);
    };

    auto omega_from = [&](const std::vector<BitVec>& colspace, const BitVec& coeff) {
      Mat8 omega = 0;
      for (std::size_t t = 0; t < colspace.size(); ++t)
        for (int i = 0; i < 8; ++i)
          if (colspace[t].get(i))
            for (int j = 0; j < 8; ++j)
              if (coeff.get(t * 8 + j)) omega ^= Mat8(1) << (i * 8 + j);
      return omega;
    };

    auto scan_space = [&](const std::vector<BitVec>& colspace, int m) {
      std::vector<BitVec> ker = solve_for(colspace);
      const std::size_t dim = ker.size();
      if (dim > 24) throw std::logic_error("enumerate_codes: unexpected kernel size");
      for (std::uint64_t sel = 1; sel < (std::uint64_t(1) << dim); ++sel) {
        BitVec coeff(8 * static_cast<int>(colspace.size()));
        for (std::size_t b = 0; b < dim; ++b)
          if ((sel >> b) & 1u) coeff ^= ker[b];
        Mat8 omega = omega_from(colspace, coeff);
        if (m8_rank(omega) != m) continue;
        consider(omega, m);
      }
    };

    // Candidate column spaces: all 1-dimensional ones, then the reduced
    // echelon bases (u, v), one per 2-dimensional space.
    std::vector<std::vector<BitVec>> spaces;
    for (unsigned u = 1; u < 256; ++u) {
      BitVec uv(8);
      for (int i = 0; i < 8; ++i)
        if ((u >> i) & 1u) uv.set(i, true);
      spaces.push_back({uv});
    }
    for (int p1 = 0; p1 < 8; ++p1)
      for (int p2 = p1 + 1; p2 < 8; ++p2) {
        std::vector<int> ufree, vfree;
        for (int b = p1 + 1; b < 8; ++b)
          if (b != p2) ufree.push_back(b);
        for (int b = p2 + 1; b < 8; ++b) vfree.push_back(b);
        for (unsigned um = 0; um < (1u << ufree.size()); ++um)
          for (unsigned vm = 0; vm < (1u << vfree.size()); ++vm) {
            BitVec u(8), v(8);
            u.set(p1, true);
            v.set(p2, true);
            for (std::size_t b = 0; b < ufree.size(); ++b)
              if ((um >> b) & 1u) u.set(ufree[b], true);
            for (std::size_t b = 0; b < vfree.size(); ++b)
              if ((vm >> b) & 1u) v.set(vfree[b], true);
            spaces.push_back({u, v});
          }
      }

#ifdef _OPENMP
#pragma omp parallel
    {
      std::set<Mat8> local;
      auto consider_local = [&](Mat8 omega, int m) {
        if (check_conditions(omega, kind, m).pass)
          local.insert(canonical_form(omega, kind));
      };
#pragma omp for schedule(dynamic, 16)
      for (std::size_t i = 0; i < spaces.size(); ++i) {
        std::vector<BitVec> ker = solve_for(spaces[i]);
        const std::size_t dim = ker.size();
        for (std::uint64_t sel = 1; sel < (std::uint64_t(1) << dim); ++sel) {
          BitVec coeff(8 * static_cast<int>(spaces[i].size()));
          for (std::size_t b = 0; b < dim; ++b)
            if ((sel >> b) & 1u) coeff ^= ker[b];
          Mat8 omega = omega_from(spaces[i], coeff);
          int m = static_cast<int>(spaces[i].size());
          if (m8_rank(omega) != m) continue;
          consider_local(omega, m);
        }
      }
#pragma omp critical
      classes.merge(local);
    }
    (void)scan_space;
#else
    for (const auto& space : spaces) scan_space(space, static_cast<int>(space.size()));
#endif
  }

  std::vector<EnumeratedClass> out;
  int n = 0;
  for (Mat8 canon : classes) {
    EnumeratedClass cls;
    cls.canonical = canon;
    cls.m = kind == CodeKind::NonCSS ? m8_rank(canon) / 2 : m8_rank(canon);
    std::string name = (kind == CodeKind::NonCSS ? "noncss-class" : "css-class") +
                       std::to_string(n++);
    cls.realized = kind == CodeKind::NonCSS ? realize_noncss(canon, name)
                                            : realize_css(canon, name);
    out.push_back(std::move(cls));
  }
  match_catalog(out, kind);
  return out;
}

std::vector<TwoDResult> enumerate_2d() {
  // Square generator, corners A=(0,0), B=(0,1), C=(1,0), D=(1,1); the second
  // generator is the spatial inversion (A<->D, B<->C). Commutativity of all
  // placements leaves the two-parameter family
  //   omega(A,B)=omega(C,D)=i, omega(A,C)=omega(B,D)=j, omega(A,D)=omega(B,C)=0.
  std::vector<TwoDResult> out;
  for (int i = 0; i <= 1; ++i)
    for (int j = 0; j <= 1; ++j) {
      BitMat omega(4, 4);
      auto set_sym = [&](int a, int b, bool v) {
        omega.set(a, b, v);
        omega.set(b, a, v);
      };
      set_sym(0, 1, i);
      set_sym(2, 3, i);
      set_sym(0, 2, j);
      set_sym(1, 3, j);
      TwoDResult r;
      r.i = i;
      r.j = j;
      r.rank = static_cast<int>(gf2_rank(omega));
      r.m = r.rank / 2;
      r.accepted = r.rank == 2;
      if (r.rank > 0) r.realization = realize_commutation(omega);
      // Doubled structure: the anticommutation graph splits into two
      // disjoint hyperbolic pairs.
      int deg[4] = {0, 0, 0, 0};
      int edges = 0;
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
          if (omega.get(a, b)) {
            ++deg[a];
            ++deg[b];
            ++edges;
          }
      r.doubled = r.rank == 4 && edges == 2 && deg[0] == 1 && deg[1] == 1 &&
                  deg[2] == 1 && deg[3] == 1;
      out.push_back(std::move(r));
    }
  return out;
}

}  // namespace cubic
