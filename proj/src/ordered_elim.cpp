#include "cubic/ordered_elim.hpp"

#include <algorithm>
#include <stdexcept>

#include "cubic/f2.hpp"

namespace cubic {

namespace {

// Row and column orders derived from the tunnel independence structure:
// generators outside a 1x2 tunnel are peeled line by line, so each batch of
// rows finds fresh leading columns on its own line and stays sparse. Tunnel
// rows come last and are the only ones that densify.
struct Schedule {
  std::vector<std::uint32_t> col_pos;            // original column -> position
  std::vector<std::pair<int, Site>> row_order;   // (type, placement)
  std::size_t num_cols = 0;
};

Schedule make_schedule(const CubicCode& code, int L) {
  Schedule sch;
  const int n = L * L * L;
  const int m = code.m;
  const int comps = code.kind == CodeKind::CSS ? m : 2 * m;
  sch.num_cols = std::size_t(comps) * n;
  sch.col_pos.assign(sch.num_cols, ~0u);

  auto site_index = [&](int x, int y, int z) {
    return (mod(z, L) * L + mod(y, L)) * L + mod(x, L);
  };
  std::uint32_t next = 0;
  auto push_site = [&](int x, int y, int z) {
    std::size_t base = std::size_t(comps) * site_index(x, y, z);
    for (int q = 0; q < comps; ++q)
      if (sch.col_pos[base + q] == ~0u) sch.col_pos[base + q] = next++;
  };

  if (code.kind == CodeKind::CSS) {
    // Tunnel along z at (x,y) in {(-1,0),(0,0)}; peel in y, then in x.
    for (int y = 1; y < L; ++y)
      for (int z = 0; z < L; ++z) push_site(0, y, z);
    for (int x = 1; x <= L - 2; ++x)
      for (int y = 0; y <= L - 2; ++y)
        for (int z = 0; z < L; ++z) push_site(x, y, z);
    for (int s = 0; s < n; ++s)
      push_site(s % L, (s / L) % L, s / (L * L));

    auto batch = [&](int x, int y) {
      for (int z = 0; z < L; ++z)
        sch.row_order.emplace_back(0, Site{mod(x, L), mod(y, L), z});
    };
    for (int y = 1; y < L; ++y) {
      batch(-1, y);
      batch(0, y);
    }
    for (int x = 1; x <= L - 2; ++x) {
      batch(x, -1);
      batch(x, 0);
      for (int y = 1; y <= L - 2; ++y) batch(x, y);
    }
    batch(-1, 0);
    batch(0, 0);
  } else {
    // Tunnel along y at (x,z) in {(0,-1),(0,0)}; peel in z, then in x.
    for (int z = 0; z <= L - 2; ++z)
      for (int y = 0; y < L; ++y) push_site(0, y, z);
    for (int x = 1; x <= L - 2; ++x)
      for (int z = 0; z <= L - 2; ++z)
        for (int y = 0; y < L; ++y) push_site(x, y, z);
    for (int s = 0; s < n; ++s)
      push_site(s % L, (s / L) % L, s / (L * L));

    auto batch = [&](int x, int z) {
      for (int type = 0; type < 2; ++type)
        for (int y = 0; y < L; ++y)
          sch.row_order.emplace_back(type, Site{mod(x, L), y, mod(z, L)});
    };
    batch(-1, -1);
    batch(-1, 0);
    for (int z = 1; z <= L - 2; ++z) {
      batch(-1, z);
      batch(0, z);
    }
    for (int x = 1; x <= L - 2; ++x) {
      batch(x, -1);
      batch(x, 0);
      for (int z = 1; z <= L - 2; ++z) batch(x, z);
    }
    batch(0, -1);
    batch(0, 0);
  }

  const std::size_t expected_rows =
      code.kind == CodeKind::CSS ? std::size_t(n) : std::size_t(2) * n;
  if (sch.row_order.size() != expected_rows)
    throw std::logic_error("schedule row count mismatch");
  return sch;
}

struct PivotRow {
  std::vector<std::uint32_t> sparse;  // sorted column positions
  BitVec dense;
  bool is_dense = false;
};

constexpr std::size_t kSparseLimit = 96;

}  // namespace

OrderedElimStats ordered_elimination_rank(const CubicCode& code, int L) {
  Schedule sch = make_schedule(code, L);
  const int n = L * L * L;
  const int m = code.m;
  const std::size_t ncols = sch.num_cols;

  std::vector<std::int32_t> col_pivot(ncols, -1);
  std::vector<PivotRow> pivots;
  OrderedElimStats stats;

  BitVec acc(ncols);
  std::vector<std::uint32_t> touched_words;
  bool full_dirty = false;

  auto flip = [&](std::uint32_t col) {
    acc.flip(col);
    touched_words.push_back(col / kWordBits);
  };

  auto site_index = [&](Site s) {
    Site w = wrap(s, L);
    return (w.z * L + w.y) * L + w.x;
  };

  for (const auto& [type, p] : sch.row_order) {
    // Load the generator row through the column permutation.
    touched_words.clear();
    full_dirty = false;
    for (int c = 0; c < kNumCorners; ++c) {
      SiteOp g = code.gen[type].corners[c];
      if (g.bits == 0) continue;
      int s = site_index(p + corner_positions()[c]);
      if (code.kind == CodeKind::CSS) {
        unsigned part = type == 0 ? z_part(g, m) : x_part(g, m);
        for (int q = 0; q < m; ++q)
          if ((part >> q) & 1u) flip(sch.col_pos[std::size_t(s) * m + q]);
      } else {
        for (int q = 0; q < m; ++q) {
          if ((x_part(g, m) >> q) & 1u)
            flip(sch.col_pos[std::size_t(s) * 2 * m + q]);
          if ((z_part(g, m) >> q) & 1u)
            flip(sch.col_pos[std::size_t(s) * 2 * m + m + q]);
        }
      }
    }

    int c = acc.first_set();
    while (c >= 0 && col_pivot[c] >= 0) {
      const PivotRow& pr = pivots[col_pivot[c]];
      if (pr.is_dense) {
        Word* aw = acc.words();
        const Word* pw = pr.dense.words();
        for (std::size_t i = 0; i < acc.word_count(); ++i) aw[i] ^= pw[i];
        full_dirty = true;
      } else {
        for (std::uint32_t col : pr.sparse) flip(col);
      }
      ++stats.reduction_adds;
      c = acc.first_set(c);
    }

    if (c >= 0) {
      PivotRow pr;
      std::size_t count = 0;
      for (int b = acc.first_set(c); b >= 0; b = acc.first_set(b + 1)) {
        ++count;
        if (count <= kSparseLimit) pr.sparse.push_back(static_cast<std::uint32_t>(b));
      }
      if (count > kSparseLimit) {
        pr.is_dense = true;
        pr.dense = acc;
        pr.sparse.clear();
        pr.sparse.shrink_to_fit();
        ++stats.dense_pivots;
        stats.peak_bytes += acc.word_count() * sizeof(Word);
      } else {
        ++stats.sparse_pivots;
        stats.peak_bytes += pr.sparse.size() * sizeof(std::uint32_t);
      }
      col_pivot[c] = static_cast<std::int32_t>(pivots.size());
      pivots.push_back(std::move(pr));
    }

    // Clear the accumulator for the next row.
    if (full_dirty) {
      Word* aw = acc.words();
      for (std::size_t i = 0; i < acc.word_count(); ++i) aw[i] = 0;
    } else {
      Word* aw = acc.words();
      for (std::uint32_t wi : touched_words) aw[wi] = 0;
    }
  }

  stats.rank = pivots.size();
  return stats;
}

int ordered_elimination_k(const CubicCode& code, int L) {
  OrderedElimStats st = ordered_elimination_rank(code, L);
  const int n = L * L * L;
  if (code.kind == CodeKind::CSS)
    return code.m * n - 2 * static_cast<int>(st.rank);
  return code.m * n - static_cast<int>(st.rank);
}

}  // namespace cubic
