#include "cubic/f2.hpp"

#include <bit>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cubic {

int BitVec::first_set(std::size_t from) const {
  if (from >= n_) return -1;
  std::size_t wi = from / kWordBits;
  Word w = w_[wi] & (~Word(0) << (from % kWordBits));
  while (true) {
    if (w) {
      std::size_t bit = wi * kWordBits + std::countr_zero(w);
      return bit < n_ ? static_cast<int>(bit) : -1;
    }
    if (++wi >= w_.size()) return -1;
    w = w_[wi];
  }
}

std::size_t BitVec::popcount() const {
  std::size_t c = 0;
  for (Word w : w_) c += std::popcount(w);
  return c;
}

bool BitVec::dot(const BitVec& o) const {
  Word acc = 0;
  for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
  return std::popcount(acc) & 1u;
}

BitMat BitMat::identity(std::size_t n) {
  BitMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMat BitMat::from_rows(const std::vector<BitVec>& rows, std::size_t cols) {
  BitMat m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

void BitMat::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  Word* ra = row(a);
  Word* rb = row(b);
  for (std::size_t i = 0; i < stride_; ++i) std::swap(ra[i], rb[i]);
}

bool BitMat::row_any(std::size_t r) const {
  const Word* p = row(r);
  for (std::size_t i = 0; i < stride_; ++i) if (p[i]) return true;
  return false;
}

int BitMat::row_first_set(std::size_t r, std::size_t from) const {
  if (from >= cols_) return -1;
  const Word* p = row(r);
  std::size_t wi = from / kWordBits;
  Word w = p[wi] & (~Word(0) << (from % kWordBits));
  while (true) {
    if (w) {
      std::size_t bit = wi * kWordBits + std::countr_zero(w);
      return bit < cols_ ? static_cast<int>(bit) : -1;
    }
    if (++wi >= stride_) return -1;
    w = p[wi];
  }
}

BitVec BitMat::get_row(std::size_t r) const {
  BitVec v(cols_);
  const Word* p = row(r);
  for (std::size_t i = 0; i < stride_; ++i) v.words()[i] = p[i];
  return v;
}

void BitMat::set_row(std::size_t r, const BitVec& v) {
  Word* p = row(r);
  for (std::size_t i = 0; i < stride_; ++i) p[i] = v.words()[i];
}

BitMat BitMat::transposed() const {
  BitMat t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const Word* p = row(r);
    for (std::size_t wi = 0; wi < stride_; ++wi) {
      Word w = p[wi];
      while (w) {
        std::size_t c = wi * kWordBits + std::countr_zero(w);
        t.set(c, r, true);
        w &= w - 1;
      }
    }
  }
  return t;
}

BitMat mat_mul(const BitMat& a, const BitMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: shape mismatch");
  BitMat out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const Word* pa = a.row(r);
    Word* po = out.row(r);
    for (std::size_t wi = 0; wi < a.stride(); ++wi) {
      Word w = pa[wi];
      while (w) {
        std::size_t k = wi * kWordBits + std::countr_zero(w);
        const Word* pb = b.row(k);
        for (std::size_t j = 0; j < b.stride(); ++j) po[j] ^= pb[j];
        w &= w - 1;
      }
    }
  }
  return out;
}

Echelon echelonize(BitMat m, bool want_transform, bool reduced, bool parallel) {
  Echelon e;
  const std::size_t rows = m.rows(), cols = m.cols(), stride = m.stride();
  BitMat t;
  if (want_transform) t = BitMat::identity(rows);
  e.col_to_row.assign(cols, -1);
  const std::size_t tstride = want_transform ? t.stride() : 0;

  // Shared elimination state; one persistent thread team, per-pivot barriers.
  // Each thread snapshots the shared state between two barriers before any
  // branching, so control flow never diverges across the team.
  std::size_t r = 0;
  std::size_t piv_row = 0;
  bool have_pivot = false;

#ifdef _OPENMP
  const bool use_parallel = parallel && rows * stride > (std::size_t(1) << 23);
#pragma omp parallel if (use_parallel) default(shared)
#endif
  {
    for (std::size_t c = 0; c < cols; ++c) {
#ifdef _OPENMP
#pragma omp single
#endif
      {
        have_pivot = false;
        for (std::size_t i = r; i < rows; ++i) {
          if (m.get(i, c)) {
            m.swap_rows(r, i);
            if (want_transform) t.swap_rows(r, i);
            have_pivot = true;
            break;
          }
        }
        if (have_pivot) {
          e.pivot_cols.push_back(static_cast<int>(c));
          e.col_to_row[c] = static_cast<int>(r);
          piv_row = r;
          ++r;
        }
      }  // implicit barrier
      const bool my_pivot = have_pivot;
      const std::size_t my_row = piv_row;
      const bool my_done = r >= rows;
#ifdef _OPENMP
#pragma omp barrier
#endif
      if (!my_pivot) {
        if (my_done) break;
        continue;
      }

      const Word* src = m.row(my_row);
      const Word* tsrc = want_transform ? t.row(my_row) : nullptr;
      const std::size_t lo = reduced ? 0 : my_row + 1;
      const std::size_t cw = c / kWordBits;
      const Word cm = Word(1) << (c % kWordBits);

#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
      for (std::size_t j = lo; j < rows; ++j) {
        if (j == my_row) continue;
        Word* dst = m.row(j);
        if (dst[cw] & cm) {
          for (std::size_t k = cw; k < stride; ++k) dst[k] ^= src[k];
          if (want_transform) {
            Word* td = t.row(j);
            for (std::size_t k = 0; k < tstride; ++k) td[k] ^= tsrc[k];
          }
        }
      }  // implicit barrier
      if (my_done) break;
    }
  }

  e.rank = r;
  e.mat = std::move(m);
  if (want_transform) {
    e.transform = std::move(t);
    e.has_transform = true;
  }
  return e;
}

std::size_t gf2_rank(const BitMat& m) { return echelonize(m, false, false, true).rank; }

std::size_t gf2_rank_serial(const BitMat& m) {
  return echelonize(m, false, false, false).rank;
}

std::vector<BitVec> kernel_basis(const BitMat& m) {
  Echelon e = echelonize(m, false, true, true);
  const std::size_t cols = m.cols();
  std::vector<BitVec> basis;
  for (std::size_t c = 0; c < cols; ++c) {
    if (e.col_to_row[c] >= 0) continue;
    BitVec v(cols);
    v.set(c, true);
    // Each pivot row with a 1 in this free column contributes its pivot.
    for (std::size_t r = 0; r < e.rank; ++r) {
      if (e.mat.get(r, c)) v.set(e.pivot_cols[r], true);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<BitVec> solve_linear(const BitMat& m, const BitVec& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve_linear: length mismatch");
  // Augment b as an extra column and reduce.
  BitMat aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const Word* src = m.row(r);
    Word* dst = aug.row(r);
    for (std::size_t i = 0; i < m.stride(); ++i) dst[i] = src[i];
    aug.set(r, m.cols(), b.get(r));
  }
  Echelon e = echelonize(std::move(aug), false, true, true);
  BitVec x(m.cols());
  for (std::size_t r = 0; r < e.rank; ++r) {
    std::size_t pc = static_cast<std::size_t>(e.pivot_cols[r]);
    if (pc == m.cols()) return std::nullopt;  // pivot in the b column
    x.set(pc, e.mat.get(r, m.cols()));
  }
  return x;
}

RowSpace::RowSpace(const BitMat& rows, bool want_transform)
    : nrows_(rows.rows()), ech_(echelonize(rows, want_transform, true, true)) {}

bool RowSpace::contains(const BitVec& v) const {
  BitVec acc = v;
  int c = acc.first_set();
  while (c >= 0) {
    int r = ech_.col_to_row[c];
    if (r < 0) return false;
    const Word* src = ech_.mat.row(r);
    for (std::size_t i = 0; i < acc.word_count(); ++i) acc.words()[i] ^= src[i];
    c = acc.first_set(c + 1);
  }
  return true;
}

std::optional<BitVec> RowSpace::express(const BitVec& v) const {
  if (!ech_.has_transform) throw std::logic_error("RowSpace built without transform");
  BitVec acc = v;
  BitVec combo(nrows_);
  int c = acc.first_set();
  while (c >= 0) {
    int r = ech_.col_to_row[c];
    if (r < 0) return std::nullopt;
    const Word* src = ech_.mat.row(r);
    for (std::size_t i = 0; i < acc.word_count(); ++i) acc.words()[i] ^= src[i];
    const Word* tr = ech_.transform.row(r);
    for (std::size_t i = 0; i < combo.word_count(); ++i) combo.words()[i] ^= tr[i];
    c = acc.first_set(c + 1);
  }
  return combo;
}

BitMat symplectic_form(std::size_t m) {
  BitMat l(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    l.set(i, m + i, true);
    l.set(m + i, i, true);
  }
  return l;
}

BitMat realize_commutation(const BitMat& omega) {
  const std::size_t n = omega.rows();
  if (omega.cols() != n) throw std::invalid_argument("realize_commutation: not square");
  for (std::size_t i = 0; i < n; ++i) {
    if (omega.get(i, i)) throw std::invalid_argument("realize_commutation: nonzero diagonal");
    for (std::size_t j = 0; j < n; ++j)
      if (omega.get(i, j) != omega.get(j, i))
        throw std::invalid_argument("realize_commutation: not symmetric");
  }

  // C rows hold the working vectors in the original basis; the form between
  // two of them is row_a * omega * row_b^T.
  BitMat c = BitMat::identity(n);
  auto form = [&](std::size_t a, std::size_t b) {
    bool acc = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!c.get(a, i)) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (c.get(b, j) && omega.get(i, j)) acc = !acc;
    }
    return acc;
  };

  std::vector<bool> paired(n, false);
  std::vector<BitVec> xrows, zrows;
  while (true) {
    std::size_t pi = n, pj = n;
    for (std::size_t i = 0; i < n && pi == n; ++i) {
      if (paired[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (paired[j]) continue;
        if (form(i, j)) { pi = i; pj = j; break; }
      }
    }
    if (pi == n) break;

    BitVec xr(n), zr(n);
    for (std::size_t k = 0; k < n; ++k) {
      xr.set(k, form(k, pj));
      zr.set(k, form(k, pi));
    }
    paired[pi] = paired[pj] = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (paired[k] && k != pi && k != pj) continue;
      if (k == pi || k == pj) continue;
      if (xr.get(k)) c.row_xor(k, pi);
      if (zr.get(k)) c.row_xor(k, pj);
    }
    xrows.push_back(std::move(xr));
    zrows.push_back(std::move(zr));
  }

  // Residual products must all vanish; otherwise the pivot structure was
  // inconsistent with a skew form.
  for (std::size_t i = 0; i < n; ++i) {
    if (paired[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j)
      if (!paired[j] && form(i, j))
        throw std::invalid_argument("realize_commutation: residual form nonzero");
  }

  const std::size_t m = xrows.size();
  BitMat p(2 * m, n);
  for (std::size_t t = 0; t < m; ++t) {
    p.set_row(t, xrows[t]);
    p.set_row(m + t, zrows[t]);
  }
  return p;
}

}  // namespace cubic
