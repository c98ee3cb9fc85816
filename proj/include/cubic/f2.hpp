#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cubic {

using Word = std::uint64_t;
constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

// Fixed-length vector over F2, packed 64 bits per word. Addition is XOR.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_(words_for(n), 0) {}

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i / kWordBits] >> (i % kWordBits)) & 1u; }
  void set(std::size_t i, bool v) {
    Word m = Word(1) << (i % kWordBits);
    if (v) w_[i / kWordBits] |= m; else w_[i / kWordBits] &= ~m;
  }
  void flip(std::size_t i) { w_[i / kWordBits] ^= Word(1) << (i % kWordBits); }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

  bool any() const {
    for (Word w : w_) if (w) return true;
    return false;
  }
  // Index of first set bit at position >= from, or -1.
  int first_set(std::size_t from = 0) const;
  std::size_t popcount() const;
  // Parity of the AND with another vector of the same length.
  bool dot(const BitVec& o) const;

  Word* words() { return w_.data(); }
  const Word* words() const { return w_.data(); }
  std::size_t word_count() const { return w_.size(); }

 private:
  std::size_t n_ = 0;
  std::vector<Word> w_;
};

// Row-major bit-packed matrix over F2.
class BitMat {
 public:
  BitMat() = default;
  BitMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

  static BitMat identity(std::size_t n);
  static BitMat from_rows(const std::vector<BitVec>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t stride() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    Word m = Word(1) << (c % kWordBits);
    Word& w = data_[r * stride_ + c / kWordBits];
    if (v) w |= m; else w &= ~m;
  }
  void flip(std::size_t r, std::size_t c) {
    data_[r * stride_ + c / kWordBits] ^= Word(1) << (c % kWordBits);
  }

  Word* row(std::size_t r) { return data_.data() + r * stride_; }
  const Word* row(std::size_t r) const { return data_.data() + r * stride_; }

  void row_xor(std::size_t dst, std::size_t src) {
    Word* d = row(dst);
    const Word* s = row(src);
    for (std::size_t i = 0; i < stride_; ++i) d[i] ^= s[i];
  }
  void swap_rows(std::size_t a, std::size_t b);
  bool row_any(std::size_t r) const;
  int row_first_set(std::size_t r, std::size_t from = 0) const;

  BitVec get_row(std::size_t r) const;
  void set_row(std::size_t r, const BitVec& v);

  BitMat transposed() const;
  bool operator==(const BitMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
  std::vector<Word> data_;
};

BitMat mat_mul(const BitMat& a, const BitMat& b);

// Row echelon form. Pivoting is deterministic: first nonzero column, lowest
// row index. With `reduced`, entries above pivots are cleared too.
// `transform` (when requested) satisfies mat = transform * input.
struct Echelon {
  BitMat mat;
  BitMat transform;
  bool has_transform = false;
  std::vector<int> pivot_cols;       // per echelon row
  std::vector<int> col_to_row;       // column -> echelon row, or -1
  std::size_t rank = 0;
};

Echelon echelonize(BitMat m, bool want_transform = false, bool reduced = true,
                   bool parallel = true);

std::size_t gf2_rank(const BitMat& m);
// Single-threaded variant of the same elimination; kept as the reference
// implementation for tests and the benchmark.
std::size_t gf2_rank_serial(const BitMat& m);

// Basis of {x : M x = 0}.
std::vector<BitVec> kernel_basis(const BitMat& m);

// Solves M x = b; returns a particular solution or nullopt if inconsistent.
std::optional<BitVec> solve_linear(const BitMat& m, const BitVec& b);

// Cached echelon of a set of rows supporting rank queries and expressing a
// vector as a combination of the original rows.
class RowSpace {
 public:
  RowSpace() = default;
  explicit RowSpace(const BitMat& rows, bool want_transform = true);

  std::size_t rank() const { return ech_.rank; }
  bool contains(const BitVec& v) const;
  // Coefficients x (over the original rows) with sum_i x_i row_i = v.
  std::optional<BitVec> express(const BitVec& v) const;

 private:
  std::size_t nrows_ = 0;
  Echelon ech_;
};

// Standard symplectic form on F2^{2m}: lambda((x|z),(x'|z')) = x.z' + z.x'.
BitMat symplectic_form(std::size_t m);

// Constructive realization of a symmetric zero-diagonal commutation matrix:
// returns P (2m x n over F2, m = rank(omega)/2) whose columns g_k satisfy
// lambda(g_k, g_l) = omega_{kl}. Symplectic Gram-Schmidt: pick the first
// anticommuting pair, read off coordinates, orthogonalize the rest, repeat.
// Throws std::invalid_argument if omega is not symmetric with zero diagonal.
BitMat realize_commutation(const BitMat& omega);

}  // namespace cubic
