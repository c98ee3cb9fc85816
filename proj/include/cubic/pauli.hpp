#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubic {

struct Site {
  int x = 0, y = 0, z = 0;
  auto operator<=>(const Site&) const = default;
};

inline Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Site operator*(int k, Site a) { return {k * a.x, k * a.y, k * a.z}; }

inline int mod(int a, int l) {
  int r = a % l;
  return r < 0 ? r + l : r;
}
inline Site wrap(Site s, int l) {
  return l > 0 ? Site{mod(s.x, l), mod(s.y, l), mod(s.z, l)} : s;
}

// Single-site operator on m qubits in the abelianized Pauli group: bits
// 0..m-1 are the X parts, bits m..2m-1 the Z parts. Zero means identity.
struct SiteOp {
  std::uint8_t bits = 0;
  bool operator==(const SiteOp&) const = default;
};

inline unsigned x_part(SiteOp a, int m) { return a.bits & ((1u << m) - 1); }
inline unsigned z_part(SiteOp a, int m) { return a.bits >> m; }
inline SiteOp make_site_op(unsigned x, unsigned z, int m) {
  return SiteOp{static_cast<std::uint8_t>((x & ((1u << m) - 1)) | (z << m))};
}

// lambda(a, b): 1 iff a and b anticommute.
inline bool site_commutes_bit(SiteOp a, SiteOp b, int m) {
  unsigned t = (x_part(a, m) & z_part(b, m)) ^ (z_part(a, m) & x_part(b, m));
  return __builtin_popcount(t) & 1u;
}

// Two-character labels, one char per qubit, first character = qubit 1.
std::string site_op_to_string(SiteOp a, int m);
SiteOp site_op_from_string(const std::string& s, int m);

// Finite-support Pauli operator. Only nonzero site operators are stored.
// Phase is the exponent of i (mod 4); products of X^x Z^z forms only ever
// produce even exponents, but the full group is representable.
class PauliOp {
 public:
  explicit PauliOp(int m = 2) : m_(m) {}

  int m() const { return m_; }
  int phase_exp() const { return phase_; }
  void set_phase_exp(int e) { phase_ = ((e % 4) + 4) % 4; }

  SiteOp at(Site s) const {
    auto it = sup_.find(s);
    return it == sup_.end() ? SiteOp{} : it->second;
  }
  void set(Site s, SiteOp op) {
    if (op.bits == 0) sup_.erase(s); else sup_[s] = op;
  }
  void mul_site(Site s, SiteOp op) {
    if (op.bits == 0) return;
    auto it = sup_.find(s);
    if (it == sup_.end()) { sup_[s] = op; return; }
    it->second.bits ^= op.bits;
    if (it->second.bits == 0) sup_.erase(it);
  }
  // Multiplies op into site s accumulating the (-1)^{z.x'} transposition
  // phase per qubit (this * op order).
  void mul_site_phased(Site s, SiteOp op);

  const std::map<Site, SiteOp>& support() const { return sup_; }
  std::size_t weight() const { return sup_.size(); }
  bool is_identity() const { return sup_.empty(); }

  PauliOp reduced(int l) const;  // coordinates taken mod l, supports merged

  bool operator==(const PauliOp& o) const {
    return m_ == o.m_ && sup_ == o.sup_;
  }

 private:
  int m_;
  int phase_ = 0;
  std::map<Site, SiteOp> sup_;
};

// Abelianized product: sitewise XOR, phase dropped.
PauliOp multiply(const PauliOp& a, const PauliOp& b);
// Phase-tracked product in the X^x Z^z convention.
PauliOp multiply_with_phase(const PauliOp& a, const PauliOp& b);
// 1 iff a and b anticommute (sitewise symplectic product).
bool anticommute(const PauliOp& a, const PauliOp& b);

// E repeated along the line p + n*v.
struct LineOp {
  SiteOp op;
  Site dir;
  Site base;
};

// E repeated over the plane {s : normal.(s - anchor) = 0 (mod L)}.
struct PlaneOp {
  SiteOp op;
  Site normal;
  Site anchor;
};

PauliOp instantiate_line(const LineOp& l, int m, int lat);
PauliOp instantiate_plane(const PlaneOp& p, int m, int lat);

// Textual operator expressions: products of
//   E[v]_p          line term, e.g. ZZ[z]_(0,0,0) or ZZ[1,0,-1]_(0,1,0)
//   sigma[a,b,c]_E(p)  plane term, e.g. sigma[1,-1,0]_ZZ(0,0,0)
//   E(p)            single-site term
// separated by whitespace or '*'. Direction names x,y,z denote unit vectors.
struct OperatorSpec {
  std::vector<LineOp> lines;
  std::vector<PlaneOp> planes;
  std::vector<std::pair<Site, SiteOp>> sites;
};

struct ParseError : std::runtime_error {
  std::size_t pos;
  ParseError(const std::string& msg, std::size_t p)
      : std::runtime_error(msg + " at position " + std::to_string(p)), pos(p) {}
};

OperatorSpec parse_operator_spec(const std::string& text, int m);
PauliOp instantiate(const OperatorSpec& spec, int m, int lat);
std::string line_to_string(const LineOp& l, int m);
std::string plane_to_string(const PlaneOp& p, int m);

}  // namespace cubic
