#include "cubic/pauli.hpp"

#include <cctype>
#include <cstring>

namespace cubic {

namespace {
constexpr char kPauliChar[4] = {'I', 'X', 'Z', 'Y'};  // index = x + 2z
}  // namespace

std::string site_op_to_string(SiteOp a, int m) {
  std::string s;
  for (int q = 0; q < m; ++q) {
    unsigned x = (x_part(a, m) >> q) & 1u;
    unsigned z = (z_part(a, m) >> q) & 1u;
    s += kPauliChar[x + 2 * z];
  }
  return s;
}

SiteOp site_op_from_string(const std::string& s, int m) {
  if (static_cast<int>(s.size()) != m)
    throw std::invalid_argument("site operator '" + s + "' needs " + std::to_string(m) +
                                " characters");
  unsigned x = 0, z = 0;
  for (int q = 0; q < m; ++q) {
    switch (std::toupper(s[q])) {
      case 'I': break;
      case 'X': x |= 1u << q; break;
      case 'Z': z |= 1u << q; break;
      case 'Y': x |= 1u << q; z |= 1u << q; break;
      default:
        throw std::invalid_argument("bad Pauli character '" + std::string(1, s[q]) + "'");
    }
  }
  return make_site_op(x, z, m);
}

void PauliOp::mul_site_phased(Site s, SiteOp op) {
  SiteOp cur = at(s);
  // Z part of the current operator moves past the X part of the incoming one.
  unsigned transposed = z_part(cur, m_) & x_part(op, m_);
  phase_ = (phase_ + 2 * (__builtin_popcount(transposed) & 1)) % 4;
  mul_site(s, op);
}

PauliOp PauliOp::reduced(int l) const {
  PauliOp r(m_);
  r.phase_ = phase_;
  for (const auto& [s, op] : sup_) r.mul_site(wrap(s, l), op);
  return r;
}

PauliOp multiply(const PauliOp& a, const PauliOp& b) {
  if (a.m() != b.m()) throw std::invalid_argument("multiply: mismatched m");
  PauliOp r = a;
  r.set_phase_exp(0);
  for (const auto& [s, op] : b.support()) r.mul_site(s, op);
  return r;
}

PauliOp multiply_with_phase(const PauliOp& a, const PauliOp& b) {
  if (a.m() != b.m()) throw std::invalid_argument("multiply: mismatched m");
  PauliOp r = a;
  for (const auto& [s, op] : b.support()) r.mul_site_phased(s, op);
  r.set_phase_exp(r.phase_exp() + b.phase_exp());
  return r;
}

bool anticommute(const PauliOp& a, const PauliOp& b) {
  if (a.m() != b.m()) throw std::invalid_argument("anticommute: mismatched m");
  bool acc = false;
  const auto& sa = a.support();
  const auto& sb = b.support();
  const auto& small = sa.size() <= sb.size() ? sa : sb;
  const PauliOp& other = sa.size() <= sb.size() ? b : a;
  for (const auto& [s, op] : small)
    if (site_commutes_bit(op, other.at(s), a.m())) acc = !acc;
  return acc;
}

PauliOp instantiate_line(const LineOp& l, int m, int lat) {
  PauliOp r(m);
  Site s = wrap(l.base, lat);
  for (int n = 0; n < lat; ++n) {
    r.mul_site(s, l.op);
    s = wrap(s + l.dir, lat);
    if (s == wrap(l.base, lat)) break;
  }
  return r;
}

PauliOp instantiate_plane(const PlaneOp& p, int m, int lat) {
  PauliOp r(m);
  const int target = mod(p.normal.x * p.anchor.x + p.normal.y * p.anchor.y +
                             p.normal.z * p.anchor.z,
                         lat);
  for (int x = 0; x < lat; ++x)
    for (int y = 0; y < lat; ++y)
      for (int z = 0; z < lat; ++z)
        if (mod(p.normal.x * x + p.normal.y * y + p.normal.z * z, lat) == target)
          r.mul_site({x, y, z}, p.op);
  return r;
}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '*'))
      ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  bool eat(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }

  int integer() {
    std::size_t start = pos;
    int sign = 1;
    if (eat('-')) sign = -1;
    else eat('+');
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw ParseError("expected integer", start);
    int v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      v = v * 10 + (text[pos++] - '0');
    return sign * v;
  }

  // Triple of integers, with or without commas: (0,1,-1), (011), 011.
  Site triple() {
    bool paren = eat('(');
    Site s;
    std::size_t start = pos;
    bool commas = text.find(',', pos) != std::string::npos &&
                  (!paren || text.find(',', pos) < text.find(')', pos));
    if (commas) {
      s.x = integer();
      expect(',');
      s.y = integer();
      expect(',');
      s.z = integer();
    } else {
      // Compact digit form, one digit with optional sign per coordinate.
      auto digit = [&]() {
        int sign = 1;
        if (eat('-')) sign = -1;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
          throw ParseError("expected digit", start);
        return sign * (text[pos++] - '0');
      };
      s.x = digit();
      s.y = digit();
      s.z = digit();
    }
    if (paren) expect(')');
    return s;
  }

  Site direction() {
    skip_ws();
    if (peek() == 'x' || peek() == 'X') { ++pos; return {1, 0, 0}; }
    if (peek() == 'y' || peek() == 'Y') { ++pos; return {0, 1, 0}; }
    if (peek() == 'z' || peek() == 'Z') { ++pos; return {0, 0, 1}; }
    return triple();
  }

  std::string pauli_label(int m) {
    skip_ws();
    std::size_t start = pos;
    std::string s;
    while (pos < text.size() && std::strchr("IXYZixyz", text[pos]) != nullptr &&
           static_cast<int>(s.size()) < m) {
      s += text[pos++];
    }
    if (static_cast<int>(s.size()) != m)
      throw ParseError("expected " + std::to_string(m) + "-character Pauli label", start);
    return s;
  }
};

}  // namespace

OperatorSpec parse_operator_spec(const std::string& text, int m) {
  OperatorSpec spec;
  Cursor cur{text};
  while (!cur.done()) {
    if (text.compare(cur.pos, 5, "sigma") == 0) {
      cur.pos += 5;
      cur.expect('[');
      Site n = cur.triple();
      cur.expect(']');
      cur.expect('_');
      SiteOp e = site_op_from_string(cur.pauli_label(m), m);
      Site anchor{0, 0, 0};
      if (cur.peek() == '(') anchor = cur.triple();
      spec.planes.push_back({e, n, anchor});
      continue;
    }
    SiteOp e = site_op_from_string(cur.pauli_label(m), m);
    cur.skip_ws();
    if (cur.eat('[')) {
      Site d = cur.direction();
      cur.expect(']');
      cur.expect('_');
      Site base = cur.triple();
      spec.lines.push_back({e, d, base});
    } else if (cur.peek() == '(') {
      Site s = cur.triple();
      spec.sites.emplace_back(s, e);
    } else {
      throw ParseError("expected '[' or '(' after Pauli label", cur.pos);
    }
  }
  return spec;
}

PauliOp instantiate(const OperatorSpec& spec, int m, int lat) {
  PauliOp r(m);
  for (const auto& l : spec.lines) r = multiply(r, instantiate_line(l, m, lat));
  for (const auto& p : spec.planes) r = multiply(r, instantiate_plane(p, m, lat));
  for (const auto& [s, op] : spec.sites) r.mul_site(wrap(s, lat), op);
  return r;
}

namespace {
std::string triple_to_string(Site s) {
  return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + "," +
         std::to_string(s.z) + ")";
}
std::string dir_to_string(Site d) {
  if (d == Site{1, 0, 0}) return "x";
  if (d == Site{0, 1, 0}) return "y";
  if (d == Site{0, 0, 1}) return "z";
  return std::to_string(d.x) + "," + std::to_string(d.y) + "," + std::to_string(d.z);
}
}  // namespace

std::string line_to_string(const LineOp& l, int m) {
  return site_op_to_string(l.op, m) + "[" + dir_to_string(l.dir) + "]_" +
         triple_to_string(l.base);
}

std::string plane_to_string(const PlaneOp& p, int m) {
  return "sigma[" + dir_to_string(p.normal) + "]_" + site_op_to_string(p.op, m) +
         triple_to_string(p.anchor);
}

}  // namespace cubic
