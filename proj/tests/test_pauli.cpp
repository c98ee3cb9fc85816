#include <random>

#include "cubic/pauli.hpp"
#include "doctest.h"

using namespace cubic;

namespace {

// 4x4 complex-free anticommutation oracle via symplectic components of the
// dense 2-qubit operator table.
bool dense_anticommute(SiteOp a, SiteOp b) {
  // Two multi-qubit Paulis anticommute iff an odd number of qubit positions
  // anticommute; per qubit X^x Z^z vs X^x' Z^z' anticommute iff xz' + zx' = 1.
  int total = 0;
  for (int q = 0; q < 2; ++q) {
    int xa = (x_part(a, 2) >> q) & 1, za = (z_part(a, 2) >> q) & 1;
    int xb = (x_part(b, 2) >> q) & 1, zb = (z_part(b, 2) >> q) & 1;
    total ^= (xa & zb) ^ (za & xb);
  }
  return total;
}

}  // namespace

TEST_CASE("single qubit commutation: X vs Z anticommute") {
  SiteOp x = site_op_from_string("X", 1);
  SiteOp z = site_op_from_string("Z", 1);
  CHECK(site_commutes_bit(x, z, 1) == 1);
  CHECK(site_commutes_bit(x, x, 1) == 0);
}

TEST_CASE("XI and IZ commute") {
  SiteOp xi = site_op_from_string("XI", 2);
  SiteOp iz = site_op_from_string("IZ", 2);
  CHECK(site_commutes_bit(xi, iz, 2) == 0);
}

TEST_CASE("exhaustive 2-qubit commutation table matches the dense oracle") {
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned b = 0; b < 16; ++b) {
      SiteOp sa{static_cast<std::uint8_t>(a)}, sb{static_cast<std::uint8_t>(b)};
      CHECK(site_commutes_bit(sa, sb, 2) == dense_anticommute(sa, sb));
    }
}

TEST_CASE("site operator labels round-trip") {
  for (unsigned bits = 0; bits < 16; ++bits) {
    SiteOp op{static_cast<std::uint8_t>(bits)};
    CHECK(site_op_from_string(site_op_to_string(op, 2), 2).bits == op.bits);
  }
  CHECK(site_op_to_string(site_op_from_string("ZI", 2), 2) == "ZI");
  CHECK_THROWS(site_op_from_string("Q", 1));
}

TEST_CASE("multiply: self-inverse and identity") {
  PauliOp a(2);
  a.set({0, 0, 0}, site_op_from_string("XZ", 2));
  a.set({1, 2, 3}, site_op_from_string("ZI", 2));
  CHECK(multiply(a, a).is_identity());
  PauliOp id(2);
  CHECK(multiply(a, id) == a);
}

TEST_CASE("multiply matches dense map oracle on random pairs") {
  std::mt19937 rng(55);
  std::uniform_int_distribution<int> coord(0, 3), bits(0, 15);
  for (int trial = 0; trial < 200; ++trial) {
    PauliOp a(2), b(2);
    std::map<Site, unsigned> dense;
    for (int i = 0; i < 6; ++i) {
      Site s{coord(rng), coord(rng), coord(rng)};
      unsigned ab = bits(rng), bb = bits(rng);
      a.mul_site(s, SiteOp{static_cast<std::uint8_t>(ab)});
      b.mul_site(s, SiteOp{static_cast<std::uint8_t>(bb)});
      dense[s] ^= ab ^ bb;
    }
    PauliOp prod = multiply(a, b);
    for (const auto& [s, v] : dense) CHECK(prod.at(s).bits == (v & 0xf));
    for (const auto& [s, op] : prod.support()) CHECK(op.bits == (dense[s] & 0xf));
  }
}

TEST_CASE("phase tracking: (XZ)(XZ) = -I and XX = +I") {
  PauliOp a(1), b(1);
  a.set({0, 0, 0}, site_op_from_string("Y", 1));  // stored as X^1 Z^1
  b.set({0, 0, 0}, site_op_from_string("Y", 1));
  PauliOp p = multiply_with_phase(a, b);
  CHECK(p.is_identity());
  CHECK(p.phase_exp() == 2);  // -1

  PauliOp x1(1), x2(1);
  x1.set({0, 0, 0}, site_op_from_string("X", 1));
  x2.set({0, 0, 0}, site_op_from_string("X", 1));
  PauliOp q = multiply_with_phase(x1, x2);
  CHECK(q.is_identity());
  CHECK(q.phase_exp() == 0);
}

TEST_CASE("multiply_with_phase agrees with multiply after erasing phase") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> coord(0, 2), bits(0, 15);
  for (int trial = 0; trial < 100; ++trial) {
    PauliOp a(2), b(2);
    for (int i = 0; i < 4; ++i) {
      a.mul_site({coord(rng), coord(rng), coord(rng)},
                 SiteOp{static_cast<std::uint8_t>(bits(rng))});
      b.mul_site({coord(rng), coord(rng), coord(rng)},
                 SiteOp{static_cast<std::uint8_t>(bits(rng))});
    }
    PauliOp p1 = multiply(a, b);
    PauliOp p2 = multiply_with_phase(a, b);
    p2.set_phase_exp(0);
    CHECK(p1 == p2);
  }
}

TEST_CASE("line and plane instantiation on the torus") {
  LineOp line{site_op_from_string("ZZ", 2), {0, 0, 1}, {1, 2, 0}};
  PauliOp lop = instantiate_line(line, 2, 5);
  CHECK(lop.weight() == 5);
  for (int z = 0; z < 5; ++z) CHECK(lop.at({1, 2, z}).bits == line.op.bits);

  PlaneOp plane{site_op_from_string("IX", 2), {1, 0, 0}, {2, 0, 0}};
  PauliOp pop = instantiate_plane(plane, 2, 4);
  CHECK(pop.weight() == 16);
  for (int y = 0; y < 4; ++y)
    for (int z = 0; z < 4; ++z) CHECK(pop.at({2, y, z}).bits == plane.op.bits);
}

TEST_CASE("operator spec parser handles the catalog notations") {
  OperatorSpec s1 = parse_operator_spec("ZZ[z]_(0,0,0) ZI[z]_(1,0,0)", 2);
  CHECK(s1.lines.size() == 2);
  CHECK(s1.lines[0].dir == Site{0, 0, 1});
  CHECK(s1.lines[1].base == Site{1, 0, 0});

  OperatorSpec s2 = parse_operator_spec("sigma[1,-1,0]_ZZ(0,0,0)", 2);
  REQUIRE(s2.planes.size() == 1);
  CHECK(s2.planes[0].normal == Site{1, -1, 0});

  OperatorSpec s3 = parse_operator_spec("ZZ[1,0,-1]_(0,0,1)", 2);
  REQUIRE(s3.lines.size() == 1);
  CHECK(s3.lines[0].dir == Site{1, 0, -1});
  CHECK(s3.lines[0].base == Site{0, 0, 1});

  OperatorSpec s4 = parse_operator_spec("XY(1,2,3)", 2);
  REQUIRE(s4.sites.size() == 1);
  CHECK(s4.sites[0].first == Site{1, 2, 3});

  CHECK_THROWS_AS(parse_operator_spec("ZZ[w]_(0,0,0)", 2), ParseError);
  CHECK_THROWS_AS(parse_operator_spec("Z", 2), ParseError);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_operator_spec("ZZ[z]_(0,0,0) Q", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.pos >= 14);
  }
}

TEST_CASE("multiply is associative and commutative") {
  std::mt19937 rng(808);
  std::uniform_int_distribution<int> coord(0, 2), bits(0, 15);
  for (int trial = 0; trial < 50; ++trial) {
    PauliOp a(2), b(2), c(2);
    for (int i = 0; i < 3; ++i) {
      a.mul_site({coord(rng), coord(rng), coord(rng)}, SiteOp{static_cast<std::uint8_t>(bits(rng))});
      b.mul_site({coord(rng), coord(rng), coord(rng)}, SiteOp{static_cast<std::uint8_t>(bits(rng))});
      c.mul_site({coord(rng), coord(rng), coord(rng)}, SiteOp{static_cast<std::uint8_t>(bits(rng))});
    }
    CHECK(multiply(a, b) == multiply(b, a));
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
  }
}
