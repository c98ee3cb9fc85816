#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cubic/f2.hpp"
#include "cubic/pauli.hpp"

namespace cubic {

// Corner labels in the order used throughout: A B C D A' B' C' D'.
enum Corner : int { cA = 0, cB, cC, cD, cAp, cBp, cCp, cDp };
constexpr int kNumCorners = 8;

// Positions of the corner labels inside the generator cube. Fixed by the
// unit-cube frame in which the corner data of the code catalog is written:
// B' sits at the origin, B at (1,1,1), primed corners body-opposite.
const std::array<Site, kNumCorners>& corner_positions();
// Corner label at a cube position in {0,1}^3, or -1.
int corner_at(Site offset);
inline int corner_inverse(int c) { return c ^ 4; }
const char* corner_name(int c);

enum class CodeKind { NonCSS, CSS };

struct GeneratorSpec {
  std::array<SiteOp, kNumCorners> corners{};
};

// A cubic code: two generator types acting on the corners of a unit cube.
// CSS: gen[0] is the Z-type generator, gen[1] the X-type one.
// Non-CSS: gen[0] is the primary generator, gen[1] its spatial inversion
// (corner c of gen[1] = corner inv(c) of gen[0]).
struct CubicCode {
  CodeKind kind = CodeKind::CSS;
  int m = 2;
  std::array<GeneratorSpec, 2> gen;
  std::string name;

  int num_types() const { return 2; }
};

// The X-type partner of a pure-Z generator: x-vector at corner c is the
// off-diagonal swap of the z-vector at the body-opposite corner.
GeneratorSpec css_dual_generator(const GeneratorSpec& gz, int m);

CubicCode make_css_code(const GeneratorSpec& gz, int m, std::string name);
CubicCode make_noncss_code(const GeneratorSpec& g, int m, std::string name);

// Catalog of the 18 cubic codes (index 0 = the non-CSS one). Corner data is
// stored as two-character labels in A..D' order.
const CubicCode& catalog_code(int index);
int catalog_size();
const std::array<std::string, kNumCorners>& catalog_corner_labels(int index);

// Action of generator placement (type, p) on site s; L = 0 means infinite.
SiteOp generator_action(const CubicCode& code, int type, Site p, Site s, int L);

// Symplectic product of O with the generator placed at p.
bool commutes_with_generator_bit(const PauliOp& o, const CubicCode& code, int type,
                                 Site p, int L);

// The placement as a finite Pauli operator.
PauliOp generator_operator(const CubicCode& code, int type, Site p, int L);

// Partition of supp(O) into components joined by generator placements acting
// nontrivially on consecutive pair members.
std::vector<PauliOp> connected_components(const PauliOp& o, const CubicCode& code,
                                          int L);

// True if two sites (offset d = s2 - s1) can be co-acted by one placement.
bool sites_adjacent(const CubicCode& code, Site d);

// Commutation matrices from realized corner data.
BitMat omega_noncss(const GeneratorSpec& g, int m);        // 8x8 symmetric
BitMat omega_css(const GeneratorSpec& gz, const GeneratorSpec& gx, int m);  // 8x8 Z rows x X cols

}  // namespace cubic
