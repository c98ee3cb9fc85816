#include "cubic/code.hpp"

#include <map>
#include <stdexcept>

namespace cubic {

const std::array<Site, kNumCorners>& corner_positions() {
  static const std::array<Site, kNumCorners> pos = {{
      {1, 0, 1},  // A
      {1, 1, 1},  // B
      {1, 0, 0},  // C
      {1, 1, 0},  // D
      {0, 1, 0},  // A'
      {0, 0, 0},  // B'
      {0, 1, 1},  // C'
      {0, 0, 1},  // D'
  }};
  return pos;
}

int corner_at(Site offset) {
  if (offset.x < 0 || offset.x > 1 || offset.y < 0 || offset.y > 1 || offset.z < 0 ||
      offset.z > 1)
    return -1;
  for (int c = 0; c < kNumCorners; ++c)
    if (corner_positions()[c] == offset) return c;
  return -1;
}

const char* corner_name(int c) {
  static const char* names[] = {"A", "B", "C", "D", "A'", "B'", "C'", "D'"};
  return names[c];
}

GeneratorSpec css_dual_generator(const GeneratorSpec& gz, int m) {
  if (m != 2) throw std::invalid_argument("css_dual_generator: needs m = 2");
  GeneratorSpec gx;
  for (int c = 0; c < kNumCorners; ++c) {
    unsigned z = z_part(gz.corners[corner_inverse(c)], m);
    unsigned swapped = ((z & 1u) << 1) | ((z >> 1) & 1u);
    gx.corners[c] = make_site_op(swapped, 0, m);
  }
  return gx;
}

CubicCode make_css_code(const GeneratorSpec& gz, int m, std::string name) {
  CubicCode code;
  code.kind = CodeKind::CSS;
  code.m = m;
  code.gen[0] = gz;
  code.gen[1] = css_dual_generator(gz, m);
  code.name = std::move(name);
  return code;
}

CubicCode make_noncss_code(const GeneratorSpec& g, int m, std::string name) {
  CubicCode code;
  code.kind = CodeKind::NonCSS;
  code.m = m;
  code.gen[0] = g;
  for (int c = 0; c < kNumCorners; ++c)
    code.gen[1].corners[c] = g.corners[corner_inverse(c)];
  code.name = std::move(name);
  return code;
}

namespace {

const std::array<std::array<std::string, kNumCorners>, 18>& catalog_labels() {
  static const std::array<std::array<std::string, kNumCorners>, 18> table = {{
      {"XX", "ZI", "ZY", "XY", "ZZ", "II", "XZ", "ZX"},  // 0 (non-CSS)
      {"ZI", "ZZ", "IZ", "ZI", "IZ", "II", "ZI", "IZ"},  // 1
      {"IZ", "ZZ", "ZI", "ZI", "ZI", "ZZ", "IZ", "ZI"},  // 2
      {"IZ", "ZZ", "ZZ", "ZI", "ZZ", "II", "IZ", "IZ"},  // 3
      {"IZ", "ZZ", "ZI", "ZI", "IZ", "II", "IZ", "ZI"},  // 4
      {"ZI", "ZZ", "II", "ZZ", "ZI", "II", "IZ", "IZ"},  // 5
      {"ZI", "II", "ZI", "ZZ", "IZ", "ZZ", "II", "IZ"},  // 6
      {"ZI", "ZZ", "ZI", "IZ", "IZ", "II", "II", "ZZ"},  // 7
      {"ZI", "ZI", "IZ", "ZZ", "IZ", "II", "IZ", "ZI"},  // 8
      {"ZI", "IZ", "ZZ", "ZZ", "IZ", "ZZ", "II", "IZ"},  // 9
      {"ZI", "IZ", "ZI", "ZZ", "IZ", "ZZ", "ZI", "ZI"},  // 10
      {"ZI", "ZZ", "II", "IZ", "ZI", "II", "IZ", "ZZ"},  // 11
      {"ZI", "IZ", "ZZ", "ZZ", "ZI", "II", "II", "IZ"},  // 12
      {"ZI", "ZZ", "IZ", "ZI", "IZ", "II", "II", "ZZ"},  // 13
      {"ZI", "IZ", "ZZ", "ZZ", "IZ", "II", "ZZ", "IZ"},  // 14
      {"ZI", "IZ", "II", "ZZ", "IZ", "ZZ", "II", "ZI"},  // 15
      {"ZI", "ZI", "II", "IZ", "IZ", "ZZ", "II", "ZZ"},  // 16
      {"ZI", "ZZ", "IZ", "ZI", "IZ", "ZI", "ZI", "ZZ"},  // 17
  }};
  return table;
}

GeneratorSpec spec_from_labels(const std::array<std::string, kNumCorners>& labels) {
  GeneratorSpec g;
  for (int c = 0; c < kNumCorners; ++c) g.corners[c] = site_op_from_string(labels[c], 2);
  return g;
}

}  // namespace

int catalog_size() { return 18; }

const std::array<std::string, kNumCorners>& catalog_corner_labels(int index) {
  return catalog_labels().at(index);
}

const CubicCode& catalog_code(int index) {
  static std::map<int, CubicCode> cache;
  auto it = cache.find(index);
  if (it != cache.end()) return it->second;
  GeneratorSpec g = spec_from_labels(catalog_labels().at(index));
  CubicCode code = index == 0 ? make_noncss_code(g, 2, "code0")
                              : make_css_code(g, 2, "code" + std::to_string(index));
  return cache.emplace(index, std::move(code)).first->second;
}

SiteOp generator_action(const CubicCode& code, int type, Site p, Site s, int L) {
  Site d = s - p;
  if (L > 0) d = wrap(d, L);
  int c = corner_at(d);
  return c < 0 ? SiteOp{} : code.gen[type].corners[c];
}

bool commutes_with_generator_bit(const PauliOp& o, const CubicCode& code, int type,
                                 Site p, int L) {
  bool acc = false;
  for (int c = 0; c < kNumCorners; ++c) {
    SiteOp g = code.gen[type].corners[c];
    if (g.bits == 0) continue;
    Site s = p + corner_positions()[c];
    if (L > 0) s = wrap(s, L);
    if (site_commutes_bit(g, o.at(s), code.m)) acc = !acc;
  }
  return acc;
}

PauliOp generator_operator(const CubicCode& code, int type, Site p, int L) {
  PauliOp op(code.m);
  for (int c = 0; c < kNumCorners; ++c) {
    SiteOp g = code.gen[type].corners[c];
    if (g.bits == 0) continue;
    Site s = p + corner_positions()[c];
    if (L > 0) s = wrap(s, L);
    op.mul_site(s, g);
  }
  return op;
}

bool sites_adjacent(const CubicCode& code, Site d) {
  if (d.x < -1 || d.x > 1 || d.y < -1 || d.y > 1 || d.z < -1 || d.z > 1) return false;
  for (int type = 0; type < 2; ++type) {
    for (int c = 0; c < kNumCorners; ++c) {
      if (code.gen[type].corners[c].bits == 0) continue;
      int c2 = corner_at(corner_positions()[c] + d);
      if (c2 >= 0 && code.gen[type].corners[c2].bits != 0) return true;
    }
  }
  return false;
}

std::vector<PauliOp> connected_components(const PauliOp& o, const CubicCode& code,
                                          int L) {
  std::vector<Site> sites;
  sites.reserve(o.support().size());
  for (const auto& [s, op] : o.support()) sites.push_back(s);

  std::vector<int> parent(sites.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };

  std::map<Site, int> index;
  for (std::size_t i = 0; i < sites.size(); ++i) index[sites[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          Site d{dx, dy, dz};
          Site n = sites[i] + d;
          if (L > 0) n = wrap(n, L);
          auto it = index.find(n);
          if (it == index.end()) continue;
          if (!sites_adjacent(code, d)) continue;
          int a = find(static_cast<int>(i)), b = find(it->second);
          if (a != b) parent[a] = b;
        }
  }

  std::map<int, PauliOp> comps;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    int root = find(static_cast<int>(i));
    auto [it, fresh] = comps.try_emplace(root, PauliOp(o.m()));
    it->second.set(sites[i], o.at(sites[i]));
  }
  std::vector<PauliOp> out;
  out.reserve(comps.size());
  for (auto& [root, comp] : comps) out.push_back(std::move(comp));
  return out;
}

BitMat omega_noncss(const GeneratorSpec& g, int m) {
  BitMat w(kNumCorners, kNumCorners);
  for (int i = 0; i < kNumCorners; ++i)
    for (int j = 0; j < kNumCorners; ++j)
      w.set(i, j, site_commutes_bit(g.corners[i], g.corners[j], m));
  return w;
}

BitMat omega_css(const GeneratorSpec& gz, const GeneratorSpec& gx, int m) {
  BitMat w(kNumCorners, kNumCorners);
  for (int i = 0; i < kNumCorners; ++i)
    for (int j = 0; j < kNumCorners; ++j)
      w.set(i, j, site_commutes_bit(gz.corners[i], gx.corners[j], m));
  return w;
}

}  // namespace cubic
