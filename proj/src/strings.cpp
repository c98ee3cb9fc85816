#include "cubic/strings.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace cubic {

Box cube_box(Site lo, int w) { return {lo, {lo.x + w, lo.y + w, lo.z + w}}; }

Box bounding_box(const PauliOp& o) {
  if (o.is_identity()) return {{0, 0, 0}, {0, 0, 0}};
  Site lo = o.support().begin()->first, hi = lo;
  for (const auto& [s, op] : o.support()) {
    lo.x = std::min(lo.x, s.x); lo.y = std::min(lo.y, s.y); lo.z = std::min(lo.z, s.z);
    hi.x = std::max(hi.x, s.x); hi.y = std::max(hi.y, s.y); hi.z = std::max(hi.z, s.z);
  }
  return {lo, {hi.x + 1, hi.y + 1, hi.z + 1}};
}

Box box_union(Box a, Box b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y), std::min(a.lo.z, b.lo.z)},
          {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y), std::max(a.hi.z, b.hi.z)}};
}

bool boxes_intersect(Box a, Box b) {
  return a.lo.x < b.hi.x && b.lo.x < a.hi.x && a.lo.y < b.hi.y && b.lo.y < a.hi.y &&
         a.lo.z < b.hi.z && b.lo.z < a.hi.z;
}

namespace {

bool acts_trivially_on(const CubicCode& code, int type, Site p, Box box) {
  for (int c = 0; c < kNumCorners; ++c) {
    if (code.gen[type].corners[c].bits == 0) continue;
    if (box.contains(p + corner_positions()[c])) return false;
  }
  return true;
}

std::vector<Site> placement_action_sites(const CubicCode& code, int type, Site p) {
  std::vector<Site> out;
  for (int c = 0; c < kNumCorners; ++c)
    if (code.gen[type].corners[c].bits != 0) out.push_back(p + corner_positions()[c]);
  return out;
}

}  // namespace

bool is_segment(const PauliOp& o, Box a1, Box a2, const CubicCode& code) {
  std::set<std::pair<int, Site>> placements;
  for (const auto& [s, op] : o.support())
    for (int c = 0; c < kNumCorners; ++c) {
      Site p = s - corner_positions()[c];
      placements.insert({0, p});
      placements.insert({1, p});
    }
  for (const auto& [type, p] : placements) {
    if (!acts_trivially_on(code, type, p, a1)) continue;
    if (!acts_trivially_on(code, type, p, a2)) continue;
    if (commutes_with_generator_bit(o, code, type, p, 0)) return false;
  }
  return true;
}

bool segment_connected(const PauliOp& o, Box a1, Box a2, const CubicCode& code) {
  // Direct hop between anchor sites with no support in between.
  for (int x1 = a1.lo.x; x1 < a1.hi.x; ++x1)
    for (int y1 = a1.lo.y; y1 < a1.hi.y; ++y1)
      for (int z1 = a1.lo.z; z1 < a1.hi.z; ++z1)
        for (int dx = -1; dx <= 1; ++dx)
          for (int dy = -1; dy <= 1; ++dy)
            for (int dz = -1; dz <= 1; ++dz) {
              Site p1{x1, y1, z1};
              Site p2 = p1 + Site{dx, dy, dz};
              if (a2.contains(p2) && sites_adjacent(code, {dx, dy, dz})) return true;
            }

  auto comps = connected_components(o, code, 0);
  auto touches_or_adjacent = [&](const PauliOp& comp, Box box) {
    for (const auto& [s, op] : comp.support()) {
      if (box.contains(s)) return true;
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dz = -1; dz <= 1; ++dz) {
            Site p = s + Site{dx, dy, dz};
            if (box.contains(p) && sites_adjacent(code, {dx, dy, dz})) return true;
          }
    }
    return false;
  };
  for (const auto& comp : comps)
    if (touches_or_adjacent(comp, a1) && touches_or_adjacent(comp, a2)) return true;
  return false;
}

namespace {

int small_rank(std::vector<unsigned> vecs) {
  int rank = 0;
  for (int b = 0; b < 8; ++b) {
    unsigned bit = 1u << b;
    int piv = -1;
    for (std::size_t i = rank; i < vecs.size(); ++i)
      if (vecs[i] & bit) { piv = static_cast<int>(i); break; }
    if (piv < 0) continue;
    std::swap(vecs[rank], vecs[piv]);
    for (std::size_t i = 0; i < vecs.size(); ++i)
      if (static_cast<int>(i) != rank && (vecs[i] & bit)) vecs[i] ^= vecs[rank];
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<EdgeGoodness> good_edges(const CubicCode& code) {
  std::vector<EdgeGoodness> out;
  for (int c1 = 0; c1 < kNumCorners; ++c1)
    for (int c2 = c1 + 1; c2 < kNumCorners; ++c2) {
      Site d = corner_positions()[c2] - corner_positions()[c1];
      int nz = std::abs(d.x) + std::abs(d.y) + std::abs(d.z);
      if (nz != 1) continue;
      EdgeGoodness e;
      e.c1 = c1;
      e.c2 = c2;
      e.axis = {std::abs(d.x), std::abs(d.y), std::abs(d.z)};
      if (code.kind == CodeKind::CSS) {
        unsigned v1 = z_part(code.gen[0].corners[c1], code.m);
        unsigned v2 = z_part(code.gen[0].corners[c2], code.m);
        e.good = small_rank({v1, v2}) == 2;
      } else {
        unsigned a1 = code.gen[0].corners[c1].bits;
        unsigned a2 = code.gen[0].corners[corner_inverse(c1)].bits;
        unsigned b1 = code.gen[0].corners[c2].bits;
        unsigned b2 = code.gen[0].corners[corner_inverse(c2)].bits;
        e.good = small_rank({a1, a2, b1, b2}) == 4;
      }
      out.push_back(e);
    }
  return out;
}

int count_good_edges_on_face(const CubicCode& code, int axis, int side) {
  int count = 0;
  for (const auto& e : good_edges(code)) {
    Site p1 = corner_positions()[e.c1];
    Site p2 = corner_positions()[e.c2];
    int v1 = axis == 0 ? p1.x : axis == 1 ? p1.y : p1.z;
    int v2 = axis == 0 ? p2.x : axis == 1 ? p2.y : p2.z;
    if (v1 == side && v2 == side && e.good) ++count;
  }
  return count;
}

std::array<std::array<bool, 2>, 3> faces_with_orthogonal_good_edges(
    const CubicCode& code) {
  std::array<std::array<bool, 2>, 3> out{};
  auto edges = good_edges(code);
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      std::set<std::tuple<int, int, int>> axes_seen;
      for (const auto& e : edges) {
        if (!e.good) continue;
        Site p1 = corner_positions()[e.c1];
        Site p2 = corner_positions()[e.c2];
        int v1 = axis == 0 ? p1.x : axis == 1 ? p1.y : p1.z;
        int v2 = axis == 0 ? p2.x : axis == 1 ? p2.y : p2.z;
        if (v1 != side || v2 != side) continue;
        axes_seen.insert({e.axis.x, e.axis.y, e.axis.z});
      }
      out[axis][side] = axes_seen.size() >= 2;
    }
  return out;
}

EraseResult erase_region(const PauliOp& o, const CubicCode& code, Box region,
                         const std::vector<Site>& zero_sites, bool xtype_only) {
  const int m = code.m;
  EraseResult res;
  res.product = PauliOp(m);
  res.result = o;
  if (zero_sites.empty()) {
    res.ok = true;
    return res;
  }

  std::vector<std::pair<int, Site>> placements;
  for (int type = 0; type < 2; ++type) {
    if (xtype_only && code.kind == CodeKind::CSS && type == 0) continue;
    for (int px = region.lo.x - 1; px < region.hi.x; ++px)
      for (int py = region.lo.y - 1; py < region.hi.y; ++py)
        for (int pz = region.lo.z - 1; pz < region.hi.z; ++pz) {
          Site p{px, py, pz};
          bool inside = true;
          for (Site s : placement_action_sites(code, type, p))
            if (!region.contains(s)) { inside = false; break; }
          if (inside) placements.emplace_back(type, p);
        }
  }

  const int comps = 2 * m;
  std::map<Site, int> site_row;
  for (Site s : zero_sites)
    if (!site_row.count(s)) site_row[s] = static_cast<int>(site_row.size());
  const std::size_t nrows = site_row.size() * comps;
  BitMat sys(nrows, placements.size());
  BitVec rhs(nrows);

  auto comp_bit = [&](SiteOp op, int comp) {
    return comp < m ? (x_part(op, m) >> comp) & 1u : (z_part(op, m) >> (comp - m)) & 1u;
  };

  for (std::size_t g = 0; g < placements.size(); ++g) {
    auto [type, p] = placements[g];
    for (int c = 0; c < kNumCorners; ++c) {
      SiteOp gop = code.gen[type].corners[c];
      if (gop.bits == 0) continue;
      auto it = site_row.find(p + corner_positions()[c]);
      if (it == site_row.end()) continue;
      for (int comp = 0; comp < comps; ++comp)
        if (comp_bit(gop, comp)) sys.flip(std::size_t(it->second) * comps + comp, g);
    }
  }
  for (const auto& [s, row] : site_row) {
    SiteOp cur = o.at(s);
    for (int comp = 0; comp < comps; ++comp)
      if (comp_bit(cur, comp)) rhs.set(std::size_t(row) * comps + comp, true);
  }

  auto sol = solve_linear(sys, rhs);
  if (!sol) return res;

  for (std::size_t g = 0; g < placements.size(); ++g)
    if (sol->get(g)) {
      auto [type, p] = placements[g];
      res.product = multiply(res.product, generator_operator(code, type, p, 0));
      ++res.placements_used;
    }
  res.result = multiply(o, res.product);
  for (Site s : zero_sites)
    if (res.result.at(s).bits != 0) throw std::logic_error("erase_region: solve lied");
  res.ok = true;
  return res;
}

namespace {

bool pure_x(const PauliOp& o, int m) {
  for (const auto& [s, op] : o.support())
    if (z_part(op, m) != 0) return false;
  return true;
}

EraseResult erase_adaptive(const PauliOp& o, const CubicCode& code, Box region,
                           const std::vector<Site>& zero) {
  bool xonly = code.kind == CodeKind::CSS && pure_x(o, code.m);
  EraseResult r = erase_region(o, code, region, zero, xonly);
  if (!r.ok && xonly) r = erase_region(o, code, region, zero, false);
  return r;
}

}  // namespace

EraseResult shrink_to_box(const PauliOp& o, const CubicCode& code, Box target) {
  Box region = box_union(bounding_box(o), target);
  std::vector<Site> zero;
  for (int x = region.lo.x; x < region.hi.x; ++x)
    for (int y = region.lo.y; y < region.hi.y; ++y)
      for (int z = region.lo.z; z < region.hi.z; ++z) {
        Site s{x, y, z};
        if (!target.contains(s)) zero.push_back(s);
      }
  return erase_adaptive(o, code, region, zero);
}

FlatDecomposition reduce_to_flat(const Segment& seg, const CubicCode& code) {
  FlatDecomposition out;
  const int w = seg.w;
  Box b0 = box_union(seg.anchor1, seg.anchor2);

  EraseResult shrunk = shrink_to_box(seg.op, code, b0);
  if (!shrunk.ok) {
    out.note = "initial shrink to the anchor box failed";
    return out;
  }

  Site d = seg.anchor2.lo - seg.anchor1.lo;
  int dc[3] = {d.x, d.y, d.z};
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

  int nonzero_axes = (dc[0] != 0) + (dc[1] != 0) + (dc[2] != 0);
  if (nonzero_axes <= 1) {
    out.ok = true;
    Segment flat = seg;
    flat.op = shrunk.result;
    out.pieces = {flat};
    out.product = shrunk.product;
    return out;
  }

  for (const auto& perm : perms) {
    std::vector<Box> legs;
    std::vector<std::pair<Site, Site>> leg_ends;
    Site cur = seg.anchor1.lo;
    for (int step = 0; step < 3; ++step) {
      int axis = perm[step];
      if (dc[axis] == 0) continue;
      Site nxt = cur;
      if (axis == 0) nxt.x += dc[0];
      if (axis == 1) nxt.y += dc[1];
      if (axis == 2) nxt.z += dc[2];
      legs.push_back(box_union(cube_box(cur, w), cube_box(nxt, w)));
      leg_ends.emplace_back(cur, nxt);
      cur = nxt;
    }

    std::vector<Site> zero;
    for (int x = b0.lo.x; x < b0.hi.x; ++x)
      for (int y = b0.lo.y; y < b0.hi.y; ++y)
        for (int z = b0.lo.z; z < b0.hi.z; ++z) {
          Site s{x, y, z};
          bool in_leg = false;
          for (const Box& leg : legs)
            if (leg.contains(s)) { in_leg = true; break; }
          if (!in_leg) zero.push_back(s);
        }
    EraseResult er = erase_adaptive(shrunk.result, code, b0, zero);
    if (!er.ok) continue;

    std::vector<PauliOp> leg_ops(legs.size(), PauliOp(code.m));
    bool stray = false;
    for (const auto& [s, op] : er.result.support()) {
      bool placed = false;
      for (std::size_t i = 0; i < legs.size(); ++i)
        if (legs[i].contains(s)) {
          leg_ops[i].set(s, op);
          placed = true;
          break;
        }
      if (!placed) { stray = true; break; }
    }
    if (stray) continue;

    std::vector<Segment> pieces;
    bool all_ok = true;
    for (std::size_t i = 0; i < legs.size(); ++i) {
      Segment piece;
      piece.op = leg_ops[i];
      piece.anchor1 = cube_box(leg_ends[i].first, w);
      piece.anchor2 = cube_box(leg_ends[i].second, w);
      piece.w = w;
      if (!is_segment(piece.op, piece.anchor1, piece.anchor2, code)) {
        all_ok = false;
        break;
      }
      pieces.push_back(std::move(piece));
    }
    if (!all_ok) continue;

    out.ok = true;
    out.pieces = std::move(pieces);
    out.product = multiply(shrunk.product, er.product);
    return out;
  }
  out.note = "no staircase order admits the deformation";
  return out;
}

std::optional<DisconnectCertificate> disconnect_certificate(const Segment& seg,
                                                            const CubicCode& code) {
  if (boxes_intersect(seg.anchor1, seg.anchor2)) return std::nullopt;

  if (!segment_connected(seg.op, seg.anchor1, seg.anchor2, code))
    return DisconnectCertificate{seg.op, PauliOp(code.m)};

  Box b0 = box_union(seg.anchor1, seg.anchor2);
  EraseResult shrunk = shrink_to_box(seg.op, code, b0);
  const PauliOp& base = shrunk.ok ? shrunk.result : seg.op;
  PauliOp base_product = shrunk.ok ? shrunk.product : PauliOp(code.m);

  if (!segment_connected(base, seg.anchor1, seg.anchor2, code))
    return DisconnectCertificate{base, base_product};

  Box region = box_union(bounding_box(base), b0);

  // Empty one cross-band strictly between the anchors; a single empty layer
  // cannot be bridged by any placement, so success disconnects.
  struct BandRange { int axis, lo, hi; };
  std::vector<BandRange> ranges;
  auto coord_of = [](Site s, int axis) {
    return axis == 0 ? s.x : axis == 1 ? s.y : s.z;
  };
  for (int axis = 0; axis < 3; ++axis) {
    int a1lo = coord_of(seg.anchor1.lo, axis), a1hi = coord_of(seg.anchor1.hi, axis);
    int a2lo = coord_of(seg.anchor2.lo, axis), a2hi = coord_of(seg.anchor2.hi, axis);
    if (a1hi <= a2lo) ranges.push_back({axis, a1hi, a2lo});
    else if (a2hi <= a1lo) ranges.push_back({axis, a2hi, a1lo});
  }

  for (const auto& range : ranges) {
    for (int v = range.lo; v < range.hi; ++v) {
      std::vector<Site> band;
      for (int x = region.lo.x; x < region.hi.x; ++x)
        for (int y = region.lo.y; y < region.hi.y; ++y)
          for (int z = region.lo.z; z < region.hi.z; ++z) {
            Site s{x, y, z};
            if (coord_of(s, range.axis) == v) band.push_back(s);
          }
      EraseResult er = erase_adaptive(base, code, region, band);
      if (!er.ok) continue;
      if (segment_connected(er.result, seg.anchor1, seg.anchor2, code)) continue;
      return DisconnectCertificate{er.result, multiply(base_product, er.product)};
    }
  }
  return std::nullopt;
}

std::optional<PauliOp> finite_region_membership(const PauliOp& o, const CubicCode& code,
                                                int margin) {
  if (o.is_identity()) return PauliOp(code.m);
  const int m = code.m;
  Box bb = bounding_box(o);
  Box region{{bb.lo.x - margin, bb.lo.y - margin, bb.lo.z - margin},
             {bb.hi.x + margin, bb.hi.y + margin, bb.hi.z + margin}};

  std::vector<std::pair<int, Site>> placements;
  for (int type = 0; type < 2; ++type)
    for (int px = region.lo.x - 1; px < region.hi.x; ++px)
      for (int py = region.lo.y - 1; py < region.hi.y; ++py)
        for (int pz = region.lo.z - 1; pz < region.hi.z; ++pz)
          placements.emplace_back(type, Site{px, py, pz});

  const int comps = 2 * m;
  std::map<Site, int> site_row;
  for (int x = region.lo.x - 1; x < region.hi.x + 1; ++x)
    for (int y = region.lo.y - 1; y < region.hi.y + 1; ++y)
      for (int z = region.lo.z - 1; z < region.hi.z + 1; ++z)
        site_row[{x, y, z}] = static_cast<int>(site_row.size());

  auto comp_bit = [&](SiteOp op, int comp) {
    return comp < m ? (x_part(op, m) >> comp) & 1u : (z_part(op, m) >> (comp - m)) & 1u;
  };

  BitMat sys(site_row.size() * comps, placements.size());
  BitVec rhs(site_row.size() * comps);
  for (std::size_t g = 0; g < placements.size(); ++g) {
    auto [type, p] = placements[g];
    for (int c = 0; c < kNumCorners; ++c) {
      SiteOp gop = code.gen[type].corners[c];
      if (gop.bits == 0) continue;
      auto it = site_row.find(p + corner_positions()[c]);
      if (it == site_row.end()) continue;
      for (int comp = 0; comp < comps; ++comp)
        if (comp_bit(gop, comp)) sys.flip(std::size_t(it->second) * comps + comp, g);
    }
  }
  for (const auto& [s, op] : o.support()) {
    auto it = site_row.find(s);
    if (it == site_row.end()) return std::nullopt;
    for (int comp = 0; comp < comps; ++comp)
      if (comp_bit(op, comp)) rhs.set(std::size_t(it->second) * comps + comp, true);
  }

  auto sol = solve_linear(sys, rhs);
  if (!sol) return std::nullopt;
  PauliOp prod(m);
  for (std::size_t g = 0; g < placements.size(); ++g)
    if (sol->get(g)) {
      auto [type, p] = placements[g];
      prod = multiply(prod, generator_operator(code, type, p, 0));
    }
  if (!(prod == o)) throw std::logic_error("finite_region_membership: bad product");
  return prod;
}

// ---- sequence machinery ----

SequenceAnalysis edge_constraint_automaton(const std::vector<TwoSiteConstraint>& cons,
                                           int m) {
  SequenceAnalysis out;
  const unsigned n = 1u << m;
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) {
      bool ok = true;
      for (const auto& c : cons) {
        unsigned acc = (a & z_part(c.g1, m)) ^ (b & z_part(c.g2, m));
        if (__builtin_popcount(acc) & 1) { ok = false; break; }
      }
      if (ok) out.solutions.emplace_back(a, b);
    }

  std::vector<std::vector<unsigned>> next(n);
  for (auto [a, b] : out.solutions) next[a].push_back(b);

  if (out.solutions.size() == 1) {
    out.cls = SeqClass::Trivial;
    return out;
  }

  // any cycle through a nonzero value (the graph has <= 4 vertices)
  std::vector<unsigned> cycle;
  std::vector<int> on_path(n, -1);
  std::vector<unsigned> path;
  std::function<bool(unsigned)> dfs = [&](unsigned v) -> bool {
    if (on_path[v] >= 0) {
      bool nonzero = false;
      for (std::size_t i = on_path[v]; i < path.size(); ++i)
        if (path[i] != 0) nonzero = true;
      if (!nonzero) return false;
      for (std::size_t i = on_path[v]; i < path.size(); ++i) cycle.push_back(path[i]);
      return true;
    }
    on_path[v] = static_cast<int>(path.size());
    path.push_back(v);
    for (unsigned w : next[v])
      if (dfs(w)) return true;
    path.pop_back();
    on_path[v] = -1;
    return false;
  };
  for (unsigned start = 1; start < n && cycle.empty(); ++start) dfs(start);

  if (cycle.empty()) {
    out.cls = SeqClass::Confusing;
  } else {
    out.cls = SeqClass::Periodic;
    out.period = static_cast<int>(cycle.size());
    out.cycle = std::move(cycle);
  }
  return out;
}

namespace {

int window_offset(const std::vector<unsigned>& seq, int t) {
  int last_violation = -1;
  for (int i = 0; i + t < static_cast<int>(seq.size()); ++i)
    if (seq[i] != seq[i + t]) last_violation = i;
  return last_violation + 1;
}

bool window_valid(const std::vector<unsigned>& seq, int t, int max_offset) {
  const int n = static_cast<int>(seq.size());
  int n0 = window_offset(seq, t);
  if (n0 + 2 * t > n) return false;
  return max_offset < 0 || n0 <= max_offset;
}

}  // namespace

QuasiPeriod quasi_period_detect(const std::vector<unsigned>& seq, int max_offset) {
  QuasiPeriod out;
  const int n = static_cast<int>(seq.size());
  for (int t = 1; 2 * t <= n; ++t) {
    if (!window_valid(seq, t, max_offset)) continue;
    out.periodic = true;
    out.period = t;
    out.offset = window_offset(seq, t);
    return out;
  }
  return out;
}

std::vector<int> quasi_periods_on_window(const std::vector<unsigned>& seq, int max_t,
                                         int max_offset) {
  std::vector<int> out;
  const int n = static_cast<int>(seq.size());
  for (int t = 1; t <= max_t && 2 * t <= n; ++t)
    if (window_valid(seq, t, max_offset)) out.push_back(t);
  return out;
}

Mat2 mat2_mul(Mat2 a, Mat2 b) {
  Mat2 out = 0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      unsigned bit = 0;
      for (int k = 0; k < 2; ++k)
        bit ^= ((a >> (2 * r + k)) & 1u) & ((b >> (2 * k + c)) & 1u);
      out |= bit << (2 * r + c);
    }
  return out;
}

bool mat2_idempotent(Mat2 m) { return mat2_mul(m, m) == (m & 0xfu); }
bool mat2_involutive(Mat2 m) { return mat2_mul(m, m) == 0b1001u; }

std::vector<unsigned> row_recursion(Mat2 m, const std::vector<unsigned>& prev, Mat2 b1,
                                    Mat2 b2, unsigned a0) {
  std::vector<unsigned> out;
  out.push_back(a0 & 3u);
  for (std::size_t j = 0; j + 1 < prev.size(); ++j) {
    unsigned next = mat2_apply(m, out.back()) ^ mat2_apply(b1, prev[j + 1]) ^
                    mat2_apply(b2, prev[j]);
    out.push_back(next);
  }
  return out;
}

// ---- scans ----

namespace {

struct SegmentSpace {
  Box b0;
  Box a1, a2;
  int w = 0;
  std::vector<Site> sites;
  std::map<Site, int> site_index;
  int comps = 0;
  std::vector<BitVec> basis;
};

SegmentSpace segment_space(const CubicCode& code, int w, Site dir, int len) {
  SegmentSpace sp;
  sp.w = w;
  sp.a1 = cube_box({0, 0, 0}, w);
  sp.a2 = cube_box(len * dir, w);
  sp.b0 = box_union(sp.a1, sp.a2);
  const int m = code.m;
  sp.comps = code.kind == CodeKind::CSS ? m : 2 * m;

  for (int x = sp.b0.lo.x; x < sp.b0.hi.x; ++x)
    for (int y = sp.b0.lo.y; y < sp.b0.hi.y; ++y)
      for (int z = sp.b0.lo.z; z < sp.b0.hi.z; ++z) {
        sp.site_index[{x, y, z}] = static_cast<int>(sp.sites.size());
        sp.sites.push_back({x, y, z});
      }

  std::vector<BitVec> rows;
  const std::size_t nvars = sp.sites.size() * sp.comps;
  for (int type = 0; type < 2; ++type) {
    if (code.kind == CodeKind::CSS && type == 1) continue;  // X ops vs Z gens
    for (int px = sp.b0.lo.x - 1; px < sp.b0.hi.x; ++px)
      for (int py = sp.b0.lo.y - 1; py < sp.b0.hi.y; ++py)
        for (int pz = sp.b0.lo.z - 1; pz < sp.b0.hi.z; ++pz) {
          Site p{px, py, pz};
          if (!acts_trivially_on(code, type, p, sp.a1)) continue;
          if (!acts_trivially_on(code, type, p, sp.a2)) continue;
          BitVec row(nvars);
          bool nonzero = false;
          for (int c = 0; c < kNumCorners; ++c) {
            SiteOp g = code.gen[type].corners[c];
            if (g.bits == 0) continue;
            auto it = sp.site_index.find(p + corner_positions()[c]);
            if (it == sp.site_index.end()) continue;
            for (int q = 0; q < m; ++q) {
              if ((z_part(g, m) >> q) & 1u) {
                row.flip(std::size_t(it->second) * sp.comps + q);
                nonzero = true;
              }
              if (sp.comps == 2 * m && ((x_part(g, m) >> q) & 1u)) {
                row.flip(std::size_t(it->second) * sp.comps + m + q);
                nonzero = true;
              }
            }
          }
          if (nonzero) rows.push_back(std::move(row));
        }
  }
  sp.basis = kernel_basis(BitMat::from_rows(rows, nvars));
  return sp;
}

PauliOp op_from_vars(const SegmentSpace& sp, const BitVec& v, int m) {
  PauliOp o(m);
  for (std::size_t i = 0; i < sp.sites.size(); ++i) {
    unsigned xb = 0, zb = 0;
    for (int q = 0; q < m; ++q) {
      if (v.get(i * sp.comps + q)) xb |= 1u << q;
      if (sp.comps == 2 * m && v.get(i * sp.comps + m + q)) zb |= 1u << q;
    }
    if (xb || zb) o.set(sp.sites[i], make_site_op(xb, zb, m));
  }
  return o;
}

}  // namespace

SegmentBasis segment_basis(const CubicCode& code, int w, Site dir, int len) {
  SegmentSpace sp = segment_space(code, w, dir, len);
  SegmentBasis out;
  out.a1 = sp.a1;
  out.a2 = sp.a2;
  out.b0 = sp.b0;
  out.w = w;
  for (const auto& v : sp.basis) out.ops.push_back(op_from_vars(sp, v, code.m));
  return out;
}

PhiScanResult phi_scan(int code_index, int w, int l_max, const std::vector<Site>& dirs,
                       bool verify_membership) {
  const CubicCode& code = catalog_code(code_index);
  PhiScanResult result;
  result.code_index = code_index;

  for (Site dir : dirs) {
    std::vector<PhiScanCell> cells(l_max);
    // cells are independent; results land in fixed slots
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int len = 1; len <= l_max; ++len) {
      PhiScanCell cell;
      cell.w = w;
      cell.dir = dir;
      cell.len = len;

      SegmentSpace sp = segment_space(code, w, dir, len);
      cell.space_dim = static_cast<int>(sp.basis.size());

      if (len < w) {
        cell.disconnectable = false;  // overlapping anchors stay connected
        cell.verified = true;
        cells[len - 1] = cell;
        continue;
      }

      // A single band common to every basis element keeps arbitrary
      // combinations of the certificates disconnected as well.
      std::vector<PauliOp> basis_ops;
      basis_ops.reserve(sp.basis.size());
      for (const auto& v : sp.basis) basis_ops.push_back(op_from_vars(sp, v, code.m));

      int axis = dir.x ? 0 : dir.y ? 1 : 2;
      std::vector<int> band_positions;
      for (int v = w; v < len; ++v) band_positions.push_back(v);
      // middle-out order
      std::sort(band_positions.begin(), band_positions.end(), [&](int a, int b) {
        int mid = (w + len) / 2;
        return std::abs(a - mid) < std::abs(b - mid) || (std::abs(a - mid) == std::abs(b - mid) && a < b);
      });

      bool all = false;
      bool verified = true;
      std::vector<PauliOp> certs;
      for (int v : band_positions) {
        std::vector<Site> band;
        for (int x = sp.b0.lo.x; x < sp.b0.hi.x; ++x)
          for (int y = sp.b0.lo.y; y < sp.b0.hi.y; ++y)
            for (int z = sp.b0.lo.z; z < sp.b0.hi.z; ++z) {
              Site s{x, y, z};
              int c = axis == 0 ? s.x : axis == 1 ? s.y : s.z;
              if (c == v) band.push_back(s);
            }
        certs.clear();
        bool feasible = true;
        for (const auto& op : basis_ops) {
          EraseResult er = erase_adaptive(op, code, sp.b0, band);
          if (!er.ok) { feasible = false; break; }
          certs.push_back(er.result);
        }
        if (feasible) { all = true; break; }
      }

      if (all) {
        PauliOp union_sup(code.m);
        for (std::size_t i = 0; i < certs.size(); ++i) {
          cell.cert_support =
              std::max(cell.cert_support, static_cast<int>(certs[i].weight()));
          for (const auto& [s, op] : certs[i].support())
            union_sup.set(s, make_site_op(1, 0, code.m));
          if (segment_connected(certs[i], sp.a1, sp.a2, code)) all = false;
          if (verify_membership) {
            PauliOp quotient = multiply(basis_ops[i], certs[i]);
            if (!finite_region_membership(quotient, code, 2)) verified = false;
            if (!is_segment(certs[i], sp.a1, sp.a2, code)) verified = false;
          }
        }
        if (segment_connected(union_sup, sp.a1, sp.a2, code)) all = false;
      }
      cell.disconnectable = all;
      cell.verified = verify_membership ? verified : true;
      cells[len - 1] = cell;
    }
    int max_nontrivial = 0;
    for (const auto& cell : cells) {
      if (!cell.disconnectable) max_nontrivial = std::max(max_nontrivial, cell.len);
      result.cells.push_back(cell);
    }
    result.max_nontrivial.emplace_back(dir, max_nontrivial);
  }
  return result;
}

bool SliceScan::forced_empty(int len) const {
  return first_forced_len >= 0 && len >= first_forced_len;
}

bool SliceScan::covered(int len) const {
  return first_covered_len >= 0 && len >= first_covered_len;
}

SliceScan slice_scan(int code_index, int w, Site dir, int l_max) {
  const CubicCode& code = catalog_code(code_index);
  const int m = code.m;
  SliceScan scan;
  scan.w = w;
  scan.dir = dir;

  int a0 = dir.x ? 0 : dir.y ? 1 : 2;
  int ax1 = (a0 + 1) % 3, ax2 = (a0 + 2) % 3;
  auto coord = [](Site s, int axis) { return axis == 0 ? s.x : axis == 1 ? s.y : s.z; };

  const int comps = code.kind == CodeKind::CSS ? m : 2 * m;
  const int D = w * w * comps;
  auto var_of = [&](int u, int v, int q) { return (u * w + v) * comps + q; };

  // Constraints coupling two consecutive slices, from placements whose
  // support sits strictly between the anchors.
  std::vector<BitVec> cons;
  for (int type = 0; type < 2; ++type) {
    if (code.kind == CodeKind::CSS && type == 1) continue;
    for (int pu = -1; pu < w; ++pu)
      for (int pv = -1; pv < w; ++pv) {
        BitVec row(2 * D);
        bool nonzero = false;
        for (int c = 0; c < kNumCorners; ++c) {
          SiteOp g = code.gen[type].corners[c];
          if (g.bits == 0) continue;
          Site q = corner_positions()[c];
          int slice = coord(q, a0);
          int u = pu + coord(q, ax1), v = pv + coord(q, ax2);
          if (u < 0 || u >= w || v < 0 || v >= w) continue;
          for (int qq = 0; qq < m; ++qq) {
            if ((z_part(g, m) >> qq) & 1u) {
              row.flip(std::size_t(slice) * D + var_of(u, v, qq));
              nonzero = true;
            }
            if (comps == 2 * m && ((x_part(g, m) >> qq) & 1u)) {
              row.flip(std::size_t(slice) * D + var_of(u, v, m + qq));
              nonzero = true;
            }
          }
        }
        if (nonzero) cons.push_back(std::move(row));
      }
  }
  BitMat C = BitMat::from_rows(cons, 2 * D);
  // Split constraint rows into the two slice halves for word-level dots.
  BitMat Cs(C.rows(), D), Ct(C.rows(), D);
  for (std::size_t r = 0; r < C.rows(); ++r)
    for (int b = 0; b < D; ++b) {
      if (C.get(r, b)) Cs.set(r, b, true);
      if (C.get(r, D + b)) Ct.set(r, b, true);
    }

  // One propagation step: basis of F -> basis of
  // F' = { t : exists s in F, (s,t) satisfies every constraint }.
  auto step = [&](const BitMat& basis, bool forward) {
    const std::size_t f = basis.rows();
    const BitMat& chead = forward ? Cs : Ct;
    const BitMat& ctail = forward ? Ct : Cs;
    BitMat m2(C.rows(), f + D);
    const std::size_t dw = words_for(D);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (C.rows() > 64)
#endif
    for (std::size_t r = 0; r < C.rows(); ++r) {
      const Word* hr = chead.row(r);
      for (std::size_t i = 0; i < f; ++i) {
        const Word* br = basis.row(i);
        Word acc = 0;
        for (std::size_t wd = 0; wd < dw; ++wd) acc ^= hr[wd] & br[wd];
        if (std::popcount(acc) & 1u) m2.set(r, i, true);
      }
      const Word* tr = ctail.row(r);
      for (int b = 0; b < D; ++b)
        if ((tr[b / kWordBits] >> (b % kWordBits)) & 1u) m2.set(r, f + b, true);
    }
    Echelon e = echelonize(std::move(m2), false, false, true);
    // Echelon rows with pivots in the t-range have zero s-part; their t-parts
    // are exactly the check rows of the projected space.
    std::vector<BitVec> checks;
    for (std::size_t r = 0; r < e.rank; ++r) {
      if (e.pivot_cols[r] < static_cast<int>(f)) continue;
      BitVec chk(D);
      for (int b = 0; b < D; ++b)
        if (e.mat.get(r, f + b)) chk.set(b, true);
      checks.push_back(std::move(chk));
    }
    auto ker = kernel_basis(BitMat::from_rows(checks, D));
    return BitMat::from_rows(ker, D);
  };

  const int kmax = std::max(0, l_max - w);
  std::vector<BitMat> fwd, bwd;
  fwd.push_back(BitMat::identity(D));
  bwd.push_back(BitMat::identity(D));
  scan.fwd_dims.push_back(D);
  scan.bwd_dims.push_back(D);
  for (int k = 1; k <= kmax; ++k) {
    fwd.push_back(fwd.back().rows() > 0 ? step(fwd.back(), true) : BitMat(0, D));
    bwd.push_back(bwd.back().rows() > 0 ? step(bwd.back(), false) : BitMat(0, D));
    scan.fwd_dims.push_back(fwd.back().rows());
    scan.bwd_dims.push_back(bwd.back().rows());
    if (fwd.back().rows() == 0 && bwd.back().rows() == 0) break;
  }

  auto trivial_intersection = [&](int a, int b) {
    const BitMat& fa = fwd[a];
    const BitMat& bb = bwd[b];
    if (fa.rows() == 0 || bb.rows() == 0) return true;
    if (fa.rows() + bb.rows() > static_cast<std::size_t>(D)) return false;
    BitMat stack(fa.rows() + bb.rows(), D);
    for (std::size_t r = 0; r < fa.rows(); ++r) stack.set_row(r, fa.get_row(r));
    for (std::size_t r = 0; r < bb.rows(); ++r)
      stack.set_row(fa.rows() + r, bb.get_row(r));
    return gf2_rank(stack) == fa.rows() + bb.rows();
  };

  int kcap = static_cast<int>(fwd.size()) - 1;
  // Balanced splits suffice: F^a and B^b only shrink as a, b grow, so the
  // predicate stays monotone in the total a + b.
  auto balanced = [&](int s) {
    int a = std::clamp(s / 2, std::max(0, s - kcap), kcap);
    return std::pair<int, int>{a, s - a};
  };
  int best = -1;
  for (int s = 0; s <= 2 * kcap && best < 0; ++s) {
    auto [a, b] = balanced(s);
    if (fwd[a].rows() + bwd[b].rows() > static_cast<std::size_t>(D)) continue;
    if (trivial_intersection(a, b)) best = s;
  }
  // Slice j sits at a = j - w steps from the left anchor and b = l - 1 - j
  // from the right one, so a + b = l - 1 - w and the least forced length is
  // best + w + 1.
  scan.first_forced_len = best < 0 ? -1 : best + w + 1;

  // Coverage: achievable slice values realizable by stabilizer products whose
  // action on the slice plane stays inside the tube cross-section. Such a
  // product cancels the slice value of any segment, emptying the plane.
  const int pad = 3;
  std::vector<std::pair<int, Site>> cov_placements;  // (type, (dpos, u, v))
  std::vector<PauliOp> cov_products;
  {
    std::map<std::pair<int, std::pair<int, int>>, int> plane_cols;  // (u,v,q)->col
    auto plane_col = [&](int u, int v, int q) {
      auto key = std::make_pair(u, std::make_pair(v, q));
      auto it = plane_cols.find(key);
      if (it == plane_cols.end())
        it = plane_cols.emplace(key, static_cast<int>(plane_cols.size())).first;
      return it->second;
    };
    // reserve the confined columns first so they occupy [0, D)
    for (int u = 0; u < w; ++u)
      for (int v = 0; v < w; ++v)
        for (int q = 0; q < comps; ++q) plane_col(u, v, q);

    std::vector<std::pair<int, Site>> plcs;
    for (int type = 0; type < 2; ++type) {
      // covering products multiply actual stabilizers of the operator type
      // being scanned: X generators for CSS codes, both types otherwise
      if (code.kind == CodeKind::CSS && type == 0) continue;
      for (int dpos = -1; dpos <= 0; ++dpos)
        for (int pu = -1 - pad; pu < w + pad; ++pu)
          for (int pv = -1 - pad; pv < w + pad; ++pv)
            plcs.emplace_back(type, Site{dpos, pu, pv});
    }
    std::vector<BitVec> rows;
    // first pass to lay out all columns (outside columns after the first D)
    for (auto [type, ps] : plcs)
      for (int c = 0; c < kNumCorners; ++c) {
        SiteOp g = code.gen[type].corners[c];
        if (g.bits == 0) continue;
        Site q = corner_positions()[c];
        if (ps.x + coord(q, a0) != 0) continue;
        int u = ps.y + coord(q, ax1), v = ps.z + coord(q, ax2);
        for (int qq = 0; qq < comps; ++qq) plane_col(u, v, qq);
      }
    const int total_cols = static_cast<int>(plane_cols.size());
    for (auto [type, ps] : plcs) {
      BitVec row(total_cols);
      bool nonzero = false;
      for (int c = 0; c < kNumCorners; ++c) {
        SiteOp g = code.gen[type].corners[c];
        if (g.bits == 0) continue;
        Site q = corner_positions()[c];
        if (ps.x + coord(q, a0) != 0) continue;  // plane-0 action only
        int u = ps.y + coord(q, ax1), v = ps.z + coord(q, ax2);
        for (int qq = 0; qq < m; ++qq) {
          unsigned xq = (x_part(g, m) >> qq) & 1u;
          unsigned zq = (z_part(g, m) >> qq) & 1u;
          if (comps == 2 * m) {
            if (xq) { row.flip(plane_col(u, v, qq)); nonzero = true; }
            if (zq) { row.flip(plane_col(u, v, m + qq)); nonzero = true; }
          } else {
            if (xq) { row.flip(plane_col(u, v, qq)); nonzero = true; }
          }
        }
      }
      if (nonzero) {
        rows.push_back(std::move(row));
        cov_placements.emplace_back(type, ps);
      }
    }
    // Reorder columns: outside columns first, confined columns last, then the
    // echelon rows with pivots in the confined range span the coverable set.
    const int outside = total_cols - D;
    BitMat mtx(rows.size(), total_cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (int c = 0; c < total_cols; ++c)
        if (rows[r].get(c)) mtx.set(r, c < D ? outside + c : c - D, true);
    Echelon e = echelonize(mtx, true, false, true);
    std::vector<BitVec> cover_rows;
    for (std::size_t r = 0; r < e.rank; ++r) {
      if (e.pivot_cols[r] < outside) continue;
      BitVec val(D);
      for (int b = 0; b < D; ++b)
        if (e.mat.get(r, outside + b)) val.set(b, true);
      cover_rows.push_back(std::move(val));
      // Reconstruct and re-verify the covering product itself.
      PauliOp prod(m);
      for (std::size_t g = 0; g < cov_placements.size(); ++g)
        if (e.transform.get(r, g)) {
          auto [type, ps] = cov_placements[g];
          Site pos;
          if (a0 == 0) pos = {ps.x, ps.y, ps.z};
          else if (a0 == 1) pos = {ps.z, ps.x, ps.y};
          else pos = {ps.y, ps.z, ps.x};
          prod = multiply(prod, generator_operator(code, type, pos, 0));
        }
      cov_products.push_back(std::move(prod));
    }
    BitMat wmat = BitMat::from_rows(cover_rows, D);
    RowSpace wspace(wmat, false);
    scan.cover_dim = wspace.rank();

    // re-verify each covering product: support on the plane confined to the
    // cross-section and value equal to the extracted row
    scan.cover_verified = true;
    for (std::size_t i = 0; i < cov_products.size(); ++i) {
      const PauliOp& prod = cov_products[i];
      BitVec val(D);
      for (const auto& [s, op] : prod.support()) {
        if (coord(s, a0) != 0) continue;
        int u = coord(s, ax1), v = coord(s, ax2);
        if (u < 0 || u >= w || v < 0 || v >= w) { scan.cover_verified = false; break; }
        for (int qq = 0; qq < m; ++qq) {
          if ((x_part(op, m) >> qq) & 1u) val.flip(var_of(u, v, qq));
          if (comps == 2 * m && ((z_part(op, m) >> qq) & 1u))
            val.flip(var_of(u, v, m + qq));
        }
      }
      if (!(val == cover_rows[i])) scan.cover_verified = false;
    }

    // least a+b with F^a intersect B^b inside the coverable span
    auto intersection_in_cover = [&](int a, int b) {
      const BitMat& fa = fwd[a];
      const BitMat& bb = bwd[b];
      if (fa.rows() == 0 || bb.rows() == 0) return true;
      // Zassenhaus: echelon of [F|F; B|0]; zero-left rows give intersection.
      BitMat stack(fa.rows() + bb.rows(), 2 * D);
      for (std::size_t r = 0; r < fa.rows(); ++r) {
        BitVec row = fa.get_row(r);
        for (int c = 0; c < D; ++c)
          if (row.get(c)) {
            stack.set(r, c, true);
            stack.set(r, D + c, true);
          }
      }
      for (std::size_t r = 0; r < bb.rows(); ++r) {
        BitVec row = bb.get_row(r);
        for (int c = 0; c < D; ++c)
          if (row.get(c)) stack.set(fa.rows() + r, c, true);
      }
      Echelon es = echelonize(std::move(stack), false, false, true);
      for (std::size_t r = 0; r < es.rank; ++r) {
        if (es.pivot_cols[r] < D) continue;
        BitVec member(D);
        for (int c = 0; c < D; ++c)
          if (es.mat.get(r, D + c)) member.set(c, true);
        if (!wspace.contains(member)) return false;
      }
      return true;
    };

    int best_cov = -1;
    for (int s = 0; s <= 2 * kcap && best_cov < 0; ++s) {
      auto [a, b] = balanced(s);
      // dim(F ^ B) >= f + b - D; a bigger intersection cannot fit in W
      if (fwd[a].rows() + bwd[b].rows() >
          static_cast<std::size_t>(D) + scan.cover_dim)
        continue;
      if (intersection_in_cover(a, b)) best_cov = s;
    }
    scan.first_covered_len = best_cov < 0 ? -1 : best_cov + w + 1;
    if (scan.first_forced_len >= 0 &&
        (scan.first_covered_len < 0 || scan.first_forced_len < scan.first_covered_len))
      scan.first_covered_len = scan.first_forced_len;
  }
  return scan;
}

}  // namespace cubic
