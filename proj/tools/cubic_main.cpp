#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "cubic/classify.hpp"
#include "cubic/code0.hpp"
#include "cubic/lattice.hpp"
#include "cubic/ordered_elim.hpp"
#include "cubic/report.hpp"
#include "cubic/strings.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cubic;

namespace {

struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw std::runtime_error("cannot open output file: " + path);
      os = file.get();
    }
  }
};

std::string hex64(Mat8 v) {
  std::ostringstream ss;
  ss << std::hex << v;
  return ss.str();
}

int cmd_enumerate(const RunConfig& cfg) {
  Output out(cfg.out_path);
  CodeKind kind = cfg.kind == "noncss" ? CodeKind::NonCSS : CodeKind::CSS;
  auto classes = enumerate_codes(kind);

  Table t;
  t.columns = {"class",   "kind", "m",       "canonical", "catalog_match",
               "corners", "dual_corners", "conditions"};
  int n = 0;
  for (const auto& cls : classes) {
    if (cfg.m_filter != 0 && cls.m != cfg.m_filter) continue;
    ConditionReport rep =
        check_conditions(kind == CodeKind::NonCSS
                             ? m8_from_bitmat(omega_noncss(cls.realized.gen[0], cls.m))
                             : m8_from_bitmat(omega_css(cls.realized.gen[0],
                                                        cls.realized.gen[1], cls.m)),
                         kind, cls.m);
    std::string match = cls.catalog_index < 0
                            ? "none"
                            : corners_line(catalog_code(cls.catalog_index).gen[0], 2) +
                                  " (code " + std::to_string(cls.catalog_index) + ")";
    t.rows.push_back({std::to_string(n++), cfg.kind, std::to_string(cls.m),
                      hex64(cls.canonical), match,
                      corners_line(cls.realized.gen[0], cls.m),
                      corners_line(cls.realized.gen[1], cls.m), rep.reason});
  }
  write_table(*out.os, t, cfg.format, "enumerate");
  return 0;
}

int cmd_ktable(const RunConfig& cfg) {
  Output out(cfg.out_path);
  CubicCode code = resolve_code(cfg);
  const int lo = cfg.L > 0 ? cfg.L : 2;
  const int hi = cfg.L_max > 0 ? cfg.L_max : lo;

  Table t;
  t.columns = {"L", "k_computed", "k_predicted", "match"};
  bool all_match = true;
  for (int L = lo; L <= hi; ++L) {
    LatticeCode lat(code, L, cfg.mem_bytes);
    int k = lat.count_logical_qubits();
    // the prediction column follows --code even when the generators come
    // from a file, so a corrupted file shows up as a mismatch
    std::string pred = "n/a", match = "n/a";
    if (has_predicted_k(cfg.code_index)) {
      int kp = predicted_k(cfg.code_index, L);
      pred = std::to_string(kp);
      match = k == kp ? "yes" : "NO";
      if (k != kp) all_match = false;
    }
    t.rows.push_back({std::to_string(L), std::to_string(k), pred, match});
  }
  write_table(*out.os, t, cfg.format, "ktable");
  return all_match ? 0 : 1;
}

std::vector<std::pair<std::string, PauliOp>> witness_catalog(LatticeCode& lat,
                                                             int code_index) {
  std::vector<std::pair<std::string, PauliOp>> out;
  const CubicCode& code = lat.code();
  const int m = code.m;
  const int L = lat.L();
  static const std::vector<Site> dirs = {
      {1, 0, 0},  {0, 1, 0},  {0, 0, 1},  {1, 1, 0},  {1, -1, 0},
      {1, 0, 1},  {1, 0, -1}, {0, 1, 1},  {0, 1, -1}, {1, 1, 1},
      {1, 1, -1}, {1, -1, 1}, {-1, 1, 1}};
  if (auto entry = table3_strings(code_index)) {
    out.emplace_back(entry->first, instantiate(parse_operator_spec(entry->first, m), m, L));
    out.emplace_back(entry->second,
                     instantiate(parse_operator_spec(entry->second, m), m, L));
  }
  if (code_index == 0) {
    for (int i = 0; i < L; ++i) {
      out.emplace_back("thetaZ(0," + std::to_string(i) + ",0)",
                       basic_string(BasicKind::ThetaZ, {0, i, 0}, L));
      out.emplace_back("thetaX(0,0," + std::to_string(i) + ")",
                       basic_string(BasicKind::ThetaX, {0, 0, i}, L));
    }
  }
  for (Site n : dirs)
    for (unsigned bits = 1; bits < (1u << (2 * m)); ++bits) {
      SiteOp e{static_cast<std::uint8_t>(bits)};
      if (!plane_logical_check(e, n, code)) continue;
      for (int tt = 0; tt < L; ++tt) {
        // anchor: first site in the residue class
        PauliOp plane(m);
        Site anchor{-1, -1, -1};
        for (int x = 0; x < L && anchor.x < 0; ++x)
          for (int y = 0; y < L && anchor.x < 0; ++y)
            for (int z = 0; z < L; ++z)
              if (mod(n.x * x + n.y * y + n.z * z, L) == tt) {
                anchor = {x, y, z};
                break;
              }
        plane = instantiate_plane({e, n, anchor}, m, L);
        out.emplace_back(plane_to_string({e, n, anchor}, m), std::move(plane));
      }
    }
  return out;
}

int cmd_verify(const RunConfig& cfg) {
  Output out(cfg.out_path);
  CubicCode code = resolve_code(cfg);
  const int L = cfg.L > 0 ? cfg.L : 5;
  LatticeCode lat(code, L, cfg.mem_bytes);

  PauliOp op = instantiate(parse_operator_spec(cfg.op_text, code.m), code.m, L);
  bool logical = lat.is_logical(op);
  bool stabilizer = logical && lat.is_stabilizer_element(op);

  std::string witness = "none";
  if (logical && !stabilizer) {
    for (auto& [label, cand] : witness_catalog(lat, cfg.code_index)) {
      if (!lat.is_logical(cand)) continue;
      if (anticommute(op.reduced(L), cand.reduced(L))) {
        witness = label;
        break;
      }
    }
  }

  Table t;
  t.columns = {"operator", "L", "logical", "stabilizer_element", "nontrivial", "witness"};
  t.rows.push_back({cfg.op_text, std::to_string(L), logical ? "yes" : "no",
                    logical ? (stabilizer ? "yes" : "no") : "n/a",
                    logical ? (stabilizer ? "no" : (witness != "none" ? "yes" : "unresolved"))
                            : "n/a",
                    witness});
  write_table(*out.os, t, cfg.format, "verify");
  return logical ? 0 : 1;
}

int cmd_segments(const RunConfig& cfg) {
  Output out(cfg.out_path);
  const int w = cfg.width;
  Table t;
  t.columns = {"code", "w", "dir", "len", "verdict", "space_dim", "cert_support",
               "verified"};
  Table summary;
  summary.columns = {"code", "w", "dir", "max_nontrivial_len", "bound", "within_bound"};
  bool ok = true;

  auto dir_name = [](Site d) {
    return d == Site{1, 0, 0} ? "x" : d == Site{0, 1, 0} ? "y" : "z";
  };

  if (cfg.code_index == 0) {
    const int lmax = cfg.length_max > 0 ? cfg.length_max : 3 * w + 2;
    SliceScan scan = slice_scan(0, w, {1, 0, 0}, lmax);
    for (int len = w; len <= lmax; ++len) {
      bool forced = scan.forced_empty(len);
      t.rows.push_back({"0", std::to_string(w), "x", std::to_string(len),
                        forced ? "disconnectable" : "not-disconnected", "-", "0",
                        forced ? "yes" : "n/a"});
    }
    int maxnt = scan.first_forced_len < 0 ? lmax : scan.first_forced_len - 1;
    bool within = scan.first_forced_len >= 0 && maxnt <= 3 * w;
    summary.rows.push_back({"0", std::to_string(w), "x", std::to_string(maxnt),
                            std::to_string(3 * w), within ? "yes" : "NO"});
    ok = ok && within;
  } else {
    std::vector<Site> dirs;
    int bound = -1;
    if (cfg.code_index == 1) {
      dirs = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
      bound = 5 * w - 2;
    } else if (cfg.code_index == 2) {
      dirs = {{0, 0, 1}};
      bound = 3 * w;
    } else {
      dirs = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    }
    const int lmax = cfg.length_max > 0 ? cfg.length_max : (bound > 0 ? bound + 3 : 3 * w + 3);
    PhiScanResult res = phi_scan(cfg.code_index, w, lmax, dirs);
    for (const auto& cell : res.cells)
      t.rows.push_back({std::to_string(cfg.code_index), std::to_string(w),
                        dir_name(cell.dir), std::to_string(cell.len),
                        cell.disconnectable ? "disconnectable" : "not-disconnected",
                        std::to_string(cell.space_dim),
                        std::to_string(cell.cert_support),
                        cell.verified ? "yes" : "NO"});
    for (const auto& [dir, maxnt] : res.max_nontrivial) {
      bool within = bound < 0 || maxnt <= bound;
      summary.rows.push_back({std::to_string(cfg.code_index), std::to_string(w),
                              dir_name(dir), std::to_string(maxnt),
                              bound < 0 ? "n/a" : std::to_string(bound),
                              within ? "yes" : "NO"});
      ok = ok && within;
    }
    for (const auto& cell : res.cells) ok = ok && cell.verified;
  }

  write_table(*out.os, t, cfg.format, "segments");
  write_table(*out.os, summary, cfg.format, "segments_summary");
  return ok ? 0 : 1;
}

int cmd_code0(const RunConfig& cfg) {
  Output out(cfg.out_path);
  const int lo = cfg.L > 0 ? cfg.L : 5;
  const int hi = cfg.L_max > 0 ? cfg.L_max : lo;
  bool ok = true;

  Table head;
  head.columns = {"check", "result"};
  ThreefoldCheck tf = verify_threefold_symmetry();
  head.rows.push_back({"threefold_symmetry", tf.pass() ? "pass" : "FAIL"});
  ok = ok && tf.pass();

  Table t;
  t.columns = {"L", "k", "relation_rank", "lower_bound", "r1_phase", "r2_phase",
               "k_h", "residual_ok"};
  for (int L = lo; L <= hi; ++L) {
    LatticeCode lat(catalog_code(0), L, cfg.mem_bytes);
    int k = lat.count_logical_qubits();
    LowerBoundReport lb = lower_bound_k(L);
    ok = ok && lb.pass() && lb.relation_rank <= k;

    PauliOp r1 = relation_product(RelationKind::R1, L);
    bool r1ok = r1.is_identity() && r1.phase_exp() == 0;
    std::string r2s = "n/a";
    if (L % 2 == 0) {
      PauliOp r2 = relation_product(RelationKind::R2, L);
      bool r2ok = r2.is_identity() && r2.phase_exp() == 0;
      r2s = r2ok ? "+1" : "BAD";
      ok = ok && r2ok;
    }
    ok = ok && r1ok;

    std::string khs = "skipped (L <= 4)", res = "n/a";
    if (L > 4) {
      GammaReport g = gamma_rank(L);
      khs = std::to_string(g.k_h_explicit);
      ok = ok && g.pass();
      ResidualReport rr = residual_qubit_check(L);
      res = rr.pass() ? "yes" : "NO";
      ok = ok && rr.pass();
    }
    t.rows.push_back({std::to_string(L), std::to_string(k),
                      std::to_string(lb.relation_rank), std::to_string(lb.bound),
                      r1ok ? "+1" : "BAD", r2s, khs, res});
  }
  write_table(*out.os, head, cfg.format, "code0_checks");
  write_table(*out.os, t, cfg.format, "code0_per_L");
  return ok ? 0 : 1;
}

int cmd_distance(const RunConfig& cfg) {
  Output out(cfg.out_path);
  CubicCode code = resolve_code(cfg);
  const int L = cfg.L > 0 ? cfg.L : 2;
  DistanceResult fwd = brute_force_distance(code, L);
  DistanceResult rev = brute_force_distance(code, L, 4, 80000000, true);

  Table t;
  t.columns = {"L", "d", "d_reverse_order", "candidates"};
  t.rows.push_back({std::to_string(L), std::to_string(fwd.d), std::to_string(rev.d),
                    std::to_string(fwd.candidates_checked)});
  write_table(*out.os, t, cfg.format, "distance");
  return fwd.d == rev.d ? 0 : 1;
}

int cmd_syndrome(const RunConfig& cfg) {
  Output out(cfg.out_path);
  CubicCode code = resolve_code(cfg);
  const int L = cfg.L > 0 ? cfg.L : 5;
  LatticeCode lat(code, L, cfg.mem_bytes);
  PauliOp op = instantiate(parse_operator_spec(cfg.op_text, code.m), code.m, L);

  Table t;
  t.columns = {"generator_type", "x", "y", "z"};
  for (const auto& [type, p] : lat.syndrome(op))
    t.rows.push_back({type == 0 ? (code.kind == CodeKind::CSS ? "Z" : "Q")
                                : (code.kind == CodeKind::CSS ? "X" : "Qinv"),
                      std::to_string(p.x), std::to_string(p.y), std::to_string(p.z)});
  write_table(*out.os, t, cfg.format, "syndrome");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cubic: classification, instantiation and verification of 3D cubic "
      "stabilizer codes"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string mem_str = "4G";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--code", cfg.code_index, "catalog code index (0..17)");
    sub->add_option("--code-file", cfg.code_file, "code definition file");
    sub->add_option("--L", cfg.L, "lattice size (or range start)");
    sub->add_option("--L-max", cfg.L_max, "range end for L");
    sub->add_option("--width", cfg.width, "segment width w");
    sub->add_option("--length-max", cfg.length_max, "segment length bound");
    sub->add_option("--mem", mem_str, "memory budget, e.g. 512M, 4G");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = default)");
    sub->add_option("--format", cfg.format, "tsv or json");
    sub->add_option("--out", cfg.out_path, "output path (default stdout)");
  };

  auto* c_enum = app.add_subcommand(
      "enumerate",
      "enumerate cubic code classes\n"
      "columns: class kind m canonical catalog_match corners dual_corners conditions");
  c_enum->add_option("--kind", cfg.kind, "css or noncss");
  c_enum->add_option("--m", cfg.m_filter, "restrict to m qubits per site");
  add_common(c_enum);

  auto* c_ktable = app.add_subcommand(
      "ktable",
      "encoded qubits vs lattice size\ncolumns: L k_computed k_predicted match");
  add_common(c_ktable);

  auto* c_verify = app.add_subcommand(
      "verify",
      "verify a logical operator\n"
      "columns: operator L logical stabilizer_element nontrivial witness");
  c_verify->add_option("--op", cfg.op_text, "operator expression")->required();
  add_common(c_verify);

  auto* c_seg = app.add_subcommand(
      "segments",
      "logical string segment scan\n"
      "columns: code w dir len verdict space_dim cert_support verified");
  add_common(c_seg);

  auto* c_code0 = app.add_subcommand(
      "code0",
      "non-CSS code reports\n"
      "columns: L k relation_rank lower_bound r1_phase r2_phase k_h residual_ok");
  add_common(c_code0);

  auto* c_dist = app.add_subcommand("distance", "small-lattice distance oracle");
  add_common(c_dist);

  auto* c_syn = app.add_subcommand("syndrome", "syndrome of an operator");
  c_syn->add_option("--op", cfg.op_text, "operator expression")->required();
  add_common(c_syn);

  CLI11_PARSE(app, argc, argv);

  // parse memory budget
  try {
    std::size_t mult = 1;
    std::string digits = mem_str;
    if (!digits.empty() && (digits.back() == 'G' || digits.back() == 'g')) {
      mult = std::size_t(1) << 30;
      digits.pop_back();
    } else if (!digits.empty() && (digits.back() == 'M' || digits.back() == 'm')) {
      mult = std::size_t(1) << 20;
      digits.pop_back();
    }
    cfg.mem_bytes = std::stoull(digits) * mult;
  } catch (...) {
    std::cerr << "bad --mem value: " << mem_str << "\n";
    return 2;
  }

#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif

  try {
    cfg.validate();
    if (c_enum->parsed()) { cfg.command = "enumerate"; return cmd_enumerate(cfg); }
    if (c_ktable->parsed()) { cfg.command = "ktable"; return cmd_ktable(cfg); }
    if (c_verify->parsed()) { cfg.command = "verify"; return cmd_verify(cfg); }
    if (c_seg->parsed()) { cfg.command = "segments"; return cmd_segments(cfg); }
    if (c_code0->parsed()) { cfg.command = "code0"; return cmd_code0(cfg); }
    if (c_dist->parsed()) { cfg.command = "distance"; return cmd_distance(cfg); }
    if (c_syn->parsed()) { cfg.command = "syndrome"; return cmd_syndrome(cfg); }
  } catch (const ParseError& e) {
    std::cerr << "operator parse error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
