#include "cubic/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cubic {

void RunConfig::validate() const {
  if (L < 0 || L_max < 0 || width < 0 || length_max < 0)
    throw std::invalid_argument("bounds must be positive");
  if (mem_bytes < (std::size_t(256) << 20))
    throw std::invalid_argument("memory budget must be at least 256 MiB");
  if (format != "tsv" && format != "json")
    throw std::invalid_argument("format must be tsv or json");
}

void write_table(std::ostream& os, const Table& t, const std::string& format,
                 const std::string& name) {
  if (format == "json") {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["table"] = name;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json r;
      for (std::size_t i = 0; i < t.columns.size() && i < row.size(); ++i)
        r[t.columns[i]] = row[i];
      j["rows"].push_back(std::move(r));
    }
    os << j.dump(2) << "\n";
    return;
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "\t" : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "\t" : "") << row[i];
    os << "\n";
  }
}

std::string corners_line(const GeneratorSpec& g, int m) {
  std::string out;
  for (int c = 0; c < kNumCorners; ++c) {
    if (c) out += " ";
    out += site_op_to_string(g.corners[c], m);
  }
  return out;
}

void write_code_file(std::ostream& os, const CubicCode& code) {
  os << "kind " << (code.kind == CodeKind::CSS ? "css" : "noncss") << "\n";
  os << "m " << code.m << "\n";
  for (int c = 0; c < kNumCorners; ++c)
    os << site_op_to_string(code.gen[0].corners[c], code.m) << "\n";
}

CubicCode read_code_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open code file: " + path);
  std::string key, kind;
  int m = 0;
  in >> key >> kind;
  if (key != "kind" || (kind != "css" && kind != "noncss"))
    throw std::runtime_error("code file: expected 'kind css|noncss'");
  in >> key >> m;
  if (key != "m" || (m != 1 && m != 2))
    throw std::runtime_error("code file: expected 'm 1|2'");
  GeneratorSpec g;
  for (int c = 0; c < kNumCorners; ++c) {
    std::string label;
    if (!(in >> label)) throw std::runtime_error("code file: missing corner line");
    g.corners[c] = site_op_from_string(label, m);
  }
  return kind == "css" ? make_css_code(g, m, "file") : make_noncss_code(g, m, "file");
}

CubicCode resolve_code(const RunConfig& cfg) {
  if (!cfg.code_file.empty()) return read_code_file(cfg.code_file);
  if (cfg.code_index < 0 || cfg.code_index >= catalog_size())
    throw std::invalid_argument("--code must be in [0, " +
                                std::to_string(catalog_size() - 1) + "]");
  return catalog_code(cfg.code_index);
}

}  // namespace cubic
