#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cubic/code.hpp"

namespace cubic {

struct RunConfig {
  std::string command;
  int code_index = -1;
  std::string code_file;
  int L = 0;
  int L_max = 0;
  int width = 2;
  int length_max = 0;
  std::size_t mem_bytes = std::size_t(4) << 30;
  int threads = 0;  // 0 = library default
  std::string format = "tsv";
  std::string out_path;  // empty = stdout
  std::string op_text;
  std::string kind = "css";
  int m_filter = 0;  // 0 = no filter

  void validate() const;  // throws std::invalid_argument
};

// Simple table: header + string rows, emitted as TSV or JSON records.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_table(std::ostream& os, const Table& t, const std::string& format,
                 const std::string& name);

// Code-definition file: "kind css|noncss", "m <int>", then 8 corner lines in
// A B C D A' B' C' D' order, two characters per site operator.
CubicCode read_code_file(const std::string& path);
void write_code_file(std::ostream& os, const CubicCode& code);
std::string corners_line(const GeneratorSpec& g, int m);

// Resolve --code / --code-file into a code.
CubicCode resolve_code(const RunConfig& cfg);

}  // namespace cubic
