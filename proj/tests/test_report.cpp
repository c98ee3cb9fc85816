#include <cstdio>
#include <fstream>
#include <sstream>

#include "cubic/report.hpp"
#include "doctest.h"

using namespace cubic;

TEST_CASE("code file emitter reproduces the catalog corner rows byte for byte") {
  for (int idx : {0, 1, 11, 17}) {
    const auto& labels = catalog_corner_labels(idx);
    std::ostringstream os;
    write_code_file(os, catalog_code(idx));
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == (idx == 0 ? "kind noncss" : "kind css"));
    std::getline(is, line);
    CHECK(line == "m 2");
    for (int c = 0; c < kNumCorners; ++c) {
      std::getline(is, line);
      CHECK(line == labels[c]);
    }
  }
}

TEST_CASE("code files round-trip through the parser") {
  std::string path = "/tmp/cubic_roundtrip.code";
  {
    std::ofstream os(path);
    write_code_file(os, catalog_code(2));
  }
  CubicCode code = read_code_file(path);
  CHECK(code.kind == CodeKind::CSS);
  CHECK(code.m == 2);
  for (int c = 0; c < kNumCorners; ++c)
    CHECK(code.gen[0].corners[c].bits == catalog_code(2).gen[0].corners[c].bits);
  std::remove(path.c_str());
}

TEST_CASE("run config validation") {
  RunConfig cfg;
  cfg.format = "tsv";
  CHECK_NOTHROW(cfg.validate());
  cfg.mem_bytes = 1 << 20;
  CHECK_THROWS(cfg.validate());
  cfg.mem_bytes = std::size_t(1) << 30;
  cfg.format = "xml";
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("tables emit tsv and versioned json") {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{"1", "x"}, {"2", "y"}};
  std::ostringstream tsv;
  write_table(tsv, t, "tsv", "demo");
  CHECK(tsv.str() == "a\tb\n1\tx\n2\ty\n");
  std::ostringstream js;
  write_table(js, t, "json", "demo");
  CHECK(js.str().find("\"schema_version\": 1") != std::string::npos);
  CHECK(js.str().find("\"table\": \"demo\"") != std::string::npos);
}
