#pragma once

// Loader for tests/fixtures/reported_tables.csv: published (LSD, mean, LVC)
// triples, one per model row.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fixtures {

struct TableRow {
  std::string table;
  std::string name;
  double lsd = 0;
  double mean = 0;
  double lvc = 0;
};

inline std::string path(const std::string& name) { return std::string(STEADY_FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& name) {
  std::ifstream in(path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<TableRow> load_table_rows() {
  std::istringstream in(read_file("reported_tables.csv"));
  std::string line;
  std::getline(in, line);  // header
  std::vector<TableRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 5) throw std::runtime_error("bad table row: " + line);
    rows.push_back({f[0], f[1], std::stod(f[2]), std::stod(f[3]), std::stod(f[4])});
  }
  return rows;
}

}  // namespace fixtures
