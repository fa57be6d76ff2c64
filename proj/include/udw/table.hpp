#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace udw {

// Header stamped into every emitted table; together with the config file it
// reproduces the run bit-exactly.
struct TableMeta {
  std::string command;
  std::uint64_t config_hash = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> extra;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  void add_row(std::vector<std::optional<double>> row);
};

std::string format_double(double v);  // shortest round-trip-exact form

// UTF-8 CSV with a '#'-prefixed metadata header.  Missing cells are empty.
void write_csv(std::ostream& out, const TableMeta& meta, const Table& table);

// JSON mirror: {"meta": {...}, "columns": [...], "rows": [[...]]} with null
// for missing cells.
void write_json(std::ostream& out, const TableMeta& meta, const Table& table);

}  // namespace udw
