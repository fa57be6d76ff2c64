#include "udw/table.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "udw/version.hpp"

namespace udw {

void Table::add_row(std::vector<std::optional<double>> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("Table: row width does not match column count");
  }
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string hash_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const TableMeta& meta, const Table& table) {
  out << "# udw-cli " << kVersion << "\n";
  out << "# command: " << meta.command << "\n";
  out << "# config_hash: " << hash_hex(meta.config_hash) << "\n";
  if (meta.seed) out << "# seed: " << *meta.seed << "\n";
  for (const auto& [key, value] : meta.extra) {
    out << "# " << key << ": " << value << "\n";
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      if (row[i]) out << format_double(*row[i]);
    }
    out << "\n";
  }
}

void write_json(std::ostream& out, const TableMeta& meta, const Table& table) {
  nlohmann::ordered_json doc;
  doc["meta"]["tool"] = std::string("udw-cli ") + kVersion;
  doc["meta"]["command"] = meta.command;
  doc["meta"]["config_hash"] = hash_hex(meta.config_hash);
  if (meta.seed) doc["meta"]["seed"] = *meta.seed;
  for (const auto& [key, value] : meta.extra) doc["meta"][key] = value;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto jrow = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      if (cell) {
        jrow.push_back(*cell);
      } else {
        jrow.push_back(nullptr);
      }
    }
    rows.push_back(std::move(jrow));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << "\n";
}

}  // namespace udw
