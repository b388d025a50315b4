#include "so2zeros/io.hpp"

#include <fstream>
#include <ostream>

namespace so2zeros::io {
namespace {

bool needs_quotes(const std::string& s) {
  return s.find_first_of(",\"\n") != std::string::npos;
}

std::string quoted(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size())
    throw ContractError("Table: row width does not match the header");
  rows.push_back(std::move(row));
}

std::string cell(double v) { return format_double(v); }

std::string cell(Index v) { return std::to_string(v); }

void write_csv(const Table& table, std::ostream& os) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) os << ',';
    os << quoted(table.columns[i]);
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << quoted(row[i]);
    }
    os << '\n';
  }
}

void write_csv_file(const Table& table, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  write_csv(table, os);
  if (!os) throw NumericError("write failed: " + path);
}

nlohmann::json make_manifest(const std::string& command,
                             const nlohmann::json& config) {
  nlohmann::json m;
  m["command"] = command;
  m["config"] = config;
  m["outputs"] = nlohmann::json::array();
  return m;
}

void add_output(nlohmann::json& manifest, const std::string& path,
                Index row_count) {
  manifest["outputs"].push_back({{"path", path}, {"rows", row_count}});
}

void write_manifest(const nlohmann::json& manifest, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  os << manifest.dump(2) << '\n';
  if (!os) throw NumericError("write failed: " + path);
}

}  // namespace so2zeros::io
