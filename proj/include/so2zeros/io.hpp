#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "so2zeros/common.hpp"

namespace so2zeros::io {

// Column-labelled text table; every cell is already formatted. Numeric cells
// should go through cell() so reruns produce byte-identical files.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}
  void add(std::vector<std::string> row);
};

std::string cell(double v);
std::string cell(Index v);

void write_csv(const Table& table, std::ostream& os);
void write_csv_file(const Table& table, const std::string& path);

// Run manifest: the fully resolved configuration plus the files written.
// Deliberately carries no timestamps or host data, so a rerun with the same
// inputs serializes to the same bytes.
nlohmann::json make_manifest(const std::string& command,
                             const nlohmann::json& config);
void add_output(nlohmann::json& manifest, const std::string& path,
                Index row_count);
void write_manifest(const nlohmann::json& manifest, const std::string& path);

}  // namespace so2zeros::io
