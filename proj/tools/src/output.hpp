#pragma once

#include <deque>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "nls/asymptotics.hpp"

namespace nls::cli {

using ordered_json = nlohmann::ordered_json;

struct Column {
  std::string name;
  std::string doc;  // units and definition, written as a comment line
};

using Cell = std::variant<double, long long, std::string>;

class CsvTable {
 public:
  CsvTable(std::string file, std::vector<Column> columns)
      : file_(std::move(file)), columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  const std::string& file() const { return file_; }
  std::string render() const;

 private:
  std::string file_;
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

// %.16e: 17 significant digits
std::string format_double(double v);

// Collects the checks, result values and data files of one run.
class Artifacts {
 public:
  explicit Artifacts(std::string experiment) : experiment_(std::move(experiment)) {}

  void check(const std::string& name, bool pass, double measured, double bound);
  void add_checks(const std::vector<Check>& checks, const std::string& prefix = "");
  ordered_json& results() { return results_; }
  CsvTable& table(std::string file, std::vector<Column> columns);
  void add_text_file(std::string file, std::string contents);

  bool all_pass() const;
  std::size_t check_count() const { return checks_.size(); }
  std::size_t failed_count() const;

  ordered_json verdict(const std::string& digest) const;
  // Writes every file into dir, creating it when needed.
  void write(const std::string& dir, const std::string& digest) const;

 private:
  std::string experiment_;
  std::vector<Check> checks_;
  ordered_json results_ = ordered_json::object();
  std::deque<CsvTable> tables_;  // table() hands out references
  std::vector<std::pair<std::string, std::string>> texts_;
};

}  // namespace nls::cli
