#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nls/errors.hpp"

namespace nls::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw Error(ErrorKind::Shape, file_ + ": row has " + std::to_string(row.size()) +
                                      " cells, expected " + std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

std::string CsvTable::render() const {
  std::ostringstream os;
  for (const auto& c : columns_) os << "# " << c.name << ": " << c.doc << '\n';
  for (std::size_t k = 0; k < columns_.size(); ++k) os << (k ? "," : "") << columns_[k].name;
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      const Cell& c = row[k];
      if (const double* d = std::get_if<double>(&c)) os << format_double(*d);
      else if (const long long* i = std::get_if<long long>(&c)) os << *i;
      else os << std::get<std::string>(c);
    }
    os << '\n';
  }
  return os.str();
}

void Artifacts::check(const std::string& name, bool pass, double measured, double bound) {
  checks_.push_back(Check{name, pass, measured, bound});
}

void Artifacts::add_checks(const std::vector<Check>& checks, const std::string& prefix) {
  for (const auto& c : checks) checks_.push_back(Check{prefix + c.name, c.pass, c.measured, c.bound});
}

CsvTable& Artifacts::table(std::string file, std::vector<Column> columns) {
  tables_.emplace_back(std::move(file), std::move(columns));
  return tables_.back();
}

void Artifacts::add_text_file(std::string file, std::string contents) {
  texts_.emplace_back(std::move(file), std::move(contents));
}

bool Artifacts::all_pass() const { return failed_count() == 0; }

std::size_t Artifacts::failed_count() const {
  std::size_t n = 0;
  for (const auto& c : checks_) n += c.pass ? 0 : 1;
  return n;
}

namespace {

// JSON has no inf/nan; write them as strings so the verdict still says something.
ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

ordered_json Artifacts::verdict(const std::string& digest) const {
  ordered_json v = ordered_json::object();
  v["experiment"] = experiment_;
  v["config_digest"] = digest;
  ordered_json checks = ordered_json::array();
  for (const auto& c : checks_) {
    ordered_json e = ordered_json::object();
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["measured"] = number(c.measured);
    e["bound"] = number(c.bound);
    checks.push_back(std::move(e));
  }
  v["checks"] = std::move(checks);
  v["results"] = results_;
  v["all_pass"] = all_pass();
  return v;
}

void Artifacts::write(const std::string& dir, const std::string& digest) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::InvalidInput, "cannot create output directory '" + dir + "': " + ec.message());
  auto put = [&](const std::string& name, const std::string& text) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw Error(ErrorKind::InvalidInput, "write failed for '" + path.string() + "'");
  };
  for (const auto& t : tables_) put(t.file(), t.render());
  for (const auto& [name, text] : texts_) put(name, text);
  put("verdict.json", verdict(digest).dump(2) + "\n");
}

}  // namespace nls::cli
