#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nls/grid_kernel.hpp"
#include "nls/matfield.hpp"
#include "nls/operator.hpp"

namespace nls::cli {

using nlohmann::json;

// Field access with the dotted path kept for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  bool has(const std::string& key) const;
  Node at(const std::string& key) const;
  Node at(std::size_t index) const;
  std::size_t size() const;
  bool is_array() const { return j_.is_array(); }
  bool is_string() const { return j_.is_string(); }
  bool is_number() const { return j_.is_number(); }
  bool is_object() const { return j_.is_object(); }

  double number() const;
  int integer() const;
  std::uint64_t u64() const;
  bool boolean() const;
  std::string string() const;
  std::vector<double> numbers() const;
  std::vector<int> integers() const;
  // square matrix given as nested arrays; returns N and row-major entries
  std::vector<double> matrix(std::size_t& n) const;

  double number_or(const std::string& key, double fallback) const;
  int integer_or(const std::string& key, int fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;

  [[noreturn]] void fail(const std::string& msg) const;
  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

 private:
  const json& j_;
  std::string path_;
};

struct Problem {
  Grid grid;
  MatrixField field;
  std::vector<Kernel> kernels;
  std::vector<double> rates;
  std::optional<Scaling> scaling;
};

Grid parse_domain(const Node& node);
// A "random" preset without its own seed takes the top-level one.
MatrixField parse_field(const Node& node, std::optional<std::uint64_t> default_seed = std::nullopt);
std::vector<Kernel> parse_kernels(const Node& node, std::size_t species, int dim);
// Needs "domain", "field", "kernels"; "rates" and "scaling" optional.
Problem parse_problem(const Node& root);
AssembledOperator assemble(const Problem& p, bool allow_noncooperative = false);

}  // namespace nls::cli
