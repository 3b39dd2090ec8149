#include "config.hpp"

#include <cmath>

#include "nls/errors.hpp"

namespace nls::cli {

void Node::fail(const std::string& msg) const {
  throw Error(ErrorKind::Parse, "config field '" + path_ + "': " + msg);
}

bool Node::has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

Node Node::at(const std::string& key) const {
  if (!j_.is_object()) fail("expected an object");
  if (!j_.contains(key)) {
    throw Error(ErrorKind::Parse,
                "config field '" + (path_.empty() ? key : path_ + "." + key) + "': missing");
  }
  return Node(j_.at(key), path_.empty() ? key : path_ + "." + key);
}

Node Node::at(std::size_t index) const {
  if (!j_.is_array()) fail("expected an array");
  if (index >= j_.size()) fail("index " + std::to_string(index) + " out of range");
  return Node(j_.at(index), path_ + "[" + std::to_string(index) + "]");
}

std::size_t Node::size() const {
  if (!j_.is_array()) fail("expected an array");
  return j_.size();
}

double Node::number() const {
  if (!j_.is_number()) fail("expected a number");
  const double v = j_.get<double>();
  if (!std::isfinite(v)) fail("expected a finite number");
  return v;
}

int Node::integer() const {
  if (!j_.is_number_integer()) fail("expected an integer");
  return j_.get<int>();
}

std::uint64_t Node::u64() const {
  if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0))
    fail("expected a non-negative integer");
  return j_.get<std::uint64_t>();
}

bool Node::boolean() const {
  if (!j_.is_boolean()) fail("expected true or false");
  return j_.get<bool>();
}

std::string Node::string() const {
  if (!j_.is_string()) fail("expected a string");
  return j_.get<std::string>();
}

std::vector<double> Node::numbers() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < size(); ++k) out.push_back(at(k).number());
  return out;
}

std::vector<int> Node::integers() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < size(); ++k) out.push_back(at(k).integer());
  return out;
}

std::vector<double> Node::matrix(std::size_t& n) const {
  n = size();
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Node row = at(i);
    if (row.size() != n) row.fail("matrix rows must have " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) out.push_back(row.at(j).number());
  }
  return out;
}

double Node::number_or(const std::string& key, double fallback) const {
  return has(key) ? at(key).number() : fallback;
}
int Node::integer_or(const std::string& key, int fallback) const {
  return has(key) ? at(key).integer() : fallback;
}
bool Node::boolean_or(const std::string& key, bool fallback) const {
  return has(key) ? at(key).boolean() : fallback;
}
std::string Node::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key).string() : fallback;
}

Grid parse_domain(const Node& node) {
  if (node.has("interval")) {
    const auto iv = node.at("interval").numbers();
    if (iv.size() != 2) node.at("interval").fail("expected [lo, hi]");
    if (!(iv[0] < iv[1])) node.at("interval").fail("expected lo < hi");
    const int n = node.at("n").integer();
    if (n < 2) node.at("n").fail("node count must be >= 2");
    return build_grid_1d(iv[0], iv[1], n);
  }
  const auto lo = node.at("lo").numbers();
  const auto hi = node.at("hi").numbers();
  const auto counts = node.at("counts").integers();
  if (lo.size() != hi.size() || lo.size() != counts.size() || lo.empty() || lo.size() > 2)
    node.fail("lo, hi and counts must have one entry per axis (1 or 2 axes)");
  Box box = lo.size() == 1 ? Box::interval(lo[0], hi[0]) : Box::rectangle(lo[0], hi[0], lo[1], hi[1]);
  return build_grid(box, counts);
}

MatrixField parse_field(const Node& node, std::optional<std::uint64_t> default_seed) {
  const std::string preset = node.at("preset").string();
  if (preset == "constant") {
    std::size_t n = 0;
    const auto m = node.at("matrix").matrix(n);
    return MatrixField::constant(n, m);
  }
  if (preset == "counterexample_2sp") return MatrixField::counterexample_2sp();
  if (preset == "scalar") return MatrixField::scalar(node.at("expr").string());
  if (preset == "scalar_times") {
    std::size_t n = 0;
    const auto m = node.at("matrix").matrix(n);
    return MatrixField::scalar_times(node.at("expr").string(), n, m);
  }
  if (preset == "expr") {
    const Node rows = node.at("entries");
    const std::size_t n = rows.size();
    std::vector<std::string> entries;
    for (std::size_t i = 0; i < n; ++i) {
      const Node row = rows.at(i);
      if (row.size() != n) row.fail("expected " + std::to_string(n) + " entries");
      for (std::size_t j = 0; j < n; ++j) entries.push_back(row.at(j).string());
    }
    return MatrixField::expressions(n, entries);
  }
  if (preset == "smooth_bump") {
    std::size_t n = 0;
    const auto m = node.at("matrix").matrix(n);
    return MatrixField::smooth_bump(n, m, node.at("eps").number(), node.at("x0").number(),
                                    node.at("width").number());
  }
  if (preset == "random") {
    const int n = node.at("species").integer();
    if (n < 1 || n > 8) node.at("species").fail("expected 1..8");
    std::uint64_t seed = 0;
    if (node.has("seed")) seed = node.at("seed").u64();
    else if (default_seed) seed = *default_seed;
    else node.at("seed");  // reports the missing field
    return MatrixField::random(static_cast<std::size_t>(n), seed);
  }
  node.at("preset").fail("unknown field preset '" + preset + "'");
}

std::vector<Kernel> parse_kernels(const Node& node, std::size_t species, int dim) {
  std::vector<Kernel> out;
  if (node.is_string()) {
    const Kernel k = kernel_from_name(node.string(), dim);
    out.assign(species, k);
    return out;
  }
  if (node.size() != species)
    node.fail("expected " + std::to_string(species) + " kernel names (one per species)");
  for (std::size_t i = 0; i < species; ++i) out.push_back(kernel_from_name(node.at(i).string(), dim));
  return out;
}

Problem parse_problem(const Node& root) {
  Problem p;
  p.grid = parse_domain(root.at("domain"));
  std::optional<std::uint64_t> seed;
  if (root.has("seed")) seed = root.at("seed").u64();
  p.field = parse_field(root.at("field"), seed);
  const std::size_t n = p.field.species();
  p.kernels = parse_kernels(root.at("kernels"), n, p.grid.dim());
  if (root.has("rates")) {
    const Node r = root.at("rates");
    if (r.is_number()) p.rates.assign(n, r.number());
    else p.rates = r.numbers();
    if (p.rates.size() != n) r.fail("expected " + std::to_string(n) + " rates");
  } else {
    p.rates.assign(n, 1.0);
  }
  if (root.has("scaling")) {
    const Node s = root.at("scaling");
    p.scaling = Scaling{s.at("sigma").number(), s.number_or("m", 0.0)};
  }
  return p;
}

AssembledOperator assemble(const Problem& p, bool allow_noncooperative) {
  if (p.scaling)
    return assemble_K_sigma_m(p.scaling->sigma, p.scaling->m, p.kernels, p.field, p.grid,
                              allow_noncooperative);
  return assemble_K(p.rates, p.kernels, p.field, p.grid, allow_noncooperative);
}

}  // namespace nls::cli
