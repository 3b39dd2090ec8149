#include "nls_cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "experiments.hpp"
#include "nls/errors.hpp"

namespace nls::cli {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : experiment_table()) v.push_back(e.name);
    return v;
  }();
  return names;
}

std::string config_digest(const json& config) {
  // json objects keep keys sorted, so dump() is already canonical
  const std::string text = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json parse_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < upto; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::Parse, path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                      ": invalid JSON (" + e.what() + ")");
  }
}

const ExperimentEntry* find_experiment(const std::string& name) {
  for (const auto& e : experiment_table())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace

int run_experiment_json(const std::string& experiment, const json& config, const std::string& out_dir,
                        std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    const ExperimentEntry* entry = find_experiment(experiment);
    if (!entry) throw Error(ErrorKind::InvalidInput, "unknown experiment '" + experiment + "'");
    if (!config.is_object()) throw Error(ErrorKind::Parse, "config: top level must be an object");
    const Node root(config, "");
    if (root.has("experiment") && root.at("experiment").string() != experiment)
      root.at("experiment").fail("config is for '" + root.at("experiment").string() +
                                 "', not '" + experiment + "'");
    Artifacts art(experiment);
    entry->run(root, art);
    const std::string digest = config_digest(config);
    art.write(out_dir, digest);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = art.all_pass();
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", secs);
    out << experiment << ": " << (ok ? "PASS" : "FAIL") << " (" << art.check_count() - art.failed_count()
        << "/" << art.check_count() << " checks) digest " << digest << " wall " << wall << " s\n";
    if (!ok) {
      const auto v = art.verdict(digest);
      for (const auto& c : v["checks"])
        if (!c["pass"].get<bool>())
          err << "check failed: " << c["name"].get<std::string>() << " measured " << c["measured"].dump()
              << " bound " << c["bound"].dump() << "\n";
    }
    return ok ? kExitPass : kExitCheckFailed;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

int run_experiment(const std::string& experiment, const std::string& config_path,
                   const std::string& out_dir, std::ostream& out, std::ostream& err) {
  json config;
  try {
    config = parse_config_file(config_path);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return kExitError;
  }
  return run_experiment_json(experiment, config, out_dir, out, err);
}

void list_presets(std::ostream& os) {
  os << "kernels:\n"
        "  uniform                  J = 1 on [-1/2, 1/2]\n"
        "  triangle                 J = 1 - |z| on [-1, 1]\n"
        "  trapezoid(c)             height c on |z| <= 0.2, linear to 0 at |z| = 1/c - 0.2 (1 < c < 2.5)\n"
        "  mollified_trapezoid(c)   trapezoid(c) smoothed by a bump of width 0.01\n"
        "  gauss_cutoff(s,R)        Gaussian of scale s cut at radius R, renormalized\n"
        "fields:\n"
        "  constant                 {matrix: [[..]]}\n"
        "  counterexample_2sp       (1 - sqrt x) [[2/3, 1/3], [1/3, 2/3]]\n"
        "  scalar                   {expr}\n"
        "  scalar_times             {expr, matrix}\n"
        "  expr                     {entries: [[expr, ..], ..]} symmetric\n"
        "  smooth_bump              {matrix, eps, x0, width}: B + eps exp(-(x-x0)^2/width^2) I\n"
        "  random                   {species, seed}: cooperative cosine-modulated entries\n"
        "experiments:\n";
  for (const auto& e : experiment_table()) {
    os << "  " << e.name;
    for (std::size_t k = e.name.size(); k < 25; ++k) os << ' ';
    os << e.summary << "\n";
  }
}

}  // namespace nls::cli
