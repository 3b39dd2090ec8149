#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nls/asymptotics.hpp"
#include "nls/errors.hpp"
#include "nls/rankone.hpp"
#include "nls/spectra.hpp"

namespace nls::cli {

namespace {

Node params_of(const Node& root) {
  static const json empty = json::object();
  return root.has("params") ? root.at("params") : Node(empty, "params");
}

double tolerance_or(const Node& root, const std::string& key, double fallback) {
  return root.has("tolerances") ? root.at("tolerances").number_or(key, fallback) : fallback;
}

std::vector<Column> node_columns(const Grid& grid) {
  std::vector<Column> cols = {{"species", "species index i (0-based)"},
                              {"node", "grid node index p (0-based, row-major in 2D)"},
                              {"x", "first coordinate of the node (length units of the domain)"}};
  if (grid.dim() == 2) cols.push_back({"y", "second coordinate of the node (length units)"});
  return cols;
}

std::vector<Cell> node_cells(const Grid& grid, std::size_t i, std::size_t p) {
  std::vector<Cell> row = {static_cast<long long>(i), static_cast<long long>(p), grid.nodes[p][0]};
  if (grid.dim() == 2) row.push_back(grid.nodes[p][1]);
  return row;
}

void eigenvector_table(Artifacts& art, const std::string& file, const Grid& grid,
                       const BlockVector& v, std::size_t species, const std::string& doc) {
  auto cols = node_columns(grid);
  cols.push_back({"phi", doc});
  CsvTable& t = art.table(file, cols);
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < species; ++i)
    for (std::size_t p = 0; p < n; ++p) {
      auto row = node_cells(grid, i, p);
      row.push_back(v[i * n + p]);
      t.add_row(std::move(row));
    }
}

void sweep_table(Artifacts& art, const SweepResult& r, const std::string& parameter,
                 const std::string& doc) {
  CsvTable& t = art.table("sweep.csv", {{parameter, doc},
                                        {"lambda_p", "principal eigenvalue of -K (dimensionless rate)"},
                                        {"residual", "max-norm of K phi + lambda_p phi for the computed pair"},
                                        {"positivity_margin", "minimum entry of the E-normalized eigenvector"}});
  for (std::size_t k = 0; k < r.parameters.size(); ++k)
    t.add_row({r.parameters[k], r.lambda_p[k], r.reports[k].residual, r.reports[k].positivity_margin});
  art.add_checks(r.checks);
  for (const auto& [name, value] : r.metrics) art.results()[name] = value;
  art.results()["parameters"] = r.parameters;
  art.results()["lambda_p"] = r.lambda_p;
}

Setup make_setup(const Problem& p) {
  Setup s{p.grid, p.kernels, p.field, {}};
  return s;
}

// --- validate-kernel ---------------------------------------------------------

void run_validate_kernel(const Node& root, Artifacts& art) {
  const Node params = params_of(root);
  const int res = params.integer_or("quad_resolution", 4096);
  const double tol = params.number_or("tol", 1e-10);
  int dim = 1;
  if (root.has("domain")) dim = parse_domain(root.at("domain")).dim();
  dim = params.integer_or("dim", dim);
  const Node kn = root.at("kernels");
  std::vector<std::string> names;
  if (kn.is_string()) names.push_back(kn.string());
  else for (std::size_t k = 0; k < kn.size(); ++k) names.push_back(kn.at(k).string());

  CsvTable& t = art.table("kernels.csv",
                          {{"kernel", "kernel preset name"},
                           {"mass", "quadrature integral of J over R^dim (should be 1)"},
                           {"min_sample", "smallest sampled value of J (must be >= 0)"},
                           {"symmetry_defect", "max |J(z) - J(-z)| over samples"},
                           {"center_value", "J(0), must be positive"},
                           {"second_moment", "D2 = integral |z|^2 J(z) dz (length^2); nan without a cutoff"}});
  CsvTable& prof = art.table("profiles.csv", {{"kernel", "kernel preset name"},
                                              {"z", "offset (length units)"},
                                              {"J", "1D profile value J(z) (1/length)"}});
  ordered_json list = ordered_json::array();
  for (const auto& name : names) {
    const Kernel k = kernel_from_name(name, dim);
    const KernelReport r = validate_kernel(k, res, tol);
    double m2 = std::nan("");
    if (k.support_radius()) m2 = second_moment(k, res).value;
    t.add_row({name, r.mass, r.min_sample, r.symmetry_defect, r.center_value, m2});
    art.check(name + ":mass", r.mass_ok, std::abs(r.mass - 1.0), tol);
    art.check(name + ":nonnegative", r.nonnegative_ok, r.min_sample, 0.0);
    art.check(name + ":symmetric", r.symmetric_ok, r.symmetry_defect, tol);
    art.check(name + ":center_positive", r.center_ok, r.center_value, 0.0);
    const double reach = k.support_radius().value_or(3.0) * 1.25;
    for (int s = 0; s <= 200; ++s) {
      const double z = -reach + 2.0 * reach * s / 200.0;
      prof.add_row({name, z, k.profile(z)});
    }
    ordered_json e = ordered_json::object();
    e["kernel"] = name;
    e["mass"] = r.mass;
    e["second_moment"] = std::isfinite(m2) ? ordered_json(m2) : ordered_json(nullptr);
    list.push_back(std::move(e));
  }
  art.results()["kernels"] = std::move(list);
}

// --- eigen -------------------------------------------------------------------

void run_eigen(const Node& root, Artifacts& art) {
  const Node params = params_of(root);
  const Problem p = parse_problem(root);
  const AssembledOperator op = assemble(p);
  const double tol = tolerance_or(root, "eigen", 1e-11);
  const EigenReport r = principal_eigenpair(op, tol);
  auto& res = art.results();
  res["lambda_p"] = r.lambda_p;
  res["residual"] = r.residual;
  res["positivity_margin"] = r.positivity_margin;
  res["iterations"] = r.iterations;
  res["method"] = to_string(r.method);
  res["size"] = op.size();

  const double scale = 1.0 + std::abs(r.lambda_p);
  art.check("eigen_residual", r.residual <= 1e-9 * scale, r.residual, 1e-9 * scale);
  art.check("positive_eigenvector", r.positivity_margin > 0.0, r.positivity_margin, 0.0);
  if (params.has("expect_lambda")) {
    const double expect = params.at("expect_lambda").number();
    const double etol = params.number_or("expect_tol", 1e-10);
    art.check("expected_lambda", std::abs(r.lambda_p - expect) <= etol, std::abs(r.lambda_p - expect), etol);
  }
  if (params.boolean_or("certify", true)) {
    const TripleReport tr = lambda_triple_consistency(op);
    res["certified_lower"] = tr.certified_lower;
    res["certified_upper"] = tr.certified_upper;
    art.check("test_pair_bracket", tr.pass, tr.gap, 200.0 * tr.residual);
  }
  const bool full = params.boolean_or("full_spectrum", op.size() <= 400);
  if (full) {
    const std::vector<double> mu = full_spectrum_small(op);
    const double gap = std::abs(r.lambda_p + mu.front());
    art.check("variational_identity", gap <= 1e-9 * scale, gap, 1e-9 * scale);
    if (mu.size() > 1) {
      res["spectral_gap"] = mu[0] - mu[1];
      // with a zero rate the nodes decouple and the top eigenvalue can be repeated
      const bool coupled = std::all_of(op.rates.begin(), op.rates.end(), [](double d) { return d > 0.0; });
      if (coupled) art.check("spectral_gap_positive", mu[0] - mu[1] > 0.0, mu[0] - mu[1], 0.0);
    }
    CsvTable& t = art.table("spectrum.csv", {{"index", "position in descending order"},
                                             {"mu", "eigenvalue of K (dimensionless rate)"}});
    for (std::size_t k = 0; k < mu.size(); ++k) t.add_row({static_cast<long long>(k), mu[k]});
  }
  eigenvector_table(art, "eigenvector.csv", op.grid, r.eigenvector, op.species,
                    "principal eigenvector entry, weight * sum phi^2 = 1");
  if (params.boolean_or("dump_matrix", false)) {
    std::ostringstream os;
    op.write_text(os);
    art.add_text_file("operator.txt", os.str());
  }
}

// --- sweep-d -----------------------------------------------------------------

void run_sweep_d(const Node& root, Artifacts& art) {
  const Node params = params_of(root);
  const Problem p = parse_problem(root);
  Setup s = make_setup(p);
  if (params.has("direction")) {
    s.direction = params.at("direction").numbers();
    if (s.direction.size() != p.field.species())
      params.at("direction").fail("expected one entry per species");
  }
  const std::vector<double> d = params.at("d_values").numbers();
  const SweepResult r = sweep_dispersal(s, d);
  sweep_table(art, r, "d", "dispersal scale; rates are d times the direction vector");
}

// --- sweep-sigma -------------------------------------------------------------

void run_sweep_sigma(const Node& root, Artifacts& art) {
  const Node params = params_of(root);
  const Problem p = parse_problem(root);
  double m = p.scaling ? p.scaling->m : 0.0;
  m = params.number_or("m", m);
  const std::vector<double> sigmas = params.at("sigma_values").numbers();
  SigmaOptions opt;
  opt.bump_k = params.integer_or("bump_k", opt.bump_k);
  const SweepResult r = sweep_sigma(make_setup(p), m, sigmas, opt);
  art.results()["m"] = m;
  sweep_table(art, r, "sigma", "dispersal range sigma (length units)");
}

// --- invariance --------------------------------------------------------------

void run_invariance(const Node& root, Artifacts& art) {
  const Node params = params_of(root);
  const Problem p = parse_problem(root);
  const std::vector<double> sigmas = params.at("sigmas").numbers();
  CsvTable& t = art.table("invariance.csv",
                          {{"sigma", "domain and kernel scale factor"},
                           {"matrix_gap", "max entrywise |K - K_sigma| on matched grids"},
                           {"lambda_base", "lambda_p on the base domain"},
                           {"lambda_scaled", "lambda_p on sigma * domain with the scaled kernel"},
                           {"lambda_gap", "|lambda_base - lambda_scaled|"}});
  for (double s : sigmas) {
    const InvarianceReport r = scaling_invariance_check(make_setup(p), s);
    t.add_row({s, r.matrix_gap, r.lambda_base, r.lambda_scaled, r.lambda_gap});
    std::ostringstream tag;
    tag << "sigma=" << s;
    art.check(tag.str() + ":matrix_equal", r.matrix_gap <= 1e-12, r.matrix_gap, 1e-12);
    art.check(tag.str() + ":lambda_equal", r.lambda_gap <= 1e-10, r.lambda_gap, 1e-10);
  }
}

// --- domain-mono -------------------------------------------------------------

void run_domain_mono(const Node& root, Artifacts& art) {
  const Node params = params_of(root);
  const Problem p = parse_problem(root);
  const Node inner = params.at("inner");
  const auto lo = inner.at("lo").numbers();
  const auto hi = inner.at("hi").numbers();
  if (lo.size() != hi.size() || lo.empty() || lo.size() > 2) inner.fail("lo and hi must have 1 or 2 entries");
  const Box box = lo.size() == 1 ? Box::interval(lo[0], hi[0]) : Box::rectangle(lo[0], hi[0], lo[1], hi[1]);
  const double sigma = params.number_or("sigma", 1.0);
  const double m = params.number_or("m", 0.0);
  const MonotonicityReport r = domain_monotonicity_check(make_setup(p), box, sigma, m);
  auto& res = art.results();
  res["lambda_inner"] = r.lambda_inner;
  res["lambda_outer"] = r.lambda_outer;
  res["c0"] = r.c0;
  res["removed_measure"] = r.removed_measure;
  res["gap"] = r.gap;
  art.check("ordered", r.ordered, r.lambda_inner - r.lambda_outer, -1e-10);
  art.check("gap_within_bound", r.within_bound, r.gap, r.c0 * r.removed_measure + 1e-10);
  CsvTable& t = art.table("domain_mono.csv",
                          {{"domain", "inner or outer"},
                           {"measure", "Lebesgue measure of the domain (length^dim)"},
                           {"lambda_p", "principal eigenvalue of -K on the domain"}});
  t.add_row({std::string("inner"), box.volume(), r.lambda_inner});
  t.add_row({std::string("outer"), p.grid.box.volume(), r.lambda_outer});
}

// --- rank-one ----------------------------------------------------------------

void run_rank_one(const Node& root, Artifacts& art) {
  const Node params = params_of(root);
  const std::string expr = params.at("potential").string();
  const auto iv = params.at("interval").numbers();
  if (iv.size() != 2 || !(iv[0] < iv[1])) params.at("interval").fail("expected [lo, hi] with lo < hi");
  const ScalarPotential a = ScalarPotential::from_expression(expr, iv[0], iv[1]);
  const RankOneResult r = solve_rank_one(a);
  auto& res = art.results();
  res["verdict"] = to_string(r.verdict);
  res["i0"] = r.i0.divergent ? ordered_json("inf") : ordered_json(r.i0.value);
  res["i0_error"] = r.i0.error;
  res["zeros"] = a.zeros();
  if (r.root) {
    res["root"] = *r.root;
    res["bisection_steps"] = r.bisection_steps;
    const IntegralResult f = F(*r.root, a);
    art.check("root_normalization", std::abs(f.value - 1.0) <= 1e-8, std::abs(f.value - 1.0), 1e-8);
    CsvTable& t = art.table("profile.csv", {{"x", "position (length units)"},
                                            {"phi", "eigenfunction 1 / (root - a(x)), unit integral"}});
    for (int s = 0; s <= 400; ++s) {
      const double x = a.lo() + a.length() * s / 400.0;
      t.add_row({x, r.profile(x)});
    }
  } else {
    res["root"] = nullptr;
  }
  if (!r.i0.divergent)
    art.check("i0_accuracy", r.i0.error <= 1e-8 * std::max(1.0, r.i0.value), r.i0.error,
              1e-8 * std::max(1.0, r.i0.value));
  if (params.has("expect_verdict")) {
    const std::string want = params.at("expect_verdict").string();
    art.check("verdict=" + want, want == to_string(r.verdict), r.verdict == RankOneVerdict::Eigenpair, 0.0);
  }
  if (params.has("expect_i0")) {
    const double want = params.at("expect_i0").number();
    const double etol = params.number_or("expect_tol", 1e-3);
    const double gap = r.i0.divergent ? INFINITY : std::abs(r.i0.value - want);
    art.check("expected_i0", gap <= etol, gap, etol);
  }
  CsvTable& t = art.table("F.csv", {{"lambda", "spectral parameter (> 0)"},
                                    {"F", "integral of 1 / (lambda - a(x)) over the interval"}});
  for (int e = -6; e <= 2; ++e) {
    const double lam = std::pow(10.0, e);
    t.add_row({lam, F(lam, a).value});
  }
}

// --- concentration -----------------------------------------------------------

void run_concentration(const Node& root, Artifacts& art) {
  const Node params = params_of(root);
  const Node kn = root.at("kernels");
  const std::string kname = kn.is_string() ? kn.string() : kn.at(std::size_t{0}).string();
  const Kernel k = kernel_from_name(kname, 1);
  const std::vector<int> counts = params.at("counts").integers();
  const std::string profile = params.string_or("profile", "1 - sqrt(x)");
  const std::string expect = params.string_or("expect", "concentration");
  if (expect != "concentration" && expect != "bounded")
    params.at("expect").fail("expected \"concentration\" or \"bounded\"");
  const ConcentrationTable tab = concentration_study(k, counts, profile);
  CsvTable& t = art.table("concentration.csv",
                          {{"n", "node count on [0, 0.2]"},
                           {"lambda_p", "principal eigenvalue of the two-species system"},
                           {"ratio", "sup-norm over L1-norm of the eigenvector (1/length)"},
                           {"residual", "max-norm eigen residual"},
                           {"scalar_lambda_p", "principal eigenvalue of the scalar reduction"}});
  double worst = 0.0;
  for (const auto& row : tab.rows) {
    t.add_row({static_cast<long long>(row.n), row.lambda_p, row.ratio, row.residual, row.scalar_lambda_p});
    worst = std::max(worst, std::abs(row.lambda_p - row.scalar_lambda_p));
  }
  art.check("scalar_reduction", tab.reduction_consistent, worst, 1e-8);
  if (expect == "concentration") {
    double min_growth = INFINITY;
    for (std::size_t q = 1; q < tab.rows.size(); ++q)
      min_growth = std::min(min_growth, tab.rows[q].ratio / tab.rows[q - 1].ratio);
    art.check("ratio_growth", tab.concentration, min_growth, 1.2);
  } else {
    art.check("ratio_bounded", tab.last_ratio_change <= 1.05, tab.last_ratio_change, 1.05);
  }
  art.results()["last_ratio_change"] = tab.last_ratio_change;
  art.results()["concentration"] = tab.concentration;
}

// --- maxprinciple ------------------------------------------------------------

void run_maxprinciple(const Node& root, Artifacts& art) {
  const Node params = params_of(root);
  const Problem p = parse_problem(root);
  AssembledOperator op = assemble(p);
  const int samples = params.integer_or("samples", 16);
  const EigenReport r = principal_eigenpair(op);
  art.results()["lambda_p_original"] = r.lambda_p;
  if (params.boolean_or("shift_to_unit", true)) op = op.shifted(r.lambda_p - 1.0);
  const InversePositivityReport ip = inverse_positivity_check(op, samples);
  art.results()["lambda_p"] = ip.lambda_p;
  art.results()["min_entry"] = ip.min_entry;
  art.check("lambda_p_at_least_one", ip.lambda_p >= 1.0 - 1e-9, ip.lambda_p, 1.0 - 1e-9);
  art.check("resolvent_nonnegative", ip.pass, ip.min_entry, -1e-10);
  CsvTable& t = art.table("columns.csv", {{"column", "sampled column index of (-K)^-1 (species-major)"}});
  for (std::size_t c : ip.columns) t.add_row({static_cast<long long>(c)});
}

// --- bounds ------------------------------------------------------------------

void run_bounds(const Node& root, Artifacts& art) {
  const Problem p = parse_problem(root);
  const AssembledOperator op = assemble(p);
  const BoundsReport r = bounds_check(op);
  auto& res = art.results();
  res["lambda_v"] = r.lambda_v;
  res["nu"] = r.nu;
  res["k_max"] = r.k_max;
  res["lower"] = r.lower;
  res["strict_margin"] = r.strict_margin;
  res["strict_guaranteed"] = r.strict_guaranteed;
  res["hypothesis_P"] = to_string(r.hypothesis);
  art.check("lower_bound", r.lower_ok, r.lambda_v - r.lower, 0.0);
  if (r.strict_guaranteed) art.check("strict_upper", r.strict_ok, r.strict_margin, 1e-6);
  CsvTable& t = art.table("bounds.csv", {{"quantity", "name"}, {"value", "value (dimensionless rate)"}});
  t.add_row({std::string("lower"), r.lower});
  t.add_row({std::string("lambda_v"), r.lambda_v});
  t.add_row({std::string("minus_nu"), -r.nu});
}

// --- bump --------------------------------------------------------------------

void run_bump(const Node& root, Artifacts& art) {
  const Node params = params_of(root);
  const Problem p = parse_problem(root);
  std::vector<int> ks;
  if (params.has("k") && params.at("k").is_array()) ks = params.at("k").integers();
  else ks.push_back(params.integer_or("k", 10));
  CsvTable& summary = art.table("bump.csv",
                                {{"k", "bump index (level is nu - 1/k)"},
                                 {"center", "bump center (length units)"},
                                 {"radius", "support radius of the bump (length units)"},
                                 {"a_form", "weight * sum f^T A f for the unit bump"},
                                 {"bound", "nu - 2/k"}});
  for (int k : ks) {
    const BumpFunction b = build_bump(p.field, p.grid, k);
    const double bound = b.nu - 2.0 / k;
    summary.add_row({static_cast<long long>(k), b.center, b.radius, b.a_form, bound});
    art.check("k=" + std::to_string(k) + ":form_bound", b.a_form >= bound, b.a_form, bound);
    eigenvector_table(art, "bump_k" + std::to_string(k) + ".csv", p.grid, b.values, p.field.species(),
                      "bump value, weight * sum f^2 = 1");
    art.results()["nu"] = b.nu;
  }
}

// --- gradient-ineq -----------------------------------------------------------

void run_gradient_ineq(const Node& root, Artifacts& art) {
  const Node kn = root.at("kernels");
  const std::string kname = kn.is_string() ? kn.string() : kn.at(std::size_t{0}).string();
  const Grid grid = parse_domain(root.at("domain"));
  if (grid.dim() != 1) root.at("domain").fail("gradient-ineq runs on 1D domains");
  const Kernel k = kernel_from_name(kname, 1);
  const std::vector<double> phi = tapered_sine(grid);
  const GradientReport r = gradient_inequality_check(k, grid, phi);
  art.results()["lhs"] = r.lhs;
  art.results()["rhs"] = r.rhs;
  art.results()["d2"] = r.d2;
  art.check("lhs_le_1.05_rhs", r.pass, r.lhs, 1.05 * r.rhs);
  CsvTable& t = art.table("profile.csv", {{"x", "node position (length units)"},
                                          {"phi", "tapered sine test function"}});
  for (std::size_t q = 0; q < grid.size(); ++q) t.add_row({grid.x(q), phi[q]});
}

}  // namespace

const std::vector<ExperimentEntry>& experiment_table() {
  static const std::vector<ExperimentEntry> table = {
      {"validate-kernel", "mass, sign, symmetry and second moment of kernel presets", run_validate_kernel},
      {"eigen", "principal eigenpair with test-pair certificates", run_eigen},
      {"sweep-d", "lambda_p along a dispersal-rate path", run_sweep_d},
      {"sweep-sigma", "lambda_p along a dispersal-range sweep", run_sweep_sigma},
      {"invariance", "scaling invariance on sigma * domain", run_invariance},
      {"domain-mono", "domain monotonicity with the explicit gap bound", run_domain_mono},
      {"rank-one", "rank-one model: I0, root of F, verdict", run_rank_one},
      {"concentration", "sup/L1 ratio of eigenvectors under refinement", run_concentration},
      {"maxprinciple", "inverse positivity of -K", run_maxprinciple},
      {"bounds", "lower and strict upper bounds on lambda_v", run_bounds},
      {"bump", "quadratic form of the concentrated bump", run_bump},
      {"gradient-ineq", "nonlocal energy against the gradient bound", run_gradient_ineq},
  };
  return table;
}

}  // namespace nls::cli
