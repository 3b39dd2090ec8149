#include "nls/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace nls {

namespace {

constexpr std::array<double, 4> kGl8Nodes = {0.18343464249564978, 0.525532409916329,
                                             0.7966664774136267, 0.9602898564975362};
constexpr std::array<double, 4> kGl8Weights = {0.36268378337836177, 0.31370664587788705,
                                               0.22238103445337434, 0.10122853629037669};
constexpr std::array<double, 2> kGl4Nodes = {0.33998104358485626, 0.8611363115940526};
constexpr std::array<double, 2> kGl4Weights = {0.6521451548625462, 0.3478548451374537};

double gauss_legendre4(const ScalarFn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGl4Nodes.size(); ++i) {
    s += kGl4Weights[i] * (f(c - h * kGl4Nodes[i]) + f(c + h * kGl4Nodes[i]));
  }
  return s * h;
}

struct Panel {
  double a, b, value, error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel make_panel(const ScalarFn& f, double a, double b, int depth) {
  const double m = 0.5 * (a + b);
  const double whole = gauss_legendre8(f, a, b);
  const double halves = gauss_legendre8(f, a, m) + gauss_legendre8(f, m, b);
  return {a, b, halves, std::abs(whole - halves), depth};
}

}  // namespace

double gauss_legendre8(const ScalarFn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGl8Nodes.size(); ++i) {
    s += kGl8Weights[i] * (f(c - h * kGl8Nodes[i]) + f(c + h * kGl8Nodes[i]));
  }
  return s * h;
}

double adaptive_gauss(const ScalarFn& f, double a, double b, double abs_tol, double rel_tol,
                      int max_depth) {
  if (a == b) return 0.0;
  std::priority_queue<Panel> heap;
  heap.push(make_panel(f, a, b, 0));
  double total = heap.top().value;
  double err = heap.top().error;
  for (int iter = 0; iter < 4000 && !heap.empty(); ++iter) {
    if (err <= abs_tol + rel_tol * std::abs(total)) break;
    Panel worst = heap.top();
    if (worst.depth >= max_depth) break;
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    Panel left = make_panel(f, worst.a, m, worst.depth + 1);
    Panel right = make_panel(f, m, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum in a fixed order so the result does not depend on heap layout.
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double sum = 0.0;
  for (const auto& p : panels) sum += p.value;
  return sum;
}

double composite_gauss(const ScalarFn& f, double a, double b,
                       std::span<const double> breakpoints, int panels) {
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  const double length = b - a;
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double u = cuts[s];
    const double v = cuts[s + 1];
    if (v <= u) continue;
    const int m = std::max(1, static_cast<int>(std::lround(panels * (v - u) / length)));
    const double h = (v - u) / m;
    for (int k = 0; k < m; ++k) {
      const double p0 = u + k * h;
      const double p1 = (k + 1 == m) ? v : u + (k + 1) * h;
      total += gauss_legendre4(f, p0, p1);
    }
  }
  return total;
}

namespace {

// Integral over the piece between a singular endpoint s and a regular endpoint e.
GradedResult graded_piece(const ScalarFn& f, double s, double e, const GradedOptions& opt) {
  GradedResult out;
  const double length = std::abs(e - s);
  const double dir = (e > s) ? 1.0 : -1.0;
  const double floor_width = 64.0 * std::numeric_limits<double>::epsilon() *
                             std::max(1.0, std::abs(s));
  std::vector<double> increments;
  double sum = 0.0;
  double quad_err = 0.0;
  double width = length;
  for (int level = 0; level < opt.max_levels; ++level) {
    const double inner = width * 0.5;
    if (inner < floor_width) break;
    const double a = s + dir * inner;
    const double b = s + dir * width;
    double piece = adaptive_gauss(f, std::min(a, b), std::max(a, b), 1e-300, 1e-14, 30);
    const double check = gauss_legendre8(f, std::min(a, b), std::max(a, b));
    quad_err += 1e-3 * std::abs(piece - check);
    if (!std::isfinite(piece)) {
      out.divergent = true;
      break;
    }
    increments.push_back(piece);
    sum += piece;
    width = inner;
    out.levels = level + 1;
    if (std::abs(sum) > opt.divergence_threshold) {
      out.divergent = true;
      break;
    }
    const std::size_t k = increments.size();
    if (k >= 8) {
      bool stalled = true;
      for (std::size_t j = k - 3; j < k; ++j) {
        const double ratio = increments[j] / increments[j - 1];
        if (!(std::abs(increments[j - 1]) > 0.0) || ratio < 0.9999) stalled = false;
      }
      if (stalled) {
        out.divergent = true;
        break;
      }
      if (std::abs(piece) <= 1e-17 * std::abs(sum)) break;
    }
  }
  if (out.divergent) {
    out.value = std::numeric_limits<double>::infinity();
    out.error_estimate = std::numeric_limits<double>::infinity();
    return out;
  }
  // Geometric tail extrapolation from the last two increments.
  const std::size_t k = increments.size();
  double tail = 0.0;
  double tail_err = 0.0;
  if (k >= 3 && increments[k - 2] != 0.0) {
    const double rho = increments[k - 1] / increments[k - 2];
    if (rho > 0.0 && rho < 1.0) tail = increments[k - 1] * rho / (1.0 - rho);
    const double rho_prev = increments[k - 2] / increments[k - 3];
    double prev_tail = 0.0;
    if (rho_prev > 0.0 && rho_prev < 1.0)
      prev_tail = increments[k - 2] * rho_prev / (1.0 - rho_prev) - increments[k - 1];
    tail_err = std::abs(tail - prev_tail);
  } else if (k >= 1) {
    tail_err = std::abs(increments[k - 1]);
  }
  // Whatever is left inside the floor width is bounded by the last increment's size.
  out.value = sum + tail;
  out.error_estimate = tail_err + quad_err + 1e-15 * std::abs(out.value);
  return out;
}

}  // namespace

GradedResult graded_integral(const ScalarFn& f, double lo, double hi,
                             std::span<const double> singular_points,
                             const GradedOptions& options) {
  std::vector<double> sing;
  for (double s : singular_points)
    if (s >= lo && s <= hi) sing.push_back(s);
  std::sort(sing.begin(), sing.end());
  sing.erase(std::unique(sing.begin(), sing.end()), sing.end());

  // Break [lo, hi] into pieces that each carry at most one singular endpoint.
  struct Piece {
    double s, e;
    bool singular;
  };
  std::vector<Piece> pieces;
  std::vector<double> cuts{lo};
  for (double s : sing)
    if (s > lo && s < hi) cuts.push_back(s);
  cuts.push_back(hi);
  auto is_sing = [&](double x) { return std::find(sing.begin(), sing.end(), x) != sing.end(); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u = cuts[i];
    const double v = cuts[i + 1];
    if (v <= u) continue;
    const bool su = is_sing(u);
    const bool sv = is_sing(v);
    if (su && sv) {
      const double m = 0.5 * (u + v);
      pieces.push_back({u, m, true});
      pieces.push_back({v, m, true});
    } else if (su) {
      pieces.push_back({u, v, true});
    } else if (sv) {
      pieces.push_back({v, u, true});
    } else {
      pieces.push_back({u, v, false});
    }
  }

  GradedResult total;
  for (const auto& p : pieces) {
    if (p.singular) {
      GradedResult r = graded_piece(f, p.s, p.e, options);
      total.levels = std::max(total.levels, r.levels);
      if (r.divergent) {
        total.divergent = true;
        break;
      }
      total.value += r.value;
      total.error_estimate += r.error_estimate;
    } else {
      const double v = adaptive_gauss(f, p.s, p.e, 1e-300, 1e-14, 30);
      const double check = gauss_legendre8(f, p.s, p.e);
      total.value += v;
      total.error_estimate += 1e-3 * std::abs(v - check) + 1e-15 * std::abs(v);
    }
  }
  if (total.divergent || !std::isfinite(total.value) ||
      std::abs(total.value) > options.divergence_threshold) {
    total.divergent = true;
    total.value = std::numeric_limits<double>::infinity();
    total.error_estimate = std::numeric_limits<double>::infinity();
  }
  return total;
}

}  // namespace nls
