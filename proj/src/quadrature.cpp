#include "udw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace udw {
namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK dqk15 values).
// Nodes with odd index are the embedded 7-point Gauss nodes.
constexpr double kNode[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
constexpr double kWeightK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWeightG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

using Complex = std::complex<double>;
using Integrand = std::function<Complex(double)>;

struct Panel {
  double a = 0.0;
  double b = 0.0;
  Complex integral;
  double error = 0.0;
};

Panel eval_panel(const Integrand& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Complex fc = f(mid);
  Complex k15 = kWeightK[7] * fc;
  Complex g7 = kWeightG[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const Complex fp = f(mid + half * kNode[i]);
    const Complex fm = f(mid - half * kNode[i]);
    k15 += kWeightK[i] * (fp + fm);
    if (i % 2 == 1) g7 += kWeightG[(i - 1) / 2] * (fp + fm);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.integral = half * k15;
  p.error = std::abs(half * (k15 - g7));
  return p;
}

// Panel boundaries: oscillation-limited lengths everywhere plus geometric
// refinement ladders into each listed feature point.
std::vector<double> build_cuts(double a, double b, const QuadratureOptions& opt) {
  const double span = b - a;
  std::vector<double> cuts{a, b};
  const double floor_width = std::max(opt.feature_scale * 0.25, span * 1e-15);
  for (double p : opt.features) {
    if (p <= a || p >= b) continue;
    cuts.push_back(p);
    for (double w = std::min(1.0, 0.25 * span); w >= floor_width; w *= 0.5) {
      if (p - w > a) cuts.push_back(p - w);
      if (p + w < b) cuts.push_back(p + w);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double max_len = span;
  if (opt.osc_rate > 0.0) {
    max_len = std::min(max_len, std::numbers::pi / opt.osc_rate);
  }
  std::vector<double> out;
  out.reserve(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    out.push_back(lo);
    const int pieces = static_cast<int>(std::ceil((hi - lo) / max_len));
    for (int j = 1; j < pieces; ++j) {
      out.push_back(lo + (hi - lo) * j / pieces);
    }
  }
  out.push_back(b);
  return out;
}

}  // namespace

Complex integrate_gk15(const Integrand& f, double a, double b,
                       const QuadratureOptions& opt, double* err_out) {
  if (!(a < b)) throw std::invalid_argument("integrate_gk15: need a < b");

  const std::vector<double> cuts = build_cuts(a, b, opt);
  std::vector<Panel> panels;
  panels.reserve(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    panels.push_back(eval_panel(f, cuts[i], cuts[i + 1]));
  }

  double total_err = 0.0;
  for (const Panel& p : panels) total_err += p.error;

  int refinements = 0;
  while (total_err > opt.abs_tol && refinements < opt.max_refinements) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      if (panels[i].error > panels[worst].error) worst = i;
    }
    Panel victim = panels[worst];
    if (victim.b - victim.a <= 16.0 * std::numeric_limits<double>::epsilon() *
                                   std::max(std::abs(victim.a), std::abs(victim.b))) {
      break;  // cannot subdivide further in double precision
    }
    const double mid = 0.5 * (victim.a + victim.b);
    Panel left = eval_panel(f, victim.a, mid);
    Panel right = eval_panel(f, mid, victim.b);
    total_err += left.error + right.error - victim.error;
    panels[worst] = left;
    panels.push_back(right);
    ++refinements;
  }

  // Accumulate in position order so the result does not depend on the
  // refinement history.
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  Complex total = 0.0;
  total_err = 0.0;
  for (const Panel& p : panels) {
    total += p.integral;
    total_err += p.error;
  }
  if (err_out) *err_out = total_err;
  return total;
}

double integrate_gk15_real(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opt,
                           double* err_out) {
  auto wrapped = [&f](double x) { return Complex(f(x), 0.0); };
  return integrate_gk15(wrapped, a, b, opt, err_out).real();
}

double extrapolate_to_zero(std::span<const double> xs,
                           std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw std::invalid_argument("extrapolate_to_zero: mismatched or empty data");
  }
  std::vector<double> v(ys.begin(), ys.end());
  const std::size_t n = v.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      v[i] = (xs[i + m] * v[i] - xs[i] * v[i + 1]) / (xs[i + m] - xs[i]);
    }
  }
  return v[0];
}

}  // namespace udw
