#include "qfgeo/ellipse_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qfgeo {

double predict_l_con(const EllipseModel& model, double rho, double delta) {
  if (!(rho > 0.0)) throw std::invalid_argument("density must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("distance must be positive");
  if (delta <= 1.0) return 1.0;
  const double raw =
      1.0 + (model.alpha * std::log(delta) + model.beta) / std::pow(rho, model.gamma);
  return std::max(raw, model.ell_min);
}

double predict_l_cap(const EllipseModel& model, double rho, double delta, double phi) {
  if (!(phi > 0.0 && phi <= 1.0)) throw std::invalid_argument("phi must lie in (0, 1]");
  return predict_l_con(model, phi * rho, delta);
}

double pinball_loss(std::span<const LinePoint> points, double slope, double intercept,
                    double tau) {
  double total = 0.0;
  for (const auto& p : points) {
    const double r = p.y - (slope * p.x + intercept);
    total += r >= 0.0 ? tau * r : (tau - 1.0) * r;
  }
  return total;
}

namespace {

struct Profiled {
  double intercept;
  double loss;
};

// For a fixed slope the optimal intercept is the tau-quantile of the
// residuals y - slope * x.
Profiled profile(std::span<const LinePoint> points, double slope, double tau,
                 std::vector<double>& scratch) {
  scratch.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    scratch[i] = points[i].y - slope * points[i].x;
  }
  const double n = static_cast<double>(points.size());
  auto k = static_cast<std::size_t>(std::ceil(tau * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, points.size()) - 1;
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k),
                   scratch.end());
  const double b = scratch[k];
  return {b, pinball_loss(points, slope, b, tau)};
}

// Weighted least squares for a line; false when singular.
bool weighted_line(std::span<const LinePoint> points, std::span<const double> w,
                   double& slope, double& intercept) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sw += w[i];
    sx += w[i] * points[i].x;
    sy += w[i] * points[i].y;
    sxx += w[i] * points[i].x * points[i].x;
    sxy += w[i] * points[i].x * points[i].y;
  }
  const double det = sw * sxx - sx * sx;
  if (!(std::abs(det) > 1e-300) || !std::isfinite(det)) return false;
  slope = (sw * sxy - sx * sy) / det;
  intercept = (sy - slope * sx) / sw;
  return std::isfinite(slope) && std::isfinite(intercept);
}

}  // namespace

LineFit fit_line_quantile(std::span<const LinePoint> points, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  if (points.size() < 2) throw std::invalid_argument("need at least two points");
  const auto [mn, mx] = std::minmax_element(
      points.begin(), points.end(), [](auto& a, auto& b) { return a.x < b.x; });
  if (mn->x == mx->x) throw std::invalid_argument("degenerate data: all x equal");

  LineFit fit;
  std::vector<double> w(points.size(), 1.0);
  double slope = 0.0, intercept = 0.0;
  weighted_line(points, w, slope, intercept);
  double loss = pinball_loss(points, slope, intercept, tau);

  constexpr int max_irls = 200;
  constexpr double loss_tol = 1e-8;
  for (int it = 0; it < max_irls; ++it) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double r = points[i].y - (slope * points[i].x + intercept);
      w[i] = (r >= 0.0 ? tau : 1.0 - tau) / std::max(std::abs(r), 1e-6);
    }
    double s2 = slope, i2 = intercept;
    if (!weighted_line(points, w, s2, i2)) break;
    const double l2 = pinball_loss(points, s2, i2, tau);
    fit.irls_iterations = it + 1;
    const bool converged = std::abs(loss - l2) <= loss_tol * std::max(1.0, loss);
    if (l2 <= loss) {
      slope = s2;
      intercept = i2;
      loss = l2;
    }
    if (converged) break;
  }

  // Coarse-to-fine refinement on the slope. The profiled loss is convex in
  // the slope, so the minimum always stays within one step of the best
  // grid point.
  std::vector<double> scratch;
  double center = slope;
  double span = std::max(1.0, std::abs(slope));
  Profiled best = profile(points, center, tau, scratch);
  constexpr int grid = 20;
  for (int round = 0; round < 200; ++round) {
    const double step = 2.0 * span / grid;
    int best_k = grid / 2;
    for (int k = 0; k <= grid; ++k) {
      const double s = center - span + step * k;
      const Profiled p = profile(points, s, tau, scratch);
      if (p.loss < best.loss) {
        best = p;
        best_k = k;
        slope = s;
      }
    }
    center = slope;
    if (best_k == 0 || best_k == grid) {
      span *= 2.0;  // minimum lies outside the bracket
      continue;
    }
    span = step;
    if (span < 1e-13 * std::max(1.0, std::abs(center))) break;
  }

  fit.slope = slope;
  fit.intercept = best.intercept;
  fit.loss = best.loss;
  return fit;
}

std::vector<LinePoint> normalized_points(std::span<const StretchSample> samples,
                                         double gamma) {
  std::vector<LinePoint> pts;
  for (const auto& s : samples) {
    if (s.delta > 1.0) {
      pts.push_back({std::log(s.delta), (s.ell_obs - 1.0) * std::pow(s.rho, gamma)});
    }
  }
  return pts;
}

EllipseModel fit_quantile(std::span<const StretchSample> samples, double tau, double gamma,
                          double ell_min) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const auto pts = normalized_points(samples, gamma);
  if (pts.size() < 50) {
    throw std::invalid_argument("need at least 50 samples with delta > 1 to fit");
  }
  const LineFit line = fit_line_quantile(pts, tau);
  return {line.slope, line.intercept, gamma, ell_min};
}

FitReport coverage_table(const EllipseModel& model, std::span<const StretchSample> samples) {
  std::map<double, std::pair<std::size_t, std::size_t>> by_rho;  // covered, total
  for (const auto& s : samples) {
    auto& [covered, total] = by_rho[s.rho];
    ++total;
    if (s.ell_obs <= predict_l_con(model, s.rho, s.delta)) ++covered;
  }
  FitReport report{model, {}};
  for (const auto& [rho, counts] : by_rho) {
    report.rows.push_back({rho, static_cast<double>(counts.first) / counts.second,
                           counts.second});
  }
  return report;
}

void write_model(std::ostream& out, const EllipseModel& m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.10g %.10g %.10g %.10g\n", m.alpha, m.beta, m.gamma,
                m.ell_min);
  out << buf;
}

EllipseModel read_model(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    EllipseModel m;
    std::string extra;
    if (!(ls >> m.alpha >> m.beta >> m.gamma >> m.ell_min) || (ls >> extra)) {
      throw std::runtime_error("model file: expected 'alpha beta gamma ell_min'");
    }
    if (!(m.gamma > 0.0)) throw std::runtime_error("model file: gamma must be positive");
    return m;
  }
  throw std::runtime_error("model file: no model record");
}

void write_fit_report_csv(std::ostream& out, const FitReport& report) {
  out << "rho,coverage,samples\n";
  char buf[96];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%zu\n", r.rho, r.coverage, r.samples);
    out << buf;
  }
}

}  // namespace qfgeo
