#pragma once

// Prediction of the connectivity ellipse factor from density and endpoint
// distance, its capacity-scaled variant, and the 99th-percentile fit that
// produces the coefficients.

#include <iosfwd>
#include <span>
#include <vector>

#include "qfgeo/stretch.hpp"

namespace qfgeo {

// Defaults are the published coefficients, so routing can run without a
// fitting pass.
struct EllipseModel {
  double alpha = -4.4732;
  double beta = 13.0715;
  double gamma = 2.0;
  double ell_min = 1.05;
};

// 1 for delta <= 1, else max(1 + (alpha ln delta + beta) / rho^gamma, ell_min).
double predict_l_con(const EllipseModel& model, double rho, double delta);

// predict_l_con at the effective density phi * rho. phi must lie in (0, 1].
double predict_l_cap(const EllipseModel& model, double rho, double delta, double phi);

struct LinePoint {
  double x = 0.0;
  double y = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double loss = 0.0;
  int irls_iterations = 0;
};

double pinball_loss(std::span<const LinePoint> points, double slope, double intercept,
                    double tau);

// Linear quantile regression y ~ slope * x + intercept. Iteratively
// reweighted least squares gives the starting point; a coarse-to-fine
// search over the slope (with the intercept solved exactly as a residual
// quantile) finishes it. Throws when all x are equal.
LineFit fit_line_quantile(std::span<const LinePoint> points, double tau);

// (ln delta, (ell_obs - 1) * rho^gamma) for every sample with delta > 1.
std::vector<LinePoint> normalized_points(std::span<const StretchSample> samples,
                                         double gamma);

EllipseModel fit_quantile(std::span<const StretchSample> samples, double tau,
                          double gamma, double ell_min = 1.05);

struct CoverageRow {
  double rho = 0.0;
  double coverage = 0.0;
  std::size_t samples = 0;
};

struct FitReport {
  EllipseModel model;
  std::vector<CoverageRow> rows;  // ascending rho
};

// Per density, the fraction of samples with ell_obs <= predict_l_con.
FitReport coverage_table(const EllipseModel& model, std::span<const StretchSample> samples);

// "alpha beta gamma ell_min" on one line; '#' comment lines are skipped on read.
void write_model(std::ostream& out, const EllipseModel& model);
EllipseModel read_model(std::istream& in);

// "rho,coverage,samples"
void write_fit_report_csv(std::ostream& out, const FitReport& report);

}  // namespace qfgeo
