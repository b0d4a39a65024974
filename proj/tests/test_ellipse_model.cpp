#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qfgeo/ellipse_model.hpp"
#include "qfgeo/random.hpp"

using namespace qfgeo;

namespace {

// l = 1 + (a ln d + b) / rho^g, clamped; written out independently.
double reference_l_con(double rho, double delta) {
  if (delta <= 1.0) return 1.0;
  const double v = 1.0 + (-4.4732 * std::log(delta) + 13.0715) / (rho * rho);
  return v < 1.05 ? 1.05 : v;
}

StretchSample on_curve(double rho, double delta, double slope, double intercept, double gamma) {
  const double normalized = slope * std::log(delta) + intercept;
  return {rho, delta, 0.0, 1.0 + normalized / std::pow(rho, gamma), 0};
}

}  // namespace

TEST_CASE("shipped coefficients") {
  const EllipseModel m;
  CHECK(m.alpha == -4.4732);
  CHECK(m.beta == 13.0715);
  CHECK(m.gamma == 2.0);
  CHECK(m.ell_min == 1.05);
}

TEST_CASE("predict_l_con examples") {
  const EllipseModel m;
  CHECK(predict_l_con(m, 3.0, 0.8) == 1.0);
  CHECK(predict_l_con(m, 2.0, std::exp(1.0)) == doctest::Approx(3.149575).epsilon(1e-9));
  CHECK(predict_l_con(m, 5.0, 20.0) == 1.05);
  CHECK(1.0 + (-4.4732 * std::log(20.0) + 13.0715) / 25.0 == doctest::Approx(0.9869).epsilon(1e-4));
  CHECK_THROWS_AS(predict_l_con(m, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(predict_l_con(m, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(predict_l_con(m, 2.0, -1.0), std::invalid_argument);
}

TEST_CASE("predict_l_cap examples") {
  const EllipseModel m;
  for (double delta : {0.5, 1.5, 4.0, 12.0}) {
    CHECK(predict_l_cap(m, 3.0, delta, 1.0) == predict_l_con(m, 3.0, delta));
  }
  CHECK(predict_l_cap(m, 4.0, std::exp(1.0), 0.5) == doctest::Approx(3.149575).epsilon(1e-9));
  // rho' = 1: 1 + (-4.4732 ln 2 + 13.0715) = 10.970914...
  CHECK(predict_l_cap(m, 5.0, 2.0, 0.2) == doctest::Approx(10.970914).epsilon(1e-7));
  CHECK_THROWS_AS(predict_l_cap(m, 5.0, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(predict_l_cap(m, 5.0, 2.0, 1.5), std::invalid_argument);
}

TEST_CASE("predictions match an independent formula, are >= 1 and monotone in distance") {
  const EllipseModel m;
  for (double rho = 1.2; rho <= 6.0; rho += 0.2) {
    double prev = 1e300;
    for (double delta = 0.05; delta <= 40.0; delta += 0.05) {
      const double v = predict_l_con(m, rho, delta);
      CHECK(v == doctest::Approx(reference_l_con(rho, delta)).epsilon(1e-12));
      CHECK(v >= 1.0);
      if (delta > 1.0) {
        CHECK(v <= prev);
        prev = v;
      } else {
        CHECK(v == 1.0);
      }
    }
  }
}

TEST_CASE("ellipse for capacity never shrinks below the connectivity ellipse") {
  const EllipseModel m;
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    const double rho = uniform(rng, std::sqrt(2.0), 5.0);
    const double delta = 1.0 + uniform(rng, 1e-9, 29.0);
    const double phi = 1.0 - uniform01(rng);  // (0, 1]
    CHECK(predict_l_cap(m, rho, delta, phi) >= predict_l_con(m, rho, delta));
  }
}

TEST_CASE("exact linear data is recovered") {
  std::vector<StretchSample> samples;
  for (int i = 0; i < 200; ++i) samples.push_back(on_curve(2.0, 1.1 + 0.1 * i, 2.0, 3.0, 2.0));
  const auto m = fit_quantile(samples, 0.99, 2.0);
  CHECK(m.alpha == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(m.beta == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(m.gamma == 2.0);
  CHECK(m.ell_min == 1.05);
}

TEST_CASE("median fit of symmetric uniform noise") {
  Rng rng(12);
  std::vector<LinePoint> pts;
  for (int i = 0; i < 5000; ++i) {
    const double x = uniform(rng, 0.0, 4.0);
    pts.push_back({x, -1.5 * x + 7.0 + uniform(rng, -1.0, 1.0)});
  }
  const auto fit = fit_line_quantile(pts, 0.5);
  CHECK(std::abs(fit.slope - -1.5) <= 0.1);
  CHECK(std::abs(fit.intercept - 7.0) <= 0.1);
}

TEST_CASE("pinball optimum is locally optimal and self-coverage is near tau") {
  Rng rng(77);
  std::vector<LinePoint> pts;
  for (int i = 0; i < 3000; ++i) {
    const double x = uniform(rng, 0.0, 3.5);
    // Skewed noise, as ellipse factors are.
    const double e = -std::log(1.0 - uniform01(rng));
    pts.push_back({x, -3.0 * x + 9.0 + 2.0 * e * (1.0 + 0.3 * x)});
  }
  for (double tau : {0.5, 0.9, 0.99}) {
    const auto fit = fit_line_quantile(pts, tau);
    const double base = pinball_loss(pts, fit.slope, fit.intercept, tau);
    CHECK(fit.loss == doctest::Approx(base));
    for (double ds : {-1e-3, 1e-3}) {
      CHECK(pinball_loss(pts, fit.slope + ds, fit.intercept, tau) >= base - 1e-9);
      CHECK(pinball_loss(pts, fit.slope, fit.intercept + ds, tau) >= base - 1e-9);
    }
    std::size_t below = 0;
    for (const auto& p : pts) below += p.y <= fit.slope * p.x + fit.intercept;
    const double coverage = static_cast<double>(below) / pts.size();
    CHECK(coverage >= tau - 0.01);
    CHECK(coverage <= tau + 0.01);
  }
}

TEST_CASE("fit preconditions") {
  std::vector<StretchSample> few;
  for (int i = 0; i < 49; ++i) few.push_back(on_curve(2.0, 1.5 + i * 0.1, 1.0, 1.0, 2.0));
  CHECK_THROWS_AS(fit_quantile(few, 0.99, 2.0), std::invalid_argument);

  std::vector<StretchSample> flat;
  for (int i = 0; i < 100; ++i) flat.push_back({2.0, 3.0, 1.0, 1.0 + i * 0.01, 0});
  CHECK_THROWS_AS(fit_quantile(flat, 0.99, 2.0), std::invalid_argument);

  std::vector<StretchSample> ok;
  for (int i = 0; i < 100; ++i) ok.push_back(on_curve(2.0, 1.5 + i * 0.1, 1.0, 1.0, 2.0));
  CHECK_THROWS_AS(fit_quantile(ok, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_quantile(ok, 1.0, 2.0), std::invalid_argument);

  // Points with delta <= 1 are not part of the fit.
  auto mixed = ok;
  for (int i = 0; i < 100; ++i) mixed.push_back({2.0, 0.5, 1.0, 1.0, 0});
  const auto a = fit_quantile(ok, 0.99, 2.0);
  const auto b = fit_quantile(mixed, 0.99, 2.0);
  CHECK(a.alpha == b.alpha);
  CHECK(a.beta == b.beta);
}

TEST_CASE("coverage_table examples") {
  std::vector<StretchSample> samples{{2.0, 3.0, 1.0, 1.4, 0}, {2.0, 4.0, 1.0, 9.0, 0},
                                     {3.0, 2.0, 1.0, 1.1, 0}};
  EllipseModel huge;
  huge.beta = 1e9;
  const auto all = coverage_table(huge, samples);
  REQUIRE(all.rows.size() == 2);
  CHECK(all.rows[0].coverage == 1.0);
  CHECK(all.rows[1].coverage == 1.0);

  const auto shipped = coverage_table(EllipseModel{}, samples);
  CHECK(shipped.rows[0].rho == 2.0);
  CHECK(shipped.rows[0].samples == 2);
  CHECK(shipped.rows[0].coverage == 0.5);

  const auto single = coverage_table(EllipseModel{}, std::vector<StretchSample>{{2.0, 3.0, 1.0, 1.01, 0}});
  CHECK(single.rows[0].coverage == 1.0);
}

TEST_CASE("model and report files") {
  std::stringstream ss;
  const EllipseModel m{-4.25, 12.5, 2.0, 1.05};
  write_model(ss, m);
  CHECK(ss.str() == "-4.25 12.5 2 1.05\n");
  const auto back = read_model(ss);
  CHECK(back.alpha == -4.25);
  CHECK(back.beta == 12.5);

  std::istringstream bad("1 2 3\n");
  CHECK_THROWS(read_model(bad));
  std::istringstream extra("1 2 3 4 5\n");
  CHECK_THROWS(read_model(extra));

  std::stringstream csv;
  write_fit_report_csv(csv, FitReport{m, {{2.0, 0.975, 1900}}});
  CHECK(csv.str() == "rho,coverage,samples\n2.000000,0.975000,1900\n");
}
