#include "doctest.h"

#include <cmath>
#include <random>

#include "freeknot/bspline.hpp"
#include "freeknot/errors.hpp"
#include "support/corpus.hpp"
#include "support/poly_oracle.hpp"
#include "support/random_knots.hpp"

using namespace freeknot;
using freeknot::testing::linspace;
using freeknot::testing::random_knots;

TEST_CASE("knot sequence expands with boundary multiplicity degree + 1") {
  const KnotSequence k(2, 0.0, 3.0, {1.0, 2.0});
  CHECK(k.basis_count() == 5);
  CHECK(k.order() == 3);
  CHECK(k.expanded() == std::vector<double>{0, 0, 0, 1, 2, 3, 3, 3});
  CHECK(k.expanded().size() == k.basis_count() + k.degree() + 1);
}

TEST_CASE("knot sequence rejects invalid layouts") {
  CHECK_THROWS_AS(KnotSequence(1, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(KnotSequence(1, 0.0, 1.0, {0.0}), ConfigError);
  CHECK_THROWS_AS(KnotSequence(1, 0.0, 1.0, {1.0}), ConfigError);
  CHECK_THROWS_AS(KnotSequence(1, 0.0, 1.0, {0.6, 0.4}), ConfigError);
  CHECK_THROWS_AS(KnotSequence(-1, 0.0, 1.0), ConfigError);
  // multiplicity capped at the degree (at least 1)
  CHECK_NOTHROW(KnotSequence(2, 0.0, 1.0, {0.5, 0.5}));
  CHECK_THROWS_AS(KnotSequence(2, 0.0, 1.0, {0.5, 0.5, 0.5}), ConfigError);
  CHECK_THROWS_AS(KnotSequence(0, 0.0, 1.0, {0.5, 0.5}), ConfigError);
}

TEST_CASE("basis_value hand-evaluated examples") {
  const KnotSequence k(1, 0.0, 2.0, {1.0});  // expanded [0,0,1,2,2]
  CHECK(basis_value(k, 0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(basis_value(k, 2, 0.5) == 0.0);

  const KnotSequence constant(0, 0.0, 1.0, {0.25, 0.5});
  CHECK(basis_value(constant, 1, 0.3) == 1.0);
  CHECK(basis_value(constant, 0, 0.3) == 0.0);
  // right boundary closes the last span
  CHECK(basis_value(constant, 2, 1.0) == 1.0);
  CHECK(basis_value(k, 2, 2.0) == 1.0);
}

TEST_CASE("basis_value domain errors") {
  const KnotSequence k(1, 0.0, 2.0, {1.0});
  CHECK_THROWS_AS(basis_value(k, 0, -0.1), DomainError);
  CHECK_THROWS_AS(basis_value(k, 0, 2.1), DomainError);
  CHECK_THROWS_AS(basis_value(k, 3, 0.5), DomainError);
  CHECK_THROWS_AS(basis_row(k, 2.5), DomainError);
}

TEST_CASE("basis_row examples") {
  const KnotSequence k(1, 0.0, 2.0, {1.0});
  const Eigen::VectorXd row = basis_row(k, 0.5);
  CHECK(row(0) == doctest::Approx(0.5));
  CHECK(row(1) == doctest::Approx(0.5));
  CHECK(row(2) == 0.0);

  const KnotSequence cubic(3, -1.0, 4.0, {0.0, 0.7, 2.5});
  const Eigen::VectorXd first = basis_row(cubic, -1.0);
  CHECK(first(0) == 1.0);
  CHECK(first.tail(first.size() - 1).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXd last = basis_row(cubic, 4.0);
  CHECK(last(last.size() - 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("design_matrix examples") {
  const DesignMatrix single = design_matrix(KnotSequence(0, 0.0, 1.0), std::vector<double>{0.0, 1.0});
  CHECK(single.entries.rows() == 2);
  CHECK(single.entries.cols() == 1);
  CHECK(single.entries(0, 0) == 1.0);
  CHECK(single.entries(1, 0) == 1.0);

  const DesignMatrix d = design_matrix(KnotSequence(1, 0.0, 2.0, {1.0}), std::vector<double>{0, 0.5, 1, 2});
  Eigen::MatrixXd expected(4, 3);
  expected << 1, 0, 0, 0.5, 0.5, 0, 0, 1, 0, 0, 0, 1;
  CHECK((d.entries - expected).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(design_matrix(KnotSequence(1, 0.0, 2.0), std::vector<double>{0, 3}), DomainError);
}

TEST_CASE("basis properties on random knot vectors") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int degree = 0; degree <= 4; ++degree) {
    for (int trial = 0; trial < 20; ++trial) {
      const KnotSequence k = random_knots(rng, degree, 10);
      const auto& u = k.expanded();
      for (int s = 0; s < 200; ++s) {
        const double t = s == 0 ? 0.0 : (s == 1 ? 1.0 : unit(rng));
        const Eigen::VectorXd row = basis_row(k, t);
        CHECK(std::abs(row.sum() - 1.0) <= 1e-12);
        CHECK((row.array() != 0.0).count() <= degree + 1);
        for (std::size_t q = 0; q < k.basis_count(); ++q) {
          const double b = basis_value(k, q, t);
          CHECK(b >= 0.0);
          CHECK(std::abs(b - row(static_cast<Eigen::Index>(q))) <= 1e-12);
          const bool inside = u[q] <= t && t < u[q + degree + 1];
          if (!inside && t < 1.0) {
            CHECK(b == 0.0);
          }
          if (inside && u[q] < t && t < u[q + degree + 1]) {
            CHECK(b > 0.0);
          }
        }
      }
    }
  }
}

TEST_CASE("basis_value matches symbolic piecewise polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int degree = 0; degree <= 3; ++degree) {
    for (int trial = 0; trial < 30; ++trial) {
      // at most 6 basis functions
      const std::size_t max_interior = 5 - static_cast<std::size_t>(degree);
      const KnotSequence k = random_knots(rng, degree, max_interior, -0.5, 1.5);
      const freeknot::testing::PiecewiseBasisOracle oracle(k.expanded(), degree);
      for (int s = 0; s < 100; ++s) {
        const double t = s == 0 ? 1.5 : -0.5 + 2.0 * unit(rng);
        for (std::size_t q = 0; q < k.basis_count(); ++q) {
          CHECK(std::abs(basis_value(k, q, t) - oracle.value(q, t)) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("fit_least_squares examples") {
  const DesignMatrix single = design_matrix(KnotSequence(0, 0.0, 1.0), std::vector<double>{0.0, 1.0});
  const Eigen::VectorXd mean = fit_least_squares(single, std::vector<double>{0.0, 2.0});
  CHECK(mean(0) == doctest::Approx(1.0));

  const auto grid = std::vector<double>{0, 0.25, 0.5, 0.75, 1};
  const DesignMatrix linear = design_matrix(KnotSequence(1, 0.0, 1.0), grid);
  const Eigen::VectorXd beta = fit_least_squares(linear, grid);
  CHECK(std::abs(beta(0)) < 1e-14);
  CHECK(beta(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fit_least_squares reports the basis function without data") {
  // Degree 0 basis on [0.1, 0.15) holds no grid point.
  const DesignMatrix d = design_matrix(KnotSequence(0, 0.0, 1.0, {0.1, 0.15}), std::vector<double>{0, 0.5, 1});
  try {
    fit_least_squares(d, std::vector<double>{1, 2, 3});
    FAIL("expected FitError");
  } catch (const FitError& e) {
    REQUIRE(e.basis_index().has_value());
    CHECK(*e.basis_index() == 1);
  }
  // ridge keeps the degenerate system solvable
  const Eigen::VectorXd beta = fit_least_squares(d, std::vector<double>{1, 2, 3}, 1e-6);
  CHECK(beta.allFinite());
  CHECK_THROWS_AS(fit_least_squares(d, std::vector<double>{1, 2, 3}, -1.0), ConfigError);
}

TEST_CASE("fit_least_squares needs as many grid points as basis functions") {
  // Two linear pieces need 3 functions; two grid points are not enough even though no column is empty.
  const DesignMatrix d = design_matrix(KnotSequence(1, 0.0, 1.0, {0.5}), std::vector<double>{0.2, 0.8});
  CHECK_THROWS_AS(fit_least_squares(d, std::vector<double>{1, 2}), FitError);
}

TEST_CASE("least-squares residual is orthogonal to the column space") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto grid = linspace(0.0, 1.0, 201);
  for (int degree = 0; degree <= 4; ++degree) {
    const KnotSequence k(degree, 0.0, 1.0, {0.1, 0.12, 0.4, 0.41, 0.8});
    const DesignMatrix d = design_matrix(k, grid);
    std::vector<double> y(grid.size());
    for (double& v : y) v = 5.0 * noise(rng);
    const Eigen::VectorXd beta = fit_least_squares(d, y);
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::VectorXd normal = d.entries.transpose() * (yv - d.entries * beta);
    CHECK(normal.cwiseAbs().maxCoeff() <= 1e-8 * yv.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("polynomial reproduction for every degree") {
  std::mt19937_64 rng(3);
  const auto grid = linspace(-1.0, 2.0, 120);
  for (int degree = 0; degree <= 4; ++degree) {
    for (int trial = 0; trial < 5; ++trial) {
      const KnotSequence k = random_knots(rng, degree, 6, -1.0, 2.0);
      const DesignMatrix d = design_matrix(k, grid);
      // degree-`degree` polynomial with random coefficients
      std::uniform_real_distribution<double> coef(-2.0, 2.0);
      std::vector<double> c(degree + 1);
      for (double& x : c) x = coef(rng);
      std::vector<double> y;
      double scale = 0.0;
      for (double t : grid) {
        double v = 0.0;
        for (int p = degree; p >= 0; --p) v = v * t + c[p];
        y.push_back(v);
        scale = std::max(scale, std::abs(v));
      }
      Eigen::VectorXd beta;
      try {
        beta = fit_least_squares(d, y);
      } catch (const FitError&) {
        continue;  // random knots can leave a basis function without samples
      }
      const Eigen::VectorXd fitted = d.entries * beta;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        CHECK(std::abs(fitted(static_cast<Eigen::Index>(j)) - y[j]) <= 1e-9 * std::max(scale, 1.0));
      }
    }
  }
}

TEST_CASE("projection idempotence") {
  const auto grid = linspace(0.0, 1.0, 80);
  const KnotSequence k(3, 0.0, 1.0, {0.2, 0.35, 0.5, 0.9});
  const DesignMatrix d = design_matrix(k, grid);
  std::vector<double> y;
  for (double t : grid) y.push_back(std::sin(7.0 * t) + t * t);
  const Eigen::VectorXd beta = fit_least_squares(d, y);
  const SplineModel model(k, beta.transpose());
  const std::vector<double> refit_data = evaluate_spline(model, 0, grid);
  const Eigen::VectorXd again = fit_least_squares(d, refit_data);
  CHECK((again - beta).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("evaluate_spline examples") {
  const KnotSequence k(2, 0.0, 1.0, {0.3, 0.6});
  const SplineModel flat(k, Eigen::MatrixXd::Constant(1, 5, 2.5));
  for (double t : linspace(0.0, 1.0, 11)) {
    CHECK(evaluate_spline(flat, 0, t) == doctest::Approx(2.5).epsilon(1e-14));
  }

  Eigen::MatrixXd line(1, 2);
  line << 0.0, 1.0;
  const SplineModel linear(KnotSequence(1, 0.0, 1.0), line);
  CHECK(evaluate_spline(linear, 0, 0.3) == doctest::Approx(0.3).epsilon(1e-15));

  Eigen::MatrixXd coeffs(2, 5);
  coeffs << 4, 1, 2, 3, 5, -1, 0, 0, 0, 7;
  const SplineModel two(k, coeffs);
  CHECK(evaluate_spline(two, 0, 0.0) == 4.0);
  CHECK(evaluate_spline(two, 1, 0.0) == -1.0);
  CHECK(evaluate_spline(two, 1, 1.0) == doctest::Approx(7.0));
  CHECK_THROWS_AS(evaluate_spline(two, 2, 0.5), DomainError);
  CHECK_THROWS_AS(evaluate_spline(two, 0, 1.5), DomainError);
  CHECK_THROWS_AS(SplineModel(k, Eigen::MatrixXd::Zero(1, 4)), DataError);
}

TEST_CASE("smoothing_diagonal examples") {
  const auto grid = linspace(0.0, 1.0, 8);
  const Eigen::VectorXd constant = smoothing_diagonal(design_matrix(KnotSequence(0, 0.0, 1.0), grid));
  for (Eigen::Index j = 0; j < constant.size(); ++j) {
    CHECK(constant(j) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
  }

  // J == n: S is the identity
  const KnotSequence square_knots(1, 0.0, 1.0, {0.3, 0.5});
  const Eigen::VectorXd identity =
      smoothing_diagonal(design_matrix(square_knots, std::vector<double>{0.0, 0.4, 0.6, 1.0}));
  for (Eigen::Index j = 0; j < identity.size(); ++j) {
    CHECK(identity(j) == doctest::Approx(1.0).epsilon(1e-12));
  }

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const KnotSequence k = random_knots(rng, trial % 4, 5);
    const DesignMatrix d = design_matrix(k, linspace(0.0, 1.0, 60));
    Eigen::VectorXd diag;
    try {
      diag = smoothing_diagonal(d);
    } catch (const FitError&) {
      continue;
    }
    CHECK(diag.minCoeff() >= -1e-14);
    CHECK(diag.maxCoeff() <= 1.0 + 1e-12);
    CHECK(std::abs(diag.sum() - static_cast<double>(k.basis_count())) <= 1e-8);
    // trace of the explicit projection
    const Eigen::MatrixXd& phi = d.entries;
    const Eigen::MatrixXd s = phi * (phi.transpose() * phi).ldlt().solve(phi.transpose());
    CHECK((s.diagonal() - diag).cwiseAbs().maxCoeff() <= 1e-8);
  }

  CHECK_THROWS_AS(smoothing_diagonal(design_matrix(KnotSequence(0, 0.0, 1.0, {0.1, 0.15}),
                                                   std::vector<double>{0, 0.5, 1})),
                  FitError);
}
