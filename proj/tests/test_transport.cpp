#include <doctest.h>

#include "wshift/transport.hpp"

#include <cmath>

using namespace wshift;

TEST_CASE("gaussian W2 closed form on simple cases") {
  const Vec mu0 = Vec::Zero(1), mu1 = Vec::Ones(1) * 3.0;
  const Mat c1 = Mat::Identity(1, 1);
  // Pure mean shift.
  CHECK(w2_gaussian(mu0, c1, mu1, c1) == doctest::Approx(3.0).epsilon(1e-12));
  // Pure scale change: W2 = |s1 - s2|.
  CHECK(w2_gaussian(mu0, c1 * 4.0, mu0, c1) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Commuting covariances in 2-D.
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a.diagonal() << 1.0, 4.0;
  b.diagonal() << 9.0, 1.0;
  const double expected = std::sqrt((1.0 - 3.0) * (1.0 - 3.0) +
                                    (2.0 - 1.0) * (2.0 - 1.0));
  CHECK(w2_gaussian(Vec::Zero(2), a, Vec::Zero(2), b) ==
        doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("1-D quadrature W2 agrees with the Gaussian closed form") {
  GaussianLocation g1, g2;
  g1.theta = Vec::Zero(1);
  g1.sigma_cov = Mat::Identity(1, 1);
  g2.theta = Vec::Ones(1) * 0.7;
  g2.sigma_cov = Mat::Identity(1, 1) * 2.25;
  const double closed = w2_gaussian(g1.theta, g1.sigma_cov, g2.theta,
                                    g2.sigma_cov);
  const double numeric =
      w2_1d(DistributionSpec{g1}, DistributionSpec{g2}, 1e-12);
  CHECK(numeric == doctest::Approx(closed).epsilon(1e-6));
}

TEST_CASE("smoothed uniform W2 constant and closed form") {
  const double c = smoothed_uniform_w2_constant();
  CHECK(c == doctest::Approx(2.0 * (6.0 - 6.0 * std::sqrt(2.0) + M_PI) /
                             (3.0 * M_PI))
                 .epsilon(1e-15));
  CHECK(1.0 / (M_PI * std::cbrt(c)) >= 0.614);
  for (double tau : {0.05, 0.25}) {
    CHECK(w2_smoothed_uniform_closed(tau) ==
          doctest::Approx(std::sqrt(c * tau * tau * tau)).epsilon(1e-15));
  }
}

TEST_CASE("quadrature W2 matches the smoothed uniform closed form") {
  for (double tau : {0.1, 0.25}) {
    const double numeric = w2_1d(DistributionSpec{UniformLocation{0.0}},
                                 DistributionSpec{SmoothedUniform{0.0, tau}},
                                 1e-13);
    CHECK(numeric ==
          doctest::Approx(w2_smoothed_uniform_closed(tau)).epsilon(1e-6));
  }
}

TEST_CASE("empirical coupling cost flags budget violations") {
  const int n = 5000;
  Mat clean = Mat::Zero(n, 2);
  Mat shifted = clean;
  shifted.col(0).array() += 0.3;  // displacement 0.3 per row
  const auto ok = empirical_coupling_cost(clean, shifted, 0.09 + 1e-12);
  CHECK(ok.within_budget);
  CHECK(ok.mean_sq_displacement == doctest::Approx(0.09).epsilon(1e-12));
  const auto bad = empirical_coupling_cost(clean, shifted, 0.05);
  CHECK_FALSE(bad.within_budget);
}

TEST_CASE("talagrand bound is tight for Gaussian mean shifts") {
  // KL(N(d,1) || N(0,1)) = d^2/2 and W2 = d; rho = 1 gives equality.
  GaussianLocation p, q;
  p.theta = Vec::Ones(1) * 0.4;
  p.sigma_cov = Mat::Identity(1, 1);
  q.theta = Vec::Zero(1);
  q.sigma_cov = Mat::Identity(1, 1);
  const double kl = kl_numeric(DistributionSpec{p}, DistributionSpec{q}, 1e-11);
  CHECK(kl == doctest::Approx(0.08).epsilon(1e-6));
  CHECK(talagrand_w2_upper(kl, 1.0) == doctest::Approx(0.4).epsilon(1e-6));
}
