#include <doctest.h>

#include <cmath>

#include "cranopt/linalg.hpp"
#include "cranopt/rates.hpp"

using namespace cranopt;

namespace {

Matrix random_hermitian_psd(int n, Rng& rng, double scale = 1.0) {
  Matrix a(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) a(r, c) = rng.complex_normal();
  }
  return scale * hermitian_part(a * a.adjoint());
}

Matrix random_hermitian_pd(int n, Rng& rng, double scale = 1.0) {
  return random_hermitian_psd(n, rng, scale) + 0.1 * scale * Matrix::Identity(n, n);
}

// Independent log-det path through the Hermitian eigendecomposition.
double logdet2_by_eigenvalues(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x);
  double acc = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) acc += std::log2(es.eigenvalues()(i));
  return acc;
}

}  // namespace

TEST_SUITE("rates") {

TEST_CASE("access mutual information scalar and zero-channel anchors") {
  Matrix h(1, 1);
  h(0, 0) = 1.0;
  Vector p = Vector::Constant(1, 3.0);
  std::vector<Matrix> zero{Matrix::Zero(1, 1)};
  CHECK(access_mutual_information(h, p, zero, 1.0) == doctest::Approx(2.0).epsilon(1e-12));

  Rng rng(1);
  std::vector<Matrix> d{random_hermitian_psd(1, rng)};
  CHECK(access_mutual_information(Matrix::Zero(1, 1), p, d, 1.0) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("access mutual information against the eigendecomposition path") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix h(4, 3);
    for (int c = 0; c < 3; ++c) {
      for (int r = 0; r < 4; ++r) h(r, c) = rng.complex_normal();
    }
    Vector p(3);
    for (int i = 0; i < 3; ++i) p(i) = 0.5 + rng.uniform();
    std::vector<Matrix> d{random_hermitian_psd(2, rng), random_hermitian_psd(2, rng)};
    const double noise = 0.3;
    const Matrix gram = h * p.asDiagonal() * h.adjoint();
    const Matrix full = gram + block_diag(d) + noise * Matrix::Identity(4, 4);
    const Matrix quant = block_diag(d) + noise * Matrix::Identity(4, 4);
    const double reference = logdet2_by_eigenvalues(full) - logdet2_by_eigenvalues(quant);
    const double value = access_mutual_information(h, p, d, noise);
    CHECK(value == doctest::Approx(reference).epsilon(1e-10));
  }

  std::vector<Matrix> not_psd{-Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  Matrix h = Matrix::Identity(4, 2);
  Vector p = Vector::Constant(2, 1.0);
  CHECK_THROWS_AS(access_mutual_information(h, p, not_psd, 1.0), std::domain_error);
}

TEST_CASE("fronthaul mutual information anchors") {
  Matrix h(1, 1);
  h(0, 0) = 1.0;
  Vector p = Vector::Constant(1, 3.0);
  Matrix d = Matrix::Identity(1, 1);
  CHECK(fronthaul_mutual_information(h, p, d, 1.0) == doctest::Approx(std::log2(5.0)).epsilon(1e-12));

  // Coarse quantization kills the rate.
  Matrix coarse = 1e9 * Matrix::Identity(1, 1);
  CHECK(fronthaul_mutual_information(h, p, coarse, 1.0) < 1e-8);

  CHECK_THROWS_AS(fronthaul_mutual_information(h, p, Matrix::Zero(1, 1), 1.0), std::domain_error);

  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix hm(2, 3);
    for (int c = 0; c < 3; ++c) {
      for (int r = 0; r < 2; ++r) hm(r, c) = rng.complex_normal();
    }
    Vector power = Vector::Constant(3, 1.3);
    const Matrix dm = random_hermitian_pd(2, rng);
    const Matrix gram = hm * power.asDiagonal() * hm.adjoint();
    const double reference =
        logdet2_by_eigenvalues(gram + dm + 0.7 * Matrix::Identity(2, 2)) -
        logdet2_by_eigenvalues(dm);
    CHECK(fronthaul_mutual_information(hm, power, dm, 0.7) ==
          doctest::Approx(reference).epsilon(1e-10));
  }
}

TEST_CASE("rate upper bound: scalar tightness and bound direction") {
  Matrix h(1, 1);
  h(0, 0) = 1.0;
  Vector p = Vector::Constant(1, 3.0);
  Matrix d = Matrix::Identity(1, 1);
  Matrix a_star = 0.2 * Matrix::Identity(1, 1);
  CHECK(rub_upper_bound(h, p, d, a_star, 1.0) == doctest::Approx(std::log2(5.0)).epsilon(1e-12));

  // H = 0, D = I, A = I, noise 1, N = 1: 2/ln2 - 1/ln2 = 1/ln2.
  CHECK(rub_upper_bound(Matrix::Zero(1, 1), p, Matrix::Identity(1, 1), Matrix::Identity(1, 1),
                        1.0) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-12));

  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix hm(2, 2);
    for (int c = 0; c < 2; ++c) {
      for (int r = 0; r < 2; ++r) hm(r, c) = rng.complex_normal();
    }
    Vector power = Vector::Constant(2, 0.8);
    const Matrix dm = random_hermitian_pd(2, rng);
    const double exact = fronthaul_mutual_information(hm, power, dm, 0.5);
    const Matrix any_a = random_hermitian_pd(2, rng);
    CHECK(rub_upper_bound(hm, power, dm, any_a, 0.5) >= exact - 1e-9);
    const Matrix best_a = optimal_fronthaul_weight(hm, power, dm, 0.5);
    CHECK(rub_upper_bound(hm, power, dm, best_a, 0.5) == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("optimal weights") {
  Matrix h(1, 1);
  h(0, 0) = 1.0;
  Vector p = Vector::Constant(1, 3.0);
  CHECK(optimal_fronthaul_weight(h, p, Matrix::Identity(1, 1), 1.0)(0, 0).real() ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK(optimal_fronthaul_weight(Matrix::Zero(1, 1), p, Matrix::Zero(1, 1), 0.25)(0, 0).real() ==
        doctest::Approx(4.0).epsilon(1e-12));

  std::vector<Matrix> d{Matrix::Zero(2, 2)};
  CHECK(optimal_access_weight(d, 1.0).isApprox(Matrix::Identity(2, 2), 1e-12));
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = 3.0;
  const Matrix w = optimal_access_weight({diag}, 1.0);
  CHECK(w(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w(1, 1).real() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("surrogate tightness at the optimal access weight") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix h(4, 2);
    for (int c = 0; c < 2; ++c) {
      for (int r = 0; r < 4; ++r) h(r, c) = rng.complex_normal();
    }
    Vector p = Vector::Constant(2, 1.0);
    std::vector<Matrix> d{random_hermitian_psd(2, rng), random_hermitian_psd(2, rng)};
    const double noise = 0.6;
    const Matrix gram = hermitian_part(h * p.asDiagonal() * h.adjoint());

    std::vector<Matrix> best_w;
    for (const Matrix& block : d) {
      best_w.push_back(
          Eigen::LLT<Matrix>(block + noise * Matrix::Identity(2, 2))
              .solve(Matrix::Identity(2, 2)));
    }
    const double bracket = access_surrogate(gram, d, best_w, noise);
    const double exact = access_mi_from_gram(gram, d, noise);
    CHECK(bracket == doctest::Approx(exact).epsilon(1e-9));

    // Any other PSD weight is strictly worse.
    std::vector<Matrix> other{random_hermitian_pd(2, rng), random_hermitian_pd(2, rng)};
    CHECK(access_surrogate(gram, d, other, noise) < exact + 1e-9);
  }
}

TEST_CASE("variational identity check") {
  Rng rng(9);
  SurrogateIdentityCheck id = surrogate_identity_check(Matrix::Identity(3, 3), rng);
  CHECK(id.residual < 1e-12);
  CHECK(id.stationarity < 1e-4);

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 2.0;
  diag(1, 1) = 0.5;
  id = surrogate_identity_check(diag, rng);
  CHECK(id.residual < 1e-9);
  CHECK(id.stationarity < 1e-4);

  CHECK_THROWS_AS(surrogate_identity_check(-Matrix::Identity(2, 2), rng), std::domain_error);
}

TEST_CASE("subset constraint enumeration") {
  Vector fso(2);
  fso << 10.0, 20.0;
  Vector rf(2);
  rf << 100.0, 200.0;
  const SubsetConstraintSet set = build_subset_constraints(fso, rf, 1.0, 0.0);
  CHECK(set.constraints.size() == 3);

  Vector fso3 = Vector::Constant(3, 5.0);
  Vector rf3(3);
  rf3 << 1.0, 2.0, 3.0;
  const SubsetConstraintSet set3 = build_subset_constraints(fso3, rf3, 1.0, 0.0);
  CHECK(set3.constraints.size() == 7);
  const SubsetConstraint& full = set3.constraints.back();
  REQUIRE(full.members.size() == 3);
  CHECK(full.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(full.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(full.weights[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  Vector big = Vector::Constant(13, 1.0);
  CHECK_THROWS_AS(build_subset_constraints(big, big, 1.0, 0.0), std::invalid_argument);

  // Single RU: alpha0 f_s I <= (1 - alpha0) C_rf + C_fso after un-normalizing.
  Vector fso1 = Vector::Constant(1, 7.0);
  Vector rf1 = Vector::Constant(1, 50.0);
  const SubsetConstraintSet set1 = build_subset_constraints(fso1, rf1, 2.0, 0.0);
  REQUIRE(set1.constraints.size() == 1);
  Vector rate = Vector::Constant(1, 3.0);
  // lhs = a0 * 2 * 3 / 50, rhs = (1 - a0) + 7/50; boundary at a0 such that
  // 6 a0 = 50 (1 - a0) + 7.
  const double boundary = 57.0 / 56.0;  // > 1, so always feasible here
  (void)boundary;
  CHECK(subset_feasible(1.0, rate, set1).feasible);
}

TEST_CASE("subset feasibility hand arithmetic") {
  Vector fso(2);
  fso << 10.0, 20.0;
  Vector rf(2);
  rf << 100.0, 200.0;
  const SubsetConstraintSet set = build_subset_constraints(fso, rf, 1.0, 0.0);
  Vector rate(2);
  rate << 50.0, 100.0;

  const FeasibilityCheck at_half = subset_feasible(0.5, rate, set);
  CHECK(at_half.feasible);
  CHECK(at_half.worst_slack == doctest::Approx(0.2).epsilon(1e-12));

  const FeasibilityCheck at_09 = subset_feasible(0.9, rate, set);
  CHECK_FALSE(at_09.feasible);
  CHECK(at_09.worst_slack == doctest::Approx(0.3 - 0.9).epsilon(1e-12));

  CHECK(subset_feasible(0.0, rate, set).feasible);  // lhs = 0, rhs >= 0
}

TEST_CASE("minimal-time oracle arithmetic") {
  Vector fso = Vector::Constant(1, 10.0);
  Vector rf = Vector::Constant(1, 100.0);
  Vector rate = Vector::Constant(1, 60.0);
  const MinimalTimeResult r = minimal_time_feasible(0.5, rate, fso, rf, 1.0);
  CHECK(r.alpha(0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.feasible);

  // FSO carries everything: zero shares at any alpha0.
  Vector huge = Vector::Constant(1, 1e12);
  const MinimalTimeResult all_fso = minimal_time_feasible(1.0, rate, huge, rf, 1.0);
  CHECK(all_fso.alpha(0) == 0.0);
  CHECK(all_fso.feasible);

  // Dead RF link with unmet demand.
  Vector zero_rf = Vector::Constant(1, 0.0);
  Vector zero_fso = Vector::Constant(1, 0.0);
  const MinimalTimeResult dead = minimal_time_feasible(0.5, rate, zero_fso, zero_rf, 1.0);
  CHECK_FALSE(dead.feasible);
  CHECK(std::isinf(dead.alpha(0)));
}

TEST_CASE("subset constraints agree with the minimal-time oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform() * 3.0 - 1e-12);
    Vector fso(m);
    Vector rf(m);
    Vector rate(m);
    for (int i = 0; i < m; ++i) {
      fso(i) = std::pow(10.0, 6.0 * rng.uniform());
      rf(i) = std::pow(10.0, 6.0 * rng.uniform());
      rate(i) = std::pow(10.0, 6.0 * rng.uniform() - 3.0);
    }
    const double f_s = std::pow(10.0, 3.0 * rng.uniform());
    const double alpha0 = rng.uniform();
    const SubsetConstraintSet set = build_subset_constraints(fso, rf, f_s, 0.0);
    const bool via_subsets = subset_feasible(alpha0, rate, set).feasible;
    const bool via_minimal = minimal_time_feasible(alpha0, rate, fso, rf, f_s).feasible;
    REQUIRE(via_subsets == via_minimal);
  }
}

TEST_CASE("gradients match central finite differences") {
  Rng rng(12);
  const double noise = 0.8;
  const double fd_step = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix gram = random_hermitian_psd(2, rng);
    const Matrix d = random_hermitian_pd(2, rng);
    const Matrix b = random_hermitian_pd(2, rng);
    const Matrix a = random_hermitian_pd(2, rng);

    // Real coordinates of the Hermitian space: diagonal, real and imaginary
    // off-diagonal entries.
    std::vector<Matrix> basis;
    for (int i = 0; i < 2; ++i) {
      Matrix e = Matrix::Zero(2, 2);
      e(i, i) = 1.0;
      basis.push_back(e);
    }
    {
      Matrix e = Matrix::Zero(2, 2);
      e(0, 1) = 1.0;
      e(1, 0) = 1.0;
      basis.push_back(e);
      Matrix f = Matrix::Zero(2, 2);
      f(0, 1) = Complex(0.0, 1.0);
      f(1, 0) = Complex(0.0, -1.0);
      basis.push_back(f);
    }

    const auto bracket_at = [&](const Matrix& dd) {
      return access_surrogate(gram, {dd}, {b}, noise);
    };
    const std::vector<Matrix> grad = access_surrogate_gradient(gram, {d}, {b}, noise);
    for (const Matrix& e : basis) {
      const double fd = (bracket_at(d + fd_step * e) - bracket_at(d - fd_step * e)) /
                        (2.0 * fd_step);
      const double analytic = hermitian_inner(grad[0], e);
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-5));
    }

    const auto rub_at = [&](const Matrix& dd) { return rub_from_gram(gram, dd, a, noise); };
    const Matrix rgrad = rub_gradient(d, a);
    for (const Matrix& e : basis) {
      const double fd = (rub_at(d + fd_step * e) - rub_at(d - fd_step * e)) / (2.0 * fd_step);
      const double analytic = hermitian_inner(rgrad, e);
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-5));
    }
  }
}

TEST_CASE("fronthaul rate is decreasing in isotropic distortion") {
  Rng rng(13);
  Matrix h(2, 2);
  for (int c = 0; c < 2; ++c) {
    for (int r = 0; r < 2; ++r) h(r, c) = rng.complex_normal();
  }
  Vector p = Vector::Constant(2, 1.0);
  double previous = std::numeric_limits<double>::infinity();
  for (double t = 0.125; t < 1e6; t *= 4.0) {
    const double value = fronthaul_mutual_information(h, p, t * Matrix::Identity(2, 2), 1.0);
    CHECK(value < previous);
    previous = value;
  }
}

}  // TEST_SUITE
