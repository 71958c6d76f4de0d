#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "ugm/errors.hpp"
#include "ugm/problem.hpp"
#include "ugm/random.hpp"

using namespace ugm;
using ugm::testing::Gen;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

BallDomain unit_ball(Eigen::Index n) { return BallDomain::centered(n, 1.0); }

double prox_objective(const Vector& c, const Vector& anchor, double H, const MetricSpace& B, const Vector& x) {
  const double d = B.norm(x - anchor);
  return c.dot(x) + 0.5 * H * d * d;
}

}  // namespace

TEST_SUITE("project_ball") {
  TEST_CASE("points inside are unchanged, outside are scaled radially") {
    const auto B = MetricSpace::identity(2);
    const auto ball = unit_ball(2);
    CHECK(project_ball(v2(0.3, -0.4), ball, B) == v2(0.3, -0.4));
    CHECK((project_ball(v2(0, 2), ball, B) - v2(0, 1)).norm() < 1e-15);
  }

  TEST_CASE("idempotent and feasible under diagonal metrics") {
    Gen gen(11);
    for (int t = 0; t < 200; ++t) {
      const auto n = gen.integer(1, 8);
      const MetricSpace B(gen.positive(n));
      const BallDomain ball{gen.vec(n), gen.uniform(0.1, 3.0)};
      const Vector x = gen.vec(n, 5.0);
      const Vector p = project_ball(x, ball, B);
      CHECK(B.norm(p - ball.center) <= ball.radius * (1.0 + 1e-12));
      CHECK((project_ball(p, ball, B) - p).norm() <= 1e-12 * (1.0 + p.norm()));
    }
  }
}

TEST_SUITE("prox_step") {
  TEST_CASE("unconstrained minimizer outside the ball lands on the boundary") {
    const auto B = MetricSpace::identity(2);
    const Vector x = prox_step(v2(2, 0), Vector::Zero(2), 1.0, unit_ball(2), B);
    CHECK((x - v2(-1, 0)).norm() < 1e-15);
    // Grid check: no ball point does better.
    const double best = ugm::testing::grid_min_linear_2d(
        [](double a, double b) { return 2.0 * a + 0.5 * (a * a + b * b); }, 1.0, 801);
    CHECK(prox_objective(v2(2, 0), Vector::Zero(2), 1.0, B, x) <= best + 1e-12);
  }

  TEST_CASE("zero linear term returns the anchor for any H") {
    const auto B = MetricSpace::identity(2);
    for (double H : {0.0, 0.5, 10.0}) CHECK(prox_step(Vector::Zero(2), v2(0.2, 0.1), H, unit_ball(2), B) == v2(0.2, 0.1));
  }

  TEST_CASE("H = 0 is linear minimization over the ball") {
    const auto B = MetricSpace::identity(2);
    CHECK((prox_step(v2(0, 3), Vector::Zero(2), 0.0, unit_ball(2), B) - v2(0, -1)).norm() < 1e-15);
    // Diagonal metric: the minimizer of <c, x> over ||x||_B <= R is -R B^-1 c / ||c||_*.
    const MetricSpace D(v2(4, 1));
    const Vector x = prox_step(v2(1, 1), Vector::Zero(2), 0.0, unit_ball(2), D);
    CHECK(D.norm(x) == doctest::Approx(1.0));
    CHECK(x.dot(v2(1, 1)) == doctest::Approx(-D.dual_norm(v2(1, 1))));
  }

  TEST_CASE("errors: anchor outside the ball, negative H, dimension mismatch") {
    const auto B = MetricSpace::identity(2);
    CHECK_THROWS_AS(prox_step(v2(1, 0), v2(2, 0), 1.0, unit_ball(2), B), UsageError);
    CHECK_THROWS_AS(prox_step(v2(1, 0), v2(0, 0), -1.0, unit_ball(2), B), UsageError);
    CHECK_THROWS_AS(prox_step(Vector::Zero(3), v2(0, 0), 1.0, unit_ball(2), B), UsageError);
    // Round-off beyond the boundary within 1e-9 relative is accepted.
    CHECK_NOTHROW(prox_step(v2(1, 0), v2(1.0 + 1e-10, 0), 1.0, unit_ball(2), B));
  }

  TEST_CASE("three-point optimality inequality on random instances") {
    Gen gen(3);
    for (int t = 0; t < 500; ++t) {
      const auto n = gen.integer(1, 10);
      const MetricSpace B(gen.positive(n, 0.2, 5.0));
      const BallDomain ball{gen.vec(n, 0.5), gen.uniform(0.5, 2.0)};
      Philox rng(static_cast<std::uint64_t>(t), 0);
      const Vector anchor = random_point_in_ball(ball, B, rng);
      const Vector c = gen.vec(n, gen.uniform(0.1, 10.0));
      const double H = gen.uniform(0.01, 10.0);
      const Vector xp = prox_step(c, anchor, H, ball, B);
      CHECK(B.norm(xp - ball.center) <= ball.radius * (1.0 + 1e-12));
      const double at_xp = prox_objective(c, anchor, H, B, xp);
      for (int s = 0; s < 5; ++s) {
        const Vector x = random_point_in_ball(ball, B, rng);
        const double d = B.norm(x - xp);
        CHECK(prox_objective(c, anchor, H, B, x) >= at_xp + 0.5 * H * d * d - 1e-9);
      }
    }
  }
}

TEST_SUITE("objectives") {
  TEST_CASE("least squares values and gradients") {
    LeastSquares ls(Matrix::Identity(2, 2), Vector::Zero(2));
    const auto e = ls.evaluate(v2(1, 1));
    CHECK(e.value == doctest::Approx(1.0));
    CHECK(e.grad == v2(1, 1));

    Gen gen(5);
    const Matrix A = gen.mat(7, 4);
    const Vector xs = gen.vec(4);
    LeastSquares interp(A, A * xs);
    const auto at_opt = interp.evaluate(xs);
    CHECK(at_opt.value == doctest::Approx(0.0).epsilon(1e-24));
    CHECK(at_opt.grad.norm() < 1e-12);

    CHECK_THROWS_AS(LeastSquares(A, Vector::Zero(3)), UsageError);
    CHECK_THROWS_AS(ls.evaluate(Vector::Zero(3)), UsageError);
  }

  TEST_CASE("gradients match central finite differences") {
    Gen gen(6);
    for (int t = 0; t < 20; ++t) {
      const Matrix A = gen.mat(9, 5);
      const Vector b = gen.vec(9);
      Vector labels(9);
      for (auto& l : labels) l = gen.uniform(0, 1) < 0.5 ? -1.0 : 1.0;
      const Vector x = gen.in_ball(5);

      const LeastSquares ls(A, b);
      const Logistic lg(A, labels);
      for (const SmoothFunction* f : {static_cast<const SmoothFunction*>(&ls), static_cast<const SmoothFunction*>(&lg)}) {
        const Vector fd = ugm::testing::fd_gradient([&](const Vector& z) { return f->value(z); }, x);
        const Vector g = f->evaluate(x).grad;
        CHECK((fd - g).norm() <= 1e-6 * std::max(1.0, g.norm()));
      }
    }
  }

  TEST_CASE("logistic: value at 0, scalar monotonicity, extreme margins, label validation") {
    Gen gen(8);
    const Matrix A = gen.mat(6, 3);
    Vector labels(6);
    labels << 1, -1, 1, 1, -1, -1;
    CHECK(Logistic(A, labels).value(Vector::Zero(3)) == doctest::Approx(6.0 * std::log(2.0)));

    const Logistic scalar(Matrix::Ones(1, 1), Vector::Ones(1));
    double prev = std::numeric_limits<double>::infinity();
    for (double t = -5.0; t <= 5.0; t += 0.25) {
      const double v = scalar.value(Vector::Constant(1, t));
      CHECK(v == doctest::Approx(std::log1p(std::exp(-t))));
      CHECK(v < prev);
      prev = v;
    }
    for (double t : {-700.0, 700.0}) {
      const auto e = scalar.evaluate(Vector::Constant(1, t));
      CHECK(std::isfinite(e.value));
      CHECK(e.grad.allFinite());
    }
    CHECK(scalar.value(Vector::Constant(1, -700.0)) == doctest::Approx(700.0));

    Vector bad = labels;
    bad[2] = 0.0;
    CHECK_THROWS_AS(Logistic(A, bad), DataError);
  }

  TEST_CASE("p-power residual") {
    Gen gen(9);
    const Matrix A = gen.mat(8, 3);
    const Vector b = gen.vec(8);
    const Vector x = gen.in_ball(3);
    const double m = 8.0;
    CHECK(PPowerResidual(A, b, 2.0).value(x) == doctest::Approx(2.0 / m * LeastSquares(A, b).value(x)));
    CHECK((PPowerResidual(A, b, 2.0).evaluate(x).grad - 2.0 / m * LeastSquares(A, b).evaluate(x).grad).norm() < 1e-12);

    const PPowerResidual single(Matrix::Ones(1, 1), Vector::Constant(1, 3.0), 1.0);
    const auto e = single.evaluate(Vector::Zero(1));
    CHECK(e.value == doctest::Approx(3.0));
    CHECK(e.grad[0] == doctest::Approx(-1.0));

    // Kink: the zero element of the subdifferential.
    CHECK(PPowerResidual(Matrix::Ones(1, 1), Vector::Zero(1), 1.0).evaluate(Vector::Zero(1)).grad[0] == 0.0);

    const PPowerResidual p15(A, b, 1.5);
    int checked = 0;
    for (int t = 0; t < 50; ++t) {
      const Vector z = gen.in_ball(3);
      if (((A * z - b).cwiseAbs().array() <= 1e-3).any()) continue;
      const Vector fd = ugm::testing::fd_gradient([&](const Vector& y) { return p15.value(y); }, z, 1e-7);
      CHECK((fd - p15.evaluate(z).grad).norm() <= 1e-6 * std::max(1.0, fd.norm()));
      ++checked;
    }
    CHECK(checked > 10);

    CHECK_THROWS_AS(PPowerResidual(A, b, 0.9), UsageError);
    CHECK_THROWS_AS(PPowerResidual(A, b, 2.1), UsageError);
  }

  TEST_CASE("Bregman distances are nonnegative for every convex objective") {
    Gen gen(10);
    const Matrix A = gen.mat(12, 4);
    const Vector b = gen.vec(12);
    Vector labels(12);
    for (auto& l : labels) l = gen.uniform(0, 1) < 0.5 ? -1.0 : 1.0;
    const LeastSquares ls(A, b);
    const Logistic lg(A, labels);
    const PPowerResidual p1(A, b, 1.0), p13(A, b, 1.3), p2(A, b, 2.0);
    const LinearFunction lin(gen.vec(4), 0.5);
    const std::vector<const SmoothFunction*> fs{&ls, &lg, &p1, &p13, &p2, &lin};
    for (int t = 0; t < 300; ++t) {
      const Vector x = gen.in_ball(4), y = gen.in_ball(4);
      for (const auto* f : fs) {
        const auto ex = f->evaluate(x);
        CHECK(f->value(y) - ex.value - ex.grad.dot(y - x) >= -1e-9);
      }
    }
  }

  TEST_CASE("Hoelder Bregman bound with the spectral norm for least squares") {
    Gen gen(12);
    const Matrix A = gen.mat(10, 5);
    const LeastSquares ls(A, gen.vec(10));
    const double L = ugm::testing::spectral_norm_ata(A);
    for (int t = 0; t < 300; ++t) {
      const Vector x = gen.in_ball(5), y = gen.in_ball(5);
      const auto ex = ls.evaluate(x);
      const double breg = ls.value(y) - ex.value - ex.grad.dot(y - x);
      CHECK(breg <= 0.5 * L * (x - y).squaredNorm() * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_SUITE("certificate") {
  TEST_CASE("first update and repeated points") {
    CertificateAccumulator acc;
    certificate_update(acc, v2(0.5, 0), v2(1, 2), 3.0, 3.0);
    CHECK(acc.k == 1);
    CHECK(acc.sum_g == v2(1, 2));
    CHECK(acc.sum_affine_const == doctest::Approx(3.0 - 0.5));
    CHECK(acc.best_F == 3.0);

    const auto B = MetricSpace::identity(2);
    const auto ball = unit_ball(2);
    const auto one = certificate_gap(acc, ball, B);
    for (int i = 0; i < 9; ++i) certificate_update(acc, v2(0.5, 0), v2(1, 2), 3.0, 3.0);
    const auto ten = certificate_gap(acc, ball, B);
    CHECK(ten.phi_star == doctest::Approx(one.phi_star).epsilon(1e-14));
  }

  TEST_CASE("ties keep the earlier iterate") {
    CertificateAccumulator acc;
    certificate_update(acc, v2(0.1, 0), v2(1, 0), 1.0, 1.0);
    certificate_update(acc, v2(0.2, 0), v2(1, 0), 1.0, 1.0);
    CHECK(acc.best_x == v2(0.1, 0));
    certificate_observe(acc, v2(0.3, 0), 0.5);
    CHECK(acc.best_x == v2(0.3, 0));
  }

  TEST_CASE("accumulators equal direct summation over a recorded 10-step run") {
    Gen gen(13);
    const Matrix A = gen.mat(6, 3);
    const auto obj = least_squares_objective(A, gen.vec(6));
    std::vector<Vector> xs, gs;
    std::vector<double> fvals;
    Vector x = Vector::Zero(3);
    for (int k = 0; k < 10; ++k) {
      const auto e = obj.evaluate(x);
      xs.push_back(x);
      gs.push_back(e.grad);
      fvals.push_back(e.value);
      x = prox_step(e.grad, x, 50.0, obj.domain(), obj.metric());
    }
    CertificateAccumulator acc;
    for (int k = 0; k < 10; ++k) certificate_update(acc, xs[k], gs[k], fvals[k], fvals[k]);
    Vector sum_g = Vector::Zero(3);
    double sum_c = 0.0, best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10; ++k) {
      sum_g += gs[k];
      sum_c += fvals[k] - gs[k].dot(xs[k]);
      best = std::min(best, fvals[k]);
    }
    CHECK((acc.sum_g - sum_g).norm() <= 1e-12 * sum_g.norm());
    CHECK(acc.sum_affine_const == doctest::Approx(sum_c).epsilon(1e-12));
    CHECK(acc.best_F == best);
  }

  TEST_CASE("linear objective: one linearization is exact") {
    const Vector c = v2(0.3, -0.8);
    const auto obj = CompositeObjective(std::make_shared<LinearFunction>(c, 2.0), BallDomain{v2(0.1, 0.1), 0.5},
                                        MetricSpace::identity(2));
    const Vector x0 = obj.domain().center;
    const auto e = obj.evaluate(x0);
    CertificateAccumulator acc;
    certificate_update(acc, x0, e.grad, e.value, e.value);
    const auto gap = certificate_gap(acc, obj.domain(), obj.metric());
    const double true_min = 2.0 + c.dot(obj.domain().center) - 0.5 * c.norm();
    CHECK(gap.phi_star == doctest::Approx(true_min).epsilon(1e-14));
  }

  TEST_CASE("quadratic: phi_star matches a 2-D grid minimization of the model") {
    const Vector z = v2(0.3, -0.2);
    const auto obj = least_squares_objective(Matrix::Identity(2, 2), z);
    const Vector x0 = v2(-0.6, 0.5);
    const auto e0 = obj.evaluate(x0);
    CertificateAccumulator acc;
    certificate_update(acc, x0, e0.grad, e0.value, e0.value);
    certificate_observe(acc, z, obj.value(z));  // optimum, F* = 0
    const auto gap = certificate_gap(acc, obj.domain(), obj.metric());
    const double grid = ugm::testing::grid_min_linear_2d(
        [&](double a, double b) { return e0.value + e0.grad.dot(v2(a, b) - x0); }, 1.0);
    CHECK(gap.phi_star == doctest::Approx(grid).epsilon(1e-8));
    CHECK(gap.eps_star == doctest::Approx(0.0 - grid).epsilon(1e-8));
  }

  TEST_CASE("phi_star is below F everywhere in the ball") {
    Gen gen(14);
    const Matrix A = gen.mat(8, 4);
    const auto obj = least_squares_objective(A, gen.vec(8));
    CertificateAccumulator acc;
    for (int k = 0; k < 20; ++k) {
      const Vector x = gen.in_ball(4);
      const auto e = obj.evaluate(x);
      certificate_update(acc, x, e.grad, e.value, e.value);
    }
    const auto gap = certificate_gap(acc, obj.domain(), obj.metric());
    CHECK(gap.eps_star >= -1e-9);
    for (int t = 0; t < 100; ++t) CHECK(gap.phi_star <= obj.value(gen.in_ball(4)) + 1e-12);
  }

  TEST_CASE("gap without linearizations is a usage error") {
    CHECK_THROWS_AS(certificate_gap(CertificateAccumulator{}, unit_ball(2), MetricSpace::identity(2)), UsageError);
  }
}

TEST_SUITE("estimate_holder_constant") {
  TEST_CASE("least squares with nu = 1 approaches the spectral norm from below") {
    Gen gen(15);
    const Matrix A = gen.mat(5, 2);
    const double L = ugm::testing::spectral_norm_ata(A);
    const auto obj = least_squares_objective(A, gen.vec(5));
    const double est = estimate_holder_constant(obj, 1.0, 4000, 1);
    CHECK(est <= L * (1.0 + 1e-9));
    CHECK(est >= 0.95 * L);
  }

  TEST_CASE("linear objective has zero Hoelder constant") {
    const auto obj = CompositeObjective(std::make_shared<LinearFunction>(v2(1, -2)), unit_ball(2), MetricSpace::identity(2));
    for (double nu : {0.0, 0.5, 1.0}) CHECK(estimate_holder_constant(obj, nu, 100, 2) == 0.0);
  }

  TEST_CASE("L_nu D^nu is monotone in nu on a shared sample") {
    Gen gen(16);
    const Matrix A = gen.mat(20, 6);
    const auto obj = p_power_objective(A, gen.vec(20), 1.5);
    const double D = obj.domain().diameter();
    double prev = 0.0;
    for (double nu : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double scaled = estimate_holder_constant(obj, nu, 300, 99) * std::pow(D, nu);
      CHECK(prev <= scaled * (1.0 + 1e-12));
      prev = scaled;
    }
  }
}
