#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dgq/projection.hpp"
#include "dgq/space.hpp"

using namespace dgq;

namespace {

double l2_error_scalar(const Mesh& mesh, const Basis& basis, const DofField& f_h,
                       const ScalarFn& f) {
  const TriangleRule rule = triangle_rule(2 * basis.degree() + 8);
  double acc = 0.0;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Eigen::MatrixXd vals = f_h.values(k, rule.points);
    for (int g = 0; g < rule.size(); ++g) {
      const double d = f(mesh.to_physical(k, rule.points.col(g))) - vals(0, g);
      acc += rule.weights[g] * mesh.jacobian_det(k) * d * d;
    }
  }
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("pi_h reproduces polynomials of degree <= q") {
  const Mesh mesh = build_structured(2);
  const Basis basis(2);
  auto f = [](const Eigen::Vector2d& x) {
    return 1.0 + 2.0 * x.x() - x.y() + 0.5 * x.x() * x.y() - x.y() * x.y();
  };
  const DofField fh = project_scalar(f, mesh, basis);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    Eigen::Vector2d x(unif(rng), unif(rng));
    int k = -1;  // locate the element containing x
    for (int c = 0; c < mesh.n_elements(); ++c) {
      const Eigen::Vector2d xi = mesh.to_reference(c, x);
      if (xi.x() >= -1e-12 && xi.y() >= -1e-12 && xi.sum() <= 1.0 + 1e-12) {
        k = c;
        break;
      }
    }
    REQUIRE(k >= 0);
    CHECK(fh.value_at(k, x)[0] == doctest::Approx(f(x)).epsilon(1e-12));
  }
}

TEST_CASE("pi_h of zero is zero and pi_h is idempotent and stable") {
  const Mesh mesh = build_structured(2);
  const Basis basis(1);
  const DofField zero =
      project_scalar([](const Eigen::Vector2d&) { return 0.0; }, mesh, basis);
  CHECK(zero.coeffs().norm() == 0.0);

  auto f = [](const Eigen::Vector2d& x) { return std::exp(x.x() - x.y()); };
  const DofField fh = project_scalar(f, mesh, basis);
  // projecting the projection changes nothing
  const DofField fhh = project_scalar(
      [&](const Eigen::Vector2d& x) {
        for (int k = 0; k < mesh.n_elements(); ++k) {
          const Eigen::Vector2d xi = mesh.to_reference(k, x);
          if (xi.x() >= -1e-12 && xi.y() >= -1e-12 && xi.sum() <= 1.0 + 1e-12)
            return fh.value_at(k, x)[0];
        }
        return 0.0;
      },
      mesh, basis);
  CHECK((fhh.coeffs() - fh.coeffs()).norm() < 1e-10);

  // elementwise L2 stability ||pi_h f|| <= ||f||
  const Space space(mesh, 1);
  const double norm_fh =
      std::sqrt(fh.coeffs().cwiseProduct(space.mass_v()).dot(fh.coeffs()));
  const TriangleRule rule = triangle_rule(12);
  double norm_f = 0.0;
  for (int k = 0; k < mesh.n_elements(); ++k)
    for (int g = 0; g < rule.size(); ++g) {
      const double v = f(mesh.to_physical(k, rule.points.col(g)));
      norm_f += rule.weights[g] * mesh.jacobian_det(k) * v * v;
    }
  CHECK(norm_fh <= std::sqrt(norm_f) + 1e-12);
}

TEST_CASE("projections are linear") {
  const Mesh mesh = build_structured(2);
  const Basis basis(2);
  auto f = [](const Eigen::Vector2d& x) { return std::sin(2.0 * x.x()) + x.y(); };
  auto g = [](const Eigen::Vector2d& x) { return std::cos(x.x() * x.y()); };
  auto combo = [&](const Eigen::Vector2d& x) { return f(x) - 3.0 * g(x); };
  const DofField pf = project_scalar(f, mesh, basis);
  const DofField pg = project_scalar(g, mesh, basis);
  const DofField pc = project_scalar(combo, mesh, basis);
  CHECK((pc.coeffs() - (pf.coeffs() - 3.0 * pg.coeffs())).norm() < 1e-12);

  auto vf = [&](const Eigen::Vector2d& x) { return Eigen::Vector2d(f(x), g(x)); };
  auto vg = [&](const Eigen::Vector2d& x) { return Eigen::Vector2d(g(x), 0.0); };
  auto vc = [&](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(vf(x) + 2.0 * vg(x));
  };
  const DofField qf = galerkin_project_vector(vf, mesh, basis);
  const DofField qg = galerkin_project_vector(vg, mesh, basis);
  const DofField qc = galerkin_project_vector(vc, mesh, basis);
  CHECK((qc.coeffs() - (qf.coeffs() + 2.0 * qg.coeffs())).norm() < 1e-12);
}

TEST_CASE("G_h satisfies the Galerkin orthogonality against Sigma") {
  const Mesh mesh = build_structured(2);
  const Basis basis(1);
  auto xi = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(std::exp(x.x()), std::sin(3.0 * x.y()));
  };
  const DofField gh = galerkin_project_vector(xi, mesh, basis);
  const TriangleRule rule = triangle_rule(2 * 1 + 2);
  const Eigen::MatrixXd phi = basis.values(rule.points);
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Eigen::MatrixXd vals = gh.values(k, rule.points);
    for (int d = 0; d < 2; ++d)
      for (int j = 0; j < basis.size(); ++j) {
        double acc = 0.0;
        for (int g = 0; g < rule.size(); ++g)
          acc += rule.weights[g] * mesh.jacobian_det(k) *
                 (xi(mesh.to_physical(k, rule.points.col(g)))[d] - vals(d, g)) *
                 phi(j, g);
        CHECK(std::abs(acc) < 1e-13);
      }
  }
}

TEST_CASE("pi_h residual is orthogonal to the element space") {
  const Mesh mesh = build_structured(2);
  const Basis basis(2);
  auto f = [](const Eigen::Vector2d& x) { return std::sin(3.0 * x.x()) * x.y(); };
  const DofField fh = project_scalar(f, mesh, basis);
  const TriangleRule rule = triangle_rule(2 * 2 + 2);
  const Eigen::MatrixXd phi = basis.values(rule.points);
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Eigen::MatrixXd vals = fh.values(k, rule.points);
    for (int j = 0; j < basis.size(); ++j) {
      double acc = 0.0;
      for (int g = 0; g < rule.size(); ++g)
        acc += rule.weights[g] * mesh.jacobian_det(k) *
               (f(mesh.to_physical(k, rule.points.col(g))) - vals(0, g)) *
               phi(j, g);
      CHECK(std::abs(acc) < 1e-13);
    }
  }
}

TEST_CASE("pi_h convergence rate is q+1 for smooth functions") {
  const double pi = std::numbers::pi;
  auto f = [pi](const Eigen::Vector2d& x) {
    return std::sin(pi * x.x()) * std::sin(pi * x.y());
  };
  const int q = 2;
  const Basis basis(q);
  std::vector<double> errs;
  for (int n : {4, 8, 16}) {
    const Mesh mesh = build_structured(n);
    errs.push_back(l2_error_scalar(mesh, basis, project_scalar(f, mesh, basis), f));
  }
  const double rate1 = std::log2(errs[0] / errs[1]);
  const double rate2 = std::log2(errs[1] / errs[2]);
  CHECK(rate1 == doctest::Approx(3.0).epsilon(0.07));
  CHECK(rate2 == doctest::Approx(3.0).epsilon(0.07));
}

TEST_CASE("G_h idempotence and zero") {
  const Mesh mesh = build_structured(2);
  const Basis basis(1);
  auto xi = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(1.0 + x.x() - 2.0 * x.y(), 3.0 * x.y());
  };
  const DofField gh = galerkin_project_vector(xi, mesh, basis);
  // already in Sigma_{h,p}: reproduced pointwise
  Eigen::Matrix2Xd pts(2, 3);
  pts << 0.2, 0.5, 0.1, 0.3, 0.25, 0.7;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Eigen::MatrixXd vals = gh.values(k, pts);
    for (int g = 0; g < 3; ++g) {
      const Eigen::Vector2d x = mesh.to_physical(k, pts.col(g));
      CHECK(vals(0, g) == doctest::Approx(xi(x)[0]).epsilon(1e-12));
      CHECK(vals(1, g) == doctest::Approx(xi(x)[1]).epsilon(1e-12));
    }
  }
  const DofField zero = galerkin_project_vector(
      [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); },
      mesh, basis);
  CHECK(zero.coeffs().norm() == 0.0);
}

TEST_CASE("G_h of (y^2, 0) against a dense normal-equation oracle") {
  // single reference triangle; best linear fit of y^2 computed independently
  // from exact monomial Gram and moment integrals
  std::vector<Eigen::Vector2d> verts = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  std::vector<std::array<int, 3>> tris = {{0, 1, 2}};
  const Mesh mesh(std::move(verts), std::move(tris));
  const Basis basis(1);
  const DofField gh = galerkin_project_vector(
      [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.y() * x.y(), 0.0); },
      mesh, basis);

  // monomials {1, x, y}: G c = b with G_ij = int m_i m_j, b_i = int y^2 m_i
  Eigen::Matrix3d gram;
  const int px[3] = {0, 1, 0}, py[3] = {0, 0, 1};
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      gram(i, j) = triangle_monomial_integral(px[i] + px[j], py[i] + py[j]);
    rhs[i] = triangle_monomial_integral(px[i], py[i] + 2);
  }
  const Eigen::Vector3d c = gram.ldlt().solve(rhs);

  Eigen::Matrix2Xd pts(2, 4);
  pts << 0.1, 0.5, 0.25, 0.0, 0.1, 0.2, 0.5, 0.3;
  const Eigen::MatrixXd vals = gh.values(0, pts);
  for (int g = 0; g < 4; ++g) {
    const double fit = c[0] + c[1] * pts(0, g) + c[2] * pts(1, g);
    CHECK(vals(0, g) == doctest::Approx(fit).epsilon(1e-12));
    CHECK(vals(1, g) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  }
}

TEST_CASE("nested transfer reproduces the coarse field exactly") {
  const Mesh coarse = build_structured(2);
  const Mesh fine = build_structured(4);
  const Basis basis(2);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  DofField uc(coarse, basis, SpaceTag::Scalar);
  for (auto& c : uc.coeffs()) c = unif(rng);
  const DofField uf = transfer_nested(fine, basis, uc);

  std::uniform_real_distribution<double> pt(0.05, 0.3);
  for (int k = 0; k < fine.n_elements(); ++k) {
    const Eigen::Vector2d xi(pt(rng), pt(rng));
    const Eigen::Vector2d x = fine.to_physical(k, xi);
    int kc = -1;
    for (int c = 0; c < coarse.n_elements(); ++c) {
      const Eigen::Vector2d ref = coarse.to_reference(c, x);
      if (ref.x() >= -1e-12 && ref.y() >= -1e-12 && ref.sum() <= 1.0 + 1e-12) {
        kc = c;
        break;
      }
    }
    REQUIRE(kc >= 0);
    CHECK(uf.value_at(k, x)[0] ==
          doctest::Approx(uc.value_at(kc, x)[0]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("eval_field values and gradients") {
  const Mesh mesh = build_structured(2);
  const Basis basis(2);

  SUBCASE("constant field") {
    const DofField fh = project_scalar(
        [](const Eigen::Vector2d&) { return 7.0; }, mesh, basis);
    Eigen::Matrix2Xd pts(2, 1);
    pts << 0.3, 0.2;
    for (int k = 0; k < mesh.n_elements(); ++k) {
      CHECK(fh.values(k, pts)(0, 0) == doctest::Approx(7.0).epsilon(1e-13));
      CHECK(fh.gradients(k, pts).col(0).norm() < 1e-12);
    }
  }
  SUBCASE("linear field has constant gradient") {
    const DofField fh = project_scalar(
        [](const Eigen::Vector2d& x) { return x.x(); }, mesh, basis);
    Eigen::Matrix2Xd pts(2, 2);
    pts << 0.1, 0.6, 0.2, 0.3;
    for (int k = 0; k < mesh.n_elements(); ++k) {
      const Eigen::MatrixXd g = fh.gradients(k, pts);
      CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(g(1, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("random field gradient matches finite differences") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    DofField fh(mesh, basis, SpaceTag::Scalar);
    for (auto& c : fh.coeffs()) c = unif(rng);
    const double h = 1e-6;
    for (int k = 0; k < mesh.n_elements(); ++k) {
      const Eigen::Vector2d x = mesh.to_physical(k, Eigen::Vector2d(0.3, 0.3));
      Eigen::Matrix2Xd ref(2, 1);
      ref.col(0) = mesh.to_reference(k, x);
      const Eigen::MatrixXd g = fh.gradients(k, ref);
      for (int d = 0; d < 2; ++d) {
        Eigen::Vector2d xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        const double fd =
            (fh.value_at(k, xp)[0] - fh.value_at(k, xm)[0]) / (2.0 * h);
        CHECK(g(d, 0) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
  SUBCASE("element index out of range throws") {
    DofField fh(mesh, basis, SpaceTag::Scalar);
    Eigen::Matrix2Xd pts(2, 1);
    pts << 0.3, 0.2;
    CHECK_THROWS_AS(fh.values(99, pts), std::out_of_range);
  }
}
