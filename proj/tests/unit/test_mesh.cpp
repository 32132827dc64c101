#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "dgq/field.hpp"
#include "dgq/mesh.hpp"
#include "dgq/space.hpp"

using namespace dgq;

namespace {

std::string write_temp(const std::string& content) {
  static int counter = 0;
  std::string path = "mesh_test_" + std::to_string(counter++) + ".txt";
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("structured mesh counts") {
  // elements 2n^2, interior edges 3n^2-2n, boundary edges 4n
  for (int n : {1, 2, 4, 7}) {
    const Mesh mesh = build_structured(n);
    CHECK(mesh.n_elements() == 2 * n * n);
    CHECK(mesh.n_interior_edges() == 3 * n * n - 2 * n);
    CHECK(mesh.n_boundary_edges() == 4 * n);
  }
  const Mesh m1 = build_structured(1);
  CHECK(m1.n_edges() == 5);
  const Mesh m2 = build_structured(2);
  CHECK(m2.n_edges() == 16);
}

TEST_CASE("structured mesh geometry") {
  const Mesh mesh = build_structured(4);
  CHECK(mesh.h_max() == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));
  CHECK(mesh.quasi_uniformity_ratio() == doctest::Approx(1.0));
  CHECK(mesh.bounded_variation_ratio() == doctest::Approx(1.0));
  for (const Element& el : mesh.elements()) {
    CHECK(el.area > 0.0);
    CHECK(el.area == doctest::Approx(0.5 / 16.0));
  }
  for (const Edge& e : mesh.edges()) {
    CHECK(e.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
    if (!e.is_boundary()) continue;
    // boundary normals point out of the unit square
    const Eigen::Vector2d mid =
        0.5 * (mesh.vertex(e.vertices[0]) + mesh.vertex(e.vertices[1]));
    const Eigen::Vector2d outside = mid + 1e-3 * e.normal;
    CHECK((outside.x() < 0 || outside.x() > 1 || outside.y() < 0 || outside.y() > 1));
  }
}

TEST_CASE("outward normals per element side") {
  const Mesh mesh = build_structured(2);
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const Element& el = mesh.element(k);
    const Eigen::Vector2d centroid =
        (mesh.vertex(el.vertices[0]) + mesh.vertex(el.vertices[1]) +
         mesh.vertex(el.vertices[2])) /
        3.0;
    for (int s = 0; s < 3; ++s) {
      const Edge& e = mesh.edge(el.edges[s]);
      const Eigen::Vector2d mid =
          0.5 * (mesh.vertex(e.vertices[0]) + mesh.vertex(e.vertices[1]));
      CHECK(mesh.side_normal(k, s).dot(mid - centroid) > 0.0);
    }
  }
}

TEST_CASE("build_structured rejects n = 0") {
  CHECK_THROWS_AS(build_structured(0), MeshError);
}

TEST_CASE("trace jump and average") {
  const Mesh mesh = build_structured(1);
  int interior = -1, boundary = -1;
  for (int e = 0; e < mesh.n_edges(); ++e)
    (mesh.edge(e).is_boundary() ? boundary : interior) = e;

  Edge iedge = mesh.edge(interior);
  SUBCASE("continuous function has zero jump") {
    Eigen::VectorXd l = Eigen::VectorXd::Constant(3, 1.0);
    const auto tr = trace_jump_average(iedge, l, l);
    CHECK(tr.average[0] == doctest::Approx(1.0));
    CHECK(tr.jump.col(0).norm() == doctest::Approx(0.0));
  }
  SUBCASE("direct substitution") {
    iedge.normal = Eigen::Vector2d(1.0, 0.0);
    Eigen::VectorXd l = Eigen::VectorXd::Constant(1, 2.0);
    Eigen::VectorXd r = Eigen::VectorXd::Constant(1, 5.0);
    const auto tr = trace_jump_average(iedge, l, r);
    CHECK(tr.average[0] == doctest::Approx(3.5));
    CHECK(tr.jump(0, 0) == doctest::Approx(-3.0));
    CHECK(tr.jump(1, 0) == doctest::Approx(0.0));
  }
  SUBCASE("boundary edge one-sided jump") {
    Edge bedge = mesh.edge(boundary);
    bedge.normal = Eigen::Vector2d(0.0, -1.0);
    Eigen::VectorXd l = Eigen::VectorXd::Constant(1, 4.0);
    const auto tr = trace_jump_average(bedge, l, Eigen::VectorXd());
    CHECK(tr.jump(0, 0) == doctest::Approx(0.0));
    CHECK(tr.jump(1, 0) == doctest::Approx(-4.0));
  }
  SUBCASE("mismatched point counts throw") {
    Eigen::VectorXd l = Eigen::VectorXd::Constant(3, 1.0);
    Eigen::VectorXd r = Eigen::VectorXd::Constant(2, 1.0);
    CHECK_THROWS(trace_jump_average(iedge, l, r));
  }
  SUBCASE("swapping sides leaves the geometric objects unchanged") {
    // the other side sees the flipped normal; {w} and [[w]] agree
    Eigen::VectorXd l = Eigen::VectorXd::Constant(1, 2.0);
    Eigen::VectorXd r = Eigen::VectorXd::Constant(1, 5.0);
    const auto tr = trace_jump_average(iedge, l, r);
    Edge swapped = iedge;
    swapped.normal = -iedge.normal;
    const auto tr2 = trace_jump_average(swapped, r, l);
    CHECK(tr.average[0] == doctest::Approx(tr2.average[0]));
    CHECK((tr.jump.col(0) - tr2.jump.col(0)).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("face-sum identity over jumps and averages") {
  // sum_k int_{dk} v xi.nu = sum_interior int {v}[[xi]] + sum_all int [[v]].{xi}
  const Mesh mesh = build_structured(3);
  const Space space(mesh, 2);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  DofField v = space.make_scalar();
  DofField xi = space.make_vector();
  for (int rep = 0; rep < 5; ++rep) {
    for (auto& c : v.coeffs()) c = unif(rng);
    for (auto& c : xi.coeffs()) c = unif(rng);

    // element-side route, each element with its own trace and normal
    double lhs = 0.0;
    for (int k = 0; k < mesh.n_elements(); ++k)
      for (int s = 0; s < 3; ++s) {
        const Edge& e = mesh.edge(mesh.element(k).edges[s]);
        const Space::EdgeData& ed = space.edge(mesh.element(k).edges[s]);
        const Eigen::Vector2d nu = mesh.side_normal(k, s);
        for (int g = 0; g < ed.weights.size(); ++g) {
          Eigen::Matrix2Xd pt(2, 1);
          pt.col(0) = mesh.to_reference(k, ed.qpts.col(g));
          const double vv = v.values(k, pt)(0, 0);
          const Eigen::Vector2d xv = xi.values(k, pt).col(0);
          lhs += ed.weights[g] * vv * xv.dot(nu);
        }
        (void)e;
      }

    // jump/average route
    double rhs = 0.0;
    for (int e = 0; e < mesh.n_edges(); ++e) {
      const Edge& edge = mesh.edge(e);
      const Space::EdgeData& ed = space.edge(e);
      for (int g = 0; g < ed.weights.size(); ++g) {
        Eigen::Matrix2Xd pt0(2, 1), pt1(2, 1);
        pt0.col(0) = mesh.to_reference(edge.owner, ed.qpts.col(g));
        const double v0 = v.values(edge.owner, pt0)(0, 0);
        const Eigen::Vector2d x0 = xi.values(edge.owner, pt0).col(0);
        if (edge.is_boundary()) {
          rhs += ed.weights[g] * Traces::jump(v0, edge.normal).dot(x0);
        } else {
          pt1.col(0) = mesh.to_reference(edge.neighbor, ed.qpts.col(g));
          const double v1 = v.values(edge.neighbor, pt1)(0, 0);
          const Eigen::Vector2d x1 = xi.values(edge.neighbor, pt1).col(0);
          rhs += ed.weights[g] * Traces::average(v0, v1) *
                 Traces::jump(x0, x1, edge.normal);
          rhs += ed.weights[g] *
                 Traces::jump(v0, v1, edge.normal).dot(Traces::average(x0, x1));
        }
      }
    }
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("load_mesh") {
  SUBCASE("round trip of the n=1 structured mesh") {
    const std::string path = write_temp(
        "vertices 4\n0 0\n1 0\n0 1\n1 1\ntriangles 2\n0 1 3\n0 3 2\n");
    const Mesh mesh = load_mesh(path);
    CHECK(mesh.n_elements() == 2);
    CHECK(mesh.n_edges() == 5);
    CHECK(mesh.n_interior_edges() == 1);
    CHECK(mesh.h_max() == doctest::Approx(std::sqrt(2.0)));
    std::remove(path.c_str());
  }
  SUBCASE("clockwise triangle is an inverted element") {
    const std::string path = write_temp(
        "vertices 4\n0 0\n1 0\n0 1\n1 1\ntriangles 2\n0 3 1\n0 3 2\n");
    CHECK_THROWS_WITH_AS(load_mesh(path), doctest::Contains("inverted element"),
                         MeshError);
    std::remove(path.c_str());
  }
  SUBCASE("edge shared by three triangles is non-manifold") {
    const std::string path = write_temp(
        "vertices 5\n0 0\n1 0\n0 1\n1 1\n0.5 -1\ntriangles 3\n0 1 3\n0 3 2\n0 4 3\n");
    CHECK_THROWS_WITH_AS(load_mesh(path), doctest::Contains("non-manifold"),
                         MeshError);
    std::remove(path.c_str());
  }
  SUBCASE("hanging node is rejected") {
    // left cell split into two; right cell spans the full edge x=0.5
    const std::string path = write_temp(
        "vertices 6\n0 0\n0.5 0\n0.5 0.5\n0.5 1\n0 1\n1 0.5\n"
        "triangles 3\n0 1 2\n0 2 4\n1 5 3\n");
    CHECK_THROWS_WITH_AS(load_mesh(path), doctest::Contains("hanging node"),
                         MeshError);
    std::remove(path.c_str());
  }
  SUBCASE("malformed file") {
    const std::string path = write_temp("verts 4\n");
    CHECK_THROWS_WITH_AS(load_mesh(path), doctest::Contains("malformed"),
                         MeshError);
    std::remove(path.c_str());
  }
}
