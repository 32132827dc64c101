#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgq {

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Element {
  std::array<int, 3> vertices;  // counterclockwise
  std::array<int, 3> edges;     // edge ids, side s connects vertex s -> s+1
  double area = 0.0;
  double diameter = 0.0;        // h_kappa, the longest side
};

struct Edge {
  std::array<int, 2> vertices;   // endpoints in the owner's traversal order
  int owner = -1;                // element whose outward normal is stored
  int neighbor = -1;             // -1 on boundary edges
  int owner_side = -1;
  int neighbor_side = -1;
  Eigen::Vector2d normal;        // unit, outward from the owner
  double length = 0.0;           // h_e

  bool is_boundary() const { return neighbor < 0; }
};

/// Conforming triangulation with an explicit edge skeleton. Immutable after
/// construction; safe for concurrent reads.
class Mesh {
 public:
  Mesh(std::vector<Eigen::Vector2d> vertices,
       std::vector<std::array<int, 3>> triangles);

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_elements() const { return static_cast<int>(elements_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  int n_interior_edges() const { return n_interior_; }
  int n_boundary_edges() const { return n_edges() - n_interior_; }

  const Eigen::Vector2d& vertex(int v) const { return vertices_[v]; }
  const Element& element(int k) const { return elements_[k]; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Outward unit normal of element k on its local side s.
  Eigen::Vector2d side_normal(int k, int s) const;

  double h_max() const { return h_max_; }
  double h_min() const { return h_min_; }
  /// max over edge-sharing element pairs of h_kappa / h_kappa'.
  double bounded_variation_ratio() const { return bounded_variation_; }
  /// h / min_kappa h_kappa.
  double quasi_uniformity_ratio() const { return h_max_ / h_min_; }

  /// Affine map x = v0 + B xi from the reference triangle; |det B| = 2 area.
  Eigen::Matrix2d jacobian(int k) const;
  Eigen::Matrix2d jacobian_inverse(int k) const;
  double jacobian_det(int k) const { return 2.0 * elements_[k].area; }

  Eigen::Vector2d to_reference(int k, const Eigen::Vector2d& x) const;
  Eigen::Vector2d to_physical(int k, const Eigen::Vector2d& xi) const;

 private:
  void build_edges();
  void validate();

  std::vector<Eigen::Vector2d> vertices_;
  std::vector<Element> elements_;
  std::vector<Edge> edges_;
  int n_interior_ = 0;
  double h_max_ = 0.0, h_min_ = 0.0, bounded_variation_ = 1.0;
};

/// Uniform n x n split of the unit square, each cell cut along the
/// lower-left to upper-right diagonal; 2 n^2 triangles. Nested under
/// n -> 2n, so refinement halves h exactly.
Mesh build_structured(int n);

/// Reads the plain text format: "vertices N", N lines "x y", "triangles M",
/// M lines "i j k" (0-based, counterclockwise). All mesh invariants are
/// validated; violations throw MeshError.
Mesh load_mesh(const std::string& path);

/// Pointwise jump/average conventions on an edge with owner normal `normal`.
/// Scalar jumps are vectors, vector jumps are scalars; on boundary edges the
/// right trace is absent and the one-sided conventions apply.
struct Traces {
  // interior edge, scalar w
  static double average(double left, double right) { return 0.5 * (left + right); }
  static Eigen::Vector2d jump(double left, double right, const Eigen::Vector2d& normal) {
    return (left - right) * normal;
  }
  // interior edge, vector tau
  static Eigen::Vector2d average(const Eigen::Vector2d& left, const Eigen::Vector2d& right) {
    return 0.5 * (left + right);
  }
  static double jump(const Eigen::Vector2d& left, const Eigen::Vector2d& right,
                     const Eigen::Vector2d& normal) {
    return normal.dot(left - right);
  }
  // boundary edge
  static Eigen::Vector2d jump(double trace, const Eigen::Vector2d& normal) {
    return trace * normal;
  }
  static Eigen::Vector2d average(const Eigen::Vector2d& trace) { return trace; }
};

/// Array form of the trace operators for traces sampled at common quadrature
/// points. `right` must be empty exactly when the edge is a boundary edge;
/// mismatched point counts throw.
struct EdgeTraceValues {
  Eigen::VectorXd average;            // {w} per point (scalar input)
  Eigen::Matrix2Xd jump;              // [[w]] per point (vector-valued)
};
EdgeTraceValues trace_jump_average(const Edge& edge,
                                   const Eigen::VectorXd& left,
                                   const Eigen::VectorXd& right);

struct VectorTraceValues {
  Eigen::Matrix2Xd average;           // {tau} per point
  Eigen::VectorXd jump;               // [[tau]] per point (scalar)
};
VectorTraceValues trace_jump_average(const Edge& edge,
                                     const Eigen::Matrix2Xd& left,
                                     const Eigen::Matrix2Xd& right);

}  // namespace dgq
