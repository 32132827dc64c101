#include "dgq/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

namespace dgq {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

Mesh::Mesh(std::vector<Eigen::Vector2d> vertices,
           std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)) {
  elements_.reserve(triangles.size());
  for (const auto& t : triangles) {
    for (int v : t)
      if (v < 0 || v >= n_vertices())
        throw MeshError("triangle references vertex " + std::to_string(v) +
                        " out of range");
    Element el;
    el.vertices = t;
    const auto &a = vertices_[t[0]], &b = vertices_[t[1]], &c = vertices_[t[2]];
    el.area = signed_area(a, b, c);
    if (!(el.area > 0.0))
      throw MeshError("inverted element: triangle " +
                      std::to_string(elements_.size()) +
                      " is clockwise or degenerate");
    el.diameter = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    elements_.push_back(el);
  }
  if (elements_.empty()) throw MeshError("mesh has no elements");
  build_edges();
  validate();
}

void Mesh::build_edges() {
  std::map<std::pair<int, int>, int> edge_of;  // sorted vertex pair -> edge id
  for (int k = 0; k < n_elements(); ++k) {
    for (int s = 0; s < 3; ++s) {
      const int va = elements_[k].vertices[s];
      const int vb = elements_[k].vertices[(s + 1) % 3];
      const auto key = std::minmax(va, vb);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        Edge e;
        e.vertices = {va, vb};
        e.owner = k;
        e.owner_side = s;
        const Eigen::Vector2d tangent = vertices_[vb] - vertices_[va];
        e.length = tangent.norm();
        if (!(e.length > 0.0)) throw MeshError("zero-length edge");
        // CCW element traversal puts the outward normal to the right of the
        // tangent.
        e.normal = Eigen::Vector2d(tangent.y(), -tangent.x()) / e.length;
        edges_.push_back(e);
        elements_[k].edges[s] = static_cast<int>(edges_.size()) - 1;
        edge_of.emplace(key, elements_[k].edges[s]);
      } else {
        Edge& e = edges_[it->second];
        if (e.neighbor >= 0)
          throw MeshError("non-manifold edge: edge (" +
                          std::to_string(key.first) + "," +
                          std::to_string(key.second) +
                          ") shared by more than 2 triangles");
        e.neighbor = k;
        e.neighbor_side = s;
        elements_[k].edges[s] = it->second;
      }
    }
  }
  n_interior_ = 0;
  for (const Edge& e : edges_)
    if (!e.is_boundary()) ++n_interior_;
}

void Mesh::validate() {
  // A hanging node shows up as a vertex strictly inside a singly-shared
  // edge (doubly-shared sides coincide as vertex pairs and cannot host one).
  for (const Edge& e : edges_) {
    if (!e.is_boundary()) continue;
    const Eigen::Vector2d& a = vertices_[e.vertices[0]];
    const Eigen::Vector2d& b = vertices_[e.vertices[1]];
    for (int v = 0; v < n_vertices(); ++v) {
      if (v == e.vertices[0] || v == e.vertices[1]) continue;
      const Eigen::Vector2d& p = vertices_[v];
      const double cross = (b - a).x() * (p - a).y() - (b - a).y() * (p - a).x();
      if (std::abs(cross) > 1e-12 * e.length * e.length) continue;
      const double t = (p - a).dot(b - a) / (e.length * e.length);
      if (t > 1e-12 && t < 1.0 - 1e-12)
        throw MeshError("hanging node detected: vertex " + std::to_string(v) +
                        " lies inside an element side");
    }
  }

  h_min_ = std::numeric_limits<double>::max();
  for (const Element& el : elements_) {
    h_max_ = std::max(h_max_, el.diameter);
    h_min_ = std::min(h_min_, el.diameter);
  }
  bounded_variation_ = 1.0;
  for (const Edge& e : edges_) {
    if (e.is_boundary()) continue;
    const double hk = elements_[e.owner].diameter;
    const double hk2 = elements_[e.neighbor].diameter;
    bounded_variation_ = std::max({bounded_variation_, hk / hk2, hk2 / hk});
  }
}

Eigen::Vector2d Mesh::side_normal(int k, int s) const {
  const Edge& e = edges_[elements_[k].edges[s]];
  return (e.owner == k) ? e.normal : Eigen::Vector2d(-e.normal);
}

Eigen::Matrix2d Mesh::jacobian(int k) const {
  const auto& t = elements_[k].vertices;
  Eigen::Matrix2d B;
  B.col(0) = vertices_[t[1]] - vertices_[t[0]];
  B.col(1) = vertices_[t[2]] - vertices_[t[0]];
  return B;
}

Eigen::Matrix2d Mesh::jacobian_inverse(int k) const {
  return jacobian(k).inverse();
}

Eigen::Vector2d Mesh::to_reference(int k, const Eigen::Vector2d& x) const {
  return jacobian_inverse(k) * (x - vertices_[elements_[k].vertices[0]]);
}

Eigen::Vector2d Mesh::to_physical(int k, const Eigen::Vector2d& xi) const {
  return vertices_[elements_[k].vertices[0]] + jacobian(k) * xi;
}

Mesh build_structured(int n) {
  if (n < 1) throw MeshError("build_structured: n must be >= 1");
  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(double(i) / n, double(j) / n);

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // diagonal from (i,j) to (i+1,j+1)
      triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);

  std::string keyword;
  long n = 0;
  if (!(in >> keyword >> n) || keyword != "vertices" || n <= 0)
    throw MeshError("malformed mesh file: expected 'vertices N'");
  std::vector<Eigen::Vector2d> vertices(n);
  for (long i = 0; i < n; ++i)
    if (!(in >> vertices[i].x() >> vertices[i].y()))
      throw MeshError("malformed mesh file: bad vertex line " + std::to_string(i));

  long m = 0;
  if (!(in >> keyword >> m) || keyword != "triangles" || m <= 0)
    throw MeshError("malformed mesh file: expected 'triangles M'");
  std::vector<std::array<int, 3>> triangles(m);
  for (long i = 0; i < m; ++i)
    if (!(in >> triangles[i][0] >> triangles[i][1] >> triangles[i][2]))
      throw MeshError("malformed mesh file: bad triangle line " + std::to_string(i));

  return Mesh(std::move(vertices), std::move(triangles));
}

EdgeTraceValues trace_jump_average(const Edge& edge, const Eigen::VectorXd& left,
                                   const Eigen::VectorXd& right) {
  const bool boundary = edge.is_boundary();
  if (boundary != (right.size() == 0))
    throw std::invalid_argument("right trace must be absent iff boundary edge");
  if (!boundary && left.size() != right.size())
    throw std::invalid_argument("mismatched quadrature-point counts");
  EdgeTraceValues out;
  const auto npts = left.size();
  out.average.resize(npts);
  out.jump.resize(2, npts);
  for (Eigen::Index g = 0; g < npts; ++g) {
    if (boundary) {
      out.average[g] = left[g];
      out.jump.col(g) = Traces::jump(left[g], edge.normal);
    } else {
      out.average[g] = Traces::average(left[g], right[g]);
      out.jump.col(g) = Traces::jump(left[g], right[g], edge.normal);
    }
  }
  return out;
}

VectorTraceValues trace_jump_average(const Edge& edge,
                                     const Eigen::Matrix2Xd& left,
                                     const Eigen::Matrix2Xd& right) {
  const bool boundary = edge.is_boundary();
  if (boundary != (right.cols() == 0))
    throw std::invalid_argument("right trace must be absent iff boundary edge");
  if (!boundary && left.cols() != right.cols())
    throw std::invalid_argument("mismatched quadrature-point counts");
  VectorTraceValues out;
  const auto npts = left.cols();
  out.average.resize(2, npts);
  out.jump.resize(npts);
  for (Eigen::Index g = 0; g < npts; ++g) {
    if (boundary) {
      out.average.col(g) = left.col(g);
      out.jump[g] = 0.0;  // [[tau]] is not used on boundary edges
    } else {
      out.average.col(g) = Traces::average(Eigen::Vector2d(left.col(g)),
                                           Eigen::Vector2d(right.col(g)));
      out.jump[g] = Traces::jump(Eigen::Vector2d(left.col(g)),
                                 Eigen::Vector2d(right.col(g)), edge.normal);
    }
  }
  return out;
}

}  // namespace dgq
