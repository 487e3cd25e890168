#pragma once

// Uniform node-centred grids on an interval or a rectangle, nodal scalar
// fields, and the problem instance that ties a grid to (p, beta, f).

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace robinlab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Outward-normal tags of a boundary node; rectangle corners carry two.
enum NormalTag : unsigned {
  kMinusX = 1u << 0,
  kPlusX = 1u << 1,
  kMinusY = 1u << 2,
  kPlusY = 1u << 3,
};

struct BoundaryNode {
  std::size_t index;
  unsigned normals;
};

struct IntervalDomain {
  double a;
  double b;
};

struct RectangleDomain {
  double ax;
  double bx;
  double ay;
  double by;
};

using Domain = std::variant<IntervalDomain, RectangleDomain>;

class Grid {
 public:
  /// Rejects n < 4 and degenerate or non-finite bounds.
  Grid(const Domain& domain, int cells_per_axis);

  const Domain& domain() const noexcept { return domain_; }
  int dimension() const noexcept { return dim_; }
  int cells_per_axis() const noexcept { return n_; }
  std::size_t nodes_per_axis() const noexcept { return static_cast<std::size_t>(n_) + 1; }
  std::size_t node_count() const noexcept { return node_count_; }

  double hx() const noexcept { return hx_; }
  /// Zero on an interval.
  double hy() const noexcept { return hy_; }

  /// x-fastest node numbering.
  std::size_t index(std::size_t ix, std::size_t iy = 0) const noexcept {
    return ix + iy * nodes_per_axis();
  }
  std::size_t ix(std::size_t node) const noexcept { return node % nodes_per_axis(); }
  std::size_t iy(std::size_t node) const noexcept {
    return dim_ == 1 ? 0 : node / nodes_per_axis();
  }

  Point coord(std::size_t node) const noexcept;
  unsigned normals(std::size_t node) const noexcept { return normals_[node]; }
  bool is_boundary(std::size_t node) const noexcept { return normals_[node] != 0; }

  const std::vector<BoundaryNode>& boundary() const noexcept { return boundary_; }
  const std::vector<std::size_t>& interior() const noexcept { return interior_; }

  /// Trapezoidal product-rule weights: h^d inside, h^d/2 on faces, h^d/4 at corners.
  std::span<const double> weights() const noexcept { return weights_; }
  /// Trapezoidal weights of the boundary integral (zero at interior nodes).
  std::span<const double> boundary_weights() const noexcept { return boundary_weights_; }

  double measure() const noexcept;
  std::string describe() const;

  bool operator==(const Grid& other) const noexcept;

 private:
  Domain domain_;
  int dim_ = 1;
  int n_ = 0;
  std::size_t node_count_ = 0;
  double hx_ = 0.0;
  double hy_ = 0.0;
  std::vector<unsigned> normals_;
  std::vector<BoundaryNode> boundary_;
  std::vector<std::size_t> interior_;
  std::vector<double> weights_;
  std::vector<double> boundary_weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(const Domain& domain, int cells_per_axis);
GridPtr make_interval(double a, double b, int cells);
GridPtr make_rectangle(double ax, double bx, double ay, double by, int cells_per_axis);

/// Nodal values on a grid. Immutable; every value is finite.
class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values);
  ScalarField(GridPtr grid, const Eigen::VectorXd& values);

  static ScalarField zeros(GridPtr grid);
  static ScalarField constant(GridPtr grid, double value);
  /// values[i] = rule(x_i); a non-finite value at any node is an error.
  static ScalarField from_function(GridPtr grid, const std::function<double(Point)>& rule);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  Eigen::Map<const Eigen::VectorXd> vec() const noexcept {
    return {values_.data(), static_cast<Eigen::Index>(values_.size())};
  }

  double max() const noexcept;
  double min() const noexcept;
  double norm_inf() const noexcept;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* context);

/// One instance of -Δu = u^p + f with Robin coefficient beta.
struct ProblemSpec {
  GridPtr grid;
  double p;
  double beta;
  ScalarField f;

  /// Validates p > 1, beta >= 0, f >= 0 on the same grid.
  static ProblemSpec make(GridPtr grid, double p, double beta, ScalarField f);
  ProblemSpec with_beta(double new_beta) const;
  ProblemSpec with_source(ScalarField new_f) const;
};

}  // namespace robinlab
