#include "robinlab/grid.hpp"

#include "robinlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace robinlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::GridMismatch: return "grid mismatch";
    case ErrorCode::NonFinite: return "non-finite value";
    case ErrorCode::SingularOperator: return "singular operator";
    case ErrorCode::SolverFailure: return "solver failure";
    case ErrorCode::InvalidBracket: return "invalid bracket";
    case ErrorCode::NonMonotoneVerdict: return "non-monotone verdict";
    case ErrorCode::SingularJacobian: return "singular Jacobian";
    case ErrorCode::Stagnation: return "stagnation";
    case ErrorCode::PreconditionViolated: return "precondition violated";
    case ErrorCode::PassNotFound: return "mountain pass not found";
    case ErrorCode::StiffnessFailure: return "stiffness failure";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

namespace {

void check_axis(double lo, double hi, const char* name) {
  require(std::isfinite(lo) && std::isfinite(hi), ErrorCode::InvalidArgument,
          std::string("non-finite bounds on axis ") + name);
  require(lo < hi, ErrorCode::InvalidArgument,
          std::string("degenerate bounds on axis ") + name + ": lower bound must be below upper bound");
}

}  // namespace

Grid::Grid(const Domain& domain, int cells_per_axis) : domain_(domain), n_(cells_per_axis) {
  require(cells_per_axis >= 4, ErrorCode::InvalidArgument,
          "n_per_axis must be at least 4, got " + std::to_string(cells_per_axis));
  const std::size_t m = nodes_per_axis();

  if (const auto* iv = std::get_if<IntervalDomain>(&domain_)) {
    check_axis(iv->a, iv->b, "x");
    dim_ = 1;
    hx_ = (iv->b - iv->a) / n_;
    node_count_ = m;
    normals_.assign(m, 0u);
    normals_.front() = kMinusX;
    normals_.back() = kPlusX;
    weights_.assign(m, hx_);
    weights_.front() = weights_.back() = 0.5 * hx_;
    boundary_weights_.assign(m, 0.0);
    boundary_weights_.front() = boundary_weights_.back() = 1.0;
  } else {
    const auto& r = std::get<RectangleDomain>(domain_);
    check_axis(r.ax, r.bx, "x");
    check_axis(r.ay, r.by, "y");
    dim_ = 2;
    hx_ = (r.bx - r.ax) / n_;
    hy_ = (r.by - r.ay) / n_;
    node_count_ = m * m;
    normals_.assign(node_count_, 0u);
    weights_.assign(node_count_, 0.0);
    boundary_weights_.assign(node_count_, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        unsigned tag = 0;
        if (i == 0) tag |= kMinusX;
        if (i == m - 1) tag |= kPlusX;
        if (j == 0) tag |= kMinusY;
        if (j == m - 1) tag |= kPlusY;
        const std::size_t k = index(i, j);
        normals_[k] = tag;
        const double wx = (i == 0 || i == m - 1) ? 0.5 * hx_ : hx_;
        const double wy = (j == 0 || j == m - 1) ? 0.5 * hy_ : hy_;
        weights_[k] = wx * wy;
        // An x-normal face is integrated along y and vice versa.
        double bw = 0.0;
        if (tag & (kMinusX | kPlusX)) bw += wy;
        if (tag & (kMinusY | kPlusY)) bw += wx;
        boundary_weights_[k] = bw;
      }
    }
  }

  for (std::size_t k = 0; k < node_count_; ++k) {
    if (normals_[k] != 0)
      boundary_.push_back({k, normals_[k]});
    else
      interior_.push_back(k);
  }
}

Point Grid::coord(std::size_t node) const noexcept {
  if (const auto* iv = std::get_if<IntervalDomain>(&domain_)) {
    // Pin the last node to b exactly.
    if (node == static_cast<std::size_t>(n_)) return {iv->b, 0.0};
    return {iv->a + static_cast<double>(node) * hx_, 0.0};
  }
  const auto& r = std::get<RectangleDomain>(domain_);
  const std::size_t i = ix(node);
  const std::size_t j = iy(node);
  const auto last = static_cast<std::size_t>(n_);
  const double x = (i == last) ? r.bx : r.ax + static_cast<double>(i) * hx_;
  const double y = (j == last) ? r.by : r.ay + static_cast<double>(j) * hy_;
  return {x, y};
}

double Grid::measure() const noexcept {
  if (const auto* iv = std::get_if<IntervalDomain>(&domain_)) return iv->b - iv->a;
  const auto& r = std::get<RectangleDomain>(domain_);
  return (r.bx - r.ax) * (r.by - r.ay);
}

std::string Grid::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* iv = std::get_if<IntervalDomain>(&domain_)) {
    os << "Interval(" << iv->a << "," << iv->b << ")";
  } else {
    const auto& r = std::get<RectangleDomain>(domain_);
    os << "Rectangle(" << r.ax << "," << r.bx << "," << r.ay << "," << r.by << ")";
  }
  os << " n=" << n_;
  return os.str();
}

bool Grid::operator==(const Grid& other) const noexcept {
  if (n_ != other.n_ || dim_ != other.dim_) return false;
  if (const auto* a = std::get_if<IntervalDomain>(&domain_)) {
    const auto* b = std::get_if<IntervalDomain>(&other.domain_);
    return b && a->a == b->a && a->b == b->b;
  }
  const auto* b = std::get_if<RectangleDomain>(&other.domain_);
  const auto& a = std::get<RectangleDomain>(domain_);
  return b && a.ax == b->ax && a.bx == b->bx && a.ay == b->ay && a.by == b->by;
}

GridPtr make_grid(const Domain& domain, int cells_per_axis) {
  return std::make_shared<const Grid>(domain, cells_per_axis);
}

GridPtr make_interval(double a, double b, int cells) {
  return make_grid(IntervalDomain{a, b}, cells);
}

GridPtr make_rectangle(double ax, double bx, double ay, double by, int cells_per_axis) {
  return make_grid(RectangleDomain{ax, bx, ay, by}, cells_per_axis);
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (&a == &b) return;
  require(a == b, ErrorCode::GridMismatch,
          std::string(context) + ": fields live on different grids (" + a.describe() + " vs " +
              b.describe() + ")");
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require(grid_ != nullptr, ErrorCode::InvalidArgument, "field without a grid");
  require(values_.size() == grid_->node_count(), ErrorCode::InvalidArgument,
          "field length " + std::to_string(values_.size()) + " does not match node count " +
              std::to_string(grid_->node_count()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      std::ostringstream os;
      os << "non-finite field value at node " << i << " (x=" << grid_->coord(i).x;
      if (grid_->dimension() == 2) os << ", y=" << grid_->coord(i).y;
      os << ")";
      fail(ErrorCode::NonFinite, os.str());
    }
  }
}

ScalarField::ScalarField(GridPtr grid, const Eigen::VectorXd& values)
    : ScalarField(std::move(grid), std::vector<double>(values.data(), values.data() + values.size())) {}

ScalarField ScalarField::zeros(GridPtr grid) { return constant(std::move(grid), 0.0); }

ScalarField ScalarField::constant(GridPtr grid, double value) {
  require(grid != nullptr, ErrorCode::InvalidArgument, "field without a grid");
  const std::size_t n = grid->node_count();
  return ScalarField(std::move(grid), std::vector<double>(n, value));
}

ScalarField ScalarField::from_function(GridPtr grid, const std::function<double(Point)>& rule) {
  require(grid != nullptr, ErrorCode::InvalidArgument, "field without a grid");
  std::vector<double> values(grid->node_count());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = rule(grid->coord(i));
  return ScalarField(std::move(grid), std::move(values));
}

double ScalarField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::norm_inf() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------

ProblemSpec ProblemSpec::make(GridPtr grid, double p, double beta, ScalarField f) {
  require(grid != nullptr, ErrorCode::InvalidArgument, "problem without a grid");
  require(std::isfinite(p) && p > 1.0, ErrorCode::InvalidArgument, "exponent p must exceed 1");
  require(std::isfinite(beta) && beta >= 0.0, ErrorCode::InvalidArgument,
          "Robin coefficient beta must be >= 0");
  require_same_grid(*grid, f.grid(), "ProblemSpec");
  for (std::size_t i = 0; i < f.size(); ++i)
    require(f[i] >= 0.0, ErrorCode::InvalidArgument,
            "source f must be nonnegative (node " + std::to_string(i) + ")");
  return ProblemSpec{std::move(grid), p, beta, std::move(f)};
}

ProblemSpec ProblemSpec::with_beta(double new_beta) const {
  return make(grid, p, new_beta, f);
}

ProblemSpec ProblemSpec::with_source(ScalarField new_f) const {
  return make(grid, p, beta, std::move(new_f));
}

}  // namespace robinlab
