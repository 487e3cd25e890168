#include "robinlab/elliptic.hpp"

#include "robinlab/error.hpp"

#include <cmath>
#include <sstream>

namespace robinlab {

TorsionReport torsion_report(GridPtr grid, double p, double beta) {
  require(grid != nullptr, ErrorCode::InvalidArgument, "torsion_report without a grid");
  require(std::isfinite(p) && p > 1.0, ErrorCode::InvalidArgument, "exponent p must exceed 1");
  require(std::isfinite(beta) && beta > 0.0, ErrorCode::InvalidArgument,
          "torsion_report needs beta > 0");
  const ScalarField one = ScalarField::constant(grid, 1.0);
  ScalarField h = solve_linear(DirichletOperator(grid), one);
  ScalarField phi = solve_linear(RobinOperator(grid, beta), one);

  const double M_h = std::pow(h.max(), p);
  require(M_h > 0.0, ErrorCode::SolverFailure, "Dirichlet torsion has no positive maximum");
  const double base = 1.0 / (p * M_h);
  const double Lambda = std::pow(base, 1.0 / (p - 1.0));
  const double gap = Lambda - std::pow(Lambda, p) * M_h;
  const double F_bound = ((p - 1.0) / p) * Lambda;
  return TorsionReport{p, beta, std::move(h), std::move(phi), M_h, Lambda, gap, F_bound};
}

std::string ConditionF::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (reason) {
    case Reason::Admissible: return "admissible";
    case Reason::ZeroSource: return "violated: f≡0";
    case Reason::BoundExceeded:
      os << "violated: f=" << value << " >= bound " << bound << " at node " << node.value_or(0);
      return os.str();
  }
  return "unknown";
}

ConditionF check_condition_F(const ProblemSpec& spec, const TorsionReport& report) {
  require_same_grid(*spec.grid, report.h.grid(), "check_condition_F");
  require(spec.p == report.p, ErrorCode::InvalidArgument,
          "check_condition_F: torsion report was computed for a different exponent");
  ConditionF out;
  out.bound = report.F_bound;
  bool positive = false;
  for (std::size_t i = 0; i < spec.f.size(); ++i) {
    const double v = spec.f[i];
    if (v > 0.0) positive = true;
    if (!(v < report.F_bound * (1.0 - 1e-12))) {
      out.reason = ConditionF::Reason::BoundExceeded;
      out.node = i;
      out.value = v;
      return out;
    }
  }
  if (!positive) out.reason = ConditionF::Reason::ZeroSource;
  return out;
}

}  // namespace robinlab
