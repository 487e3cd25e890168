#include "robinlab/elliptic.hpp"

#include "robinlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace robinlab {

namespace {

BetaProbe probe(const ProblemSpec& base, double beta, const MonotoneOptions& opts) {
  const SolveReport r = monotone_iterate(base.with_beta(beta), opts);
  return {beta, r.status, r.iterations};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::vector<BetaProbe> verdict_sweep(GridPtr grid, double p, const ScalarField& f,
                                     const std::vector<double>& betas, const MonotoneOptions& opts) {
  const ProblemSpec base = ProblemSpec::make(std::move(grid), p, 1.0, f);
  std::vector<BetaProbe> out;
  out.reserve(betas.size());
  for (double b : betas) out.push_back(probe(base, b, opts));
  return out;
}

void check_verdict_monotone(const std::vector<BetaProbe>& probes) {
  double max_diverged = -std::numeric_limits<double>::infinity();
  double min_converged = std::numeric_limits<double>::infinity();
  for (const auto& pr : probes) {
    if (pr.status == SolveStatus::Diverged) max_diverged = std::max(max_diverged, pr.beta);
    if (pr.status == SolveStatus::Converged) min_converged = std::min(min_converged, pr.beta);
  }
  require(max_diverged < min_converged, ErrorCode::NonMonotoneVerdict,
          "verdict is not monotone in beta: Diverged at beta=" + fmt(max_diverged) +
              " but Converged at beta=" + fmt(min_converged));
}

BetaStarResult find_beta_star(GridPtr grid, double p, const ScalarField& f, double beta_lo,
                              double beta_hi, double tol, const BetaStarOptions& opts) {
  require(std::isfinite(tol) && tol > 0.0, ErrorCode::InvalidArgument,
          "find_beta_star: tol must be positive");
  require(std::isfinite(beta_lo) && std::isfinite(beta_hi) && 0.0 < beta_lo && beta_lo < beta_hi,
          ErrorCode::InvalidBracket, "find_beta_star: bracket must satisfy 0 < beta_lo < beta_hi");
  const ProblemSpec base = ProblemSpec::make(std::move(grid), p, beta_lo, f);

  BetaStarResult result{beta_lo, beta_hi, {}};
  auto& probes = result.probes;
  probes.push_back(probe(base, beta_lo, opts.monotone));
  probes.push_back(probe(base, beta_hi, opts.monotone));
  require(probes[0].status == SolveStatus::Diverged && probes[1].status == SolveStatus::Converged,
          ErrorCode::InvalidBracket,
          std::string("invalid bracket: expected Diverged at beta_lo and Converged at beta_hi, got ") +
              to_string(probes[0].status) + " and " + to_string(probes[1].status));

  double lo = beta_lo;
  double hi = beta_hi;
  if (opts.sweep_points > 2) {
    const int m = opts.sweep_points;
    const double ratio = std::log(beta_hi / beta_lo);
    for (int i = 1; i < m - 1; ++i) {
      const double b = beta_lo * std::exp(ratio * static_cast<double>(i) / (m - 1));
      probes.push_back(probe(base, b, opts.monotone));
    }
    check_verdict_monotone(probes);
    for (const auto& pr : probes) {
      if (pr.status == SolveStatus::Diverged) lo = std::max(lo, pr.beta);
      if (pr.status == SolveStatus::Converged) hi = std::min(hi, pr.beta);
    }
  }

  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    BetaProbe pr = probe(base, mid, opts.monotone);
    // A probe right at the fold may exhaust the iteration cap; nudge it off.
    for (int attempt = 1; pr.status == SolveStatus::MaxIter && attempt <= 4; ++attempt) {
      probes.push_back(pr);
      mid = lo + (hi - lo) * (attempt % 2 ? 0.5 - 0.1 * attempt : 0.5 + 0.1 * attempt);
      pr = probe(base, mid, opts.monotone);
    }
    probes.push_back(pr);
    require(pr.status != SolveStatus::MaxIter, ErrorCode::SolverFailure,
            "inconclusive verdict near beta=" + fmt(mid) + ": iteration cap reached");
    check_verdict_monotone(probes);
    if (pr.status == SolveStatus::Diverged)
      lo = mid;
    else
      hi = mid;
  }
  result.beta_lo = lo;
  result.beta_hi = hi;
  return result;
}

}  // namespace robinlab
