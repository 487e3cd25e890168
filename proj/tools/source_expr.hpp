#pragma once

// Nodal expressions for sources and initial data: sums of optionally scaled
// terms `const c`, `bump(center, width, height)`, `poly(x: a0 a1 ...; y: b0 ...)`
// and, where a context supplies them, the named fields `minimal`, `second`
// and `datum(eta)`.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace robinlab::cli {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term {
  enum class Kind { Constant, Bump, Poly, Minimal, Second, Datum };
  Kind kind = Kind::Constant;
  double coefficient = 1.0;
  std::vector<double> args;   ///< constant value, bump parameters or datum eta
  std::vector<double> poly_x;
  std::vector<double> poly_y;
};

struct NamedFields {
  const std::vector<double>* minimal = nullptr;
  const std::vector<double>* second = nullptr;
  /// Threshold datum for one eta.
  std::function<std::vector<double>(double eta)> datum;
};

class SourceExpr {
 public:
  /// Throws ExpressionError naming the offending position. Bumps take one
  /// centre coordinate per dimension.
  static SourceExpr parse(const std::string& text, int dimension);

  bool uses(Term::Kind kind) const;
  bool identically_zero() const;
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// Values at the nodes with coordinates (xs[i], ys[i]).
  std::vector<double> evaluate(const std::vector<double>& xs, const std::vector<double>& ys,
                               const NamedFields& named = {}) const;

 private:
  std::vector<Term> terms_;
  int dimension_ = 1;
};

}  // namespace robinlab::cli
