#include "source_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace robinlab::cli {

namespace {

class Parser {
 public:
  Parser(const std::string& text, int dimension) : s_(text), dim_(dimension) {}

  std::vector<Term> parse() {
    std::vector<Term> terms;
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    terms.push_back(term());
    while (true) {
      skip();
      if (pos_ == s_.size()) break;
      if (s_[pos_] == '+') {
        ++pos_;
        terms.push_back(term());
      } else if (s_[pos_] == '-') {
        ++pos_;
        Term t = term();
        t.coefficient = -t.coefficient;
        terms.push_back(t);
      } else {
        fail("expected '+' or end of expression");
      }
    }
    return terms;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError(what + " at column " + std::to_string(pos_ + 1) + " of '" + s_ + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek_number() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+';
  }

  double number() {
    skip();
    double v = 0.0;
    const char* begin = s_.data() + pos_;
    // from_chars rejects a leading '+'.
    if (pos_ < s_.size() && s_[pos_] == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  std::string word() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::vector<double> arguments() {
    expect('(');
    std::vector<double> args{number()};
    skip();
    while (pos_ < s_.size() && s_[pos_] == ',') {
      ++pos_;
      args.push_back(number());
      skip();
    }
    expect(')');
    return args;
  }

  std::vector<double> coefficients() {
    std::vector<double> c;
    while (peek_number()) c.push_back(number());
    if (c.empty()) fail("polynomial axis needs at least one coefficient");
    return c;
  }

  Term term() {
    Term t;
    if (peek_number()) {
      const double c = number();
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        t.coefficient = c;
      } else {
        t.args = {c};
        return t;
      }
    }
    const std::size_t at = pos_;
    const std::string name = word();
    if (name == "const") {
      t.args = {number()};
    } else if (name == "zero") {
      t.args = {0.0};
    } else if (name == "bump") {
      t.kind = Term::Kind::Bump;
      t.args = arguments();
      if (t.args.size() != static_cast<std::size_t>(dim_) + 2)
        fail("bump takes " + std::string(dim_ == 1 ? "(center, width, height)" : "(cx, cy, width, height)"));
      if (!(t.args[dim_] > 0.0)) fail("bump width must be positive");
    } else if (name == "poly") {
      t.kind = Term::Kind::Poly;
      expect('(');
      while (true) {
        const std::string axis = word();
        expect(':');
        if (axis == "x" && t.poly_x.empty()) {
          t.poly_x = coefficients();
        } else if (axis == "y" && t.poly_y.empty() && dim_ == 2) {
          t.poly_y = coefficients();
        } else {
          fail("unexpected polynomial axis '" + axis + "'");
        }
        skip();
        if (pos_ < s_.size() && s_[pos_] == ';') {
          ++pos_;
          continue;
        }
        break;
      }
      expect(')');
    } else if (name == "minimal") {
      t.kind = Term::Kind::Minimal;
    } else if (name == "second") {
      t.kind = Term::Kind::Second;
    } else if (name == "datum") {
      t.kind = Term::Kind::Datum;
      t.args = arguments();
      if (t.args.size() != 1) fail("datum takes one argument");
    } else {
      pos_ = at;
      fail(name.empty() ? "expected a term" : "unknown term '" + name + "'");
    }
    return t;
  }

  const std::string& s_;
  int dim_;
  std::size_t pos_ = 0;
};

double horner(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
  return s;
}

double bump_value(const Term& t, double x, double y, int dim) {
  const double dx = x - t.args[0];
  const double dy = dim == 2 ? y - t.args[1] : 0.0;
  const double w = t.args[dim];
  const double r2 = (dx * dx + dy * dy) / (w * w);
  if (r2 >= 1.0) return 0.0;
  return t.args[dim + 1] * std::exp(1.0 - 1.0 / (1.0 - r2));
}

}  // namespace

SourceExpr SourceExpr::parse(const std::string& text, int dimension) {
  SourceExpr e;
  e.dimension_ = dimension;
  e.terms_ = Parser(text, dimension).parse();
  return e;
}

bool SourceExpr::uses(Term::Kind kind) const {
  for (const auto& t : terms_)
    if (t.kind == kind) return true;
  return false;
}

bool SourceExpr::identically_zero() const {
  for (const auto& t : terms_)
    if (t.kind != Term::Kind::Constant || (t.coefficient * t.args[0]) != 0.0) return false;
  return true;
}

std::vector<double> SourceExpr::evaluate(const std::vector<double>& xs, const std::vector<double>& ys,
                                         const NamedFields& named) const {
  std::vector<double> out(xs.size(), 0.0);
  auto add_field = [&](const std::vector<double>* field, double c, const char* name) {
    if (!field) throw ExpressionError(std::string("'") + name + "' is not available here");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * (*field)[i];
  };
  for (const auto& t : terms_) {
    switch (t.kind) {
      case Term::Kind::Constant:
        for (auto& v : out) v += t.coefficient * t.args[0];
        break;
      case Term::Kind::Bump:
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.coefficient * bump_value(t, xs[i], ys[i], dimension_);
        break;
      case Term::Kind::Poly:
        for (std::size_t i = 0; i < out.size(); ++i) {
          double v = horner(t.poly_x, xs[i]);
          if (!t.poly_y.empty()) v *= horner(t.poly_y, ys[i]);
          out[i] += t.coefficient * v;
        }
        break;
      case Term::Kind::Minimal: add_field(named.minimal, t.coefficient, "minimal"); break;
      case Term::Kind::Second: add_field(named.second, t.coefficient, "second"); break;
      case Term::Kind::Datum: {
        if (!named.datum) throw ExpressionError("'datum' is not available here");
        const auto d = named.datum(t.args[0]);
        add_field(&d, t.coefficient, "datum");
        break;
      }
    }
  }
  return out;
}

}  // namespace robinlab::cli
