#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fitz/expression.hpp"
#include "fitz/types.hpp"

namespace fitz {

/// A nonnegative weight sigma: D(T) -> R_+.
struct SigmaSpec {
  struct Constant {
    double c = 0.0;
  };
  struct Table {
    std::vector<std::pair<Vec, double>> entries;  // matched within kMatchTol
  };
  struct Expr {
    Expression expr;  // 1-D
  };

  std::variant<Constant, Table, Expr> rep;
};

inline SigmaSpec sigma_constant(double c) {
  if (!(c >= 0.0)) {
    throw NegativeSigma("constant sigma must be >= 0, got " +
                        std::to_string(c));
  }
  return SigmaSpec{SigmaSpec::Constant{c}};
}

inline SigmaSpec sigma_table(std::vector<std::pair<Vec, double>> entries) {
  for (const auto& [key, value] : entries) {
    if (!(value >= 0.0)) {
      throw NegativeSigma("sigma table values must be >= 0");
    }
  }
  return SigmaSpec{SigmaSpec::Table{std::move(entries)}};
}

/// Parses the expression and spot-checks nonnegativity on a coarse default
/// domain; evaluation still guards every value.
inline SigmaSpec sigma_expression(const std::string& source) {
  Expression expr = parse_expression(source);
  for (int i = 0; i <= 200; ++i) {
    const double x = -10.0 + 0.1 * i;
    double v;
    try {
      v = expr.evaluate(x);
    } catch (const EvalError&) {
      continue;  // domain holes are the caller's concern
    }
    if (v < 0.0) {
      throw NegativeSigma("sigma expression '" + source +
                          "' is negative at x = " + std::to_string(x));
    }
  }
  return SigmaSpec{SigmaSpec::Expr{std::move(expr)}};
}

inline double sigma_value(const SigmaSpec& sigma, const Vec& x) {
  if (const auto* c = std::get_if<SigmaSpec::Constant>(&sigma.rep)) {
    return c->c;
  }
  if (const auto* t = std::get_if<SigmaSpec::Table>(&sigma.rep)) {
    for (const auto& [key, value] : t->entries) {
      if (matches(key, x)) return value;
    }
    std::string repr = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) repr += ", ";
      repr += std::to_string(x[i]);
    }
    repr += ")";
    throw MissingKey("sigma table has no entry for " + repr);
  }
  const auto& e = std::get<SigmaSpec::Expr>(sigma.rep);
  if (x.size() != 1) {
    throw DimensionMismatch("sigma expressions are 1-D");
  }
  const double v = e.expr.evaluate(x[0]);
  if (v < 0.0) {
    throw NegativeSigma("sigma expression '" + e.expr.source() +
                        "' evaluated to " + std::to_string(v));
  }
  return v;
}

}  // namespace fitz
