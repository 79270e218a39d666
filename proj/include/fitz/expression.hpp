#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fitz/errors.hpp"

namespace fitz {

/// A compiled 1-D real expression in the variable `x`.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := unary ('^' factor)?          -- '^' is right-associative
///   unary  := '-'? atom
///   atom   := number | 'x' | '(' expr ')' | func '(' expr (',' expr)? ')'
///   func   := abs | sqrt | max | min | exp
///
/// Note that the exponent base is the whole unary, so "-x^2" squares -x.
/// Evaluation is deterministic and either returns a finite real or throws
/// EvalError (division by zero, sqrt of a negative, fractional power of a
/// negative base, overflow to non-finite).
class Expression {
 public:
  enum class Op : std::uint8_t {
    push_const,
    push_x,
    negate,
    add,
    sub,
    mul,
    div,
    pow,
    abs,
    sqrt,
    max,
    min,
    exp,
  };

  struct Instr {
    Op op;
    double value = 0.0;  // push_const only
  };

  Expression() = default;
  Expression(std::string source, std::vector<Instr> program)
      : source_(std::move(source)), program_(std::move(program)) {}

  const std::string& source() const { return source_; }
  bool empty() const { return program_.empty(); }

  double operator()(double x) const { return evaluate(x); }

  double evaluate(double x) const {
    double stack[kMaxStack];
    int top = -1;
    for (const Instr& ins : program_) {
      switch (ins.op) {
        case Op::push_const:
          stack[++top] = ins.value;
          break;
        case Op::push_x:
          stack[++top] = x;
          break;
        case Op::negate:
          stack[top] = -stack[top];
          break;
        case Op::add:
          --top;
          stack[top] = stack[top] + stack[top + 1];
          break;
        case Op::sub:
          --top;
          stack[top] = stack[top] - stack[top + 1];
          break;
        case Op::mul:
          --top;
          stack[top] = stack[top] * stack[top + 1];
          break;
        case Op::div:
          --top;
          if (stack[top + 1] == 0.0) {
            throw EvalError("division by zero in '" + source_ + "'");
          }
          stack[top] = stack[top] / stack[top + 1];
          break;
        case Op::pow: {
          --top;
          const double base = stack[top];
          const double expo = stack[top + 1];
          if (base < 0.0 && expo != std::floor(expo)) {
            throw EvalError("fractional power of negative base in '" +
                            source_ + "'");
          }
          stack[top] = std::pow(base, expo);
          break;
        }
        case Op::abs:
          stack[top] = std::abs(stack[top]);
          break;
        case Op::sqrt:
          if (stack[top] < 0.0) {
            throw EvalError("sqrt of negative value in '" + source_ + "'");
          }
          stack[top] = std::sqrt(stack[top]);
          break;
        case Op::max:
          --top;
          stack[top] = std::max(stack[top], stack[top + 1]);
          break;
        case Op::min:
          --top;
          stack[top] = std::min(stack[top], stack[top + 1]);
          break;
        case Op::exp:
          stack[top] = std::exp(stack[top]);
          break;
      }
    }
    const double result = stack[0];
    if (!std::isfinite(result)) {
      throw EvalError("non-finite result in '" + source_ + "'");
    }
    return result;
  }

 private:
  // The grammar has no recursion deeper than nested parens/calls; 64 levels
  // of pending operands is far beyond any sane input.
  static constexpr int kMaxStack = 64;

  std::string source_;
  std::vector<Instr> program_;
};

namespace detail {

class ExpressionParser {
 public:
  explicit ExpressionParser(const std::string& source) : src_(source) {}

  Expression parse() {
    if (src_.empty()) {
      throw SyntaxError(0, "empty expression");
    }
    skip_ws();
    parse_expr();
    skip_ws();
    if (pos_ != src_.size()) {
      throw SyntaxError(pos_, "unexpected trailing input, expected end");
    }
    check_depth_bound();
    return Expression(src_, std::move(program_));
  }

 private:
  using Op = Expression::Op;

  void parse_expr() {
    parse_term();
    for (;;) {
      skip_ws();
      if (consume('+')) {
        parse_term();
        emit(Op::add);
      } else if (consume('-')) {
        parse_term();
        emit(Op::sub);
      } else {
        break;
      }
    }
  }

  void parse_term() {
    parse_factor();
    for (;;) {
      skip_ws();
      if (consume('*')) {
        parse_factor();
        emit(Op::mul);
      } else if (consume('/')) {
        parse_factor();
        emit(Op::div);
      } else {
        break;
      }
    }
  }

  void parse_factor() {
    parse_unary();
    skip_ws();
    if (consume('^')) {
      parse_factor();  // right-associative
      emit(Op::pow);
    }
  }

  void parse_unary() {
    skip_ws();
    if (consume('-')) {
      parse_atom();
      emit(Op::negate);
    } else {
      parse_atom();
    }
  }

  void parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) {
      throw SyntaxError(pos_, "unexpected end, expected number, 'x', '(' or function");
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      parse_number();
      return;
    }
    if (c == '(') {
      ++pos_;
      parse_expr();
      expect(')');
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      parse_identifier();
      return;
    }
    throw SyntaxError(pos_, std::string("unexpected '") + c +
                                "', expected number, 'x', '(' or function");
  }

  void parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '.')) {
      ++pos_;
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
      throw SyntaxError(start, "malformed number literal");
    }
    program_.push_back({Op::push_const, value});
  }

  void parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           std::isalpha(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    const std::string name = src_.substr(start, pos_ - start);
    if (name == "x") {
      emit(Op::push_x);
      return;
    }
    Op op;
    int arity;
    if (name == "abs") {
      op = Op::abs;
      arity = 1;
    } else if (name == "sqrt") {
      op = Op::sqrt;
      arity = 1;
    } else if (name == "exp") {
      op = Op::exp;
      arity = 1;
    } else if (name == "max") {
      op = Op::max;
      arity = 2;
    } else if (name == "min") {
      op = Op::min;
      arity = 2;
    } else {
      throw SyntaxError(start, "unknown identifier '" + name +
                                   "', expected x, abs, sqrt, max, min or exp");
    }
    skip_ws();
    expect('(');
    parse_expr();
    skip_ws();
    if (arity == 2) {
      expect(',');
      parse_expr();
      skip_ws();
    } else if (pos_ < src_.size() && src_[pos_] == ',') {
      throw SyntaxError(pos_, "'" + name + "' takes one argument, expected ')'");
    }
    expect(')');
    emit(op);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != c) {
      throw SyntaxError(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool consume(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  void emit(Op op) { program_.push_back({op, 0.0}); }

  void check_depth_bound() {
    int depth = 0;
    int peak = 0;
    for (const auto& ins : program_) {
      switch (ins.op) {
        case Op::push_const:
        case Op::push_x:
          peak = std::max(peak, ++depth);
          break;
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::div:
        case Op::pow:
        case Op::max:
        case Op::min:
          --depth;
          break;
        default:
          break;
      }
    }
    if (peak >= 64) {
      throw SyntaxError(0, "expression nests too deeply");
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  std::vector<Expression::Instr> program_;
};

}  // namespace detail

/// Deterministic recursive-descent parse; throws SyntaxError with the
/// failing position and the expected token.
inline Expression parse_expression(const std::string& source) {
  return detail::ExpressionParser(source).parse();
}

}  // namespace fitz
