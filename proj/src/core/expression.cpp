// SPDX-License-Identifier: Apache-2.0
#include "expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "error.hpp"

namespace ptomo {

struct Expression::Node {
  enum class Kind { number, variable, unary_minus, binary, call } kind;
  double value = 0.0;
  int variable = 0;
  char op = 0;  // + - * / ^ < > l(<=) g(>=)
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(const Point& x) const {
    switch (kind) {
      case Kind::number:
        return value;
      case Kind::variable:
        return x[variable];
      case Kind::unary_minus:
        return -args[0]->eval(x);
      case Kind::binary: {
        const double a = args[0]->eval(x), b = args[1]->eval(x);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          case '^': return std::pow(a, b);
          case '<': return a < b ? 1.0 : 0.0;
          case '>': return a > b ? 1.0 : 0.0;
          case 'l': return a <= b ? 1.0 : 0.0;
          case 'g': return a >= b ? 1.0 : 0.0;
        }
        return 0.0;
      }
      case Kind::call: {
        if (name == "if") return args[0]->eval(x) != 0.0 ? args[1]->eval(x) : args[2]->eval(x);
        const double a = args[0]->eval(x);
        if (name == "sin") return std::sin(a);
        if (name == "cos") return std::cos(a);
        if (name == "tan") return std::tan(a);
        if (name == "exp") return std::exp(a);
        if (name == "log") return std::log(a);
        if (name == "sqrt") return std::sqrt(a);
        if (name == "abs") return std::abs(a);
        if (name == "tanh") return std::tanh(a);
        if (name == "min") return std::min(a, args[1]->eval(x));
        if (name == "max") return std::max(a, args[1]->eval(x));
        return 0.0;
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

int arity(const std::string& f) {
  if (f == "min" || f == "max") return 2;
  if (f == "if") return 3;
  if (f == "sin" || f == "cos" || f == "tan" || f == "exp" || f == "log" || f == "sqrt" ||
      f == "abs" || f == "tanh")
    return 1;
  return -1;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr n = comparison();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::format, "expression '" + s_ + "', column " + std::to_string(pos_ + 1) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::binary;
    n->op = op;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr comparison() {
    NodePtr lhs = sum();
    skip();
    if (pos_ < s_.size() && (s_[pos_] == '<' || s_[pos_] == '>')) {
      char op = s_[pos_++];
      if (pos_ < s_.size() && s_[pos_] == '=') {
        ++pos_;
        op = op == '<' ? 'l' : 'g';
      }
      lhs = binary(op, lhs, sum());
    }
    return lhs;
  }
  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (eat('+'))
        lhs = binary('+', lhs, product());
      else if (eat('-'))
        lhs = binary('-', lhs, product());
      else
        return lhs;
    }
  }
  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*'))
        lhs = binary('*', lhs, unary());
      else if (eat('/'))
        lhs = binary('/', lhs, unary());
      else
        return lhs;
    }
  }
  NodePtr unary() {
    if (eat('-')) {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::unary_minus;
      n->args = {unary()};
      return n;
    }
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return binary('^', base, unary());  // right associative
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of expression");
    const char c = s_[pos_];
    if (eat('(')) {
      NodePtr n = comparison();
      if (!eat(')')) error("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) error("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::number;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      auto n = std::make_shared<Expression::Node>();
      if (id == "x1" || id == "x" || id == "x2" || id == "y" || id == "x3" || id == "z") {
        n->kind = Kind::variable;
        n->variable = (id == "x1" || id == "x") ? 0 : (id == "x2" || id == "y") ? 1 : 2;
        return n;
      }
      if (id == "pi") {
        n->kind = Kind::number;
        n->value = std::numbers::pi;
        return n;
      }
      const int k = arity(id);
      if (k < 0) {
        pos_ = start;
        error("unknown name '" + id + "'");
      }
      if (!eat('(')) error("expected '(' after " + id);
      n->kind = Kind::call;
      n->name = id;
      for (int a = 0; a < k; ++a) {
        if (a > 0 && !eat(',')) error(id + " takes " + std::to_string(k) + " arguments");
        n->args.push_back(comparison());
      }
      if (!eat(')')) error("expected ')' after the arguments of " + id);
      return n;
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(e.text_).run();
  return e;
}

double Expression::operator()(const Point& x) const { return root_->eval(x); }

}  // namespace ptomo
