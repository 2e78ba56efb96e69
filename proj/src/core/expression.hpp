// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "mesh.hpp"

namespace ptomo {

/// Arithmetic expression over x1, x2, x3 (aliases x, y, z).
///
/// Grammar: numbers, + - * / ^, unary minus, parentheses, comparisons
/// (< <= > >= yield 1 or 0), functions sin cos tan exp log sqrt abs tanh,
/// min(a,b), max(a,b), if(c,a,b) and the constant pi.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double operator()(const Point& x) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace ptomo
