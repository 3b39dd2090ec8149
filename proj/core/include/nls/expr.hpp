#pragma once

#include <memory>
#include <string>

namespace nls {

// Tiny arithmetic language for field and potential presets.
//   numbers, x, y, + - * / ^, unary minus, parentheses,
//   sqrt(), abs(), exp(), log(), sin(), cos()
class Expression {
 public:
  Expression() = default;
  // Throws Error(Parse) with the offending column.
  explicit Expression(const std::string& source);

  double operator()(double x, double y = 0.0) const;
  const std::string& source() const noexcept { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace nls
