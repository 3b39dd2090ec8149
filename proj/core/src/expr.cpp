#include "nls/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "nls/errors.hpp"

namespace nls {

struct Expression::Node {
  enum class Op { Number, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Call } op;
  double value = 0.0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, std::vector<NodePtr> kids = {}, double value = 0.0, std::string fn = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->kids = std::move(kids);
  n->value = value;
  n->fn = std::move(fn);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Parse, "expression '" + s_ + "': " + msg + " at column " +
                                      std::to_string(pos_ + 1));
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

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = make(Op::Add, {lhs, term()});
      else if (eat('-')) lhs = make(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) lhs = make(Op::Mul, {lhs, unary()});
      else if (eat('/')) lhs = make(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::Neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }

  // right associative; -x^2 parses as -(x^2)
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Op::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make(Op::Number, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x") return make(Op::VarX);
      if (name == "y") return make(Op::VarY);
      if (name == "pi") return make(Op::Number, {}, M_PI);
      if (name == "sqrt" || name == "abs" || name == "exp" || name == "log" || name == "sin" ||
          name == "cos") {
        if (!eat('(')) fail("expected '(' after " + name);
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make(Op::Call, {arg}, 0.0, name);
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, double x, double y) {
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::VarX: return x;
    case Op::VarY: return y;
    case Op::Neg: return -eval(*n.kids[0], x, y);
    case Op::Add: return eval(*n.kids[0], x, y) + eval(*n.kids[1], x, y);
    case Op::Sub: return eval(*n.kids[0], x, y) - eval(*n.kids[1], x, y);
    case Op::Mul: return eval(*n.kids[0], x, y) * eval(*n.kids[1], x, y);
    case Op::Div: return eval(*n.kids[0], x, y) / eval(*n.kids[1], x, y);
    case Op::Pow: return std::pow(eval(*n.kids[0], x, y), eval(*n.kids[1], x, y));
    case Op::Call: {
      const double a = eval(*n.kids[0], x, y);
      if (n.fn == "sqrt") return std::sqrt(a);
      if (n.fn == "abs") return std::abs(a);
      if (n.fn == "exp") return std::exp(a);
      if (n.fn == "log") return std::log(a);
      if (n.fn == "sin") return std::sin(a);
      return std::cos(a);
    }
  }
  return 0.0;
}

}  // namespace

Expression::Expression(const std::string& source) : source_(source) {
  Parser p(source_);
  root_ = p.parse();
}

double Expression::operator()(double x, double y) const {
  if (!root_) throw Error(ErrorKind::InvalidInput, "empty expression");
  return eval(*root_, x, y);
}

}  // namespace nls
