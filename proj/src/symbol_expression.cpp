#include "fracdrift/symbol_expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "fracdrift/error.hpp"

namespace fracdrift {

struct SymbolExpression::Node {
  enum class Kind { Constant, Axis, Norm, Neg, Add, Sub, Mul, Div, Pow, Abs };
  Kind kind;
  Complex value{};
  int axis = 0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = SymbolExpression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf_constant(Complex v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->value = v;
  return n;
}

NodePtr make(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  NodePtr parse() {
    auto e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Config, "symbol expression '" + std::string(text_) + "': " + what +
                                       " at position " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept("+"))
        lhs = make(Node::Kind::Add, lhs, term());
      else if (accept("-"))
        lhs = make(Node::Kind::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept("*"))
        lhs = make(Node::Kind::Mul, lhs, unary());
      else if (accept("/"))
        lhs = make(Node::Kind::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept("-")) return make(Node::Kind::Neg, unary());
    if (accept("+")) return unary();
    return power();
  }

  NodePtr power() {
    auto base = atom();
    if (accept("^")) return make(Node::Kind::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept("(")) {
      auto e = expr();
      if (!accept(")")) fail("expected ')'");
      return e;
    }
    if (accept("|k|")) return make(Node::Kind::Norm, nullptr);
    if (accept("abs")) {
      if (!accept("(")) fail("expected '(' after abs");
      auto e = expr();
      if (!accept(")")) fail("expected ')'");
      return make(Node::Kind::Abs, e);
    }
    if (accept("pi")) return leaf_constant(Complex(std::numbers::pi, 0.0));
    if (text_[pos_] == 'k' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      const int axis = text_[pos_ + 1] - '0';
      if (axis < 1 || axis > dim_) fail("axis k" + std::to_string(axis) + " outside dimension");
      pos_ += 2;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Axis;
      n->axis = axis - 1;
      return n;
    }
    if (accept("i")) return leaf_constant(Complex(0.0, 1.0));
    fail("unknown token");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    const std::string tok(text_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) fail("malformed number");
      return leaf_constant(Complex(v, 0.0));
    } catch (const std::logic_error&) {
      fail("malformed number");
    }
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

Complex eval(const Node& n, const Wavevector& w) {
  switch (n.kind) {
    case Node::Kind::Constant: return n.value;
    case Node::Kind::Axis: return Complex(w.k[n.axis], 0.0);
    case Node::Kind::Norm: return Complex(w.norm(), 0.0);
    case Node::Kind::Neg: return -eval(*n.lhs, w);
    case Node::Kind::Add: return eval(*n.lhs, w) + eval(*n.rhs, w);
    case Node::Kind::Sub: return eval(*n.lhs, w) - eval(*n.rhs, w);
    case Node::Kind::Mul: return eval(*n.lhs, w) * eval(*n.rhs, w);
    case Node::Kind::Div: return eval(*n.lhs, w) / eval(*n.rhs, w);
    case Node::Kind::Abs: return Complex(std::abs(eval(*n.lhs, w)), 0.0);
    case Node::Kind::Pow: {
      const Complex b = eval(*n.lhs, w);
      const Complex e = eval(*n.rhs, w);
      // Stay in real arithmetic when possible so |k|^a matches std::pow exactly.
      if (b.imag() == 0.0 && e.imag() == 0.0 &&
          (b.real() >= 0.0 || e.real() == std::round(e.real())))
        return Complex(std::pow(b.real(), e.real()), 0.0);
      return std::pow(b, e);
    }
  }
  return {};
}

}  // namespace

SymbolExpression SymbolExpression::parse(const std::string& text, int dim) {
  Parser p(text, dim);
  auto root = p.parse();
  return SymbolExpression(text, std::move(root));
}

Complex SymbolExpression::evaluate(const Wavevector& w) const { return eval(*root_, w); }

Multiplier SymbolExpression::as_multiplier() const {
  auto root = root_;
  return [root](const Wavevector& w) { return eval(*root, w); };
}

}  // namespace fracdrift
