#pragma once

#include <memory>
#include <string>

#include "fracdrift/spectral.hpp"

namespace fracdrift {

/// Arithmetic expression over the wavevector, evaluated in complex
/// arithmetic. Grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := atom ('^' unary)?
///   atom    := number | 'i' | 'pi' | 'k1'..'k3' | '|k|' | 'abs' '(' expr ')' | '(' expr ')'
///
/// '^' is right-associative. Example: "-i*k2/|k|".
class SymbolExpression {
 public:
  /// Throws Config with a position on a syntax error, or when the expression
  /// names an axis beyond `dim`.
  static SymbolExpression parse(const std::string& text, int dim);

  Complex evaluate(const Wavevector& w) const;
  Multiplier as_multiplier() const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  SymbolExpression(std::string text, std::shared_ptr<const Node> root)
      : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace fracdrift
