#pragma once

/// Expression language over chart coordinates x1..x9: parsing, printing,
/// exact jet evaluation, and structural substitution.
///
/// Grammar (whitespace insignificant):
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?            // right associative
///   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
/// Identifiers are the variables x1..x9 and the function names
/// sin cos tan exp log sqrt tanh atan chi.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "umbilic/jet.hpp"

namespace umbilic {

enum class FuncId { kSin, kCos, kTan, kExp, kLog, kSqrt, kTanh, kAtan, kChi };

const char* func_name(FuncId f);

struct ExprNode;
using NodeRef = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { kConstant, kVariable, kNegate, kBinary, kCall };
  Kind kind = Kind::kConstant;
  double value = 0.0;   // kConstant
  int var_index = 0;    // kVariable, zero-based
  char op = 0;          // kBinary: one of + - * / ^
  FuncId func = FuncId::kSin;
  NodeRef a, b;
};

class Expression {
 public:
  Expression() = default;

  // Parses `text` over variables x1..xn. Throws ParseError with the byte
  // offset of the offending token.
  static Expression parse(std::string_view text, int dim);

  bool empty() const { return !root_; }
  int dim() const { return dim_; }

  // Minimal-parenthesis rendering; parse(str()) evaluates identically.
  std::string str() const;

  // Exact jet evaluation. Throws DomainError when the point is outside the
  // natural domain or any derivative component is non-finite.
  template <class J>
  J eval_jet(std::span<const J> vars) const;

  double eval(std::span<const double> p) const;

  // Replaces variable i by repl[i] (composition at the AST level).
  Expression substitute(std::span<const Expression> repl) const;

  // Builders for programmatic construction.
  static Expression constant(double c, int dim);
  static Expression variable(int index, int dim);
  static Expression call(FuncId f, const Expression& arg);
  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);
  Expression pow(const Expression& e) const;

  const NodeRef& root() const { return root_; }
  Expression(NodeRef r, int dim) : root_(std::move(r)), dim_(dim) {}

 private:
  NodeRef root_;
  int dim_ = 0;
};

extern template Jet0 Expression::eval_jet<Jet0>(std::span<const Jet0>) const;
extern template Jet1 Expression::eval_jet<Jet1>(std::span<const Jet1>) const;
extern template Jet2 Expression::eval_jet<Jet2>(std::span<const Jet2>) const;
extern template Jet3 Expression::eval_jet<Jet3>(std::span<const Jet3>) const;

// Convenience: jets of an expression at a point, `order` <= K.
template <int K>
JetT<K> eval_point_jet(const Expression& e, std::span<const double> p, int order = K) {
  std::vector<JetT<K>> vars(e.dim());
  for (int i = 0; i < e.dim(); ++i) vars[i] = JetT<K>::variable(p[i], i, e.dim(), order);
  return e.eval_jet<JetT<K>>(vars);
}

}  // namespace umbilic
