#pragma once

// Closed-form coordinate expressions.
//
// Grammar (loosest to tightest binding):
//   sum     := product (('+' | '-') product)*
//   product := power (('*' | '/') power)*
//   power   := unary ('^' power)?            right-associative
//   unary   := '-' unary | primary
//   primary := number | coordinate | function '(' sum ')' | '(' sum ')'
// Functions: sin cos tan exp log sqrt sinh cosh.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "affgeo/jet.hpp"

namespace affgeo {

enum class NodeKind { Constant, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };
enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  double constant = 0.0;
  int variable = -1;
  Function function = Function::Sin;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

class Expression {
 public:
  Expression() = default;
  Expression(std::shared_ptr<const ExprNode> root, std::vector<std::string> coords);

  static Expression constant(double value, std::vector<std::string> coords);

  const ExprNode& root() const { return *root_; }
  const std::vector<std::string>& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  bool valid() const { return root_ != nullptr; }

  // True when the expression is the literal constant 0.
  bool is_zero() const;

  // Text that parses back to a structurally identical tree.
  std::string to_string() const;
  // Debug form, e.g. "Add(Pow(Var x, Const 2), Const 3)".
  std::string structure() const;
  bool structurally_equal(const Expression& other) const;

 private:
  std::shared_ptr<const ExprNode> root_;
  std::vector<std::string> coords_;
};

Expression parse(std::string_view text, std::span<const std::string> coords);
inline Expression parse(std::string_view text, const std::vector<std::string>& coords) {
  return parse(text, std::span<const std::string>(coords));
}

// Taylor data of `e` at `point` to total order `order` (<= 4).
Jet eval_jet(const Expression& e, std::span<const double> point, int order);
double evaluate(const Expression& e, std::span<const double> point);

const char* function_name(Function f);

}  // namespace affgeo
