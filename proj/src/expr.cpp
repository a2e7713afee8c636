#include "affgeo/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "affgeo/errors.hpp"

namespace affgeo {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

constexpr std::array<std::pair<std::string_view, Function>, 8> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sqrt", Function::Sqrt},
    {"sinh", Function::Sinh},
    {"cosh", Function::Cosh},
}};

NodePtr make_constant(double value) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Constant;
  n->constant = value;
  return n;
}

NodePtr make_unary(NodeKind kind, NodePtr child) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(child);
  return n;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

  NodePtr parse() {
    NodePtr root = sum();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) lhs = make_binary(NodeKind::Add, lhs, product());
      else if (accept('-')) lhs = make_binary(NodeKind::Subtract, lhs, product());
      else return lhs;
    }
  }

  NodePtr product() {
    NodePtr lhs = power();
    for (;;) {
      if (accept('*')) lhs = make_binary(NodeKind::Multiply, lhs, power());
      else if (accept('/')) lhs = make_binary(NodeKind::Divide, lhs, power());
      else return lhs;
    }
  }

  NodePtr power() {
    NodePtr base = unary();
    if (accept('^')) return make_binary(NodeKind::Power, base, power());
    return base;
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(NodeKind::Negate, unary());
    return primary();
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = sum();
      if (!accept(')')) throw ParseError(pos_, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(pos_, "unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits();
      else pos_ = save;
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || end != text_.data() + pos_) throw ParseError(start, "malformed number");
    return make_constant(value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == name) {
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Variable;
        n->variable = static_cast<int>(i);
        return n;
      }
    }
    for (const auto& [fname, f] : kFunctions) {
      if (fname == name) {
        if (!accept('(')) throw ParseError(pos_, "expected '(' after " + std::string(name));
        NodePtr arg = sum();
        if (!accept(')')) throw ParseError(pos_, "expected ')'");
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Call;
        n->function = f;
        n->lhs = std::move(arg);
        return n;
      }
    }
    throw UnknownIdentifier(start, std::string(name));
  }

  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
};

int precedence(NodeKind kind) {
  switch (kind) {
    case NodeKind::Add:
    case NodeKind::Subtract: return 1;
    case NodeKind::Multiply:
    case NodeKind::Divide: return 2;
    case NodeKind::Power: return 3;
    case NodeKind::Negate: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), std::abs(v));
  std::string s(buf.data(), end);
  return v < 0 || std::signbit(v) ? "(-" + s + ")" : s;
}

void render(const ExprNode& n, const std::vector<std::string>& coords, std::string& out) {
  auto child = [&](const ExprNode& c, bool parens) {
    if (parens) out += '(';
    render(c, coords, out);
    if (parens) out += ')';
  };
  const int p = precedence(n.kind);
  switch (n.kind) {
    case NodeKind::Constant: out += format_number(n.constant); return;
    case NodeKind::Variable: out += coords.at(static_cast<std::size_t>(n.variable)); return;
    case NodeKind::Call:
      out += function_name(n.function);
      child(*n.lhs, true);
      return;
    case NodeKind::Negate:
      out += '-';
      child(*n.lhs, precedence(n.lhs->kind) < p);
      return;
    case NodeKind::Power:
      child(*n.lhs, precedence(n.lhs->kind) <= p);
      out += '^';
      child(*n.rhs, precedence(n.rhs->kind) < p);
      return;
    default: {
      const char op = n.kind == NodeKind::Add ? '+'
                      : n.kind == NodeKind::Subtract ? '-'
                      : n.kind == NodeKind::Multiply ? '*'
                                                     : '/';
      child(*n.lhs, precedence(n.lhs->kind) < p);
      out += ' ';
      out += op;
      out += ' ';
      child(*n.rhs, precedence(n.rhs->kind) <= p);
      return;
    }
  }
}

void describe(const ExprNode& n, const std::vector<std::string>& coords, std::string& out) {
  switch (n.kind) {
    case NodeKind::Constant: {
      std::array<char, 64> buf{};
      auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.constant);
      out += "Const " + std::string(buf.data(), end);
      return;
    }
    case NodeKind::Variable: out += "Var " + coords.at(static_cast<std::size_t>(n.variable)); return;
    case NodeKind::Negate: out += "Neg("; describe(*n.lhs, coords, out); out += ')'; return;
    case NodeKind::Call:
      out += std::string("Call ") + function_name(n.function) + "(";
      describe(*n.lhs, coords, out);
      out += ')';
      return;
    default: break;
  }
  static constexpr const char* names[] = {"", "", "", "Add", "Sub", "Mul", "Div", "Pow"};
  out += names[static_cast<int>(n.kind)];
  out += '(';
  describe(*n.lhs, coords, out);
  out += ", ";
  describe(*n.rhs, coords, out);
  out += ')';
}

bool same(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant: return a.constant == b.constant;
    case NodeKind::Variable: return a.variable == b.variable;
    case NodeKind::Negate: return same(*a.lhs, *b.lhs);
    case NodeKind::Call: return a.function == b.function && same(*a.lhs, *b.lhs);
    default: return same(*a.lhs, *b.lhs) && same(*a.rhs, *b.rhs);
  }
}

Jet eval_node(const ExprNode& n, std::span<const Jet> vars, int dim, int order) {
  switch (n.kind) {
    case NodeKind::Constant: return Jet::constant(dim, order, n.constant);
    case NodeKind::Variable: return vars[static_cast<std::size_t>(n.variable)];
    case NodeKind::Negate: return -eval_node(*n.lhs, vars, dim, order);
    case NodeKind::Add: return eval_node(*n.lhs, vars, dim, order) + eval_node(*n.rhs, vars, dim, order);
    case NodeKind::Subtract:
      return eval_node(*n.lhs, vars, dim, order) - eval_node(*n.rhs, vars, dim, order);
    case NodeKind::Multiply:
      return eval_node(*n.lhs, vars, dim, order) * eval_node(*n.rhs, vars, dim, order);
    case NodeKind::Divide:
      return eval_node(*n.lhs, vars, dim, order) / eval_node(*n.rhs, vars, dim, order);
    case NodeKind::Power: {
      const Jet base = eval_node(*n.lhs, vars, dim, order);
      if (n.rhs->kind == NodeKind::Constant) return pow(base, n.rhs->constant);
      return pow(base, eval_node(*n.rhs, vars, dim, order));
    }
    case NodeKind::Call: {
      const Jet arg = eval_node(*n.lhs, vars, dim, order);
      switch (n.function) {
        case Function::Sin: return sin(arg);
        case Function::Cos: return cos(arg);
        case Function::Tan: return tan(arg);
        case Function::Exp: return exp(arg);
        case Function::Log: return log(arg);
        case Function::Sqrt: return sqrt(arg);
        case Function::Sinh: return sinh(arg);
        case Function::Cosh: return cosh(arg);
      }
    }
  }
  fail(ErrorKind::Internal, "corrupt expression node");
}

}  // namespace

const char* function_name(Function f) {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name.data();
  return "?";
}

Expression::Expression(std::shared_ptr<const ExprNode> root, std::vector<std::string> coords)
    : root_(std::move(root)), coords_(std::move(coords)) {}

Expression Expression::constant(double value, std::vector<std::string> coords) {
  return Expression(make_constant(value), std::move(coords));
}

bool Expression::is_zero() const {
  return root_ && root_->kind == NodeKind::Constant && root_->constant == 0.0;
}

std::string Expression::to_string() const {
  std::string out;
  render(*root_, coords_, out);
  return out;
}

std::string Expression::structure() const {
  std::string out;
  describe(*root_, coords_, out);
  return out;
}

bool Expression::structurally_equal(const Expression& other) const {
  return coords_ == other.coords_ && same(*root_, *other.root_);
}

Expression parse(std::string_view text, std::span<const std::string> coords) {
  if (coords.empty()) fail(ErrorKind::Validation, "expression needs at least one coordinate");
  std::set<std::string> seen(coords.begin(), coords.end());
  if (seen.size() != coords.size()) fail(ErrorKind::Validation, "coordinate names must be distinct");
  Parser parser(text, coords);
  NodePtr root = parser.parse();
  return Expression(std::move(root), std::vector<std::string>(coords.begin(), coords.end()));
}

Jet eval_jet(const Expression& e, std::span<const double> point, int order) {
  if (!e.valid()) fail(ErrorKind::Internal, "evaluating an empty expression");
  const int dim = e.dim();
  if (static_cast<int>(point.size()) != dim)
    fail(ErrorKind::DimensionMismatch, "point has " + std::to_string(point.size()) +
                                           " coordinates, expression expects " + std::to_string(dim));
  for (double x : point)
    if (!std::isfinite(x)) fail(ErrorKind::Domain, "non-finite evaluation point");
  std::vector<Jet> vars;
  vars.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) vars.push_back(Jet::variable(dim, order, i, point[i]));
  return eval_node(e.root(), vars, dim, order);
}

double evaluate(const Expression& e, std::span<const double> point) {
  return eval_jet(e, point, 0).value();
}

}  // namespace affgeo
