#include "umbilic/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "umbilic/errors.hpp"

namespace umbilic {

const char* func_name(FuncId f) {
  switch (f) {
    case FuncId::kSin: return "sin";
    case FuncId::kCos: return "cos";
    case FuncId::kTan: return "tan";
    case FuncId::kExp: return "exp";
    case FuncId::kLog: return "log";
    case FuncId::kSqrt: return "sqrt";
    case FuncId::kTanh: return "tanh";
    case FuncId::kAtan: return "atan";
    case FuncId::kChi: return "chi";
  }
  return "?";
}

void chi_derivs(double t, int order, double* out) {
  const double u = std::abs(t);
  for (int i = 0; i <= order; ++i) out[i] = 0.0;
  if (u <= 1.0 / 3.0) {
    out[0] = 1.0;
    return;
  }
  if (u >= 2.0 / 3.0) return;
  // interior of the glue region: chi = f(2/3-u) / (f(2/3-u) + f(u-1/3)),
  // f(s) = exp(-1/s); evaluated with 1-d jet arithmetic for exact derivatives
  const double sigma = t > 0 ? 1.0 : -1.0;
  Jet3 T = Jet3::variable(t, 0, 1, 3);
  Jet3 U = sigma * T;
  Jet3 p = U - 1.0 / 3.0;
  Jet3 q = Jet3::constant(2.0 / 3.0) - U;
  Jet3 f1 = jet_exp(Jet3::constant(-1.0) / p);
  Jet3 f2 = jet_exp(Jet3::constant(-1.0) / q);
  Jet3 c = f2 / (f1 + f2);
  out[0] = c.value();
  if (order >= 1) out[1] = c.d1(0);
  if (order >= 2) out[2] = c.d2(0, 0);
  if (order >= 3) out[3] = c.d3(0, 0, 0);
}

void scalar_derivs(int func, double x, int order, double* out) {
  switch (static_cast<FuncId>(func)) {
    case FuncId::kSin: {
      const double s = std::sin(x), c = std::cos(x);
      const double tab[4] = {s, c, -s, -c};
      for (int i = 0; i <= order; ++i) out[i] = tab[i];
      return;
    }
    case FuncId::kCos: {
      const double s = std::sin(x), c = std::cos(x);
      const double tab[4] = {c, -s, -c, s};
      for (int i = 0; i <= order; ++i) out[i] = tab[i];
      return;
    }
    case FuncId::kTan: {
      const double t = std::tan(x), w = 1.0 + t * t;
      const double tab[4] = {t, w, 2.0 * t * w, w * (2.0 + 6.0 * t * t)};
      for (int i = 0; i <= order; ++i) out[i] = tab[i];
      return;
    }
    case FuncId::kExp: {
      const double e = std::exp(x);
      for (int i = 0; i <= order; ++i) out[i] = e;
      return;
    }
    case FuncId::kLog: {
      if (x <= 0.0) throw DomainError("log of nonpositive value");
      const double iv = 1.0 / x;
      const double tab[4] = {std::log(x), iv, -iv * iv, 2.0 * iv * iv * iv};
      for (int i = 0; i <= order; ++i) out[i] = tab[i];
      return;
    }
    case FuncId::kSqrt: {
      if (x <= 0.0) throw DomainError("sqrt of nonpositive value");
      const double s = std::sqrt(x);
      const double tab[4] = {s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)};
      for (int i = 0; i <= order; ++i) out[i] = tab[i];
      return;
    }
    case FuncId::kTanh: {
      const double u = std::tanh(x), w = 1.0 - u * u;
      const double tab[4] = {u, w, -2.0 * u * w, w * (6.0 * u * u - 2.0)};
      for (int i = 0; i <= order; ++i) out[i] = tab[i];
      return;
    }
    case FuncId::kAtan: {
      const double w = 1.0 / (1.0 + x * x);
      const double tab[4] = {std::atan(x), w, -2.0 * x * w * w, (6.0 * x * x - 2.0) * w * w * w};
      for (int i = 0; i <= order; ++i) out[i] = tab[i];
      return;
    }
    case FuncId::kChi:
      chi_derivs(x, order, out);
      return;
  }
  throw NumericError("unknown function id");
}

namespace {

// ---------------------------------------------------------------- tokenizer

struct Token {
  enum class Kind { kNumber, kIdent, kOp, kLParen, kRParen, kEnd } kind = Kind::kEnd;
  double number = 0.0;
  std::string ident;
  char op = 0;
  std::size_t offset = 0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.offset = i;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      double v = 0;
      const char* first = s.data() + i;
      const char* last = s.data() + s.size();
      auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc()) throw ParseError("bad numeric literal", i);
      t.kind = Token::Kind::kNumber;
      t.number = v;
      i += static_cast<std::size_t>(res.ptr - first);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Token::Kind::kIdent;
      t.ident = std::string(s.substr(i, j - i));
      i = j;
      out.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        t.kind = Token::Kind::kOp;
        t.op = c;
        break;
      case '(': t.kind = Token::Kind::kLParen; break;
      case ')': t.kind = Token::Kind::kRParen; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    ++i;
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::kEnd;
  end.offset = s.size();
  out.push_back(std::move(end));
  return out;
}

// ------------------------------------------------------------------ parser

const std::map<std::string, FuncId>& func_table() {
  static const std::map<std::string, FuncId> t = {
      {"sin", FuncId::kSin},   {"cos", FuncId::kCos},   {"tan", FuncId::kTan},
      {"exp", FuncId::kExp},   {"log", FuncId::kLog},   {"sqrt", FuncId::kSqrt},
      {"tanh", FuncId::kTanh}, {"atan", FuncId::kAtan}, {"chi", FuncId::kChi}};
  return t;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, int dim) : toks_(std::move(toks)), dim_(dim) {}

  NodeRef run() {
    NodeRef e = expr();
    if (cur().kind != Token::Kind::kEnd) throw ParseError("unexpected token", cur().offset);
    return e;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }
  std::size_t prev_offset() const { return pos_ > 0 ? toks_[pos_ - 1].offset : 0; }

  [[noreturn]] void fail_here(const std::string& msg) {
    if (cur().kind == Token::Kind::kEnd) throw ParseError("unexpected end of expression", prev_offset());
    throw ParseError(msg, cur().offset);
  }

  NodeRef expr() {
    NodeRef lhs = term();
    while (cur().kind == Token::Kind::kOp && (cur().op == '+' || cur().op == '-')) {
      const char op = advance().op;
      lhs = binary(op, lhs, term());
    }
    return lhs;
  }

  NodeRef term() {
    NodeRef lhs = unary();
    while (cur().kind == Token::Kind::kOp && (cur().op == '*' || cur().op == '/')) {
      const char op = advance().op;
      lhs = binary(op, lhs, unary());
    }
    return lhs;
  }

  NodeRef unary() {
    if (cur().kind == Token::Kind::kOp && cur().op == '-') {
      advance();
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::kNegate;
      n->a = unary();
      return n;
    }
    return power();
  }

  NodeRef power() {
    NodeRef base = atom();
    if (cur().kind == Token::Kind::kOp && cur().op == '^') {
      advance();
      return binary('^', base, unary());
    }
    return base;
  }

  NodeRef atom() {
    switch (cur().kind) {
      case Token::Kind::kNumber: {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::kConstant;
        n->value = advance().number;
        return n;
      }
      case Token::Kind::kLParen: {
        advance();
        NodeRef e = expr();
        if (cur().kind != Token::Kind::kRParen) fail_here("expected ')'");
        advance();
        return e;
      }
      case Token::Kind::kIdent: {
        const Token id = advance();
        const bool called = cur().kind == Token::Kind::kLParen;
        auto fit = func_table().find(id.ident);
        if (fit != func_table().end()) {
          if (!called)
            throw ParseError("arity mismatch: function '" + id.ident + "' requires an argument", id.offset);
          advance();
          NodeRef arg = expr();
          if (cur().kind != Token::Kind::kRParen) fail_here("expected ')'");
          advance();
          auto n = std::make_shared<ExprNode>();
          n->kind = ExprNode::Kind::kCall;
          n->func = fit->second;
          n->a = arg;
          return n;
        }
        if (id.ident.size() == 2 && id.ident[0] == 'x' && id.ident[1] >= '1' && id.ident[1] <= '9') {
          if (called)
            throw ParseError("arity mismatch: variable '" + id.ident + "' is not a function", id.offset);
          const int idx = id.ident[1] - '1';
          if (idx >= dim_)
            throw ParseError("unknown identifier '" + id.ident + "' (dimension " + std::to_string(dim_) + ")",
                             id.offset);
          auto n = std::make_shared<ExprNode>();
          n->kind = ExprNode::Kind::kVariable;
          n->var_index = idx;
          return n;
        }
        throw ParseError("unknown identifier '" + id.ident + "'", id.offset);
      }
      default:
        fail_here("expected a value");
    }
  }

  static NodeRef binary(char op, NodeRef a, NodeRef b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::kBinary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  std::vector<Token> toks_;
  int dim_;
  std::size_t pos_ = 0;
};

// ----------------------------------------------------------------- printer

// precedence: additive 1, multiplicative 2, unary minus 3, power 4, atom 5
int node_prec(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::kConstant: return n.value < 0 ? 3 : 5;
    case ExprNode::Kind::kVariable: return 5;
    case ExprNode::Kind::kNegate: return 3;
    case ExprNode::Kind::kCall: return 5;
    case ExprNode::Kind::kBinary:
      switch (n.op) {
        case '+': case '-': return 1;
        case '*': case '/': return 2;
        default: return 4;
      }
  }
  return 5;
}

void print_node(const ExprNode& n, int min_prec, std::string& out) {
  const int prec = node_prec(n);
  const bool wrap = prec < min_prec;
  if (wrap) out += '(';
  switch (n.kind) {
    case ExprNode::Kind::kConstant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      break;
    }
    case ExprNode::Kind::kVariable:
      out += 'x';
      out += static_cast<char>('1' + n.var_index);
      break;
    case ExprNode::Kind::kNegate:
      out += '-';
      print_node(*n.a, 3, out);
      break;
    case ExprNode::Kind::kCall:
      out += func_name(n.func);
      out += '(';
      print_node(*n.a, 0, out);
      out += ')';
      break;
    case ExprNode::Kind::kBinary: {
      int lp = prec, rp = prec + 1;
      if (n.op == '^') lp = 5, rp = 4;
      print_node(*n.a, lp, out);
      out += n.op;
      print_node(*n.b, rp, out);
      break;
    }
  }
  if (wrap) out += ')';
}

// --------------------------------------------------------------- evaluator

double powi(double x, long m) {
  if (m == 0) return 1.0;
  if (m < 0) {
    if (x == 0.0) throw DomainError("zero raised to a negative power");
    return 1.0 / powi(x, -m);
  }
  double r = 1.0, b = x;
  for (long e = m; e > 0; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

template <class J, int K>
J pow_jet(const J& base, double expo) {
  std::array<double, K + 1> fd{};
  const double x = base.value();
  const double ri = std::nearbyint(expo);
  if (std::abs(expo - ri) < 1e-12 && std::abs(ri) <= 64) {
    const long m = static_cast<long>(ri);
    double coef = 1.0;
    for (int k = 0; k <= K; ++k) {
      if (coef == 0.0) {
        fd[k] = 0.0;
      } else {
        fd[k] = coef * powi(x, m - k);
        coef *= static_cast<double>(m - k);
      }
    }
  } else {
    if (x <= 0.0) throw DomainError("nonpositive base with non-integer exponent");
    double coef = 1.0;
    for (int k = 0; k <= K; ++k) {
      fd[k] = coef * std::pow(x, expo - k);
      coef *= expo - k;
    }
  }
  return base.compose(fd);
}

template <class J, int K>
J eval_node(const ExprNode& n, std::span<const J> vars) {
  switch (n.kind) {
    case ExprNode::Kind::kConstant:
      return J::constant(n.value);
    case ExprNode::Kind::kVariable:
      return vars[n.var_index];
    case ExprNode::Kind::kNegate:
      return -eval_node<J, K>(*n.a, vars);
    case ExprNode::Kind::kCall: {
      J a = eval_node<J, K>(*n.a, vars);
      std::array<double, 4> fd{};
      scalar_derivs(static_cast<int>(n.func), a.value(), K, fd.data());
      std::array<double, K + 1> fk{};
      for (int i = 0; i <= K; ++i) fk[i] = fd[i];
      return a.compose(fk);
    }
    case ExprNode::Kind::kBinary: {
      if (n.op == '^') {
        J base = eval_node<J, K>(*n.a, vars);
        if (n.b->kind == ExprNode::Kind::kConstant) return pow_jet<J, K>(base, n.b->value);
        if (n.b->kind == ExprNode::Kind::kNegate && n.b->a->kind == ExprNode::Kind::kConstant)
          return pow_jet<J, K>(base, -n.b->a->value);
        J e = eval_node<J, K>(*n.b, vars);
        return jet_exp(e * jet_log(base));
      }
      J a = eval_node<J, K>(*n.a, vars);
      J b = eval_node<J, K>(*n.b, vars);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
      }
      throw NumericError("bad operator");
    }
  }
  throw NumericError("bad node");
}

double eval_node_value(const ExprNode& n, std::span<const double> p) {
  switch (n.kind) {
    case ExprNode::Kind::kConstant:
      return n.value;
    case ExprNode::Kind::kVariable:
      return p[n.var_index];
    case ExprNode::Kind::kNegate:
      return -eval_node_value(*n.a, p);
    case ExprNode::Kind::kCall: {
      double out[4];
      scalar_derivs(static_cast<int>(n.func), eval_node_value(*n.a, p), 0, out);
      return out[0];
    }
    case ExprNode::Kind::kBinary: {
      if (n.op == '^') {
        const double a = eval_node_value(*n.a, p);
        if (n.b->kind == ExprNode::Kind::kConstant) {
          const double e = n.b->value;
          const double ri = std::nearbyint(e);
          if (std::abs(e - ri) < 1e-12 && std::abs(ri) <= 64) return powi(a, static_cast<long>(ri));
          if (a <= 0.0) throw DomainError("nonpositive base with non-integer exponent");
          return std::pow(a, e);
        }
        if (a <= 0.0) throw DomainError("nonpositive base with expression exponent");
        return std::pow(a, eval_node_value(*n.b, p));
      }
      const double a = eval_node_value(*n.a, p);
      const double b = eval_node_value(*n.b, p);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
          if (b == 0.0) throw DomainError("division by zero");
          return a / b;
      }
      throw NumericError("bad operator");
    }
  }
  throw NumericError("bad node");
}

NodeRef substitute_node(const NodeRef& n, std::span<const Expression> repl) {
  switch (n->kind) {
    case ExprNode::Kind::kConstant:
      return n;
    case ExprNode::Kind::kVariable:
      return repl[n->var_index].root();
    default: {
      auto m = std::make_shared<ExprNode>(*n);
      if (n->a) m->a = substitute_node(n->a, repl);
      if (n->b) m->b = substitute_node(n->b, repl);
      return m;
    }
  }
}

}  // namespace

Expression Expression::parse(std::string_view text, int dim) {
  if (text.empty()) throw ParseError("empty expression", 0);
  if (dim < 0 || dim > kMaxDim) throw ValidationError("dimension out of range");
  Parser p(tokenize(text), dim);
  return Expression(p.run(), dim);
}

std::string Expression::str() const {
  std::string out;
  if (root_) print_node(*root_, 0, out);
  return out;
}

template <class J>
J Expression::eval_jet(std::span<const J> vars) const {
  constexpr int K =
      std::is_same_v<J, Jet0> ? 0 : (std::is_same_v<J, Jet1> ? 1 : (std::is_same_v<J, Jet2> ? 2 : 3));
  J r = eval_node<J, K>(*root_, vars);
  if (!r.finite()) throw DomainError("non-finite value in evaluation");
  return r;
}

template Jet0 Expression::eval_jet<Jet0>(std::span<const Jet0>) const;
template Jet1 Expression::eval_jet<Jet1>(std::span<const Jet1>) const;
template Jet2 Expression::eval_jet<Jet2>(std::span<const Jet2>) const;
template Jet3 Expression::eval_jet<Jet3>(std::span<const Jet3>) const;

double Expression::eval(std::span<const double> p) const {
  const double v = eval_node_value(*root_, p);
  if (!std::isfinite(v)) throw DomainError("non-finite value in evaluation");
  return v;
}

Expression Expression::substitute(std::span<const Expression> repl) const {
  if (static_cast<int>(repl.size()) != dim_) throw ValidationError("substitute: wrong replacement count");
  const int nd = repl.empty() ? 0 : repl[0].dim();
  return Expression(substitute_node(root_, repl), nd);
}

Expression Expression::constant(double c, int dim) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::kConstant;
  n->value = c;
  return Expression(n, dim);
}

Expression Expression::variable(int index, int dim) {
  if (index < 0 || index >= dim) throw ValidationError("variable index out of range");
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::kVariable;
  n->var_index = index;
  return Expression(n, dim);
}

Expression Expression::call(FuncId f, const Expression& arg) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::kCall;
  n->func = f;
  n->a = arg.root();
  return Expression(n, arg.dim());
}

namespace {
Expression make_binary(char op, const Expression& a, const Expression& b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::kBinary;
  n->op = op;
  n->a = a.root();
  n->b = b.root();
  return Expression(n, a.dim() >= b.dim() ? a.dim() : b.dim());
}
}  // namespace

Expression operator+(const Expression& a, const Expression& b) { return make_binary('+', a, b); }
Expression operator-(const Expression& a, const Expression& b) { return make_binary('-', a, b); }
Expression operator*(const Expression& a, const Expression& b) { return make_binary('*', a, b); }
Expression operator/(const Expression& a, const Expression& b) { return make_binary('/', a, b); }

Expression operator-(const Expression& a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::kNegate;
  n->a = a.root();
  return Expression(n, a.dim());
}

Expression Expression::pow(const Expression& e) const { return make_binary('^', *this, e); }

}  // namespace umbilic
