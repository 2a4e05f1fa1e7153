#include "spt/exprs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "spt/errors.hpp"

namespace spt {

using namespace ast;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

NodePtr make(auto&& kind) { return std::make_shared<const Node>(Node{std::forward<decltype(kind)>(kind)}); }

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::exp: return "exp";
    case Func::abs: return "abs";
  }
  return "?";
}

const char* var_name(Var v) {
  switch (v) {
    case Var::x: return "x";
    case Var::mu: return "mu";
    case Var::nu: return "nu";
  }
  return "?";
}

char op_char(BinOp op) {
  switch (op) {
    case BinOp::add: return '+';
    case BinOp::sub: return '-';
    case BinOp::mul: return '*';
    case BinOp::div: return '/';
    case BinOp::pow: return '^';
  }
  return '?';
}

void print(const Node& node, std::string& out) {
  std::visit(overloaded{
                 [&](const Number& n) {
                   // Negative literals only arise from Expr::constant; keep them reparseable.
                   if (n.value < 0 || std::signbit(n.value)) {
                     out += "(-";
                     out += format_number(-n.value);
                     out += ')';
                   } else {
                     out += format_number(n.value);
                   }
                 },
                 [&](const Pi&) { out += "pi"; },
                 [&](const Variable& v) { out += var_name(v.var); },
                 [&](const Negate& n) {
                   out += "(-";
                   print(*n.operand, out);
                   out += ')';
                 },
                 [&](const Binary& b) {
                   out += '(';
                   print(*b.lhs, out);
                   out += op_char(b.op);
                   print(*b.rhs, out);
                   out += ')';
                 },
                 [&](const Call& c) {
                   out += func_name(c.func);
                   out += '(';
                   print(*c.arg, out);
                   out += ')';
                 },
                 [&](const Piecewise& p) {
                   out += "piecewise(";
                   for (std::size_t i = 0; i < p.branches.size(); ++i) {
                     const auto& br = p.branches[i];
                     if (i) out += ", ";
                     out += br.cmp == Cmp::le ? "x<=" : "x>";
                     out += format_number(br.threshold);
                     out += ": ";
                     print(*br.value, out);
                   }
                   out += ')';
                 },
             },
             node.kind);
}

std::string print(const Node& node) {
  std::string out;
  print(node, out);
  return out;
}

double eval_node(const Node& node, double x, double mu, double nu) {
  return std::visit(
      overloaded{
          [](const Number& n) { return n.value; },
          [](const Pi&) { return std::numbers::pi; },
          [&](const Variable& v) {
            switch (v.var) {
              case Var::x: return x;
              case Var::mu: return mu;
              case Var::nu: return nu;
            }
            return 0.0;
          },
          [&](const Negate& n) { return -eval_node(*n.operand, x, mu, nu); },
          [&](const Binary& b) {
            const double l = eval_node(*b.lhs, x, mu, nu);
            const double r = eval_node(*b.rhs, x, mu, nu);
            switch (b.op) {
              case BinOp::add: return l + r;
              case BinOp::sub: return l - r;
              case BinOp::mul: return l * r;
              case BinOp::div:
                if (r == 0.0) throw EvalError("division by zero", print(node));
                return l / r;
              case BinOp::pow: {
                // Small integer exponents by repeated multiplication keep
                // polynomial coefficients exact-ish and allow negative bases.
                if (r == std::trunc(r) && std::abs(r) <= 64) {
                  const int e = static_cast<int>(std::abs(r));
                  double acc = 1.0;
                  for (int i = 0; i < e; ++i) acc *= l;
                  if (r < 0) {
                    if (acc == 0.0) throw EvalError("division by zero", print(node));
                    acc = 1.0 / acc;
                  }
                  return acc;
                }
                return std::pow(l, r);
              }
            }
            return 0.0;
          },
          [&](const Call& c) {
            const double a = eval_node(*c.arg, x, mu, nu);
            switch (c.func) {
              case Func::sin: return std::sin(a);
              case Func::cos: return std::cos(a);
              case Func::exp: return std::exp(a);
              case Func::abs: return std::abs(a);
            }
            return 0.0;
          },
          [&](const Piecewise& p) {
            for (const auto& br : p.branches) {
              const bool hit = br.cmp == Cmp::le ? x <= br.threshold : x > br.threshold;
              if (hit) return eval_node(*br.value, x, mu, nu);
            }
            throw EvalError("no piecewise branch matches x = " + format_number(x), print(node));
          },
      },
      node.kind);
}

bool depends(const Node& node, Var var) {
  return std::visit(overloaded{
                        [](const Number&) { return false; },
                        [](const Pi&) { return false; },
                        [&](const Variable& v) { return v.var == var; },
                        [&](const Negate& n) { return depends(*n.operand, var); },
                        [&](const Binary& b) { return depends(*b.lhs, var) || depends(*b.rhs, var); },
                        [&](const Call& c) { return depends(*c.arg, var); },
                        [&](const Piecewise& p) {
                          if (var == Var::x) return true;
                          return std::any_of(p.branches.begin(), p.branches.end(),
                                             [&](const Branch& br) { return depends(*br.value, var); });
                        },
                    },
                    node.kind);
}

void collect_breakpoints(const Node& node, std::vector<double>& out) {
  std::visit(overloaded{
                 [](const Number&) {},
                 [](const Pi&) {},
                 [](const Variable&) {},
                 [&](const Negate& n) { collect_breakpoints(*n.operand, out); },
                 [&](const Binary& b) {
                   collect_breakpoints(*b.lhs, out);
                   collect_breakpoints(*b.rhs, out);
                 },
                 [&](const Call& c) { collect_breakpoints(*c.arg, out); },
                 [&](const Piecewise& p) {
                   for (const auto& br : p.branches) {
                     out.push_back(br.threshold);
                     collect_breakpoints(*br.value, out);
                   }
                 },
             },
             node.kind);
}

bool equal(const Node& a, const Node& b) {
  if (a.kind.index() != b.kind.index()) return false;
  return std::visit(
      overloaded{
          [&](const Number& n) { return n.value == std::get<Number>(b.kind).value; },
          [&](const Pi&) { return true; },
          [&](const Variable& v) { return v.var == std::get<Variable>(b.kind).var; },
          [&](const Negate& n) { return equal(*n.operand, *std::get<Negate>(b.kind).operand); },
          [&](const Binary& x) {
            const auto& y = std::get<Binary>(b.kind);
            return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const Call& x) {
            const auto& y = std::get<Call>(b.kind);
            return x.func == y.func && equal(*x.arg, *y.arg);
          },
          [&](const Piecewise& x) {
            const auto& y = std::get<Piecewise>(b.kind);
            if (x.branches.size() != y.branches.size()) return false;
            for (std::size_t i = 0; i < x.branches.size(); ++i) {
              const auto& p = x.branches[i];
              const auto& q = y.branches[i];
              if (p.cmp != q.cmp || p.threshold != q.threshold || !equal(*p.value, *q.value)) return false;
            }
            return true;
          },
      },
      a.kind);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr run() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    auto root = expr();
    skip_ws();
    if (pos_ < text_.size())
      throw ParseError(std::string("unexpected '") + text_[pos_] + "', expected end of input", pos_);
    return Expr(root);
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      std::string got = pos_ < text_.size() ? std::string("'") + text_[pos_] + "'" : "end of input";
      throw ParseError(std::string("expected '") + c + "' but found " + got, pos_);
    }
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Binary{BinOp::add, lhs, term()});
      else if (accept('-'))
        lhs = make(Binary{BinOp::sub, lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Binary{BinOp::mul, lhs, unary()});
      else if (accept('/'))
        lhs = make(Binary{BinOp::div, lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Negate{unary()});
    return power();
  }

  NodePtr power() {
    auto base = atom();
    if (accept('^')) return make(Binary{BinOp::pow, base, unary()});
    return base;
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string lexeme(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(lexeme.c_str(), &end);
    if (end != lexeme.c_str() + lexeme.size() || lexeme.empty() || lexeme == ".")
      throw ParseError("malformed number '" + lexeme + "'", start);
    return v;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("expected a number, name or '(' but found end of input", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return make(Number{number()});
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      const std::string name = identifier();
      if (name == "pi") return make(Pi{});
      if (name == "x") return make(Variable{Var::x});
      if (name == "mu") return make(Variable{Var::mu});
      if (name == "nu") return make(Variable{Var::nu});
      if (name == "piecewise") return piecewise();
      Func f;
      if (name == "sin")
        f = Func::sin;
      else if (name == "cos")
        f = Func::cos;
      else if (name == "exp")
        f = Func::exp;
      else if (name == "abs")
        f = Func::abs;
      else
        throw UnknownIdentifier(name, start);
      expect('(');
      auto arg = expr();
      expect(')');
      return make(Call{f, arg});
    }
    throw ParseError(std::string("unexpected '") + c + "', expected a number, name or '('", pos_);
  }

  NodePtr piecewise() {
    expect('(');
    Piecewise pw;
    do {
      skip_ws();
      const std::size_t start = pos_;
      if (identifier() != "x") throw ParseError("piecewise condition must start with 'x'", start);
      skip_ws();
      Cmp cmp;
      if (text_.substr(pos_, 2) == "<=") {
        cmp = Cmp::le;
        pos_ += 2;
      } else if (text_.substr(pos_, 1) == ">" && text_.substr(pos_, 2) != ">=") {
        cmp = Cmp::gt;
        pos_ += 1;
      } else {
        throw ParseError("expected '<=' or '>' in piecewise condition", pos_);
      }
      skip_ws();
      const std::size_t thr_pos = pos_;
      auto thr = expr();
      double threshold;
      try {
        if (depends(*thr, Var::x) || depends(*thr, Var::mu) || depends(*thr, Var::nu))
          throw ParseError("piecewise threshold must be constant", thr_pos);
        threshold = eval_node(*thr, 0.0, 0.0, 0.0);
      } catch (const EvalError& e) {
        throw ParseError(std::string("cannot evaluate piecewise threshold: ") + e.what(), thr_pos);
      }
      expect(':');
      pw.branches.push_back(Branch{cmp, threshold, expr()});
    } while (accept(','));
    expect(')');
    return make(std::move(pw));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr() : root_(make(Number{0.0})) {}

Expr::Expr(NodePtr root) : root_(std::move(root)) {}

Expr Expr::constant(double value) { return Expr(make(Number{value})); }

double Expr::eval(double x, double mu, double nu) const { return eval_node(*root_, x, mu, nu); }

bool Expr::depends_on(Var var) const { return depends(*root_, var); }

std::vector<double> Expr::breakpoints() const {
  std::vector<double> bps;
  collect_breakpoints(*root_, bps);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  return bps;
}

std::string Expr::to_string() const { return print(*root_); }

bool operator==(const Expr& a, const Expr& b) { return equal(*a.root_, *b.root_); }

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace spt
