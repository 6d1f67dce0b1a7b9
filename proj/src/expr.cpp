#include "fockbench/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <optional>

namespace fockbench {

namespace {

// Value with Wirtinger derivatives.
struct Dual {
  cplx v, d, e;
};

Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d, a.e + b.e}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d, a.e - b.e}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d, a.e * b.v + a.v * b.e}; }
Dual operator/(Dual a, Dual b) {
  const cplx q = b.v * b.v;
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / q, (a.e * b.v - a.v * b.e) / q};
}
Dual conj(Dual a) { return {std::conj(a.v), std::conj(a.e), std::conj(a.d)}; }
// Holomorphic outer function g with derivative gp evaluated at a.v.
Dual chain(Dual a, cplx g, cplx gp) { return {g, gp * a.d, gp * a.e}; }

// Conservative range facts used to infer the bounded flag.
struct Range {
  std::optional<double> bound;
  bool real = false;
  bool imag = false;
};

struct Node {
  enum Kind { num, var, varbar, add, sub, mul, div, pow, neg, func } kind;
  cplx value = 0.0;
  std::string name;
  std::unique_ptr<Node> a, b;
};

using NodePtr = std::unique_ptr<Node>;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw InvalidInput("expression '" + s_ + "': " + msg + " at position " + std::to_string(pos_));
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
  static NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_unique<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }
  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+')) n = make(Node::add, std::move(n), term());
      else if (eat('-')) n = make(Node::sub, std::move(n), term());
      else return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) n = make(Node::mul, std::move(n), unary());
      else if (eat('/')) n = make(Node::div, std::move(n), unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Node::neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Node::pow, std::move(base), unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      auto n = make(Node::num);
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "z") return make(Node::var);
      if (id == "zbar") return make(Node::varbar);
      if (id == "i") {
        auto n = make(Node::num);
        n->value = cplx(0, 1);
        return n;
      }
      if (id == "pi") {
        auto n = make(Node::num);
        n->value = kPi;
        return n;
      }
      static const char* funcs[] = {"exp", "sin", "cos", "sqrt", "conj", "re", "im", "abs", "abs2"};
      for (const char* f : funcs)
        if (id == f) {
          if (!eat('(')) fail("expected '(' after " + id);
          auto n = make(Node::func, expr());
          n->name = id;
          if (!eat(')')) fail("expected ')'");
          return n;
        }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

Dual eval(const Node& n, cplx z) {
  switch (n.kind) {
    case Node::num: return {n.value, 0.0, 0.0};
    case Node::var: return {z, 1.0, 0.0};
    case Node::varbar: return {std::conj(z), 0.0, 1.0};
    case Node::add: return eval(*n.a, z) + eval(*n.b, z);
    case Node::sub: return eval(*n.a, z) - eval(*n.b, z);
    case Node::mul: return eval(*n.a, z) * eval(*n.b, z);
    case Node::div: return eval(*n.a, z) / eval(*n.b, z);
    case Node::neg: {
      Dual a = eval(*n.a, z);
      return {-a.v, -a.d, -a.e};
    }
    case Node::pow: {
      Dual a = eval(*n.a, z), b = eval(*n.b, z);
      if (b.d == 0.0 && b.e == 0.0) {
        const cplx p = b.v;
        if (p.imag() == 0.0 && p.real() == std::round(p.real()) && std::abs(p.real()) < 64) {
          const int k = static_cast<int>(p.real());
          if (k == 0) return {1.0, 0.0, 0.0};
          const cplx g = std::pow(a.v, k);
          return chain(a, g, static_cast<double>(k) * std::pow(a.v, k - 1));
        }
        const cplx g = std::pow(a.v, p);
        return chain(a, g, p * g / a.v);
      }
      // a^b = exp(b log a)
      const cplx la = std::log(a.v);
      Dual lg{la, a.d / a.v, a.e / a.v};
      Dual t = b * lg;
      const cplx g = std::exp(t.v);
      return chain(t, g, g);
    }
    case Node::func: {
      Dual a = eval(*n.a, z);
      const std::string& f = n.name;
      if (f == "exp") {
        const cplx g = std::exp(a.v);
        return chain(a, g, g);
      }
      if (f == "sin") return chain(a, std::sin(a.v), std::cos(a.v));
      if (f == "cos") return chain(a, std::cos(a.v), -std::sin(a.v));
      if (f == "sqrt") {
        const cplx g = std::sqrt(a.v);
        return chain(a, g, 0.5 / g);
      }
      if (f == "conj") return conj(a);
      if (f == "re") {
        Dual c = conj(a);
        return {a.v.real(), 0.5 * (a.d + c.d), 0.5 * (a.e + c.e)};
      }
      if (f == "im") {
        Dual c = conj(a);
        const cplx k = cplx(0, -0.5);
        return {a.v.imag(), k * (a.d - c.d), k * (a.e - c.e)};
      }
      if (f == "abs2") return a * conj(a);
      if (f == "abs") {
        Dual q = a * conj(a);
        const double m = std::sqrt(q.v.real());
        const double s = m > 0.0 ? 0.5 / m : 0.0;
        return {m, s * q.d, s * q.e};
      }
      break;
    }
  }
  throw InvalidInput("expression: internal evaluation error");
}

Range range(const Node& n) {
  Range r;
  switch (n.kind) {
    case Node::num:
      r.bound = std::abs(n.value);
      r.real = n.value.imag() == 0.0;
      r.imag = n.value.real() == 0.0;
      return r;
    case Node::var:
    case Node::varbar: return r;
    case Node::neg: return range(*n.a);
    case Node::add:
    case Node::sub: {
      Range a = range(*n.a), b = range(*n.b);
      if (a.bound && b.bound) r.bound = *a.bound + *b.bound;
      r.real = a.real && b.real;
      r.imag = a.imag && b.imag;
      return r;
    }
    case Node::mul: {
      Range a = range(*n.a), b = range(*n.b);
      if (a.bound && b.bound) r.bound = *a.bound * *b.bound;
      r.real = (a.real && b.real) || (a.imag && b.imag);
      r.imag = (a.real && b.imag) || (a.imag && b.real);
      return r;
    }
    case Node::div: {
      Range a = range(*n.a);
      if (n.b->kind == Node::num && n.b->value != 0.0 && a.bound) r.bound = *a.bound / std::abs(n.b->value);
      return r;
    }
    case Node::pow: {
      Range a = range(*n.a);
      if (n.b->kind == Node::num && n.b->value.imag() == 0.0 && n.b->value.real() >= 0.0 && a.bound)
        r.bound = std::pow(*a.bound, n.b->value.real());
      return r;
    }
    case Node::func: {
      Range a = range(*n.a);
      const std::string& f = n.name;
      if (f == "sin" || f == "cos") {
        if (a.real) r.bound = 1.0, r.real = true;
        else if (a.bound) r.bound = std::cosh(*a.bound);
      } else if (f == "exp") {
        if (a.imag) r.bound = 1.0;
        else if (a.bound) r.bound = std::exp(*a.bound);
      } else if (f == "conj") {
        r = a;
      } else if (f == "re" || f == "im") {
        r.bound = a.bound;
        r.real = true;
      } else if (f == "abs") {
        r.bound = a.bound;
        r.real = true;
      } else if (f == "abs2") {
        if (a.bound) r.bound = *a.bound * *a.bound;
        r.real = true;
      } else if (f == "sqrt") {
        if (a.bound) r.bound = std::sqrt(*a.bound);
      }
      return r;
    }
  }
  return r;
}

bool has_varbar(const Node& n) {
  if (n.kind == Node::varbar) return true;
  if (n.kind == Node::func && n.name != "exp" && n.name != "sin" && n.name != "cos" && n.name != "sqrt") return true;
  return (n.a && has_varbar(*n.a)) || (n.b && has_varbar(*n.b));
}

}  // namespace

Symbol parse_symbol(const std::string& text) {
  std::shared_ptr<Node> root(Parser(text).parse().release());
  Symbol s;
  s.id = text;
  s.f = [root](cplx z) { return eval(*root, z).v; };
  s.d = [root](cplx z) { return eval(*root, z).d; };
  s.dbar = [root](cplx z) { return eval(*root, z).e; };
  Range r = range(*root);
  if (r.bound) {
    s.bounded = true;
    s.sup_bound = *r.bound;
  }
  s.holomorphic = !has_varbar(*root);
  return s;
}

Symbol symbol_from_spec(const std::string& spec) {
  if (is_builtin(spec)) return builtin(spec);
  return parse_symbol(spec);
}

}  // namespace fockbench
