#include "rfa/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <utility>

namespace rfa::expr {

namespace {

constexpr int max_depth = 256;
constexpr std::size_t max_length = 1 << 16;

struct Named {
  std::string_view name;
  Func func;
};
constexpr Named functions[] = {
    {"exp", Func::exp},   {"log", Func::log},   {"sqrt", Func::sqrt}, {"sin", Func::sin},
    {"cos", Func::cos},   {"tan", Func::tan},   {"sinh", Func::sinh}, {"cosh", Func::cosh},
    {"tanh", Func::tanh}, {"coth", Func::coth}, {"abs", Func::abs},
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

using NodePtr = std::unique_ptr<Node>;

NodePtr leaf(Node::Kind k, complex v = {}) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  n->value = v;
  return n;
}

NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
  auto n = leaf(k);
  n->args.push_back(std::move(a));
  n->args.push_back(std::move(b));
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    auto n = sum();
    skip();
    if (pos_ < s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

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

  struct Depth {
    explicit Depth(Parser& p) : p(p) {
      if (++p.depth_ > max_depth) p.fail("expression nested too deeply");
    }
    ~Depth() { --p.depth_; }
    Parser& p;
  };

  NodePtr sum() {
    Depth d(*this);
    auto lhs = product();
    while (true) {
      if (eat('+'))
        lhs = binary(Node::Kind::add, std::move(lhs), product());
      else if (eat('-'))
        lhs = binary(Node::Kind::sub, std::move(lhs), product());
      else
        return lhs;
    }
  }

  NodePtr product() {
    auto lhs = unary();
    while (true) {
      if (eat('*'))
        lhs = binary(Node::Kind::mul, std::move(lhs), unary());
      else if (eat('/'))
        lhs = binary(Node::Kind::div, std::move(lhs), unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    Depth d(*this);
    if (eat('-')) {
      auto n = leaf(Node::Kind::negate);
      n->args.push_back(unary());
      return n;
    }
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (eat('^')) return binary(Node::Kind::pow, std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (digit(c) || (c == '.' && pos_ + 1 < s_.size() && digit(s_[pos_ + 1]))) return number();
    if (ident_start(c)) return identifier();
    if (c == '(') {
      ++pos_;
      auto n = sum();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && digit(s_[pos_])) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && digit(s_[pos_])) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && digit(s_[p])) {
        pos_ = p;
        while (pos_ < s_.size() && digit(s_[pos_])) ++pos_;
      }
    }
    const std::string lit(s_.substr(start, pos_ - start));
    const double v = std::strtod(lit.c_str(), nullptr);
    if (pos_ < s_.size() && ident_start(s_[pos_])) {
      const std::size_t at = pos_;
      const std::string_view suffix = word();
      if (suffix == "i" || suffix == "im") return leaf(Node::Kind::number, complex(0, v));
      fail_at("implicit multiplication is not supported", at);
    }
    return leaf(Node::Kind::number, complex(v, 0));
  }

  std::string_view word() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  NodePtr identifier() {
    const std::size_t at = pos_;
    const std::string_view name = word();
    if (name == "z") return leaf(Node::Kind::variable);
    if (name == "i" || name == "im") return leaf(Node::Kind::number, complex(0, 1));
    if (name == "pi") return leaf(Node::Kind::number, complex(std::numbers::pi, 0));
    for (const auto& f : functions) {
      if (f.name != name) continue;
      if (!eat('(')) fail("expected '(' after function name");
      auto n = leaf(Node::Kind::call);
      n->func = f.func;
      n->args.push_back(sum());
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    fail_at("unknown identifier '" + std::string(name) + "'", at);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

complex ipow(complex b, long long n) {
  const bool invert = n < 0;
  unsigned long long k = invert ? 0ULL - static_cast<unsigned long long>(n) : static_cast<unsigned long long>(n);
  complex acc = 1;
  while (k) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return invert ? 1.0 / acc : acc;
}

complex power(complex b, complex e) {
  if (e.imag() == 0 && std::abs(e.real()) <= 1024 && e.real() == std::trunc(e.real()))
    return ipow(b, static_cast<long long>(e.real()));
  if (b == 0.0) return e.real() > 0 ? complex(0) : complex(std::numeric_limits<double>::infinity(), 0);
  return std::pow(b, e);
}

complex call(Func f, complex x) {
  switch (f) {
    case Func::exp: return std::exp(x);
    case Func::log: return std::log(x);
    case Func::sqrt: return std::sqrt(x);
    case Func::sin: return std::sin(x);
    case Func::cos: return std::cos(x);
    case Func::tan: return std::tan(x);
    case Func::sinh: return std::sinh(x);
    case Func::cosh: return std::cosh(x);
    case Func::tanh: return std::tanh(x);
    case Func::coth: {
      const complex t = std::tanh(x);
      if (t == 0.0) return {std::numeric_limits<double>::infinity(), 0};
      return 1.0 / t;
    }
    case Func::abs: return std::abs(x);
  }
  return {};
}

complex eval(const Node& n, complex z) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::number: return n.value;
    case K::variable: return z;
    case K::negate: return complex(0.0) - eval(*n.args[0], z);  // keeps a zero imaginary part at +0
    case K::add: return eval(*n.args[0], z) + eval(*n.args[1], z);
    case K::sub: return eval(*n.args[0], z) - eval(*n.args[1], z);
    case K::mul: return eval(*n.args[0], z) * eval(*n.args[1], z);
    case K::div: {
      const complex d = eval(*n.args[1], z);
      const complex num = eval(*n.args[0], z);
      if (d == 0.0) return {std::numeric_limits<double>::infinity(), 0};
      return num / d;
    }
    case K::pow: return power(eval(*n.args[0], z), eval(*n.args[1], z));
    case K::call: return call(n.func, eval(*n.args[0], z));
  }
  return {};
}

}  // namespace

Expression parse_expression(std::string_view text) {
  // Long chains of + or * build deep left-leaning trees; cap the size to keep recursion bounded.
  if (text.size() > max_length) throw ParseError("expression too long", max_length);
  Parser p(text);
  std::shared_ptr<const Node> root = p.parse();
  return Expression(std::move(root), std::string(text));
}

complex Expression::operator()(complex z) const { return eval(*root_, z); }

complex eval_expression(const Expression& e, complex z) { return e(z); }

}  // namespace rfa::expr
