#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rfa/common.hpp"

namespace rfa::expr {

enum class Func { exp, log, sqrt, sin, cos, tan, sinh, cosh, tanh, coth, abs };

struct Node {
  enum class Kind { number, variable, negate, add, sub, mul, div, pow, call };
  Kind kind = Kind::number;
  complex value{};  // number
  Func func = Func::exp;  // call
  std::vector<std::unique_ptr<Node>> args;
};

/// Parsed function of one complex variable z.
class Expression {
 public:
  Expression(std::shared_ptr<const Node> root, std::string text)
      : root_(std::move(root)), text_(std::move(text)) {}

  const Node& root() const { return *root_; }
  const std::string& text() const { return text_; }
  complex operator()(complex z) const;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

/// Syntax error or unknown identifier, with the byte offset where it was detected.
class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : InvalidInput(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Grammar, loosest first: + and -, then * and /, then unary minus, then right-associative ^.
/// Literals may carry an imaginary suffix (5i, 2.5im). Identifiers: z, i, im, pi and the
/// functions exp log sqrt sin cos tan sinh cosh tanh coth abs, which take one argument.
Expression parse_expression(std::string_view text);

complex eval_expression(const Expression& e, complex z);

}  // namespace rfa::expr
