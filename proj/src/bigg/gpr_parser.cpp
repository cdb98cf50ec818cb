#include <cctype>
#include <vector>

#include "rflux/bigg.hpp"
#include "rflux/error.hpp"

namespace rflux {

namespace {

struct Token {
  enum class Kind { kIdent, kAnd, kOr, kOpen, kClose, kEnd } kind;
  std::string text;
  std::size_t pos;
};

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::vector<Token> tokenize(std::string_view rule) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < rule.size()) {
    const char ch = rule[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (ch == '(') {
      tokens.push_back({Token::Kind::kOpen, "(", i++});
    } else if (ch == ')') {
      tokens.push_back({Token::Kind::kClose, ")", i++});
    } else {
      const std::size_t start = i;
      while (i < rule.size() && !std::isspace(static_cast<unsigned char>(rule[i])) &&
             rule[i] != '(' && rule[i] != ')') {
        ++i;
      }
      std::string_view word = rule.substr(start, i - start);
      Token::Kind kind = Token::Kind::kIdent;
      if (iequals(word, "and")) kind = Token::Kind::kAnd;
      if (iequals(word, "or")) kind = Token::Kind::kOr;
      tokens.push_back({kind, std::string(word), start});
    }
  }
  tokens.push_back({Token::Kind::kEnd, "", rule.size()});
  return tokens;
}

// expr := term ('or' term)* ; term := factor ('and' factor)* ; factor := ident | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  GprExpression parse() {
    GprExpression e = expr();
    if (peek().kind != Token::Kind::kEnd) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw GprSyntaxError("GPR syntax error: " + msg, peek().pos);
  }

  GprExpression expr() {
    std::vector<GprExpression> ops;
    ops.push_back(term());
    while (peek().kind == Token::Kind::kOr) {
      next();
      ops.push_back(term());
    }
    return GprExpression::disjunction(std::move(ops));
  }

  GprExpression term() {
    std::vector<GprExpression> ops;
    ops.push_back(factor());
    while (peek().kind == Token::Kind::kAnd) {
      next();
      ops.push_back(factor());
    }
    return GprExpression::conjunction(std::move(ops));
  }

  GprExpression factor() {
    switch (peek().kind) {
      case Token::Kind::kIdent:
        return GprExpression::leaf(next().text);
      case Token::Kind::kOpen: {
        next();
        GprExpression e = expr();
        if (peek().kind != Token::Kind::kClose) fail("expected ')'");
        next();
        return e;
      }
      case Token::Kind::kEnd:
        fail("unexpected end of rule");
      default:
        fail("expected gene id, found '" + peek().text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

GprExpression parse_gpr(std::string_view rule) {
  std::vector<Token> tokens = tokenize(rule);
  if (tokens.size() == 1) return GprExpression::empty();
  return Parser(std::move(tokens)).parse();
}

}  // namespace rflux
