#include "slowfast/symbolic/parser.hpp"

#include <cctype>

namespace slowfast {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const SymbolResolver& resolve) : text_(text), resolve_(resolve) {}

  Polynomial parse() {
    Polynomial p = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

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

  Polynomial expression() {
    Polynomial acc;
    bool first = true;
    while (true) {
      bool negate = false;
      if (accept('+')) {
      } else if (accept('-')) {
        negate = true;
      } else if (!first) {
        return acc;
      }
      Polynomial t = term();
      acc += negate ? -t : t;
      first = false;
    }
  }

  Polynomial term() {
    Polynomial acc = power();
    while (true) {
      if (accept('*')) {
        acc *= power();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Polynomial d = power();
        if (!d.is_constant() || d.is_zero()) throw ParseError("division by a non-constant or zero", at);
        acc = acc.scaled(1 / d.constant_term());
      } else {
        return acc;
      }
    }
  }

  Polynomial power() {
    Polynomial base = atom();
    if (accept('^')) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Polynomial atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      return Polynomial::variable(resolve_(std::string(text_.substr(start, pos_ - start))));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Polynomial number() {
    const std::size_t start = pos_;
    std::string digits;
    std::size_t decimals = 0;
    bool dot = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits.push_back(c);
        if (dot) ++decimals;
      } else if (c == '.' && !dot) {
        dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) throw ParseError("malformed number", start);
    mpz_class num(digits, 10);
    mpz_class den(1);
    for (std::size_t i = 0; i < decimals; ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return Polynomial(q);
  }

  std::string_view text_;
  const SymbolResolver& resolve_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const SymbolResolver& resolve) {
  return Parser(text, resolve).parse();
}

SymbolResolver strict_resolver(const SymbolTable& table) {
  return [&table](const std::string& name) { return table.require(name); };
}

}  // namespace slowfast
