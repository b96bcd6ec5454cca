#include <cctype>
#include <stdexcept>

#include "cli.hpp"

namespace markoff::cli {

namespace {

class Parser {
 public:
  Parser(const std::string& text, std::uint64_t p, int k) : s_(text), p_(p), k_(k) {}

  PadicInt parse() {
    PadicInt v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("bad D expression \"" + s_ + "\": " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  PadicInt expr() {
    PadicInt v = term();
    for (;;) {
      if (eat('+')) {
        v = v + term();
      } else if (eat('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  PadicInt term() {
    PadicInt v = factor();
    for (;;) {
      if (eat('*')) {
        v = v * factor();
      } else if (eat('/')) {
        v = v * invert(factor());
      } else {
        return v;
      }
    }
  }

  PadicInt factor() {
    skip();
    if (eat('-')) return -factor();
    if (eat('(')) {
      PadicInt v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (s_.compare(i_, 4, "sqrt") == 0) {
      i_ += 4;
      if (!eat('(')) fail("sqrt needs '('");
      PadicInt v = expr();
      if (!eat(')')) fail("missing ')'");
      return sqrt(v);
    }
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail(i_ < s_.size() ? "unexpected '" + std::string(1, s_[i_]) + "'" : "unexpected end");
    if (i_ - start > 18) fail("integer literal too long");
    return PadicInt(p_, k_, std::stoll(s_.substr(start, i_ - start)));
  }

  const std::string& s_;
  std::uint64_t p_;
  int k_;
  std::size_t i_ = 0;
};

}  // namespace

PadicInt parse_d_expression(const std::string& text, std::uint64_t p, int precision) {
  return Parser(text, p, precision).parse();
}

}  // namespace markoff::cli
