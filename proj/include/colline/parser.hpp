#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "colline/error.hpp"
#include "colline/expr.hpp"
#include "colline/linalg.hpp"

namespace colline {

/// Syntax or static-semantic error in map text, with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string message, std::vector<std::string> expected = {})
      : Error(format(line, column, message, expected)),
        line_(line),
        column_(column),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& message,
                            const std::vector<std::string>& expected) {
    std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out += ", ";
        out += expected[i];
      }
      out += ")";
    }
    return out;
  }

  std::size_t line_;
  std::size_t column_;
  std::string message_;
  std::vector<std::string> expected_;
};

namespace detail {

enum class Tok {
  end, ident, integer, rational, var, out, kw_map, kw_if, kw_then, kw_else,
  colon, arrow, lbrace, rbrace, semicolon, equals, plus, minus, star, slash, le, lparen, rparen,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blanks();
      Token t{Tok::end, "", line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        advance_while_digit();
        t.kind = Tok::integer;
        // INT/INT with no blanks is a single rational literal
        if (pos_ + 1 < src_.size() && src_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
          advance();
          advance_while_digit();
          t.kind = Tok::rational;
        }
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          advance();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = classify_word(t.text);
      } else {
        t.text = std::string(1, c);
        advance();
        switch (c) {
          case ':': t.kind = Tok::colon; break;
          case '{': t.kind = Tok::lbrace; break;
          case '}': t.kind = Tok::rbrace; break;
          case ';': t.kind = Tok::semicolon; break;
          case '=': t.kind = Tok::equals; break;
          case '+': t.kind = Tok::plus; break;
          case '*': t.kind = Tok::star; break;
          case '/': t.kind = Tok::slash; break;
          case '(': t.kind = Tok::lparen; break;
          case ')': t.kind = Tok::rparen; break;
          case '-':
            if (pos_ < src_.size() && src_[pos_] == '>') {
              advance();
              t.kind = Tok::arrow;
              t.text = "->";
            } else {
              t.kind = Tok::minus;
            }
            break;
          case '<':
            if (pos_ < src_.size() && src_[pos_] == '=') {
              advance();
              t.kind = Tok::le;
              t.text = "<=";
              break;
            }
            [[fallthrough]];
          default:
            throw ParseError(t.line, t.column, "unexpected character '" + t.text + "'");
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  static Tok classify_word(const std::string& w) {
    if (w == "map") return Tok::kw_map;
    if (w == "if") return Tok::kw_if;
    if (w == "then") return Tok::kw_then;
    if (w == "else") return Tok::kw_else;
    auto indexed = [&](char head) {
      if (w.size() < 2 || w[0] != head) return false;
      for (std::size_t i = 1; i < w.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(w[i]))) return false;
      return true;
    };
    if (indexed('x')) return Tok::var;
    if (indexed('y')) return Tok::out;
    return Tok::ident;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void advance_while_digit() {
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  void skip_blanks() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  std::vector<MapSpec> file() {
    std::vector<MapSpec> maps;
    maps.push_back(mapdef());
    while (peek().kind != Tok::end) maps.push_back(mapdef());
    return maps;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const Token& at, std::vector<std::string> expected) const {
    throw ParseError(at.line, at.column, "unexpected " + describe(at), std::move(expected));
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), {what});
    return take();
  }

  // "x" INT / "y" INT written with a blank in between.
  std::optional<std::size_t> split_index(char head) {
    const Token& t = peek();
    if (t.kind == Tok::ident && t.text.size() == 1 && t.text[0] == head && peek(1).kind == Tok::integer) {
      take();
      return index_value(take());
    }
    return std::nullopt;
  }

  static std::size_t index_value(const Token& t) {
    std::string digits = t.text;
    if (!digits.empty() && !std::isdigit(static_cast<unsigned char>(digits[0]))) digits.erase(0, 1);
    if (digits.size() > 9) return static_cast<std::size_t>(-1);
    return static_cast<std::size_t>(std::stoul(digits));
  }

  std::size_t dimension(const char* which) {
    const Token& t = expect(Tok::integer, "integer");
    std::size_t d = index_value(t);
    if (d < 1 || d > kMaxDim) {
      throw ParseError(t.line, t.column,
                       std::string(which) + " dimension " + t.text + " out of range 1.." + std::to_string(kMaxDim));
    }
    return d;
  }

  MapSpec mapdef() {
    expect(Tok::kw_map, "'map'");
    MapSpec spec;
    const Token& name = peek();
    if (name.kind != Tok::ident && name.kind != Tok::var && name.kind != Tok::out) fail(name, {"identifier"});
    spec.name = take().text;
    expect(Tok::colon, "':'");
    spec.m = dimension("input");
    expect(Tok::arrow, "'->'");
    spec.n = dimension("output");
    expect(Tok::lbrace, "'{'");
    inputs_ = spec.m;
    spec.outputs.assign(spec.n, nullptr);

    output(spec);
    while (peek().kind == Tok::semicolon) {
      take();
      if (peek().kind == Tok::rbrace) break;
      output(spec);
    }
    const Token& close = peek();
    if (close.kind != Tok::rbrace) fail(close, {"';'", "'}'"});
    std::size_t defined = 0;
    for (const auto& o : spec.outputs) defined += o != nullptr;
    if (defined != spec.n) {
      throw ParseError(close.line, close.column,
                       "map '" + spec.name + "' declares " + std::to_string(spec.n) + " outputs but defines " +
                           std::to_string(defined));
    }
    take();
    return spec;
  }

  void output(MapSpec& spec) {
    const Token& head = peek();
    std::size_t index;
    if (head.kind == Tok::out) {
      index = index_value(take());
    } else if (auto split = split_index('y')) {
      index = *split;
    } else {
      fail(head, {"output name 'y<i>'"});
    }
    if (index >= spec.n) {
      throw ParseError(head.line, head.column,
                       "output index " + std::to_string(index) + " out of range (map has " +
                           std::to_string(spec.n) + " outputs)");
    }
    if (spec.outputs[index]) {
      throw ParseError(head.line, head.column, "duplicate definition of output y" + std::to_string(index));
    }
    expect(Tok::equals, "'='");
    spec.outputs[index] = expression();
  }

  ExprPtr expression() {
    ExprPtr e = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      BinaryOp op = take().kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      e = expr::binary(op, e, term());
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      BinaryOp op = take().kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      e = expr::binary(op, e, factor());
    }
    return e;
  }

  ExprPtr factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::integer:
        return expr::lit(Scalar::parse(take().text));
      case Tok::rational: {
        std::string text = t.text;
        if (text.substr(text.find('/') + 1).find_first_not_of('0') == std::string::npos) {
          throw ParseError(t.line, t.column, "zero denominator in literal " + text);
        }
        take();
        return expr::lit(Scalar::parse(text));
      }
      case Tok::var:
        take();
        return variable(t, index_value(t));
      case Tok::minus:
        take();
        return expr::neg(factor());
      case Tok::lparen: {
        take();
        ExprPtr e = expression();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::kw_if: {
        take();
        ExprPtr gl = expression();
        expect(Tok::le, "'<='");
        ExprPtr gr = expression();
        expect(Tok::kw_then, "'then'");
        ExprPtr th = expression();
        expect(Tok::kw_else, "'else'");
        ExprPtr el = expression();
        return expr::cond(gl, gr, th, el);
      }
      default:
        if (auto idx = split_index('x')) return variable(t, *idx);
        fail(t, {"number", "variable 'x<i>'", "'-'", "'('", "'if'"});
    }
  }

  ExprPtr variable(const Token& at, std::size_t index) {
    if (index >= inputs_) {
      throw ParseError(at.line, at.column,
                       "variable index " + std::to_string(index) + " out of range (map has " +
                           std::to_string(inputs_) + " inputs)");
    }
    return expr::var(index);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t inputs_ = 0;
};

}  // namespace detail

/// Every map definition in a `.map` file.
inline std::vector<MapSpec> parse_maps(std::string_view text) { return detail::Parser(text).file(); }

/// A text holding exactly one map definition.
inline MapSpec parse_map(std::string_view text) {
  auto maps = parse_maps(text);
  if (maps.size() != 1) {
    throw Error("expected exactly one map definition, found " + std::to_string(maps.size()));
  }
  return std::move(maps.front());
}

/// A standalone expression over `inputs` variables (used for psi in builtin specs).
inline ExprPtr parse_expression(std::string_view text, std::size_t inputs) {
  std::string wrapped = "map e : " + std::to_string(inputs) + " -> 1 { y0 = " + std::string(text) + " }";
  return parse_map(wrapped).outputs.front();
}

}  // namespace colline
