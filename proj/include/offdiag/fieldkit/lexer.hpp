#pragma once
// Tokenizer shared by the expression DSL and the scenario file format.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace offdiag {

enum class TokKind {
  Number,
  Ident,
  String,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  Comma,
  Equals,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Newline,
  End
};

struct Token {
  TokKind kind;
  std::string text;
  double number = 0.0;
  std::size_t offset = 0;  // byte offset in the source
  int line = 1;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, std::size_t offset, int line = 1)
      : std::runtime_error(msg + " at byte " + std::to_string(offset)),
        offset_(offset),
        line_(line) {}
  std::size_t offset() const { return offset_; }
  int line() const { return line_; }

 private:
  std::size_t offset_;
  int line_;
};

struct LexOptions {
  bool newlines = false;  // emit Newline tokens (scenario mode)
  bool comments = false;  // '#' starts a comment running to end of line
  bool strings = false;   // double-quoted strings
};

std::vector<Token> tokenize(std::string_view src, const LexOptions& opts = {});

const char* token_name(TokKind k);

}  // namespace offdiag
