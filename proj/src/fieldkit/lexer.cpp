#include "offdiag/fieldkit/lexer.hpp"

#include <cctype>
#include <charconv>

namespace offdiag {

const char* token_name(TokKind k) {
  switch (k) {
    case TokKind::Number: return "number";
    case TokKind::Ident: return "identifier";
    case TokKind::String: return "string";
    case TokKind::Plus: return "'+'";
    case TokKind::Minus: return "'-'";
    case TokKind::Star: return "'*'";
    case TokKind::Slash: return "'/'";
    case TokKind::Caret: return "'^'";
    case TokKind::LParen: return "'('";
    case TokKind::RParen: return "')'";
    case TokKind::Comma: return "','";
    case TokKind::Equals: return "'='";
    case TokKind::LBrace: return "'{'";
    case TokKind::RBrace: return "'}'";
    case TokKind::LBracket: return "'['";
    case TokKind::RBracket: return "']'";
    case TokKind::Newline: return "newline";
    case TokKind::End: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view src, const LexOptions& opts) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  auto push = [&](TokKind k, std::size_t start, std::size_t len) {
    out.push_back(Token{k, std::string(src.substr(start, len)), 0.0, start, line});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      if (opts.newlines) push(TokKind::Newline, i, 1);
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (opts.comments && c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t start = i;
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      Token t{TokKind::Number, std::string(src.substr(start, i - start)), 0.0, start, line};
      auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
        throw SyntaxError("malformed number '" + t.text + "'", start, line);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      push(TokKind::Ident, start, i - start);
      continue;
    }
    if (opts.strings && c == '"') {
      std::size_t start = i++;
      std::string text;
      while (i < src.size() && src[i] != '"') {
        if (src[i] == '\n') throw SyntaxError("unterminated string", start, line);
        text.push_back(src[i++]);
      }
      if (i >= src.size()) throw SyntaxError("unterminated string", start, line);
      ++i;
      out.push_back(Token{TokKind::String, std::move(text), 0.0, start, line});
      continue;
    }
    TokKind k;
    switch (c) {
      case '+': k = TokKind::Plus; break;
      case '-': k = TokKind::Minus; break;
      case '*': k = TokKind::Star; break;
      case '/': k = TokKind::Slash; break;
      case '^': k = TokKind::Caret; break;
      case '(': k = TokKind::LParen; break;
      case ')': k = TokKind::RParen; break;
      case ',': k = TokKind::Comma; break;
      case '=': k = TokKind::Equals; break;
      case '{': k = TokKind::LBrace; break;
      case '}': k = TokKind::RBrace; break;
      case '[': k = TokKind::LBracket; break;
      case ']': k = TokKind::RBracket; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", i, line);
    }
    push(k, i, 1);
    ++i;
  }
  out.push_back(Token{TokKind::End, "", 0.0, src.size(), line});
  return out;
}

}  // namespace offdiag
