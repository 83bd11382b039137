#include "java_lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace remap::java {

namespace {

constexpr std::array<std::string_view, 51> kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",      "case",
    "catch",    "char",       "class",     "const",     "continue",  "default",
    "do",       "double",     "else",      "enum",      "extends",   "final",
    "finally",  "float",      "for",       "goto",      "if",        "implements",
    "import",   "instanceof", "int",       "interface", "long",      "native",
    "new",      "package",    "private",   "protected", "public",    "return",
    "short",    "static",     "strictfp",  "super",     "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",       "void",
    "volatile", "while",      "true"};

// Longest first so greedy matching picks "..." before ".".
constexpr std::array<std::string_view, 20> kMultiPunct = {
    "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++",
    "--",  "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<="};

bool ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}
bool ident_part(unsigned char c) { return ident_start(c) || std::isdigit(c); }

}  // namespace

bool is_keyword(std::string_view word) {
  if (word == "false" || word == "null") return true;
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_primitive(std::string_view word) {
  return word == "boolean" || word == "byte" || word == "char" || word == "short" ||
         word == "int" || word == "long" || word == "float" || word == "double" ||
         word == "void";
}

LexResult lex(std::string_view src) {
  LexResult out;
  std::size_t i = 0;
  int line = 1;
  const std::size_t n = src.size();

  auto advance_to = [&](std::size_t j) {
    for (; i < j; ++i)
      if (src[i] == '\n') ++line;
  };

  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(src[i]);
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    const int start_line = line;

    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      std::size_t j = src.find('\n', i);
      if (j == std::string_view::npos) j = n;
      std::size_t e = j;
      if (e > begin && src[e - 1] == '\r') --e;
      out.comments.push_back({src.substr(begin, e - begin), begin, e, line, line, false});
      i = j;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      const std::size_t j = src.find("*/", i + 2);
      if (j == std::string_view::npos) throw LexError("unterminated block comment");
      const bool doc = i + 2 < n && src[i + 2] == '*' && j != i + 2;
      advance_to(j + 2);
      out.comments.push_back({src.substr(begin, i - begin), begin, i, start_line, line, doc});
      continue;
    }
    if (c == '"') {
      if (src.substr(i, 3) == "\"\"\"") {
        const std::size_t j = src.find("\"\"\"", i + 3);
        if (j == std::string_view::npos) throw LexError("unterminated text block");
        advance_to(j + 3);
      } else {
        std::size_t j = i + 1;
        while (j < n && src[j] != '"') {
          if (src[j] == '\\') ++j;
          if (j < n && src[j] == '\n') throw LexError("unterminated string literal");
          ++j;
        }
        if (j >= n) throw LexError("unterminated string literal");
        advance_to(j + 1);
      }
      out.tokens.push_back({TokenKind::Literal, src.substr(begin, i - begin), begin, i, start_line});
      continue;
    }
    if (c == '\'') {
      std::size_t j = i + 1;
      while (j < n && src[j] != '\'') {
        if (src[j] == '\\') ++j;
        if (j < n && src[j] == '\n') throw LexError("unterminated char literal");
        ++j;
      }
      if (j >= n) throw LexError("unterminated char literal");
      advance_to(j + 1);
      out.tokens.push_back({TokenKind::Literal, src.substr(begin, i - begin), begin, i, start_line});
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i + 1;
      while (j < n) {
        const unsigned char d = static_cast<unsigned char>(src[j]);
        if (std::isalnum(d) || d == '_' || d == '.') {
          ++j;
        } else if ((d == '+' || d == '-') &&
                   (src[j - 1] == 'e' || src[j - 1] == 'E' || src[j - 1] == 'p' || src[j - 1] == 'P') &&
                   !(src[begin] == '0' && j > begin + 1 && (src[begin + 1] == 'x' || src[begin + 1] == 'X') &&
                     (src[j - 1] == 'e' || src[j - 1] == 'E'))) {
          ++j;
        } else {
          break;
        }
      }
      i = j;
      out.tokens.push_back({TokenKind::Literal, src.substr(begin, i - begin), begin, i, start_line});
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < n && ident_part(static_cast<unsigned char>(src[j]))) ++j;
      i = j;
      const std::string_view word = src.substr(begin, i - begin);
      const TokenKind kind = is_keyword(word)
                                 ? (word == "true" || word == "false" || word == "null" ? TokenKind::Literal
                                                                                         : TokenKind::Keyword)
                                 : TokenKind::Identifier;
      out.tokens.push_back({kind, word, begin, i, start_line});
      continue;
    }
    std::size_t len = 1;
    for (std::string_view p : kMultiPunct) {
      if (src.substr(i, p.size()) == p) {
        len = p.size();
        break;
      }
    }
    i += len;
    out.tokens.push_back({TokenKind::Punct, src.substr(begin, len), begin, i, start_line});
  }
  return out;
}

}  // namespace remap::java
