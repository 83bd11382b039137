#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace remap::java {

enum class TokenKind { Identifier, Keyword, Literal, Punct };

struct Token {
  TokenKind kind;
  std::string_view text;
  std::size_t begin = 0;  // byte offsets into the source
  std::size_t end = 0;
  int line = 0;  // 1-based line of the first byte
};

struct Comment {
  std::string_view text;  // including delimiters
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 0;
  int end_line = 0;
  bool is_doc = false;  // "/** ... */"
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Comment> comments;
};

class LexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LexResult lex(std::string_view source);

bool is_keyword(std::string_view word);
bool is_primitive(std::string_view word);

}  // namespace remap::java
