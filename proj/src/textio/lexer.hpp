#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "preface/diagnostic.hpp"

namespace preface::textio {

enum class TokenKind { ident, integer, string, symbol, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;  // identifier, digits, unescaped string contents or symbol
    SourceLocation loc;
};

struct Comment {
    SourceLocation loc;  // position of the `//`
    std::string text;    // contents after `//`, trimmed
};

struct LexResult {
    std::vector<Token> tokens;  // always terminated by an `end` token
    std::vector<Comment> comments;
};

/// Tokenises `text`; `line` and `column` give the position of its first
/// character, so embedded fragments report locations in the enclosing file.
LexResult lex(std::string_view text, const std::string& file, int line = 1, int column = 1);

std::string describe(const Token& token);

}  // namespace preface::textio
