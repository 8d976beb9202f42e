#include "textio/lexer.hpp"

#include <array>
#include <cctype>

#include "preface/textio.hpp"

namespace preface::textio {

namespace {

constexpr std::array<std::string_view, 6> kTwoCharSymbols = {"<>", "<=", ">=", "<<", ">>", "->"};
constexpr std::string_view kOneCharSymbols = "{}()[],:.|=<>+-";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

LexResult lex(std::string_view text, const std::string& file, int line, int column)
{
    LexResult out;
    std::size_t i = 0;
    auto here = [&]() { return SourceLocation{file, line, column}; };
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };

    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            const auto eol = text.find('\n', i);
            const auto end = eol == std::string_view::npos ? text.size() : eol;
            out.comments.push_back({here(), trim(text.substr(i + 2, end - i - 2))});
            advance(end - i);
            continue;
        }
        const SourceLocation loc = here();
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) {
                ++j;
            }
            out.tokens.push_back({TokenKind::ident, std::string(text.substr(i, j - i)), loc});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                ++j;
            }
            if (j < text.size() && ident_start(text[j])) {
                throw ParseError(loc, "malformed number");
            }
            out.tokens.push_back({TokenKind::integer, std::string(text.substr(i, j - i)), loc});
            advance(j - i);
            continue;
        }
        if (c == '"') {
            std::string value;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < text.size()) {
                const char d = text[j];
                if (d == '"') {
                    closed = true;
                    break;
                }
                if (d == '\n') {
                    break;
                }
                if (d == '\\' && j + 1 < text.size()) {
                    const char e = text[j + 1];
                    switch (e) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    default: throw ParseError(loc, std::string("unknown escape '\\") + e + "'");
                    }
                    j += 2;
                    continue;
                }
                value += d;
                ++j;
            }
            if (!closed) {
                throw ParseError(loc, "unterminated string");
            }
            out.tokens.push_back({TokenKind::string, std::move(value), loc});
            advance(j + 1 - i);
            continue;
        }
        bool matched = false;
        for (std::string_view sym : kTwoCharSymbols) {
            if (text.substr(i, 2) == sym) {
                out.tokens.push_back({TokenKind::symbol, std::string(sym), loc});
                advance(2);
                matched = true;
                break;
            }
        }
        if (matched) {
            continue;
        }
        if (kOneCharSymbols.find(c) != std::string_view::npos) {
            out.tokens.push_back({TokenKind::symbol, std::string(1, c), loc});
            advance(1);
            continue;
        }
        throw ParseError(loc, std::string("unexpected character '") + c + "'");
    }
    out.tokens.push_back({TokenKind::end, {}, here()});
    return out;
}

std::string describe(const Token& token)
{
    switch (token.kind) {
    case TokenKind::ident: return "'" + token.text + "'";
    case TokenKind::integer: return "integer " + token.text;
    case TokenKind::string: return "string literal";
    case TokenKind::symbol: return "'" + token.text + "'";
    case TokenKind::end: return "end of input";
    }
    return "token";
}

}  // namespace preface::textio
