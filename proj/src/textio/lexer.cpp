#include "lexer.hpp"

#include <cctype>
#include <charconv>

namespace repairlab::textio::detail {

namespace {

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}

std::vector<Token> tokenize(std::string_view text, const std::string &file)
{
    std::vector<Token> out;
    std::size_t line = 1, column = 1, i = 0;
    auto error = [&](std::size_t width, const std::string &msg) {
        throw ParseError(SourceSpan{file, line, column, column + width}, msg);
    };
    auto advance = [&](std::size_t n) {
        i += n;
        column += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++i;
            ++line;
            column = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = column;
        std::size_t start = i;
        if (ident_start(c)) {
            while (i < text.size() && ident_char(text[i]))
                advance(1);
            tok.kind = Tok::Ident;
            tok.text = std::string(text.substr(start, i - start));
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            advance(1);
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                advance(1);
            tok.kind = Tok::Int;
            tok.text = std::string(text.substr(start, i - start));
            auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
            if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
                column = tok.column;
                error(tok.text.size(), "integer literal out of range: " + tok.text);
            }
        } else if (c == '\'') {
            advance(1);
            std::string value;
            for (;;) {
                if (i >= text.size() || text[i] == '\n') {
                    column = tok.column;
                    error(1, "unterminated quoted constant");
                }
                if (text[i] == '\'') {
                    if (i + 1 < text.size() && text[i + 1] == '\'') {
                        value += '\'';
                        advance(2);
                        continue;
                    }
                    advance(1);
                    break;
                }
                value += text[i];
                advance(1);
            }
            tok.kind = Tok::String;
            tok.text = std::move(value);
        } else {
            auto two = text.substr(i, 2);
            if (two == "->") {
                tok.kind = Tok::Arrow;
                advance(2);
            } else if (two == "!=" || two == "<>") {
                tok.kind = Tok::Ne;
                advance(2);
            } else if (two == "<=") {
                tok.kind = Tok::Le;
                advance(2);
            } else if (two == ">=") {
                tok.kind = Tok::Ge;
                advance(2);
            } else {
                switch (c) {
                    case '(': tok.kind = Tok::LParen; break;
                    case ')': tok.kind = Tok::RParen; break;
                    case '[': tok.kind = Tok::LBracket; break;
                    case ']': tok.kind = Tok::RBracket; break;
                    case ',': tok.kind = Tok::Comma; break;
                    case ':': tok.kind = Tok::Colon; break;
                    case '=': tok.kind = Tok::Eq; break;
                    case '<': tok.kind = Tok::Lt; break;
                    case '>': tok.kind = Tok::Gt; break;
                    default: error(1, std::string("unexpected character '") + c + "'");
                }
                advance(1);
            }
            tok.text = std::string(text.substr(start, i - start));
        }
        tok.width = i - start;
        out.push_back(std::move(tok));
    }
    Token end;
    end.line = line;
    end.column = column;
    out.push_back(end);
    return out;
}

const Token &Cursor::peek(std::size_t ahead) const
{
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

const Token &Cursor::next()
{
    const Token &t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size())
        ++pos_;
    return t;
}

bool Cursor::accept(Tok kind)
{
    if (!at(kind))
        return false;
    next();
    return true;
}

bool Cursor::accept_word(std::string_view word)
{
    if (!at_word(word))
        return false;
    next();
    return true;
}

const Token &Cursor::expect(Tok kind, std::string_view what)
{
    if (!at(kind))
        fail(peek(), "expected " + std::string(what));
    return next();
}

void Cursor::expect_word(std::string_view word)
{
    if (!at_word(word))
        fail(peek(), "expected '" + std::string(word) + "'");
    next();
}

SourceSpan Cursor::span(const Token &token) const
{
    return SourceSpan{file_, token.line, token.column, token.column + std::max<std::size_t>(token.width, 1)};
}

void Cursor::fail(const Token &token, const std::string &message) const
{
    std::string found = token.kind == Tok::End ? "end of input" : "'" + token.text + "'";
    throw ParseError(span(token), message + ", found " + found);
}

}
