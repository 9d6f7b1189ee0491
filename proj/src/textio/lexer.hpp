#pragma once

#include "repairlab/error.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace repairlab::textio::detail {

enum class Tok : std::uint8_t {
    Ident,
    Int,
    String,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Arrow,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    End
};

struct Token
{
    Tok kind = Tok::End;
    std::string text;
    std::int64_t number = 0;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t width = 0;
};

std::vector<Token> tokenize(std::string_view text, const std::string &file);

class Cursor
{
  public:
    Cursor(std::vector<Token> tokens, std::string file) : tokens_(std::move(tokens)), file_(std::move(file)) { }

    const Token &peek(std::size_t ahead = 0) const;
    const Token &next();
    bool at(Tok kind) const { return peek().kind == kind; }
    bool at_word(std::string_view word) const { return at(Tok::Ident) && peek().text == word; }
    bool accept(Tok kind);
    bool accept_word(std::string_view word);
    const Token &expect(Tok kind, std::string_view what);
    void expect_word(std::string_view word);

    SourceSpan span(const Token &token) const;
    [[noreturn]] void fail(const Token &token, const std::string &message) const;

  private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::string file_;
};

}
