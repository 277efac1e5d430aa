#pragma once

#include "sasp/ast.hpp"
#include "sasp/diagnostic.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sasp {

enum class TokenKind {
    Identifier, // lowercase-initial symbol, including the keyword `not`
    Variable,   // uppercase-initial name
    Anonymous,  // `_`
    Number,
    If, // `:-`
    Dot,
    Comma,
    Semicolon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Slash,
    Minus,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Count, // `#count`
    Show,  // `#show`
    End,
};

[[nodiscard]] auto to_string(TokenKind kind) -> std::string_view;

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    SourceLocation location; // first character
    SourceLocation end;      // one past the last character
};

struct LexResult {
    std::vector<Token> tokens; // always terminated by an End token
    std::vector<Diagnostic> diagnostics;
};

/// Splits program text into tokens, dropping `%` line comments. Unknown
/// characters produce error diagnostics and are skipped.
[[nodiscard]] auto tokenize(std::string_view source) -> LexResult;

struct ParseResult {
    std::optional<Program> program; // empty whenever an error was reported
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] auto ok() const -> bool { return program.has_value(); }
};

/// Parses a complete program. Pooled heads such as `point(a;b).` are expanded
/// into one rule per argument tuple; sort facts (`point/1`, `rect/1`,
/// `segment/1`, `segment/5`) are additionally recorded as object declarations.
[[nodiscard]] auto parse_program(std::string_view source) -> ParseResult;

/// Reports every unsafe variable. Variables occurring in a body spatial literal
/// are safe because spatial argument positions range over declared objects.
[[nodiscard]] auto check_safety(Program const &program) -> std::vector<Diagnostic>;

/// Pretty-prints a program in the accepted input syntax.
[[nodiscard]] auto print_program(Program const &program) -> std::string;
[[nodiscard]] auto print_rule(Rule const &rule) -> std::string;
[[nodiscard]] auto print_atom(Atom const &atom) -> std::string;

} // namespace sasp
