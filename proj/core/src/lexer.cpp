#include "sasp/parser.hpp"

#include <cctype>

namespace sasp {

auto to_string(TokenKind kind) -> std::string_view {
    switch (kind) {
    case TokenKind::Identifier:
        return "identifier";
    case TokenKind::Variable:
        return "variable";
    case TokenKind::Anonymous:
        return "'_'";
    case TokenKind::Number:
        return "number";
    case TokenKind::If:
        return "':-'";
    case TokenKind::Dot:
        return "'.'";
    case TokenKind::Comma:
        return "','";
    case TokenKind::Semicolon:
        return "';'";
    case TokenKind::LParen:
        return "'('";
    case TokenKind::RParen:
        return "')'";
    case TokenKind::LBrace:
        return "'{'";
    case TokenKind::RBrace:
        return "'}'";
    case TokenKind::Colon:
        return "':'";
    case TokenKind::Slash:
        return "'/'";
    case TokenKind::Minus:
        return "'-'";
    case TokenKind::Eq:
        return "'='";
    case TokenKind::Ne:
        return "'!='";
    case TokenKind::Lt:
        return "'<'";
    case TokenKind::Le:
        return "'<='";
    case TokenKind::Gt:
        return "'>'";
    case TokenKind::Ge:
        return "'>='";
    case TokenKind::Count:
        return "'#count'";
    case TokenKind::Show:
        return "'#show'";
    case TokenKind::End:
        return "end of input";
    }
    return "?";
}

namespace {

class Lexer {
public:
    explicit Lexer(std::string_view source)
        : src_(source) {}

    auto run() -> LexResult {
        LexResult result;
        while (true) {
            skip_space_and_comments();
            if (pos_ >= src_.size()) {
                result.tokens.push_back({TokenKind::End, "", here(), here()});
                return result;
            }
            auto start = here();
            auto begin = pos_;
            char c = src_[pos_];
            auto emit = [&](TokenKind kind) {
                result.tokens.push_back({kind, std::string(src_.substr(begin, pos_ - begin)), start, here()});
            };
            if (std::islower(static_cast<unsigned char>(c))) {
                consume_word();
                emit(TokenKind::Identifier);
            } else if (std::isupper(static_cast<unsigned char>(c))) {
                consume_word();
                emit(TokenKind::Variable);
            } else if (c == '_') {
                advance();
                if (pos_ < src_.size() && is_word(src_[pos_])) {
                    consume_word();
                    result.diagnostics.push_back({Severity::Error, start,
                                                  "names may not start with '_'",
                                                  std::string(src_.substr(begin, pos_ - begin))});
                    continue;
                }
                emit(TokenKind::Anonymous);
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    advance();
                }
                emit(TokenKind::Number);
            } else if (c == '#') {
                advance();
                consume_word();
                auto word = src_.substr(begin, pos_ - begin);
                if (word == "#count") {
                    emit(TokenKind::Count);
                } else if (word == "#show") {
                    emit(TokenKind::Show);
                } else {
                    result.diagnostics.push_back(
                        {Severity::Error, start, "unknown directive", std::string(word)});
                }
            } else if (auto kind = punctuation(); kind) {
                emit(*kind);
            } else {
                // Consume a whole UTF-8 sequence so the snippet stays printable.
                advance();
                while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) {
                    advance();
                }
                result.diagnostics.push_back({Severity::Error, start, "unexpected character",
                                              std::string(src_.substr(begin, pos_ - begin))});
            }
        }
    }

private:
    static auto is_word(char c) -> bool { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    auto here() const -> SourceLocation { return {line_, column_}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
            ++column_;
        }
        ++pos_;
    }

    void consume_word() {
        while (pos_ < src_.size() && is_word(src_[pos_])) {
            advance();
        }
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    advance();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    auto peek(std::size_t offset) const -> char {
        return pos_ + offset < src_.size() ? src_[pos_ + offset] : '\0';
    }

    auto punctuation() -> std::optional<TokenKind> {
        char c = peek(0);
        char n = peek(1);
        auto take = [&](std::size_t count, TokenKind kind) {
            for (std::size_t i = 0; i < count; ++i) {
                advance();
            }
            return kind;
        };
        switch (c) {
        case ':':
            return n == '-' ? take(2, TokenKind::If) : take(1, TokenKind::Colon);
        case '.':
            return take(1, TokenKind::Dot);
        case ',':
            return take(1, TokenKind::Comma);
        case ';':
            return take(1, TokenKind::Semicolon);
        case '(':
            return take(1, TokenKind::LParen);
        case ')':
            return take(1, TokenKind::RParen);
        case '{':
            return take(1, TokenKind::LBrace);
        case '}':
            return take(1, TokenKind::RBrace);
        case '/':
            return take(1, TokenKind::Slash);
        case '-':
            return take(1, TokenKind::Minus);
        case '=':
            return n == '=' ? take(2, TokenKind::Eq) : take(1, TokenKind::Eq);
        case '!':
            if (n == '=') {
                return take(2, TokenKind::Ne);
            }
            return std::nullopt;
        case '<':
            return n == '=' ? take(2, TokenKind::Le) : take(1, TokenKind::Lt);
        case '>':
            return n == '=' ? take(2, TokenKind::Ge) : take(1, TokenKind::Gt);
        default:
            return std::nullopt;
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

} // namespace

auto tokenize(std::string_view source) -> LexResult { return Lexer{source}.run(); }

} // namespace sasp
