#include "sasp/parser.hpp"

#include <set>

namespace sasp {

namespace {

struct ParseFailure {
    Diagnostic diagnostic;
};

auto is_comparison(TokenKind kind) -> bool {
    switch (kind) {
    case TokenKind::Eq:
    case TokenKind::Ne:
    case TokenKind::Lt:
    case TokenKind::Le:
    case TokenKind::Gt:
    case TokenKind::Ge:
        return true;
    default:
        return false;
    }
}

auto comparison_op(TokenKind kind) -> CompareOp {
    switch (kind) {
    case TokenKind::Ne:
        return CompareOp::Ne;
    case TokenKind::Lt:
        return CompareOp::Lt;
    case TokenKind::Le:
        return CompareOp::Le;
    case TokenKind::Gt:
        return CompareOp::Gt;
    case TokenKind::Ge:
        return CompareOp::Ge;
    default:
        return CompareOp::Eq;
    }
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens)
        : toks_(std::move(tokens)) {}

    auto run(std::vector<Diagnostic> &diagnostics) -> Program {
        while (peek().kind != TokenKind::End) {
            try {
                statement();
            } catch (ParseFailure const &failure) {
                diagnostics.push_back(failure.diagnostic);
                recover();
            }
        }
        return std::move(program_);
    }

private:
    // -- token helpers ------------------------------------------------------

    auto peek(std::size_t offset = 0) const -> Token const & {
        auto i = std::min(pos_ + offset, toks_.size() - 1);
        return toks_[i];
    }

    auto next() -> Token const & {
        auto const &tok = toks_[pos_];
        if (pos_ + 1 < toks_.size()) {
            ++pos_;
        }
        return tok;
    }

    auto accept(TokenKind kind) -> bool {
        if (peek().kind == kind) {
            next();
            return true;
        }
        return false;
    }

    /// Errors about a missing token are reported right after the previous
    /// token when the offending token sits on a later line, so a dropped `.`
    /// is blamed on the statement that lost it.
    [[noreturn]] void fail(std::string message) const {
        auto const &tok = peek();
        SourceLocation at = tok.location;
        if (pos_ > 0 && toks_[pos_ - 1].end.line < tok.location.line) {
            at = toks_[pos_ - 1].end;
        }
        std::string snippet = tok.kind == TokenKind::End ? std::string{} : tok.text;
        throw ParseFailure{{Severity::Error, at, std::move(message), std::move(snippet)}};
    }

    [[noreturn]] static void fail_at(Token const &tok, std::string message) {
        throw ParseFailure{{Severity::Error, tok.location, std::move(message), tok.text}};
    }

    auto expect(TokenKind kind) -> Token const & {
        if (peek().kind != kind) {
            fail("expected " + std::string(to_string(kind)) + " but found " + describe(peek()));
        }
        return next();
    }

    static auto describe(Token const &tok) -> std::string {
        if (tok.kind == TokenKind::End) {
            return "end of input";
        }
        return "'" + tok.text + "'";
    }

    void recover() {
        while (peek().kind != TokenKind::End && peek().kind != TokenKind::Dot) {
            next();
        }
        accept(TokenKind::Dot);
    }

    // -- grammar ------------------------------------------------------------

    void statement() {
        auto const &first = peek();
        if (first.kind == TokenKind::Show) {
            show_directive();
            return;
        }
        if (first.kind == TokenKind::If) {
            next();
            Rule rule;
            rule.location = first.location;
            rule.body = body();
            expect(TokenKind::Dot);
            program_.rules.push_back(std::move(rule));
            return;
        }
        if (first.kind != TokenKind::Identifier) {
            fail_at(first, "expected a rule, constraint or directive but found " + describe(first));
        }
        auto heads = head();
        std::vector<BodyLiteral> rule_body;
        if (accept(TokenKind::If)) {
            rule_body = body();
        }
        expect(TokenKind::Dot);
        if (rule_body.empty()) {
            record_declarations(heads, first);
        }
        for (auto &h : heads) {
            Rule rule;
            rule.location = first.location;
            rule.head = std::move(h);
            rule.body = rule_body;
            program_.rules.push_back(std::move(rule));
        }
    }

    void show_directive() {
        auto const &tok = next();
        if (peek().kind != TokenKind::Identifier) {
            fail("expected predicate name after '#show'");
        }
        ShowDirective show;
        show.location = tok.location;
        show.predicate = next().text;
        expect(TokenKind::Slash);
        auto const &arity = expect(TokenKind::Number);
        show.arity = std::stoul(arity.text);
        expect(TokenKind::Dot);
        program_.shows.push_back(std::move(show));
    }

    auto head() -> std::vector<Atom> {
        auto const &name = next();
        std::vector<std::vector<Term>> tuples;
        if (accept(TokenKind::LParen)) {
            tuples.push_back(term_tuple(true));
            while (accept(TokenKind::Semicolon)) {
                tuples.push_back(term_tuple(true));
            }
            expect(TokenKind::RParen);
        } else {
            tuples.emplace_back();
        }
        std::vector<Atom> out;
        for (auto &args : tuples) {
            out.push_back(make_atom(name, std::move(args)));
        }
        return out;
    }

    auto term_tuple(bool in_head) -> std::vector<Term> {
        std::vector<Term> args;
        args.push_back(term(in_head));
        while (accept(TokenKind::Comma)) {
            args.push_back(term(in_head));
        }
        return args;
    }

    auto term(bool in_head) -> Term {
        auto const &tok = peek();
        switch (tok.kind) {
        case TokenKind::Identifier:
            if (peek(1).kind == TokenKind::LParen) {
                // An atom opening a new line usually means the previous one lost its ')'.
                fail("function terms are not supported");
            }
            return Term::constant(next().text);
        case TokenKind::Variable:
            return Term::variable(next().text);
        case TokenKind::Anonymous:
            if (in_head) {
                fail_at(tok, "anonymous variable in head");
            }
            next();
            return Term::anonymous();
        case TokenKind::Number:
            return Term::number(BigInt{next().text});
        case TokenKind::Minus: {
            next();
            auto const &num = expect(TokenKind::Number);
            return Term::number(-BigInt{num.text});
        }
        default:
            fail_at(tok, "expected a term but found " + describe(tok));
        }
    }

    auto make_atom(Token const &name, std::vector<Term> args) -> Atom {
        if (auto rel = relation_from_name(name.text)) {
            auto arity = relation_signature(*rel).size();
            if (args.size() != arity) {
                fail_at(name, "spatial relation '" + name.text + "' expects " + std::to_string(arity) +
                                  (arity == 1 ? " argument" : " arguments"));
            }
            return SpatialAtom{*rel, std::move(args)};
        }
        if (has_spatial_suffix(name.text)) {
            fail_at(name, "unknown spatial relation '" + name.text + "'");
        }
        return RegularAtom{name.text, std::move(args)};
    }

    auto plain_atom() -> Atom {
        auto const &name = expect(TokenKind::Identifier);
        std::vector<Term> args;
        if (accept(TokenKind::LParen)) {
            args = term_tuple(false);
            if (peek().kind == TokenKind::Semicolon) {
                fail("pooling is only supported in rule heads");
            }
            expect(TokenKind::RParen);
        }
        return make_atom(name, std::move(args));
    }

    auto body() -> std::vector<BodyLiteral> {
        std::vector<BodyLiteral> out;
        out.push_back(literal());
        while (accept(TokenKind::Comma)) {
            out.push_back(literal());
        }
        return out;
    }

    auto literal() -> BodyLiteral {
        BodyLiteral lit;
        lit.location = peek().location;
        if (peek().kind == TokenKind::Identifier && peek().text == "not" &&
            peek(1).kind != TokenKind::LParen && !is_comparison(peek(1).kind)) {
            next();
            lit.negated = true;
        }
        auto const &tok = peek();
        if (tok.kind == TokenKind::Count) {
            lit.atom = aggregate();
        } else if (tok.kind == TokenKind::Variable || tok.kind == TokenKind::Number ||
                   tok.kind == TokenKind::Anonymous || tok.kind == TokenKind::Minus ||
                   (tok.kind == TokenKind::Identifier && is_comparison(peek(1).kind))) {
            Comparison cmp;
            cmp.lhs = term(false);
            if (!is_comparison(peek().kind)) {
                fail("expected a comparison operator but found " + describe(peek()));
            }
            cmp.op = comparison_op(next().kind);
            cmp.rhs = term(false);
            lit.atom = std::move(cmp);
        } else if (tok.kind == TokenKind::Identifier) {
            lit.atom = plain_atom();
        } else {
            fail_at(tok, "expected a body literal but found " + describe(tok));
        }
        return lit;
    }

    auto aggregate() -> AggregateAtom {
        next(); // #count
        expect(TokenKind::LBrace);
        AggregateAtom agg;
        auto const &elem = peek();
        if (elem.kind != TokenKind::Variable) {
            fail("aggregate element must be a variable");
        }
        agg.element = term(false);
        expect(TokenKind::Colon);
        auto cond = plain_atom();
        if (auto *reg = std::get_if<RegularAtom>(&cond)) {
            agg.condition = std::move(*reg);
        } else {
            agg.condition = std::get<SpatialAtom>(std::move(cond));
        }
        expect(TokenKind::RBrace);
        if (!is_comparison(peek().kind)) {
            fail("expected a comparison after aggregate but found " + describe(peek()));
        }
        agg.guard = comparison_op(next().kind);
        bool negative = accept(TokenKind::Minus);
        auto const &bound = expect(TokenKind::Number);
        agg.bound = BigInt{bound.text};
        if (negative) {
            agg.bound = -agg.bound;
        }
        return agg;
    }

    void record_declarations(std::vector<Atom> const &heads, Token const &name) {
        auto sort = sort_from_name(name.text);
        if (!sort) {
            return;
        }
        ObjectDecl decl;
        decl.sort = *sort;
        for (auto const &h : heads) {
            auto const *atom = std::get_if<RegularAtom>(&h);
            if (atom == nullptr) {
                return;
            }
            if (atom->args.size() == 1) {
                if (atom->args[0].kind != Term::Kind::Constant) {
                    fail_at(name, "object names must be constants");
                }
                decl.names.push_back(atom->args[0].text);
            } else if (*sort == Sort::Segment && atom->args.size() == 5) {
                if (atom->args[0].kind != Term::Kind::Constant) {
                    fail_at(name, "object names must be constants");
                }
                Rational coords[4];
                for (int i = 0; i < 4; ++i) {
                    auto const &t = atom->args[i + 1];
                    if (t.kind != Term::Kind::Number) {
                        fail_at(name, "segment endpoints must be integers");
                    }
                    coords[i] = Rational{BigInt{t.text}};
                }
                if (coords[0] == coords[2] && coords[1] == coords[3]) {
                    fail_at(name, "segment endpoints must differ");
                }
                ObjectDecl seg;
                seg.sort = Sort::Segment;
                seg.names.push_back(atom->args[0].text);
                seg.endpoints = SegmentEndpoints{coords[0], coords[1], coords[2], coords[3]};
                program_.objects.push_back(std::move(seg));
            }
        }
        if (!decl.names.empty()) {
            program_.objects.push_back(std::move(decl));
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Program program_;
};

void collect_predicates(Atom const &atom, std::set<std::pair<std::string, std::size_t>> &out) {
    std::visit(
        [&](auto const &a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, RegularAtom>) {
                out.emplace(a.predicate, a.args.size());
            } else if constexpr (std::is_same_v<T, SpatialAtom>) {
                out.emplace(std::string(relation_name(a.relation)), a.args.size());
            } else if constexpr (std::is_same_v<T, AggregateAtom>) {
                std::visit([&](auto const &c) { collect_predicates(Atom{c}, out); }, a.condition);
            }
        },
        atom);
}

} // namespace

auto parse_program(std::string_view source) -> ParseResult {
    ParseResult result;
    auto lexed = tokenize(source);
    result.diagnostics = std::move(lexed.diagnostics);
    Parser parser{std::move(lexed.tokens)};
    auto program = parser.run(result.diagnostics);
    if (has_errors(result.diagnostics)) {
        return result;
    }
    std::set<std::pair<std::string, std::size_t>> predicates;
    for (auto const &rule : program.rules) {
        if (rule.head) {
            collect_predicates(*rule.head, predicates);
        }
        for (auto const &lit : rule.body) {
            collect_predicates(lit.atom, predicates);
        }
    }
    for (auto const &show : program.shows) {
        if (predicates.count({show.predicate, show.arity}) == 0) {
            result.diagnostics.push_back({Severity::Warning, show.location,
                                          "#show references " + show.predicate + "/" +
                                              std::to_string(show.arity) + " which does not occur in the program",
                                          {}});
        }
    }
    result.program = std::move(program);
    return result;
}

} // namespace sasp
