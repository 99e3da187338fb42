#include "eagerlog/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace eagerlog {

namespace {

enum class Tok { Ident, Int, LParen, RParen, Comma, Dot, Turnstile, Bang, NotEq, Eq, At, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceSpan span;
};

const char* describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Turnstile: return "':-'";
    case Tok::Bang: return "'!'";
    case Tok::NotEq: return "'!='";
    case Tok::Eq: return "'='";
    case Tok::At: return "'@'";
    case Tok::End: return "end of input";
    }
    return "?";
}

class Lexer {
public:
    Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_blank();
            Token t;
            t.span = here();
            if (pos_ >= text_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            char c = text_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                    advance();
                t.kind = Tok::Ident;
                t.text = std::string(text_.substr(start, pos_ - start));
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
                std::size_t start = pos_;
                advance();
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
                t.kind = Tok::Int;
                t.text = std::string(text_.substr(start, pos_ - start));
            } else if (c == ':' && peek(1) == '-') {
                advance(2);
                t.kind = Tok::Turnstile;
            } else if (c == '!' && peek(1) == '=') {
                advance(2);
                t.kind = Tok::NotEq;
            } else {
                switch (c) {
                case '(': t.kind = Tok::LParen; break;
                case ')': t.kind = Tok::RParen; break;
                case ',': t.kind = Tok::Comma; break;
                case '.': t.kind = Tok::Dot; break;
                case '!': t.kind = Tok::Bang; break;
                case '=': t.kind = Tok::Eq; break;
                case '@': t.kind = Tok::At; break;
                default: throw ParseError(t.span, std::string("unexpected character '") + c + "'");
                }
                advance();
            }
            out.push_back(std::move(t));
        }
    }

private:
    char peek(std::size_t k) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_blank() {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
            if (peek(0) == '/' && peek(1) == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            return;
        }
    }

    SourceSpan here() const { return {file_, line_, col_}; }

    std::string_view text_;
    std::string file_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

bool is_variable(const std::string& ident) {
    return !ident.empty() && (std::isupper(static_cast<unsigned char>(ident[0])) || ident[0] == '_');
}

std::optional<std::int64_t> to_int(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, Interner& interner) : toks_(std::move(tokens)), interner_(interner) {}

    Program run() {
        Program program;
        while (peek().kind != Tok::End) {
            if (peek().kind == Tok::Dot) {
                declaration(program);
            } else {
                program.add_rule(rule());
            }
        }
        for (const auto& r : program.rules()) {
            check_declared(program, r.head);
            for (const auto& a : r.body)
                if (a.is_predicate()) check_declared(program, a);
        }
        return program;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    const Token& expect(Tok kind, const char* context) {
        const Token& t = peek();
        if (t.kind != kind)
            throw ParseError(t.span, std::string("expected ") + describe(kind) + " " + context + ", found " +
                                         (t.kind == Tok::Ident || t.kind == Tok::Int ? "'" + t.text + "'" : describe(t.kind)));
        return next();
    }

    static void check_declared(const Program& p, const Atom& a) {
        if (!p.declared(a.pred)) throw ParseError(a.span, "undeclared predicate " + a.pred);
    }

    void declaration(Program& program) {
        const Token& dot = next();
        const Token& kw = expect(Tok::Ident, "after '.'");
        if (kw.text != "decl") throw ParseError(kw.span, "unknown directive ." + kw.text);
        const Token& name = expect(Tok::Ident, "as predicate name");
        if (is_variable(name.text)) throw ParseError(name.span, "predicate names must start with a lower-case letter");
        expect(Tok::LParen, "after predicate name");
        const Token& arity = expect(Tok::Int, "as arity");
        auto n = to_int(arity.text);
        if (!n || *n < 0 || *n > 64) throw ParseError(arity.span, "arity must be between 0 and 64");
        expect(Tok::RParen, "after arity");
        PredKind kind = PredKind::Internal;
        while (peek().kind == Tok::Ident && (peek().text == "input" || peek().text == "output")) {
            const Token& k = next();
            PredKind want = k.text == "input" ? PredKind::Input : PredKind::Output;
            if (kind != PredKind::Internal && kind != want)
                throw ParseError(k.span, "predicate cannot be both input and output");
            kind = want;
        }
        if (program.declared(name.text)) throw ParseError(name.span, "duplicate declaration of " + name.text);
        program.declare({name.text, static_cast<std::size_t>(*n), kind, dot.span});
    }

    Rule rule() {
        Rule r;
        r.span = peek().span;
        r.head = predicate_atom(AtomKind::Pos, "as rule head");
        if (peek().kind == Tok::Turnstile) {
            next();
            r.body.push_back(literal());
            while (peek().kind == Tok::Comma) {
                next();
                r.body.push_back(literal());
            }
        }
        expect(Tok::Dot, "at end of rule");
        return r;
    }

    Atom predicate_atom(AtomKind kind, const char* context) {
        const Token& name = expect(Tok::Ident, context);
        if (is_variable(name.text)) throw ParseError(name.span, "predicate names must start with a lower-case letter");
        Atom a;
        a.kind = kind;
        a.pred = name.text;
        a.span = name.span;
        if (peek().kind == Tok::LParen) {
            next();
            a.args = arguments();
        }
        return a;
    }

    std::vector<Term> arguments() {
        std::vector<Term> args;
        if (peek().kind == Tok::RParen) {
            next();
            return args;
        }
        args.push_back(term());
        while (peek().kind == Tok::Comma) {
            next();
            args.push_back(term());
        }
        expect(Tok::RParen, "to close argument list");
        return args;
    }

    Atom literal() {
        const Token& t = peek();
        if (t.kind == Tok::Bang) {
            SourceSpan span = next().span;
            Atom a = predicate_atom(AtomKind::Neg, "after '!'");
            a.span = span;
            return a;
        }
        if (t.kind == Tok::Ident && !is_variable(t.text)) return predicate_atom(AtomKind::Pos, "");
        SourceSpan span = t.span;
        Term lhs = term();
        const Token& op = peek();
        if (op.kind != Tok::Eq && op.kind != Tok::NotEq)
            throw ParseError(op.span, std::string("expected '=' or '!=' in comparison, found ") + describe(op.kind));
        next();
        Term rhs = term();
        Atom a = op.kind == Tok::Eq ? Atom::eq(std::move(lhs), std::move(rhs)) : Atom::neq(std::move(lhs), std::move(rhs));
        a.span = span;
        return a;
    }

    Term term() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Ident:
            if (!is_variable(t.text))
                throw ParseError(t.span, "expected a term, found '" + t.text + "' (variables start upper-case)");
            return Term::var(next().text);
        case Tok::Int: {
            auto v = to_int(t.text);
            if (!v) throw ParseError(t.span, "integer literal out of range: " + t.text);
            next();
            return Term::constant(interner_.intern_int(*v));
        }
        case Tok::At: {
            next();
            const Token& name = expect(Tok::Ident, "as functor name");
            expect(Tok::LParen, "after functor name");
            return Term::call(name.text, arguments());
        }
        default:
            throw ParseError(t.span, std::string("expected a term, found ") + describe(t.kind));
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Interner& interner_;
};

} // namespace

Program parse_program(std::string_view text, Interner& interner, const std::string& file) {
    return Parser(Lexer(text, file).run(), interner).run();
}

std::vector<Tuple> parse_facts(const std::string& pred, std::size_t arity, std::string_view rows, Interner& interner,
                               const std::string& file) {
    std::vector<Tuple> out;
    std::string fname = file.empty() ? pred + ".facts" : file;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < rows.size()) {
        std::size_t end = rows.find('\n', start);
        if (end == std::string_view::npos) end = rows.size();
        std::string_view line = rows.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        Tuple tuple;
        std::size_t field_start = 0;
        std::size_t column = 1;
        for (;;) {
            std::size_t tab = line.find('\t', field_start);
            std::string_view field = line.substr(field_start, tab == std::string_view::npos ? std::string_view::npos
                                                                                         : tab - field_start);
            auto v = to_int(field);
            if (!v)
                throw ParseError({fname, line_no, column},
                                 "non-integer field '" + std::string(field) + "' in facts for " + pred);
            tuple.push_back(interner.intern_int(*v));
            if (tab == std::string_view::npos) break;
            column = tab + 2;
            field_start = tab + 1;
        }
        if (tuple.size() != arity)
            throw ParseError({fname, line_no, 1}, "arity mismatch in facts for " + pred + ": expected " +
                                                      std::to_string(arity) + " fields, got " + std::to_string(tuple.size()));
        out.push_back(std::move(tuple));
    }
    return out;
}

} // namespace eagerlog
