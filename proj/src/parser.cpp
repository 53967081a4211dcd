#include "flc/parser.hpp"

#include <cctype>
#include <optional>
#include <utility>
#include <vector>

namespace flc {

ParseError::ParseError(SourceSpan span, std::string message, std::string expected)
    : std::runtime_error("line " + std::to_string(span.line) + ", column " + std::to_string(span.column) + ": " +
                         message + (expected.empty() ? "" : " (expected " + expected + ")")),
      span_(span),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

namespace {

enum class Tok {
    Ident,
    Int,
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Slash,
    Star,
    Tilde,
    Amp,
    Bar,
    Arrow,      // ->
    RevArrow,   // <-
    BiArrow,    // <->
    Eq,         // =
    EqEq,       // ==
    EqEqEq,     // ===
    Newline,
    End,
};

const char* tok_name(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Slash: return "'/'";
    case Tok::Star: return "'*'";
    case Tok::Tilde: return "'~'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::RevArrow: return "'<-'";
    case Tok::BiArrow: return "'<->'";
    case Tok::Eq: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::EqEqEq: return "'==='";
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
    }
    return "token";
}

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto span_at = [&](std::size_t b, std::size_t e, std::size_t l, std::size_t c) { return SourceSpan{l, c, b, e}; };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            out.push_back({Tok::Newline, "\n", span_at(i, i + 1, line, col)});
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        std::size_t b = i, bl = line, bc = col;
        auto emit = [&](Tok k, std::size_t len) {
            out.push_back({k, std::string(text.substr(b, len)), span_at(b, b + len, bl, bc)});
            i += len;
            col += len;
        };
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size()) {
                if (ident_char(text[j])) {
                    ++j;
                } else if (text[j] == '-' && j + 1 < text.size() && ident_char(text[j + 1])) {
                    j += 2;  // hyphenated names such as VIII-nostrict
                } else {
                    break;
                }
            }
            emit(Tok::Ident, j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            emit(Tok::Int, j - i);
            continue;
        }
        auto rest = text.substr(i);
        if (rest.starts_with("<->")) { emit(Tok::BiArrow, 3); continue; }
        if (rest.starts_with("<-")) { emit(Tok::RevArrow, 2); continue; }
        if (rest.starts_with("->")) { emit(Tok::Arrow, 2); continue; }
        if (rest.starts_with("===")) { emit(Tok::EqEqEq, 3); continue; }
        if (rest.starts_with("==")) { emit(Tok::EqEq, 2); continue; }
        switch (c) {
        case '=': emit(Tok::Eq, 1); continue;
        case '(': emit(Tok::LParen, 1); continue;
        case ')': emit(Tok::RParen, 1); continue;
        case ',': emit(Tok::Comma, 1); continue;
        case '.': emit(Tok::Dot, 1); continue;
        case ':': emit(Tok::Colon, 1); continue;
        case '/': emit(Tok::Slash, 1); continue;
        case '*': emit(Tok::Star, 1); continue;
        case '~': emit(Tok::Tilde, 1); continue;
        case '&': emit(Tok::Amp, 1); continue;
        case '|': emit(Tok::Bar, 1); continue;
        default: break;
        }
        std::size_t len = 1;
        auto uc = static_cast<unsigned char>(c);
        if (uc >= 0x80) {
            // Report a whole UTF-8 sequence.
            while (i + len < text.size() && (static_cast<unsigned char>(text[i + len]) & 0xC0) == 0x80) ++len;
        }
        throw ParseError(span_at(b, b + len, bl, bc), "unexpected character '" + std::string(text.substr(b, len)) + "'");
    }
    out.push_back({Tok::End, "", span_at(text.size(), text.size(), line, col)});
    return out;
}

bool is_reserved(std::string_view s) {
    static constexpr std::string_view kReserved[] = {"all", "ex", "rall", "rex", "theory", "sig",
                                                     "axiom", "E", "I", "dom", "cod", "comp"};
    for (auto r : kReserved)
        if (r == s) return true;
    return false;
}

bool is_eq_tok(Tok t) { return t == Tok::Eq || t == Tok::EqEq || t == Tok::EqEqEq; }

class Parser {
public:
    Parser(std::vector<Token> toks, Signature sig) : toks_(std::move(toks)), sig_(std::move(sig)) {}

    Theory theory() {
        skip_newlines();
        expect_keyword("theory");
        const Token& name = expect(Tok::Ident, "theory name");
        Theory t;
        t.name = name.text;
        end_of_line();
        while (true) {
            skip_newlines();
            if (peek().kind == Tok::End) break;
            const Token& kw = peek();
            if (kw.kind == Tok::Ident && kw.text == "sig") {
                advance();
                bool any = false;
                while (peek().kind == Tok::Ident) {
                    const Token& fn = advance();
                    check_symbol_name(fn);
                    expect(Tok::Slash, "'/'");
                    const Token& ar = expect(Tok::Int, "arity");
                    int arity = 0;
                    try {
                        arity = std::stoi(ar.text);
                    } catch (const std::exception&) {
                        throw ParseError(ar.span, "arity out of range");
                    }
                    try {
                        t.signature.declare(fn.text, arity);
                    } catch (const WellFormednessError& e) {
                        throw ParseError(fn.span, e.what());
                    }
                    any = true;
                }
                if (!any) throw ParseError(peek().span, "empty signature line", "NAME/ARITY");
                sig_ = t.signature;
                end_of_line();
            } else if (kw.kind == Tok::Ident && kw.text == "axiom") {
                advance();
                const Token& label = expect(Tok::Ident, "axiom label");
                if (label.text.find('-') != std::string::npos)
                    throw ParseError(label.span, "axiom labels may not contain '-'");
                expect(Tok::Colon, "':'");
                Formula f = formula();
                if (t.find(label.text)) throw ParseError(label.span, "duplicate axiom label '" + label.text + "'");
                t.axioms.push_back({label.text, std::move(f)});
                end_of_line();
            } else {
                throw ParseError(kw.span, "unexpected " + describe(kw), "'sig' or 'axiom'");
            }
        }
        return t;
    }

    Formula single_formula() {
        skip_newlines();
        Formula f = formula();
        skip_newlines();
        if (peek().kind != Tok::End) throw ParseError(peek().span, "trailing input " + describe(peek()), "end of formula");
        return f;
    }

    Term single_term() {
        skip_newlines();
        Term t = term();
        skip_newlines();
        if (peek().kind != Tok::End) throw ParseError(peek().span, "trailing input " + describe(peek()), "end of term");
        return t;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Signature sig_;

    const Token& peek(std::size_t k = 0) const {
        std::size_t i = pos_ + k;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& advance() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    static std::string describe(const Token& t) {
        if (t.kind == Tok::Ident || t.kind == Tok::Int) return std::string(tok_name(t.kind)) + " '" + t.text + "'";
        return tok_name(t.kind);
    }
    const Token& expect(Tok k, const std::string& what) {
        if (peek().kind != k) throw ParseError(peek().span, "unexpected " + describe(peek()), what);
        return advance();
    }
    void expect_keyword(const std::string& kw) {
        if (peek().kind != Tok::Ident || peek().text != kw)
            throw ParseError(peek().span, "unexpected " + describe(peek()), "'" + kw + "'");
        advance();
    }
    void skip_newlines() {
        while (peek().kind == Tok::Newline) advance();
    }
    void end_of_line() {
        if (peek().kind == Tok::End) return;
        expect(Tok::Newline, "end of line");
    }
    void check_symbol_name(const Token& t) const {
        if (is_reserved(t.text) && t.text != kDom && t.text != kCod && t.text != kComp)
            throw ParseError(t.span, "reserved word '" + t.text + "' used as a name");
        if (t.text.find('-') != std::string::npos) throw ParseError(t.span, "names may not contain '-'");
    }

    // formula := imp ('<->' formula)?
    Formula formula() {
        Formula l = imp();
        if (peek().kind == Tok::BiArrow) {
            advance();
            return iff(std::move(l), formula());
        }
        return l;
    }

    Formula imp() {
        Formula l = disjunction();
        if (peek().kind == Tok::Arrow) {
            advance();
            return implies(std::move(l), imp());
        }
        if (peek().kind == Tok::RevArrow) {
            advance();
            return implied(std::move(l), imp());
        }
        return l;
    }

    Formula disjunction() {
        Formula l = conjunction();
        if (peek().kind == Tok::Bar) {
            advance();
            return disj(std::move(l), disjunction());
        }
        return l;
    }

    Formula conjunction() {
        Formula l = unary();
        if (peek().kind == Tok::Amp) {
            advance();
            return conj(std::move(l), conjunction());
        }
        return l;
    }

    Formula unary() {
        const Token& t = peek();
        if (t.kind == Tok::Tilde) {
            advance();
            return neg(unary());
        }
        if (t.kind == Tok::Ident) {
            std::optional<FormulaKind> q;
            if (t.text == "all") q = FormulaKind::ForallE;
            else if (t.text == "ex") q = FormulaKind::ExistsE;
            else if (t.text == "rall") q = FormulaKind::ForallAll;
            else if (t.text == "rex") q = FormulaKind::ExistsAll;
            if (q) {
                advance();
                const Token& v = expect(Tok::Ident, "variable");
                check_variable_name(v);
                expect(Tok::Dot, "'.'");
                return quantifier(*q, v.text, formula());
            }
        }
        return primary();
    }

    std::size_t matching_paren(std::size_t open) const {
        int depth = 0;
        for (std::size_t i = open; i < toks_.size(); ++i) {
            if (toks_[i].kind == Tok::LParen) ++depth;
            else if (toks_[i].kind == Tok::RParen && --depth == 0) return i;
            else if (toks_[i].kind == Tok::Newline || toks_[i].kind == Tok::End) break;
        }
        throw ParseError(toks_[open].span, "unbalanced parenthesis", "')'");
    }

    Formula primary() {
        const Token& t = peek();
        if (t.kind == Tok::Ident && (t.text == "E" || t.text == "I")) {
            bool is_e = t.text == "E";
            advance();
            expect(Tok::LParen, "'('");
            Term arg = term();
            expect(Tok::RParen, "')'");
            return is_e ? exists_atom(std::move(arg)) : identity(std::move(arg));
        }
        if (t.kind == Tok::LParen) {
            std::size_t close = matching_paren(pos_);
            Tok after = close + 1 < toks_.size() ? toks_[close + 1].kind : Tok::End;
            if (!is_eq_tok(after) && after != Tok::Star) {
                advance();
                Formula f = formula();
                expect(Tok::RParen, "')'");
                return f;
            }
        }
        if (t.kind != Tok::Ident && t.kind != Tok::LParen) throw ParseError(t.span, "unexpected " + describe(t), "formula");
        return equation();
    }

    Formula equation() {
        Term l = term();
        const Token& op = peek();
        if (!is_eq_tok(op.kind)) throw ParseError(op.span, "unexpected " + describe(op), "'=', '==' or '==='");
        advance();
        Term r = term();
        switch (op.kind) {
        case Tok::Eq: return raw_eq(std::move(l), std::move(r));
        case Tok::EqEq: return kleene_eq(std::move(l), std::move(r));
        default: return ex_eq(std::move(l), std::move(r));
        }
    }

    // term := primary ('*' term)?
    Term term() {
        Term l = term_primary();
        if (peek().kind == Tok::Star) {
            advance();
            return comp(std::move(l), term());
        }
        return l;
    }

    Term term_primary() {
        const Token& t = peek();
        if (t.kind == Tok::LParen) {
            advance();
            Term inner = term();
            expect(Tok::RParen, "')'");
            return inner;
        }
        const Token& name = expect(Tok::Ident, "term");
        if (peek().kind == Tok::LParen) {
            auto arity = sig_.arity(name.text);
            if (!arity) throw ParseError(name.span, "unknown function symbol '" + name.text + "'");
            advance();
            std::vector<Term> args;
            if (peek().kind != Tok::RParen) {
                args.push_back(term());
                while (peek().kind == Tok::Comma) {
                    advance();
                    args.push_back(term());
                }
            }
            const Token& close = expect(Tok::RParen, "')'");
            if (static_cast<std::size_t>(*arity) != args.size()) {
                SourceSpan s = name.span;
                s.end = close.span.end;
                throw ParseError(s, "'" + name.text + "' expects " + std::to_string(*arity) + " argument(s), got " +
                                        std::to_string(args.size()));
            }
            return Term::app(name.text, std::move(args));
        }
        if (auto arity = sig_.arity(name.text)) {
            if (*arity != 0)
                throw ParseError(name.span, "'" + name.text + "' expects " + std::to_string(*arity) + " argument(s)");
            return Term::app(name.text);
        }
        check_variable_name(name);
        return Term::var(name.text);
    }

    void check_variable_name(const Token& v) const {
        if (is_reserved(v.text)) throw ParseError(v.span, "reserved word '" + v.text + "' used as a variable");
        if (v.text.find('-') != std::string::npos) throw ParseError(v.span, "variable names may not contain '-'");
        if (sig_.contains(v.text)) throw ParseError(v.span, "'" + v.text + "' is a function symbol, not a variable");
    }
};

// ---------------------------------------------------------------------------
// Printing

int precedence(FormulaKind k) {
    switch (k) {
    case FormulaKind::Iff: return 1;
    case FormulaKind::Implies:
    case FormulaKind::Implied: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    default: return 5;
    }
}

const char* binary_op(FormulaKind k) {
    switch (k) {
    case FormulaKind::Iff: return " <-> ";
    case FormulaKind::Implies: return " -> ";
    case FormulaKind::Implied: return " <- ";
    case FormulaKind::Or: return " | ";
    case FormulaKind::And: return " & ";
    default: return " ? ";
    }
}

void print_term(const Term& t, std::string& out, bool left_of_star) {
    if (t.is_var()) {
        out += t.name;
        return;
    }
    if (t.name == kComp && t.args.size() == 2) {
        if (left_of_star) out += '(';
        print_term(t.args[0], out, true);
        out += " * ";
        print_term(t.args[1], out, false);
        if (left_of_star) out += ')';
        return;
    }
    out += t.name;
    if (t.args.empty()) return;
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        print_term(t.args[i], out, false);
    }
    out += ')';
}

// `tail_safe` is false when more formula text follows at the same
// parenthesis level, in which case a trailing quantifier must be wrapped.
void print_formula(const Formula& f, std::string& out, int min_prec, bool tail_safe) {
    switch (f.kind) {
    case FormulaKind::Exists:
    case FormulaKind::Identity:
        out += f.kind == FormulaKind::Exists ? "E(" : "I(";
        print_term(f.terms[0], out, false);
        out += ')';
        return;
    case FormulaKind::RawEq:
    case FormulaKind::KleeneEq:
    case FormulaKind::ExEq:
        print_term(f.terms[0], out, false);
        out += f.kind == FormulaKind::RawEq ? " = " : f.kind == FormulaKind::KleeneEq ? " == " : " === ";
        print_term(f.terms[1], out, false);
        return;
    case FormulaKind::Not:
        out += '~';
        print_formula(f.subs[0], out, 5, tail_safe);
        return;
    case FormulaKind::ForallE:
    case FormulaKind::ForallAll:
    case FormulaKind::ExistsE:
    case FormulaKind::ExistsAll: {
        const char* kw = f.kind == FormulaKind::ForallE     ? "all "
                         : f.kind == FormulaKind::ForallAll ? "rall "
                         : f.kind == FormulaKind::ExistsE   ? "ex "
                                                            : "rex ";
        if (!tail_safe) out += '(';
        out += kw;
        out += f.var;
        out += ". ";
        print_formula(f.subs[0], out, 1, true);
        if (!tail_safe) out += ')';
        return;
    }
    default: {
        int p = precedence(f.kind);
        bool paren = p < min_prec;
        if (paren) {
            out += '(';
            tail_safe = true;
        }
        print_formula(f.subs[0], out, p + 1, false);
        out += binary_op(f.kind);
        print_formula(f.subs[1], out, p, tail_safe);
        if (paren) out += ')';
        return;
    }
    }
}

}  // namespace

Theory parse_theory(std::string_view text) {
    Parser p(lex(text), Signature{});
    return p.theory();
}

Formula parse_formula(std::string_view text, const Signature& sig) {
    Parser p(lex(text), sig);
    return p.single_formula();
}

Term parse_term(std::string_view text, const Signature& sig) {
    Parser p(lex(text), sig);
    return p.single_term();
}

std::string format_term(const Term& t) {
    std::string out;
    print_term(t, out, false);
    return out;
}

std::string format_formula(const Formula& f) {
    std::string out;
    print_formula(f, out, 1, true);
    return out;
}

std::string pretty_print(const Theory& t) {
    std::string out = "theory " + t.name + "\n";
    auto user = t.signature.user_symbols();
    if (!user.empty()) {
        out += "sig";
        for (const auto& s : user) out += " " + s.name + "/" + std::to_string(s.arity);
        out += "\n";
    }
    for (const auto& a : t.axioms) out += "axiom " + a.label + ": " + format_formula(a.formula) + "\n";
    return out;
}

}  // namespace flc
