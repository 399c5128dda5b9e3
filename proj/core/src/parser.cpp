#include "grushin/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <optional>

namespace grushin {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind = Tok::End;
    std::size_t offset = 0;
    double number = 0.0;
    std::string ident;
};

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.offset = pos_;
        if (pos_ >= text_.size()) {
            tok_.kind = Tok::End;
            return;
        }
        const char c = text_[pos_];
        switch (c) {
            case '+': tok_.kind = Tok::Plus; ++pos_; return;
            case '-': tok_.kind = Tok::Minus; ++pos_; return;
            case '*': tok_.kind = Tok::Star; ++pos_; return;
            case '/': tok_.kind = Tok::Slash; ++pos_; return;
            case '^': tok_.kind = Tok::Caret; ++pos_; return;
            case '(': tok_.kind = Tok::LParen; ++pos_; return;
            case ')': tok_.kind = Tok::RParen; ++pos_; return;
            case ',': tok_.kind = Tok::Comma; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = 0.0;
            const char* begin = text_.data() + pos_;
            const char* end = text_.data() + text_.size();
            auto res = std::from_chars(begin, end, value);
            if (res.ec != std::errc() || res.ptr == begin) {
                throw ParseError({pos_, {"number"}, "malformed numeric literal"});
            }
            tok_.kind = Tok::Number;
            tok_.number = value;
            pos_ = static_cast<std::size_t>(res.ptr - text_.data());
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            tok_.kind = Tok::Ident;
            tok_.ident = std::string(text_.substr(start, pos_ - start));
            return;
        }
        throw ParseError({pos_, {}, std::string("unexpected character '") + c + "'"});
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token tok_;
};

/// Folds a parsed subtree down to a complex constant when possible.
std::optional<std::complex<double>> fold_const(const FieldExpr& e) {
    switch (e.kind()) {
        case FieldKind::Const:
            return e.constant();
        case FieldKind::Neg: {
            auto a = fold_const(e.child(0));
            if (!a) return std::nullopt;
            return -*a;
        }
        case FieldKind::Add:
        case FieldKind::Sub:
        case FieldKind::Mul:
        case FieldKind::Div: {
            auto a = fold_const(e.child(0));
            auto b = fold_const(e.child(1));
            if (!a || !b) return std::nullopt;
            switch (e.kind()) {
                case FieldKind::Add: return *a + *b;
                case FieldKind::Sub: return *a - *b;
                case FieldKind::Mul: return *a * *b;
                default: return *a / *b;
            }
        }
        case FieldKind::Pow: {
            auto a = fold_const(e.child(0));
            if (!a || a->imag() != 0.0) return std::nullopt;
            return std::complex<double>(std::pow(a->real(), e.param()), 0.0);
        }
        default:
            return std::nullopt;
    }
}

class Parser {
  public:
    explicit Parser(std::string_view text) : lex_(text) {}

    FieldExpr run() {
        FieldExpr e = expr();
        if (lex_.peek().kind != Tok::End) {
            throw ParseError({lex_.peek().offset, {"operator", "end of input"},
                              "unexpected trailing input"});
        }
        return e;
    }

  private:
    FieldExpr expr() {
        FieldExpr e = term();
        while (true) {
            const Tok k = lex_.peek().kind;
            if (k == Tok::Plus) {
                lex_.take();
                e = e + term();
            } else if (k == Tok::Minus) {
                lex_.take();
                e = e - term();
            } else {
                return e;
            }
        }
    }

    FieldExpr term() {
        FieldExpr e = factor();
        while (true) {
            const Tok k = lex_.peek().kind;
            if (k == Tok::Star) {
                lex_.take();
                e = e * factor();
            } else if (k == Tok::Slash) {
                lex_.take();
                e = e / factor();
            } else {
                return e;
            }
        }
    }

    FieldExpr factor() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            FieldExpr inner = factor();
            // Fold a negated real literal into the constant so that the
            // canonical printer round-trips.
            if (inner.kind() == FieldKind::Const && inner.constant().imag() == 0.0)
                return constant(-inner.constant().real());
            return -inner;
        }
        return power();
    }

    FieldExpr power() {
        FieldExpr base = atom();
        if (lex_.peek().kind != Tok::Caret) return base;
        const Token caret = lex_.take();
        FieldExpr rhs = factor();  // right-associative via recursion
        return pow(std::move(base), fold_exponent(rhs, caret.offset));
    }

    double fold_exponent(const FieldExpr& rhs, std::size_t offset) {
        auto c = fold_const(rhs);
        if (!c || c->imag() != 0.0) {
            throw ParseError({offset, {"real constant"},
                              "exponent must fold to a real constant"});
        }
        return c->real();
    }

    FieldExpr atom() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Tok::Number:
                lex_.take();
                return constant(t.number);
            case Tok::LParen: {
                lex_.take();
                FieldExpr e = expr();
                expect_rparen();
                return e;
            }
            case Tok::Ident:
                lex_.take();
                return ident_atom(t);
            default:
                throw ParseError({t.offset, {"expression"}, "expected an expression"});
        }
    }

    void expect_rparen() {
        const Token t = lex_.peek();
        if (t.kind != Tok::RParen)
            throw ParseError({t.offset, {")"}, "expected ')'"});
        lex_.take();
    }

    FieldExpr call_unary(FieldExpr (*build)(FieldExpr), std::size_t offset) {
        if (lex_.peek().kind != Tok::LParen)
            throw ParseError({lex_.peek().offset, {"("}, "expected '(' after function name"});
        lex_.take();
        FieldExpr arg = expr();
        expect_rparen();
        (void)offset;
        return build(std::move(arg));
    }

    FieldExpr ident_atom(const Token& t) {
        const std::string& id = t.ident;
        if (id == "i") return imaginary_unit();
        if (id == "rho") return rho_expr();
        if (id == "absx") return absx_expr();
        if (id == "exp") return call_unary(&exp, t.offset);
        if (id == "log") return call_unary(&log, t.offset);
        if (id == "bump") return call_unary(&bump, t.offset);
        if (id == "pow") {
            if (lex_.peek().kind != Tok::LParen)
                throw ParseError({lex_.peek().offset, {"("}, "expected '(' after pow"});
            lex_.take();
            FieldExpr base = expr();
            const Token comma = lex_.peek();
            if (comma.kind != Tok::Comma)
                throw ParseError({comma.offset, {","}, "pow takes two arguments"});
            lex_.take();
            const std::size_t expo_off = lex_.peek().offset;
            FieldExpr rhs = factor();
            expect_rparen();
            return pow(std::move(base), fold_exponent(rhs, expo_off));
        }
        if (id == "rho_eps") {
            if (lex_.peek().kind != Tok::LParen)
                throw ParseError({lex_.peek().offset, {"("}, "expected '(' after rho_eps"});
            lex_.take();
            const std::size_t arg_off = lex_.peek().offset;
            FieldExpr rhs = factor();
            expect_rparen();
            const double eps = fold_exponent(rhs, arg_off);
            if (!(eps > 0.0))
                throw ParseError({arg_off, {"positive constant"}, "rho_eps needs eps > 0"});
            return rho_eps_expr(eps);
        }
        if ((id[0] == 'x' || id[0] == 'y') && id.size() > 1) {
            bool digits = true;
            for (std::size_t p = 1; p < id.size(); ++p)
                digits = digits && std::isdigit(static_cast<unsigned char>(id[p]));
            if (digits) {
                const int idx = std::stoi(id.substr(1));
                if (idx < 1)
                    throw ParseError({t.offset, {"coordinate index >= 1"},
                                      "coordinate indices are 1-based"});
                return id[0] == 'x' ? coord_x(idx - 1) : coord_y(idx - 1);
            }
        }
        throw ParseError({t.offset,
                          {"x<N>", "y<N>", "rho", "absx", "i", "exp", "log", "bump", "pow",
                           "rho_eps"},
                          "unknown identifier '" + id + "'"});
    }

    Lexer lex_;
};

}  // namespace

FieldExpr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace grushin
