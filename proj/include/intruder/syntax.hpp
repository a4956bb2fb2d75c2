#pragma once

// Concrete syntax shared by the CLI, problem files and the JSON proof format.
//
//   name      := [a-z][A-Za-z0-9_]*
//   variable  := '?' [A-Za-z_][A-Za-z0-9_#]*
//   term      := sum
//   sum       := product ('+' product)*
//   product   := atom ('*' atom)*
//   atom      := '(' term ')' | '0' | '1' | name | variable | ident '(' term (',' term)* ')'
//
// Both infix operators are left-associative and flattened on construction.

#include <cctype>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "term.hpp"

namespace intruder {

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

namespace detail {

inline bool is_infix(Symbol f) { return f.is_ac() && (f.name() == "+" || f.name() == "*"); }

inline void print_term(std::ostream& os, Term t, Symbol parent) {
    switch (t.kind()) {
        case TermKind::Name: os << t.id(); return;
        case TermKind::Var: os << '?' << t.id(); return;
        case TermKind::App: break;
    }
    Symbol f = t.symbol();
    if (is_infix(f)) {
        bool paren = parent.valid() && is_infix(parent);
        if (paren) os << '(';
        for (std::size_t i = 0; i < t.arity(); ++i) {
            if (i) os << ' ' << f.name() << ' ';
            print_term(os, t.arg(i), f);
        }
        if (paren) os << ')';
        return;
    }
    os << f.name();
    if (t.arity() == 0 && f.arity() == 0) return;
    os << '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ',';
        print_term(os, t.arg(i), Symbol());
    }
    os << ')';
}

}  // namespace detail

inline std::string to_string(Term t) {
    std::ostringstream os;
    detail::print_term(os, t, Symbol());
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, Term t) {
    detail::print_term(os, t, Symbol());
    return os;
}

/// Recursive-descent parser over a single string. Line/column positions are
/// reported relative to `line` and `column_offset`.
class TermParser {
public:
    explicit TermParser(std::string_view text, std::size_t line = 1, std::size_t column_offset = 0)
        : text_(text), line_(line), offset_(column_offset) {}

    Term parse_term() { return parse_sum(); }

    /// Parses a complete term and rejects trailing input.
    Term parse_all() {
        Term t = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return t;
    }

    /// Comma-separated list of terms, possibly empty, up to the end of input.
    std::vector<Term> parse_list() {
        std::vector<Term> out;
        skip_ws();
        if (pos_ == text_.size()) return out;
        out.push_back(parse_sum());
        skip_ws();
        while (peek() == ',') {
            ++pos_;
            out.push_back(parse_sum());
            skip_ws();
        }
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return out;
    }

    bool at_end() {
        skip_ws();
        return pos_ == text_.size();
    }
    std::size_t position() const { return pos_; }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, offset_ + pos_ + 1);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    Symbol infix(const char* name) const {
        Symbol f = Symbol::find(name);
        if (!f.valid() || !f.is_ac()) fail(std::string("operator '") + name + "' is not declared");
        return f;
    }

    Term parse_sum() {
        Term lhs = parse_product();
        while (peek() == '+') {
            ++pos_;
            Term rhs = parse_product();
            lhs = Term::app(infix("+"), {lhs, rhs});
        }
        return lhs;
    }

    Term parse_product() {
        Term lhs = parse_atom();
        while (peek() == '*') {
            ++pos_;
            Term rhs = parse_atom();
            lhs = Term::app(infix("*"), {lhs, rhs});
        }
        return lhs;
    }

    std::string identifier(bool allow_hash) {
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || (allow_hash && c == '#'))
                ++pos_;
            else
                break;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    Term parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Term t = parse_sum();
            expect(')');
            return t;
        }
        if (c == '?') {
            ++pos_;
            std::string id = identifier(true);
            if (id.empty() || std::isdigit(static_cast<unsigned char>(id[0]))) fail("malformed variable");
            return Term::var(id);
        }
        if (c == '0' || c == '1') {
            ++pos_;
            Symbol f = Symbol::find(std::string(1, c));
            return Term::app(f, {});
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) {
            if (c == '\0') fail("unexpected end of input");
            fail(std::string("unexpected '") + c + "'");
        }
        std::size_t start = pos_;
        std::string id = identifier(false);
        if (peek() != '(') {
            if (!std::islower(static_cast<unsigned char>(id[0]))) {
                pos_ = start;
                fail("names must start with a lowercase letter");
            }
            return Term::name(id);
        }
        Symbol f = Symbol::find(id);
        if (!f.valid()) {
            pos_ = start;
            fail("unknown function symbol '" + id + "'");
        }
        ++pos_;
        std::vector<Term> args;
        if (peek() != ')') {
            args.push_back(parse_sum());
            while (peek() == ',') {
                ++pos_;
                args.push_back(parse_sum());
            }
        }
        expect(')');
        if (f.is_ac() && args.size() >= 2) return Term::ac(f, std::move(args));
        if (args.size() != f.arity()) {
            pos_ = start;
            fail("'" + id + "' expects " + std::to_string(f.arity()) + " argument(s)");
        }
        return Term::app(f, std::move(args));
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t offset_;
    std::size_t pos_ = 0;
};

inline Term parse_term(std::string_view text) { return TermParser(text).parse_all(); }

inline std::vector<Term> parse_term_list(std::string_view text) { return TermParser(text).parse_list(); }

}  // namespace intruder
