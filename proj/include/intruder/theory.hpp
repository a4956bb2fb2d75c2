#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "substitution.hpp"
#include "syntax.hpp"
#include "term.hpp"

namespace intruder {

struct RewriteRule {
    Term lhs;
    Term rhs;

    RewriteRule(Term l, Term r) : lhs(l), rhs(r) {
        TermSet lv = vars_of(lhs);
        for (Term x : vars_of(rhs))
            if (!lv.count(x))
                throw Error("rewrite rule " + to_string(lhs) + " -> " + to_string(rhs) +
                            ": variable " + to_string(x) + " does not occur in the left-hand side");
    }
};

/// Strategy used by the elementary-deduction module for a constituent theory.
enum class Backend { Empty, AC, XOR, AG, None };

inline const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Empty: return "empty";
        case Backend::AC: return "ac";
        case Backend::XOR: return "xor";
        case Backend::AG: return "ag";
        case Backend::None: return "none";
    }
    return "?";
}

/// One AC-convergent constituent theory: its signature, at most one AC
/// operator, and the rewrite rules (applied modulo AC).
class Theory {
public:
    Theory(std::string id, std::vector<Symbol> symbols, std::vector<RewriteRule> rules, Backend backend)
        : id_(std::move(id)), symbols_(std::move(symbols)), rules_(std::move(rules)), backend_(backend) {
        for (Symbol f : symbols_) {
            if (f.is_constructor())
                throw Error("theory " + id_ + ": constructor '" + f.name() + "' cannot be an equational symbol");
            if (f.is_ac()) {
                if (ac_.valid()) throw Error("theory " + id_ + ": more than one AC symbol");
                ac_ = f;
            }
        }
        for (const RewriteRule& r : rules_) {
            check_signature(r.lhs);
            check_signature(r.rhs);
        }
    }

    const std::string& id() const { return id_; }
    /// Identifier qualified by the AC operator, e.g. "xor(+)"; unique within a
    /// valid combination.
    std::string key() const { return has_ac() ? id_ + "(" + ac_.name() + ")" : id_; }
    const std::vector<Symbol>& symbols() const { return symbols_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }
    Backend backend() const { return backend_; }
    bool has_ac() const { return ac_.valid(); }
    Symbol ac_symbol() const { return ac_; }

    bool has_symbol(Symbol f) const {
        return std::find(symbols_.begin(), symbols_.end(), f) != symbols_.end();
    }

    /// Nullary symbol that is the neutral element, when the theory has one.
    std::optional<Symbol> unit() const {
        for (Symbol f : symbols_)
            if (f.arity() == 0) return f;
        return std::nullopt;
    }

    std::optional<Symbol> inverse() const {
        for (Symbol f : symbols_)
            if (f.arity() == 1) return f;
        return std::nullopt;
    }

private:
    void check_signature(Term t) const {
        if (!t.is_app()) return;
        if (!t.symbol().is_constructor() && !has_symbol(t.symbol()))
            throw Error("theory " + id_ + ": rule uses foreign symbol '" + t.symbol().name() + "'");
        for (Term a : t.args()) check_signature(a);
    }

    std::string id_;
    std::vector<Symbol> symbols_;
    std::vector<RewriteRule> rules_;
    Backend backend_;
    Symbol ac_;
};

namespace theories {

inline Symbol plus() { return Symbol::find("+"); }
inline Symbol times() { return Symbol::find("*"); }

inline Theory empty() { return Theory("empty", {}, {}, Backend::Empty); }

inline Theory ac(Symbol op = plus()) { return Theory("ac", {op}, {}, Backend::AC); }

inline Theory exclusive_or(Symbol op = plus()) {
    Term x = Term::var("x");
    Term zero = Term::app(Symbol::find("0"), {});
    return Theory("xor", {op, zero.symbol()},
                  {RewriteRule(Term::app(op, {x, x}), zero), RewriteRule(Term::app(op, {x, zero}), x)},
                  Backend::XOR);
}

inline Theory abelian_group(Symbol op = plus()) {
    Term x = Term::var("x"), y = Term::var("y");
    Symbol inv = Symbol::find("inv");
    Term one = Term::app(Symbol::find("1"), {});
    auto sum = [&](Term a, Term b) { return Term::app(op, {a, b}); };
    auto neg = [&](Term a) { return Term::app(inv, {a}); };
    return Theory("ag", {op, one.symbol(), inv},
                  {RewriteRule(sum(x, one), x), RewriteRule(sum(x, neg(x)), one), RewriteRule(neg(one), one),
                   RewriteRule(neg(neg(x)), x), RewriteRule(neg(sum(x, y)), sum(neg(x), neg(y))),
                   RewriteRule(sum(sum(x, neg(x)), y), y)},
                  Backend::AG);
}

/// Looks up a built-in theory by its CLI name, instantiated over `op`.
inline Theory by_name(const std::string& name, Symbol op = plus()) {
    if (name == "empty") return empty();
    if (name == "ac") return ac(op);
    if (name == "xor") return exclusive_or(op);
    if (name == "ag") return abelian_group(op);
    throw Error("unknown theory '" + name + "' (expected empty, ac, xor or ag)");
}

}  // namespace theories

inline std::vector<Theory> builtin_theories() {
    return {theories::empty(), theories::ac(), theories::exclusive_or(), theories::abelian_group()};
}

/// Disjoint combination E = E_1 ⊎ ... ⊎ E_n of constituent theories.
class Combination {
public:
    Combination() = default;
    Combination(Theory th) : parts_{std::move(th)} { validate(); }  // NOLINT: implicit by intent
    explicit Combination(std::vector<Theory> parts) : parts_(std::move(parts)) { validate(); }

    const std::vector<Theory>& parts() const { return parts_; }

    bool has_symbol(Symbol f) const { return theory_of(f) != nullptr; }

    const Theory* theory_of(Symbol f) const {
        for (const Theory& th : parts_)
            if (th.has_symbol(f)) return &th;
        return nullptr;
    }

    /// Lookup by key() or, when unambiguous, by plain id.
    const Theory* find(const std::string& name) const {
        const Theory* hit = nullptr;
        for (const Theory& th : parts_) {
            if (th.key() == name) return &th;
            if (th.id() == name) {
                if (hit) return nullptr;
                hit = &th;
            }
        }
        return hit;
    }

    std::vector<const RewriteRule*> rules() const {
        std::vector<const RewriteRule*> out;
        for (const Theory& th : parts_)
            for (const RewriteRule& r : th.rules()) out.push_back(&r);
        return out;
    }

    /// Throws when `t` uses a symbol that is neither a constructor nor in Σ_E.
    void check_term(Term t) const {
        if (!t.is_app()) return;
        Symbol f = t.symbol();
        if (!f.is_constructor() && !has_symbol(f))
            throw Error("symbol '" + f.name() + "' in " + to_string(t) + " is not in the selected theories");
        for (Term a : t.args()) check_term(a);
    }

    std::string describe() const {
        if (parts_.empty()) return "empty";
        std::string out;
        for (const Theory& th : parts_) {
            if (!out.empty()) out += " + ";
            out += th.id();
            if (th.has_ac()) out += "(" + th.ac_symbol().name() + ")";
        }
        return out;
    }

private:
    void validate() const {
        for (std::size_t i = 0; i < parts_.size(); ++i)
            for (std::size_t j = i + 1; j < parts_.size(); ++j) {
                if (parts_[i].id() == parts_[j].id() && parts_[i].id() == "empty") continue;
                for (Symbol f : parts_[i].symbols())
                    if (parts_[j].has_symbol(f))
                        throw Error("theories " + parts_[i].id() + " and " + parts_[j].id() +
                                    " share symbol '" + f.name() + "'");
            }
    }

    std::vector<Theory> parts_;
};

/// Builds a combination from CLI theory names; the k-th AC theory gets the
/// k-th reserved operator ('+', then '*').
inline Combination combination_from_names(const std::vector<std::string>& names) {
    std::vector<Theory> parts;
    const Symbol ops[] = {theories::plus(), theories::times()};
    std::size_t next_op = 0;
    for (const std::string& n : names) {
        if (n == "empty") {
            parts.push_back(theories::empty());
            continue;
        }
        if (next_op >= 2) throw Error("at most two AC theories can be combined ('+' and '*')");
        parts.push_back(theories::by_name(n, ops[next_op++]));
    }
    return Combination(std::move(parts));
}

}  // namespace intruder
