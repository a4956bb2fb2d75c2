#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rewrite.hpp"
#include "subterms.hpp"
#include "term.hpp"
#include "theory.hpp"

namespace intruder {

/// The v_E table of one problem instance: each class of E-normal forms gets
/// its own variable ?#v1, ?#v2, ...
class Abstraction {
public:
    Term variable_for(Term normal_form) {
        auto it = table_.find(normal_form);
        if (it != table_.end()) return it->second;
        Term v = Term::var("#v" + std::to_string(order_.size() + 1));
        table_.emplace(normal_form, v);
        order_.push_back(normal_form);
        return v;
    }

    std::optional<Term> class_of(Term var) const {
        const std::string& id = var.id();
        if (!var.is_var() || id.rfind("#v", 0) != 0) return std::nullopt;
        std::size_t k = std::stoul(id.substr(2));
        if (k == 0 || k > order_.size()) return std::nullopt;
        return order_[k - 1];
    }

    std::size_t size() const { return order_.size(); }

private:
    std::unordered_map<Term, Term> table_;
    std::vector<Term> order_;
};

/// F_{E_i}: keeps names, variables and Σ_{E_i} symbols; replaces every
/// E_i-alien subterm by the variable of its normal-form class. When no
/// normalizer is given the alien subterms are assumed to be normal already.
inline Term abstract(Term t, const Theory& th, Abstraction& table, Normalizer* norm = nullptr) {
    if (!t.is_app()) return t;
    if (!th.has_symbol(t.symbol())) return table.variable_for(norm ? norm->normalize(t) : t);
    std::vector<Term> args;
    args.reserve(t.arity());
    for (Term a : t.args()) args.push_back(abstract(a, th, table, norm));
    return rebuild(t, std::move(args));
}

/// Inverse of `abstract` for variables allocated by `table`.
inline Term concretize(Term t, const Abstraction& table) {
    if (t.is_var()) {
        if (auto c = table.class_of(t)) return *c;
        return t;
    }
    if (!t.is_app()) return t;
    std::vector<Term> args;
    for (Term a : t.args()) args.push_back(concretize(a, table));
    return rebuild(t, std::move(args));
}

inline bool is_pure(Term t, const Theory& th) {
    if (!t.is_app()) return true;
    if (!th.has_symbol(t.symbol())) return false;
    for (Term a : t.args())
        if (!is_pure(a, th)) return false;
    return true;
}

}  // namespace intruder
