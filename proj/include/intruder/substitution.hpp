#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "syntax.hpp"
#include "term.hpp"

namespace intruder {

using TermSet = std::set<Term, TermLess>;

/// Finite map from variables to terms, applied in postfix style: t·σ.
class Substitution {
public:
    Substitution() = default;

    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    bool binds(Term x) const { return map_.count(x) != 0; }

    std::optional<Term> lookup(Term x) const {
        auto it = map_.find(x);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void bind(Term x, Term t) {
        if (!x.is_var()) throw Error("substitution domain must be variables");
        map_[x] = t;
    }

    Term apply(Term t) const {
        if (map_.empty() || t.is_ground()) return t;
        if (t.is_var()) {
            auto it = map_.find(t);
            return it == map_.end() ? t : it->second;
        }
        if (t.is_name()) return t;
        std::vector<Term> args;
        args.reserve(t.arity());
        for (Term a : t.args()) args.push_back(apply(a));
        return rebuild(t, std::move(args));
    }

    /// t·(this ∘ other) = (t·this)·other
    Substitution then(const Substitution& other) const {
        Substitution out;
        for (const auto& [x, t] : map_) out.map_[x] = other.apply(t);
        for (const auto& [x, t] : other.map_)
            if (!map_.count(x)) out.map_[x] = t;
        return out;
    }

    /// Restriction to the given variables.
    Substitution restrict(const TermSet& vars) const {
        Substitution out;
        for (const auto& [x, t] : map_)
            if (vars.count(x)) out.map_[x] = t;
        return out;
    }

    const std::map<Term, Term, TermLess>& bindings() const { return map_; }

    friend bool operator==(const Substitution& a, const Substitution& b) { return a.map_ == b.map_; }
    friend bool operator<(const Substitution& a, const Substitution& b) {
        return std::lexicographical_compare(
            a.map_.begin(), a.map_.end(), b.map_.begin(), b.map_.end(), [](const auto& x, const auto& y) {
                int c = compare(x.first, y.first);
                if (c != 0) return c < 0;
                return compare(x.second, y.second) < 0;
            });
    }

private:
    std::map<Term, Term, TermLess> map_;
};

inline std::string to_string(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [x, t] : s.bindings()) {
        if (!first) out += ", ";
        first = false;
        out += to_string(x) + " -> " + to_string(t);
    }
    return out + "}";
}

inline void collect_vars(Term t, TermSet& out) {
    if (t.is_ground()) return;
    if (t.is_var()) {
        out.insert(t);
        return;
    }
    for (Term a : t.args()) collect_vars(a, out);
}

inline TermSet vars_of(Term t) {
    TermSet out;
    collect_vars(t, out);
    return out;
}

inline bool occurs(Term x, Term t) {
    if (t.is_ground()) return false;
    if (t == x) return true;
    if (!t.is_app()) return false;
    for (Term a : t.args())
        if (occurs(x, a)) return true;
    return false;
}

}  // namespace intruder
