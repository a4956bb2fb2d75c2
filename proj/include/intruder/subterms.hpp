#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "substitution.hpp"
#include "term.hpp"
#include "theory.hpp"

namespace intruder {

inline std::vector<Term> immediate_subterms(Term t) {
    if (!t.is_app()) return {};
    return t.args();
}

namespace detail {

inline void collect_subterms(Term t, TermSet& out) {
    if (!out.insert(t).second) return;
    if (t.is_app())
        for (Term a : t.args()) collect_subterms(a, out);
}

}  // namespace detail

inline TermSet subterms(Term t) {
    TermSet out;
    detail::collect_subterms(t, out);
    return out;
}

inline TermSet proper_subterms(Term t) {
    TermSet out;
    if (t.is_app())
        for (Term a : t.args()) detail::collect_subterms(a, out);
    return out;
}

inline std::size_t size(Term t) { return t.size(); }

inline bool is_e_alien(Term t, const Theory& th) { return t.is_app() && !th.has_symbol(t.symbol()); }

inline bool is_e_alien(Term t, const Combination& e) { return t.is_app() && !e.has_symbol(t.symbol()); }

namespace detail {

inline void collect_factors(Term t, const Theory& th, TermSet& seen, TermSet& out) {
    if (!t.is_app() || !seen.insert(t).second) return;
    if (th.has_symbol(t.symbol())) {
        for (Term a : t.args())
            if (is_e_alien(a, th)) out.insert(a);
    }
    for (Term a : t.args()) collect_factors(a, th, seen, out);
}

}  // namespace detail

/// E-alien subterms occurring directly under a Σ_E-headed subterm.
inline TermSet e_factors(Term t, const Theory& th) {
    TermSet seen, out;
    detail::collect_factors(t, th, seen, out);
    return out;
}

inline TermSet e_factors(const TermSet& ts, const Theory& th) {
    TermSet seen, out;
    for (Term t : ts) detail::collect_factors(t, th, seen, out);
    return out;
}

/// Union of the E_i-factors over all constituent theories.
inline TermSet e_factors(const TermSet& ts, const Combination& e) {
    TermSet out;
    for (const Theory& th : e.parts()) {
        TermSet f = e_factors(ts, th);
        out.insert(f.begin(), f.end());
    }
    return out;
}

namespace detail {

inline void collect_shared_names(Term t, const Combination& e, TermSet& seen, TermSet& out) {
    if (!t.is_app() || !seen.insert(t).second) return;
    bool theory_head = e.has_symbol(t.symbol());
    for (Term a : t.args()) {
        if (theory_head && a.is_name()) out.insert(a);
        collect_shared_names(a, e, seen, out);
    }
}

}  // namespace detail

/// Terms that ls and acut may abstract. A single theory uses exactly its
/// factors. With two or more AC theories, names directly under a theory
/// symbol are added: a name obtained in one theory can then enter the
/// elementary problem of another.
inline TermSet abstraction_points(const TermSet& ts, const Combination& e) {
    TermSet out = e_factors(ts, e);
    std::size_t ac = 0;
    for (const Theory& th : e.parts()) ac += th.has_ac() ? 1 : 0;
    if (ac < 2) return out;
    TermSet seen;
    for (Term t : ts) detail::collect_shared_names(t, e, seen, out);
    return out;
}

/// Maximally shared node set of St(Γ ∪ {M}) with membership tags.
class TermIndex {
public:
    struct NodeInfo {
        Term term;
        bool in_gamma = false;
        bool is_goal = false;
    };

    std::size_t size() const { return nodes_.size(); }
    bool contains(Term t) const { return pos_.count(t) != 0; }

    const NodeInfo* find(Term t) const {
        auto it = pos_.find(t);
        return it == pos_.end() ? nullptr : &nodes_[it->second];
    }
    std::size_t index_of(Term t) const { return pos_.at(t); }

    const std::vector<NodeInfo>& nodes() const { return nodes_; }

    std::vector<Term> terms() const {
        std::vector<Term> out;
        out.reserve(nodes_.size());
        for (const NodeInfo& n : nodes_) out.push_back(n.term);
        return out;
    }

    NodeInfo& add(Term t) {
        auto [it, fresh] = pos_.emplace(t, nodes_.size());
        if (fresh) nodes_.push_back(NodeInfo{t});
        return nodes_[it->second];
    }

    /// Re-orders nodes by the structural term order.
    void sort() {
        std::sort(nodes_.begin(), nodes_.end(),
                  [](const NodeInfo& a, const NodeInfo& b) { return compare(a.term, b.term) < 0; });
        pos_.clear();
        for (std::size_t i = 0; i < nodes_.size(); ++i) pos_.emplace(nodes_[i].term, i);
    }

private:
    std::vector<NodeInfo> nodes_;
    std::unordered_map<Term, std::size_t> pos_;
};

/// pst(Γ): proper subterms of the members of Γ.
inline TermSet proper_subterms(const TermSet& gamma) {
    TermSet out;
    for (Term t : gamma)
        if (t.is_app())
            for (Term a : t.args()) detail::collect_subterms(a, out);
    return out;
}

/// St(Γ ∪ {M}) = S ∪ pst(S) ∪ {sign(A,B) | A,B ∈ pst(S)} with S = Γ ∪ {M}.
inline TermIndex saturate(const TermSet& gamma, Term goal) {
    TermSet base = gamma;
    base.insert(goal);
    TermSet pst = proper_subterms(base);
    TermIndex idx;
    for (Term t : base) idx.add(t);
    for (Term t : pst) idx.add(t);
    for (Term a : pst)
        for (Term b : pst) idx.add(Term::sign(a, b));
    idx.sort();
    for (Term t : gamma) idx.add(t).in_gamma = true;
    idx.add(goal).is_goal = true;
    return idx;
}

inline TermIndex saturate(const std::vector<Term>& gamma, Term goal) {
    return saturate(TermSet(gamma.begin(), gamma.end()), goal);
}

}  // namespace intruder
