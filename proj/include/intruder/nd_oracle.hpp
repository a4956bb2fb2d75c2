#pragma once

// Forward-chaining closure under the natural deduction rules, bounded to the
// saturated set of the problem. This is an independent reference procedure:
// it shares the term and rewriting layers with the engine but none of the
// proof search.

#include <map>
#include <optional>
#include <vector>

#include "derivation.hpp"
#include "rewrite.hpp"
#include "term.hpp"
#include "theory.hpp"

namespace intruder {

enum class OracleVerdict { Derivable, NotDerivable, BoundExhausted };

struct OracleResult {
    OracleVerdict verdict = OracleVerdict::NotDerivable;
    std::optional<Derivation> proof;  // natural deduction proof of ⌜Γ⌝ ⊢ ⌜M⌝
    std::size_t rounds = 0;
    std::size_t known = 0;
};

namespace oracle_detail {

struct Why {
    std::string rule;
    std::vector<Term> from;
    Term raw;  // f_I conclusion before ≈, for sums
};

inline void close_subterms(Term t, TermSet& out) {
    if (!out.insert(t).second || !t.is_app()) return;
    for (Term a : t.args()) close_subterms(a, out);
}

class Closure {
public:
    Closure(const TermSet& gamma, Term goal, const Combination& e)
        : gamma_(gamma), goal_(goal), norm_(e) {
        for (const Theory& th : e.parts())
            if (th.backend() == Backend::XOR) xor_ = &th;
        TermSet base = gamma;
        base.insert(goal);
        TermSet pst;
        for (Term t : base)
            if (t.is_app())
                for (Term a : t.args()) close_subterms(a, pst);
        universe_ = base;
        universe_.insert(pst.begin(), pst.end());
        for (Term a : pst)
            for (Term b : pst) universe_.insert(Term::sign(a, b));
    }

    OracleResult run(std::size_t depth_bound) {
        OracleResult res;
        for (Term g : gamma_) learn(g, {rules::id, {}, Term()});
        if (xor_) {
            Term zero = Term::app(*xor_->unit(), {});
            sums_.emplace(zero, Why{rules::f_I, {}, zero});
        }
        while (true) {
            if (known_.count(goal_)) break;
            if (res.rounds == depth_bound) {
                res.verdict = OracleVerdict::BoundExhausted;
                res.known = known_.size();
                return res;
            }
            ++res.rounds;
            if (!round()) break;
        }
        res.known = known_.size();
        if (known_.count(goal_)) {
            res.verdict = OracleVerdict::Derivable;
            std::map<Term, Derivation, TermLess> memo;
            res.proof = build(goal_, memo);
        }
        return res;
    }

private:
    bool learn(Term t, Why why) {
        if (known_.count(t)) return false;
        known_.emplace(t, std::move(why));
        fresh_.push_back(t);
        return true;
    }

    bool round() {
        std::vector<Term> snapshot;
        for (const auto& [t, w] : known_) snapshot.push_back(t);
        bool grew = false;
        auto has = [&](Term t) { return known_.count(t) != 0; };
        for (Term t : snapshot) {
            if (t.headed_by(Symbol::pair())) {
                grew |= learn(t.arg(0), {rules::p_E, {t}, Term()});
                grew |= learn(t.arg(1), {rules::p_E, {t}, Term()});
            } else if (t.headed_by(Symbol::enc()) && has(t.arg(1))) {
                grew |= learn(t.arg(0), {rules::e_E, {t, t.arg(1)}, Term()});
            } else if (t.headed_by(Symbol::blind()) && has(t.arg(1))) {
                grew |= learn(t.arg(0), {rules::blind_E1, {t, t.arg(1)}, Term()});
            } else if (t.headed_by(Symbol::sign())) {
                Term pk = Term::pub(t.arg(1));
                if (has(pk)) grew |= learn(t.arg(0), {rules::sign_E, {t, pk}, Term()});
                Term inner = t.arg(0);
                if (inner.headed_by(Symbol::blind()) && has(inner.arg(1)))
                    grew |= learn(Term::sign(inner.arg(0), t.arg(1)), {rules::blind_E2, {t, inner.arg(1)}, Term()});
            }
        }
        for (Term u : universe_) {
            if (has(u) || !u.is_app() || u.arity() != 2) continue;
            const char* rule = nullptr;
            if (u.headed_by(Symbol::pair())) rule = rules::p_I;
            if (u.headed_by(Symbol::enc())) rule = rules::e_I;
            if (u.headed_by(Symbol::sign())) rule = rules::sign_I;
            if (u.headed_by(Symbol::blind())) rule = rules::blind_I;
            if (rule && has(u.arg(0)) && has(u.arg(1))) grew |= learn(u, {rule, {u.arg(0), u.arg(1)}, Term()});
        }
        if (xor_) grew |= extend_sums();
        return grew;
    }

    // Reachable XOR values of the known terms, grown one known term at a time.
    bool extend_sums() {
        bool grew = false;
        Symbol plus = xor_->ac_symbol();
        for (; summed_ < fresh_.size(); ++summed_) {
            Term k = fresh_[summed_];
            std::vector<std::pair<Term, Why>> add;
            for (const auto& [s, w] : sums_) {
                Term raw = Term::app(plus, {s, k});
                Term v = norm_.normalize(raw);
                if (!sums_.count(v)) add.push_back({v, Why{rules::f_I, {s, k}, raw}});
            }
            for (auto& [v, w] : add) sums_.emplace(v, std::move(w));
        }
        for (const auto& [v, w] : sums_) {
            if (known_.count(v) || (!universe_.count(v) && v != goal_)) continue;
            known_.emplace(v, Why{"sum", {v}, Term()});
            fresh_.push_back(v);
            grew = true;
        }
        return grew;
    }

    Derivation leaf(const char* rule, Term goal) { return Derivation(System::N, rule, gamma_, goal); }

    Derivation build_sum(Term v, std::map<Term, Derivation, TermLess>& memo) {
        const Why& w = sums_.at(v);
        if (w.from.empty()) {
            Derivation d = leaf(rules::f_I, v);
            d.aux.symbol = xor_->unit()->name();
            return d;
        }
        Derivation d = leaf(rules::f_I, w.raw);
        d.aux.symbol = xor_->ac_symbol().name();
        d.premises.push_back(build_sum(w.from[0], memo));
        d.premises.push_back(build(w.from[1], memo));
        if (w.raw == v) return d;
        Derivation a = leaf(rules::approx, v);
        a.premises.push_back(std::move(d));
        return a;
    }

    Derivation build(Term t, std::map<Term, Derivation, TermLess>& memo) {
        if (auto it = memo.find(t); it != memo.end()) return it->second;
        const Why& w = known_.at(t);
        Derivation d;
        if (w.rule == "sum") {
            d = build_sum(t, memo);
        } else {
            d = leaf(w.rule.c_str(), t);
            for (Term f : w.from) d.premises.push_back(build(f, memo));
        }
        memo.emplace(t, d);
        return d;
    }

    TermSet gamma_;
    Term goal_;
    Normalizer norm_;
    const Theory* xor_ = nullptr;
    TermSet universe_;
    std::map<Term, Why, TermLess> known_;
    std::vector<Term> fresh_;
    std::size_t summed_ = 0;
    std::map<Term, Why, TermLess> sums_;
};

}  // namespace oracle_detail

/// Ground truth for the empty theory and for XOR on small instances. Γ and M
/// are normalized first. `depth_bound` limits the number of closure rounds.
inline OracleResult nd_closure_oracle(const TermSet& gamma, Term goal, const Combination& e,
                                      std::size_t depth_bound = 64) {
    for (const Theory& th : e.parts())
        if (th.backend() != Backend::Empty && th.backend() != Backend::XOR)
            throw Error("the closure oracle supports only the empty theory and XOR");
    Normalizer norm(e);
    oracle_detail::Closure c(norm.normalize_all(gamma), norm.normalize(goal), e);
    return c.run(depth_bound);
}

}  // namespace intruder
