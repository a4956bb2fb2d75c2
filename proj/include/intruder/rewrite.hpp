#pragma once

// Matching and normalization modulo AC.
//
// Rules whose left-hand side is headed by an AC symbol f are applied with
// their f-extension l ⊕ z, so a rule may fire on any sub-multiset of a
// flattened f-node.

#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "substitution.hpp"
#include "term.hpp"
#include "theory.hpp"

namespace intruder {

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

namespace detail {

// Continuations return true to stop the enumeration early.
using MatchCont = std::function<bool(const Substitution&)>;
using RestCont = std::function<bool(const Substitution&, const std::vector<Term>&)>;

// Distinct subject arguments of an AC node with multiplicities.
struct Bag {
    std::vector<Term> elems;
    std::vector<std::size_t> counts;

    static Bag of(const std::vector<Term>& sorted_args) {
        Bag b;
        for (Term t : sorted_args) {
            if (!b.elems.empty() && b.elems.back() == t)
                ++b.counts.back();
            else {
                b.elems.push_back(t);
                b.counts.push_back(1);
            }
        }
        return b;
    }

    std::vector<Term> flatten() const {
        std::vector<Term> out;
        for (std::size_t i = 0; i < elems.size(); ++i)
            for (std::size_t k = 0; k < counts[i]; ++k) out.push_back(elems[i]);
        return out;
    }

    bool empty() const {
        for (std::size_t c : counts)
            if (c) return false;
        return true;
    }

    std::size_t slot(Term t) const {
        auto it = std::lower_bound(elems.begin(), elems.end(), t, TermLess{});
        if (it == elems.end() || *it != t) return elems.size();
        return static_cast<std::size_t>(it - elems.begin());
    }

    // Removes `times` copies of every element of v; false (unchanged) if absent.
    bool remove(const std::vector<Term>& v, std::size_t times) {
        std::vector<std::size_t> saved = counts;
        for (Term t : v) {
            std::size_t i = slot(t);
            if (i == elems.size() || counts[i] < times) {
                counts = saved;
                return false;
            }
            counts[i] -= times;
        }
        return true;
    }
};

inline std::vector<Term> ac_args(Symbol f, Term t) {
    if (t.headed_by(f)) return t.args();
    return {t};
}

inline bool match_one(Term p, Term s, const Substitution& sigma, const MatchCont& k);

inline bool match_list(const std::vector<Term>& ps, const std::vector<Term>& ss, std::size_t i,
                       const Substitution& sigma, const MatchCont& k) {
    if (i == ps.size()) return k(sigma);
    return match_one(ps[i], ss[i], sigma,
                     [&](const Substitution& s2) { return match_list(ps, ss, i + 1, s2, k); });
}

struct AcProblem {
    Symbol f;
    std::vector<Term> nonvars;
    std::vector<std::pair<Term, std::size_t>> vars;  // variable, multiplicity
    bool extension;
};

// Enumerates non-empty sub-multisets c of `bag` with times*c ≤ bag.
inline bool submultisets(Bag& bag, std::size_t times, std::size_t i, std::vector<Term>& chosen,
                         const std::function<bool(const std::vector<Term>&)>& k) {
    if (i == bag.elems.size()) return !chosen.empty() && k(chosen);
    std::size_t max = bag.counts[i] / times;
    std::size_t base = chosen.size();
    bool stop = false;
    std::size_t c = 0;
    for (; c <= max && !stop; ++c) {
        if (c) {
            chosen.push_back(bag.elems[i]);
            bag.counts[i] -= times;
        }
        stop = submultisets(bag, times, i + 1, chosen, k);
    }
    bag.counts[i] += (c - 1) * times;
    chosen.resize(base);
    return stop;
}

inline bool match_vars(const AcProblem& pr, Bag& bag, std::size_t j, const Substitution& sigma,
                       const RestCont& k) {
    if (j == pr.vars.size()) return (pr.extension || bag.empty()) && k(sigma, bag.flatten());
    auto [x, times] = pr.vars[j];
    if (auto v = sigma.lookup(x)) {
        std::vector<Term> parts = ac_args(pr.f, *v);
        if (!bag.remove(parts, times)) return false;
        bool stop = match_vars(pr, bag, j + 1, sigma, k);
        for (Term t : parts) bag.counts[bag.slot(t)] += times;
        return stop;
    }
    std::vector<Term> chosen;
    return submultisets(bag, times, 0, chosen, [&](const std::vector<Term>& part) {
        Substitution s2 = sigma;
        s2.bind(x, Term::ac(pr.f, part));
        return match_vars(pr, bag, j + 1, s2, k);
    });
}

inline bool match_nonvars(const AcProblem& pr, Bag& bag, std::size_t j, const Substitution& sigma,
                          const RestCont& k) {
    if (j == pr.nonvars.size()) return match_vars(pr, bag, 0, sigma, k);
    for (std::size_t i = 0; i < bag.elems.size(); ++i) {
        if (bag.counts[i] == 0) continue;
        --bag.counts[i];
        bool stop = match_one(pr.nonvars[j], bag.elems[i], sigma,
                              [&](const Substitution& s2) { return match_nonvars(pr, bag, j + 1, s2, k); });
        ++bag.counts[i];
        if (stop) return true;
    }
    return false;
}

inline bool match_ac(Symbol f, const std::vector<Term>& pargs, const std::vector<Term>& sargs, bool extension,
                     const Substitution& sigma, const RestCont& k) {
    if (pargs.size() > sargs.size()) return false;
    AcProblem pr{f, {}, {}, extension};
    for (Term p : pargs) {
        if (p.is_var()) {
            if (!pr.vars.empty() && pr.vars.back().first == p)
                ++pr.vars.back().second;
            else
                pr.vars.emplace_back(p, 1);
        } else {
            pr.nonvars.push_back(p);
        }
    }
    Bag bag = Bag::of(sargs);
    return match_nonvars(pr, bag, 0, sigma, k);
}

inline bool match_one(Term p, Term s, const Substitution& sigma, const MatchCont& k) {
    if (p.is_var()) {
        if (auto v = sigma.lookup(p)) return *v == s && k(sigma);
        Substitution s2 = sigma;
        s2.bind(p, s);
        return k(s2);
    }
    if (p.is_ground() || p.is_name()) return p == s && k(sigma);
    if (!s.is_app() || s.symbol() != p.symbol()) return false;
    if (p.symbol().is_ac())
        return match_ac(p.symbol(), p.args(), s.args(), false, sigma,
                        [&](const Substitution& s2, const std::vector<Term>&) { return k(s2); });
    if (p.arity() != s.arity()) return false;
    return match_list(p.args(), s.args(), 0, sigma, k);
}

inline void dedupe(std::vector<Substitution>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// First (or every, when `all`) rewrite of `t` at the root by `rule`.
inline bool rewrite_at_root(const RewriteRule& rule, Term t, bool all, std::vector<Term>& out) {
    Term l = rule.lhs;
    if (!t.is_app() || (l.is_app() && l.symbol() != t.symbol())) return false;
    if (l.is_app() && l.symbol().is_ac()) {
        Symbol f = l.symbol();
        return match_ac(f, l.args(), t.args(), true, Substitution(),
                        [&](const Substitution& s, const std::vector<Term>& rest) {
                            Term r = s.apply(rule.rhs);
                            if (rest.empty()) {
                                out.push_back(r);
                            } else {
                                std::vector<Term> parts = rest;
                                parts.push_back(r);
                                out.push_back(Term::ac(f, std::move(parts)));
                            }
                            return !all;
                        });
    }
    return match_one(l, t, Substitution(), [&](const Substitution& s) {
        out.push_back(s.apply(rule.rhs));
        return !all;
    });
}

}  // namespace detail

/// Complete set of AC matchers σ with pattern·σ ≡ subject.
inline std::vector<Substitution> match_mod_ac(Term pattern, Term subject) {
    std::vector<Substitution> out;
    detail::match_one(pattern, subject, Substitution(), [&](const Substitution& s) {
        out.push_back(s);
        return false;
    });
    detail::dedupe(out);
    return out;
}

/// One rewrite step at the root of `t`, for a single rule, enumerating every
/// way the rule applies.
inline std::vector<Term> root_rewrites(const RewriteRule& rule, Term t) {
    std::vector<Term> out;
    detail::rewrite_at_root(rule, t, true, out);
    std::sort(out.begin(), out.end(), TermLess{});
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Every term reachable from `t` in exactly one rewrite step, at any position.
inline std::vector<Term> one_step_rewrites(Term t, const Combination& e) {
    TermSet out;
    for (const RewriteRule* r : e.rules())
        for (Term u : root_rewrites(*r, t)) out.insert(u);
    if (t.is_app()) {
        std::vector<Term> args = t.args();
        for (std::size_t i = 0; i < args.size(); ++i) {
            for (Term u : one_step_rewrites(args[i], e)) {
                std::vector<Term> a2 = args;
                a2[i] = u;
                out.insert(rebuild(t, std::move(a2)));
            }
        }
    }
    return std::vector<Term>(out.begin(), out.end());
}

enum class Strategy { Innermost, Outermost };

/// Normal forms under the union of a combination's rules, with a per-instance
/// cache. Not thread-safe; use one instance per thread.
class Normalizer {
public:
    static constexpr std::size_t default_budget = 1'000'000;

    explicit Normalizer(Combination e, std::size_t budget = default_budget)
        : e_(std::move(e)), budget_(budget) {
        for (const Theory& th : e_.parts())
            for (const RewriteRule& r : th.rules()) rules_.push_back(r);
    }

    const Combination& theory() const { return e_; }
    std::size_t steps() const { return steps_; }
    void set_budget(std::size_t b) { budget_ = b; }

    Term normalize(Term t) {
        if (rules_.empty() || !t.is_app()) return t;
        if (auto it = cache_.find(t); it != cache_.end()) return it->second;
        std::vector<Term> args;
        args.reserve(t.arity());
        for (Term a : t.args()) args.push_back(normalize(a));
        Term u = rebuild(t, std::move(args));
        if (auto v = rewrite_root(u)) {
            tick();
            u = normalize(*v);
        }
        cache_.emplace(t, u);
        cache_.emplace(u, u);
        return u;
    }

    Term normalize(Term t, Strategy s) { return s == Strategy::Innermost ? normalize(t) : normalize_outermost(t); }

    Term normalize_outermost(Term t) {
        Term cur = t;
        while (auto next = outermost_step(cur)) {
            tick();
            cur = *next;
        }
        return cur;
    }

    TermSet normalize_all(const TermSet& ts) {
        TermSet out;
        for (Term t : ts) out.insert(normalize(t));
        return out;
    }

    bool is_normal(Term t) {
        if (rewrite_root(t)) return false;
        if (t.is_app())
            for (Term a : t.args())
                if (!is_normal(a)) return false;
        return true;
    }

    bool equivalent(Term a, Term b) { return normalize(a) == normalize(b); }

private:
    void tick() {
        if (++steps_ > budget_)
            throw BudgetExceeded("rewrite step budget of " + std::to_string(budget_) +
                                 " exceeded (theory may not terminate)");
    }

    std::optional<Term> rewrite_root(Term t) const {
        if (!t.is_app()) return std::nullopt;
        std::vector<Term> out;
        for (const RewriteRule& r : rules_)
            if (detail::rewrite_at_root(r, t, false, out)) return out.front();
        return std::nullopt;
    }

    std::optional<Term> outermost_step(Term t) const {
        if (auto v = rewrite_root(t)) return v;
        if (!t.is_app()) return std::nullopt;
        std::vector<Term> args = t.args();
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (auto v = outermost_step(args[i])) {
                args[i] = *v;
                return rebuild(t, std::move(args));
            }
        }
        return std::nullopt;
    }

    Combination e_;
    std::vector<RewriteRule> rules_;
    std::size_t budget_;
    std::size_t steps_ = 0;
    std::unordered_map<Term, Term> cache_;
};

inline Term normalize(Term t, const Combination& e) { return Normalizer(e).normalize(t); }

}  // namespace intruder
