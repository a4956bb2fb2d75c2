#pragma once

// Random generators and brute-force reference procedures for the tests.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "intruder/intruder.hpp"

namespace itest {

using namespace intruder;

inline Term n(const char* s) { return Term::name(s); }
inline Term v(const char* s) { return Term::var(s); }
inline Term P(const char* s) { return parse_term(s); }

inline TermSet set_of(std::initializer_list<const char*> ts) {
    TermSet out;
    for (const char* t : ts) out.insert(parse_term(t));
    return out;
}

inline Combination xor_plus() { return Combination(theories::exclusive_or(theories::plus())); }
inline Combination ag_plus() { return Combination(theories::abelian_group(theories::plus())); }
inline Combination ac_plus() { return Combination(theories::ac(theories::plus())); }
inline Combination xor_ag() {
    return Combination(std::vector<Theory>{theories::exclusive_or(theories::plus()),
                                           theories::abelian_group(theories::times())});
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t below(std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    std::mt19937_64& rng() { return rng_; }

    Term name(std::size_t names) {
        static const char* ids[] = {"a", "b", "c", "d", "e", "f"};
        return Term::name(ids[below(names)]);
    }

    // Free constructor term over the given names.
    Term dy(std::size_t names, int depth, bool blind_sign = true) {
        if (depth == 0 || coin(0.35)) return name(names);
        std::size_t k = below(blind_sign ? 5 : 2);
        Term a = dy(names, depth - 1, blind_sign), b = dy(names, depth - 1, blind_sign);
        switch (k) {
            case 0: return Term::pair(a, b);
            case 1: return Term::enc(a, b);
            case 2: return Term::sign(a, b);
            case 3: return Term::blind(a, b);
            default: return Term::pub(a);
        }
    }

    // Sum of 0..k atoms drawn from `atoms` using the AC symbol f.
    Term sum(Symbol f, const std::vector<Term>& atoms, std::size_t max_parts, Term unit) {
        std::size_t k = 1 + below(max_parts);
        std::vector<Term> parts;
        for (std::size_t i = 0; i < k; ++i) parts.push_back(atoms[below(atoms.size())]);
        if (parts.size() == 1) return parts[0];
        (void)unit;
        return Term::ac(f, parts);
    }

private:
    std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Linear views of XOR / AG terms, computed independently of elementary.hpp.

using Coeffs = std::map<Term, std::int64_t, TermLess>;

inline void flatten(Term t, Symbol plus, Symbol unit, Symbol inv, std::int64_t sign, Coeffs& out) {
    if (t.headed_by(plus)) {
        for (Term a : t.args()) flatten(a, plus, unit, inv, sign, out);
    } else if (t.is_app() && t.symbol() == unit) {
    } else if (inv.valid() && t.headed_by(inv)) {
        flatten(t.arg(0), plus, unit, inv, -sign, out);
    } else {
        out[t] += sign;
    }
}

inline Coeffs xor_view(Term t, Symbol plus) {
    Coeffs c;
    flatten(t, plus, Symbol::find("0"), Symbol(), 1, c);
    Coeffs out;
    for (auto [k, x] : c)
        if (x % 2 != 0) out[k] = 1;
    return out;
}

inline Coeffs ag_view(Term t, Symbol plus) {
    Coeffs c;
    flatten(t, plus, Symbol::find("1"), Symbol::find("inv"), 1, c);
    Coeffs out;
    for (auto [k, x] : c)
        if (x != 0) out[k] = x;
    return out;
}

/// 2^|Γ| subset search: is M the XOR of some subset of Γ?
inline bool xor_subset_oracle(const std::vector<Term>& gamma, Term m, Symbol plus) {
    std::vector<std::uint64_t> masks;
    std::map<Term, int, TermLess> atom;
    auto mask = [&](Term t) {
        std::uint64_t bits = 0;
        for (auto [k, x] : xor_view(t, plus)) {
            auto it = atom.emplace(k, static_cast<int>(atom.size())).first;
            bits |= std::uint64_t{1} << it->second;
        }
        return bits;
    };
    for (Term g : gamma) masks.push_back(mask(g));
    std::uint64_t target = mask(m);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << gamma.size()); ++s) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < gamma.size(); ++i)
            if (s >> i & 1) acc ^= masks[i];
        if (acc == target) return true;
    }
    return false;
}

/// Integer combinations with |c_i| ≤ bound, by dynamic programming over the reachable sums.
inline bool ag_bounded_oracle(const std::vector<Term>& gamma, Term m, Symbol plus, int bound = 4) {
    std::set<Coeffs> reach{Coeffs{}};
    for (Term g : gamma) {
        Coeffs gv = ag_view(g, plus);
        std::set<Coeffs> next;
        for (const Coeffs& r : reach)
            for (int c = -bound; c <= bound; ++c) {
                Coeffs s = r;
                for (auto [k, x] : gv) {
                    s[k] += c * x;
                    if (s[k] == 0) s.erase(k);
                }
                next.insert(std::move(s));
            }
        reach = std::move(next);
    }
    return reach.count(ag_view(m, plus)) != 0;
}

// ---------------------------------------------------------------------------
// Closure oracle for XOR(+) ⊎ AG(*): saturate the known set with every factor
// that is elementarily deducible in one of the two theories.

inline void factors_rec(Term t, TermSet& out) {
    // Maximal subterms whose head is outside the theory of the enclosing sum.
    Symbol plus = theories::plus(), times = theories::times();
    Symbol zero = Symbol::find("0"), one = Symbol::find("1"), inv = Symbol::find("inv");
    auto theory = [&](Term u) -> int {
        if (u.headed_by(plus) || (u.is_app() && u.symbol() == zero)) return 1;
        if (u.headed_by(times) || (u.is_app() && u.symbol() == one) || u.headed_by(inv)) return 2;
        return 0;
    };
    int th = theory(t);
    if (th == 0) return;
    for (Term a : t.args()) {
        if (theory(a) != th) out.insert(a);
        if (theory(a) == th)
            factors_rec(a, out);
        else if (theory(a) != 0)
            factors_rec(a, out);
    }
}

inline bool combined_closure_oracle(const TermSet& gamma_in, Term m_in) {
    Combination e = xor_ag();
    Normalizer norm(e);
    TermSet gamma = norm.normalize_all(gamma_in);
    Term m = norm.normalize(m_in);
    TermSet cand;
    for (Term t : gamma) factors_rec(t, cand);
    factors_rec(m, cand);
    std::vector<Term> known(gamma.begin(), gamma.end());
    Symbol plus = theories::plus(), times = theories::times();
    auto deducible = [&](Term t) {
        if (std::find(known.begin(), known.end(), t) != known.end()) return true;
        std::vector<Term> xs, ag;
        for (Term k : known) {
            xs.push_back(k);
            ag.push_back(k);
        }
        if (xor_subset_oracle(xs, t, plus)) return true;
        return ag_bounded_oracle(ag, t, times, 4);
    };
    for (bool grew = true; grew;) {
        grew = false;
        if (deducible(m)) return true;
        for (Term c : cand)
            if (std::find(known.begin(), known.end(), c) == known.end() && deducible(c)) {
                known.push_back(c);
                grew = true;
            }
    }
    return deducible(m);
}

// ---------------------------------------------------------------------------
// Ground enumeration for constraint systems.

inline std::vector<Term> ground_terms(const std::vector<Term>& names, std::size_t max_size) {
    std::vector<std::vector<Term>> by_size(max_size + 1);
    by_size[1] = names;
    for (std::size_t s = 3; s <= max_size; s += 2)
        for (std::size_t l = 1; l + 1 < s; l += 2)
            for (Term a : by_size[l])
                for (Term b : by_size[s - 1 - l]) {
                    by_size[s].push_back(Term::pair(a, b));
                    by_size[s].push_back(Term::enc(a, b));
                }
    std::vector<Term> out;
    for (const auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
    return out;
}

/// Decides Σθ ⊢ Mθ by closure: analysis of the left side, then synthesis.
inline bool dy_deducible(TermSet known, Term m, bool right_only) {
    if (!right_only) {
        for (bool grew = true; grew;) {
            grew = false;
            std::vector<Term> add;
            for (Term t : known) {
                if (t.headed_by(Symbol::pair())) {
                    add.push_back(t.arg(0));
                    add.push_back(t.arg(1));
                } else if (t.headed_by(Symbol::enc()) && dy_deducible(known, t.arg(1), true)) {
                    add.push_back(t.arg(0));
                }
            }
            for (Term t : add) grew |= known.insert(t).second;
        }
    }
    std::function<bool(Term)> synth = [&](Term t) {
        if (known.count(t)) return true;
        if (t.headed_by(Symbol::pair()) || t.headed_by(Symbol::enc())) return synth(t.arg(0)) && synth(t.arg(1));
        return false;
    };
    return synth(m);
}

inline bool enumeration_oracle(const ConstraintSystem& c, std::size_t max_size, std::size_t* tried = nullptr) {
    TermSet names_set{c.public_name};
    for (const Constraint& k : c.items) {
        for (Term t : k.sigma)
            for (Term s : subterms(t))
                if (s.is_name()) names_set.insert(s);
        for (Term s : subterms(k.goal))
            if (s.is_name()) names_set.insert(s);
    }
    std::vector<Term> names(names_set.begin(), names_set.end());
    std::vector<Term> pool = ground_terms(names, max_size);
    std::vector<Term> vars;
    for (Term x : vars_of(c)) vars.push_back(x);
    std::vector<std::size_t> idx(vars.size(), 0);
    while (true) {
        Substitution th;
        for (std::size_t i = 0; i < vars.size(); ++i) th.bind(vars[i], pool[idx[i]]);
        if (tried) ++*tried;
        bool ok = true;
        for (const Constraint& k : c.items) {
            if (!dy_deducible(intruder::apply(th, k.sigma), th.apply(k.goal), k.is_right())) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
        std::size_t i = 0;
        while (i < vars.size() && ++idx[i] == pool.size()) idx[i++] = 0;
        if (i == vars.size()) return false;
    }
}

// Builds random well-formed systems: left sides grow by inclusion and every
// variable first appears in a goal.
inline ConstraintSystem random_system(Gen& g, std::size_t names, std::size_t max_vars, int depth,
                                      std::size_t max_items = 3) {
    static const char* var_ids[] = {"x", "y", "z", "w"};
    ConstraintSystem c;
    c.public_name = Term::name("a");
    std::vector<Term> vars;
    TermSet sigma{c.public_name};
    std::size_t items = 1 + g.below(max_items);
    std::function<Term(int, bool)> term = [&](int d, bool allow_new) -> Term {
        if (d == 0 || g.coin(0.4)) {
            if (allow_new && vars.size() < max_vars && g.coin(0.4)) {
                vars.push_back(Term::var(var_ids[vars.size()]));
                return vars.back();
            }
            if (!vars.empty() && g.coin(0.35)) return vars[g.below(vars.size())];
            return g.name(names);
        }
        Term a = term(d - 1, allow_new), b = term(d - 1, allow_new);
        return g.coin() ? Term::pair(a, b) : Term::enc(a, b);
    };
    for (std::size_t i = 0; i < items; ++i) {
        std::size_t extra = i == 0 ? 1 + g.below(2) : g.below(2);
        for (std::size_t j = 0; j < extra; ++j) sigma.insert(term(depth, false));
        Constraint k;
        k.kind = g.coin(0.3) ? ConstraintKind::Right : ConstraintKind::Proper;
        k.sigma = sigma;
        k.goal = term(depth, true);
        c.items.push_back(std::move(k));
    }
    return c;
}

}  // namespace itest
