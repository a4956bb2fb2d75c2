#pragma once

// Cut-free proof search in the linear system: saturate, then apply left rules
// until the goal is right-deducible or no rule adds anything new.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "derivation.hpp"
#include "elementary.hpp"
#include "rewrite.hpp"
#include "subterms.hpp"
#include "theory.hpp"

namespace intruder {

enum class LeftRule : std::uint8_t { lp, le, sign, blind1, blind2, ls };

inline constexpr std::array<LeftRule, 6> all_left_rules = {LeftRule::lp,     LeftRule::le,     LeftRule::sign,
                                                           LeftRule::blind1, LeftRule::blind2, LeftRule::ls};

inline const char* rule_name(LeftRule r) {
    switch (r) {
        case LeftRule::lp: return rules::lp;
        case LeftRule::le: return rules::le;
        case LeftRule::sign: return rules::sign;
        case LeftRule::blind1: return rules::blind1;
        case LeftRule::blind2: return rules::blind2;
        case LeftRule::ls: return rules::ls;
    }
    return "?";
}

struct PrincipalPair {
    Term term;
    LeftRule rule;
};

/// Premise of an applicable left rule: Δ ∪ added ⊢ M.
struct Premise {
    TermSet gamma;
    std::vector<Term> added;
    std::optional<Derivation> side;
};

struct DeduceOptions {
    std::optional<std::uint64_t> seed;  // shuffles the sweep order
};

struct DeduceResult {
    std::optional<Derivation> proof;
    TermSet gamma;  // normalized
    Term goal;      // normalized
    std::size_t st_size = 0;
    std::size_t sweeps = 0;
    std::size_t left_steps = 0;

    bool derivable() const { return proof.has_value(); }
};

class Engine {
public:
    explicit Engine(Combination e = Combination()) : e_(std::move(e)), norm_(e_) {}

    const Combination& theory() const { return e_; }
    Normalizer& normalizer() { return norm_; }

    /// Γ ⊩_R M with a proof using id and the right rules only.
    std::optional<Derivation> right_deduce(const TermSet& gamma, Term m) {
        std::unordered_map<Term, std::optional<Derivation>> memo;
        return right_rec(gamma, m, memo);
    }

    bool right_deducible(const TermSet& gamma, Term m) {
        std::unordered_map<Term, bool> memo;
        return right_bool(gamma, m, memo);
    }

    /// E-factors of Γ ∪ {M} over every constituent theory.
    TermSet factors(const TermSet& gamma, Term m) const {
        TermSet all = gamma;
        all.insert(m);
        return abstraction_points(all, e_);
    }

    std::optional<Premise> applicable(const PrincipalPair& pp, const TermSet& delta, Term m) {
        return applicable(pp, delta, m, nullptr);
    }

    /// Decides Γ ⊢ M. Inputs are normalized first.
    DeduceResult deduce(const TermSet& gamma_in, Term goal_in, const DeduceOptions& opts = {}) {
        DeduceResult res;
        res.gamma = norm_.normalize_all(gamma_in);
        res.goal = norm_.normalize(goal_in);
        TermIndex st = saturate(res.gamma, res.goal);
        res.st_size = st.size();
        std::size_t n = st.size();

        std::vector<PrincipalPair> order;
        for (const auto& node : st.nodes())
            for (LeftRule r : all_left_rules) order.push_back({node.term, r});
        if (opts.seed) {
            std::mt19937_64 rng(*opts.seed);
            std::shuffle(order.begin(), order.end(), rng);
        }

        struct Step {
            PrincipalPair pair;
            TermSet before;
            std::optional<Derivation> side;
        };
        std::vector<Step> steps;
        TermSet delta = res.gamma;
        for (std::size_t round = 0; round <= n; ++round) {
            if (auto r = right_deduce(delta, res.goal)) {
                res.proof = assemble(steps, delta, res.goal, std::move(*r));
                res.left_steps = steps.size();
                return res;
            }
            if (round == n) break;
            ++res.sweeps;
            bool grew = false;
            TermSet fs = factors(delta, res.goal);
            for (const PrincipalPair& pp : order) {
                if (pp.rule == LeftRule::ls ? !fs.count(pp.term) : !delta.count(pp.term)) continue;
                auto prem = applicable(pp, delta, res.goal, &fs);
                if (!prem) continue;
                steps.push_back({pp, delta, std::move(prem->side)});
                delta = std::move(prem->gamma);
                for (Term t : prem->added) {
                    TermSet more = abstraction_points(TermSet{t}, e_);
                    fs.insert(more.begin(), more.end());
                }
                grew = true;
            }
            if (!grew) break;
        }
        res.left_steps = steps.size();
        return res;
    }

    DeduceResult deduce(const std::vector<Term>& gamma, Term goal, const DeduceOptions& opts = {}) {
        return deduce(TermSet(gamma.begin(), gamma.end()), goal, opts);
    }

private:
    std::optional<Derivation> right_rec(const TermSet& gamma, Term m,
                                        std::unordered_map<Term, std::optional<Derivation>>& memo) {
        if (auto it = memo.find(m); it != memo.end()) return it->second;
        std::optional<Derivation> out;
        if (auto w = elem_deduce(e_, gamma, m)) {
            Derivation d(System::S, rules::id, gamma, m);
            d.aux.witness = std::move(*w);
            out = std::move(d);
        } else if (const char* rule = right_rule(m)) {
            auto a = right_rec(gamma, m.arg(0), memo);
            if (a) {
                auto b = right_rec(gamma, m.arg(1), memo);
                if (b) out = Derivation(System::S, rule, gamma, m, {std::move(*a), std::move(*b)});
            }
        }
        memo.emplace(m, out);
        return out;
    }

    bool right_bool(const TermSet& gamma, Term m, std::unordered_map<Term, bool>& memo) {
        if (auto it = memo.find(m); it != memo.end()) return it->second;
        bool ok = elem_deduce(e_, gamma, m).has_value() ||
                  (right_rule(m) && right_bool(gamma, m.arg(0), memo) && right_bool(gamma, m.arg(1), memo));
        memo.emplace(m, ok);
        return ok;
    }

    static const char* right_rule(Term m) {
        if (m.headed_by(Symbol::pair())) return rules::p_R;
        if (m.headed_by(Symbol::enc())) return rules::e_R;
        if (m.headed_by(Symbol::sign())) return rules::sign_R;
        if (m.headed_by(Symbol::blind())) return rules::blind_R;
        return nullptr;
    }

    std::optional<Premise> applicable(const PrincipalPair& pp, const TermSet& delta, Term m, const TermSet* fs) {
        Term t = pp.term;
        Premise p;
        auto grows = [&](std::vector<Term> add) {
            bool fresh = false;
            for (Term a : add) fresh = fresh || !delta.count(a);
            if (!fresh) return false;
            p.added = std::move(add);
            return true;
        };
        auto side = [&](Term k) {
            p.side = right_deduce(delta, k);
            return p.side.has_value();
        };
        switch (pp.rule) {
            case LeftRule::lp:
                if (!t.headed_by(Symbol::pair()) || !delta.count(t) || !grows({t.arg(0), t.arg(1)})) return {};
                break;
            case LeftRule::le:
                if (!t.headed_by(Symbol::enc()) || !delta.count(t) || !grows({t.arg(0), t.arg(1)}) ||
                    !side(t.arg(1)))
                    return {};
                break;
            case LeftRule::sign:
                if (!t.headed_by(Symbol::sign()) || !delta.count(t) || !delta.count(Term::pub(t.arg(1))) ||
                    !grows({t.arg(0)}))
                    return {};
                break;
            case LeftRule::blind1:
                if (!t.headed_by(Symbol::blind()) || !delta.count(t) || !grows({t.arg(0), t.arg(1)}) ||
                    !side(t.arg(1)))
                    return {};
                break;
            case LeftRule::blind2: {
                if (!t.headed_by(Symbol::sign()) || !t.arg(0).headed_by(Symbol::blind()) || !delta.count(t))
                    return {};
                Term inner = t.arg(0);
                if (!grows({Term::sign(inner.arg(0), t.arg(1)), inner.arg(1)}) || !side(inner.arg(1))) return {};
                break;
            }
            case LeftRule::ls: {
                if (delta.count(t)) return {};
                bool factor = fs ? fs->count(t) != 0 : factors(delta, m).count(t) != 0;
                if (!factor || !grows({t}) || !side(t)) return {};
                break;
            }
        }
        p.gamma = delta;
        p.gamma.insert(p.added.begin(), p.added.end());
        return p;
    }

    template <class Steps>
    Derivation assemble(const Steps& steps, const TermSet& final_delta, Term goal, Derivation right) {
        Derivation top(System::L, rules::r, final_delta, goal);
        top.aux.side = std::make_shared<Derivation>(std::move(right));
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            Derivation d(System::L, rule_name(it->pair.rule), it->before, goal);
            d.aux.principal = it->pair.term;
            if (it->side) d.aux.side = std::make_shared<Derivation>(*it->side);
            d.premises.push_back(std::move(top));
            top = std::move(d);
        }
        return top;
    }

    Combination e_;
    Normalizer norm_;
};

/// One-shot convenience wrapper.
inline DeduceResult deduce(const TermSet& gamma, Term goal, const Combination& e, const DeduceOptions& opts = {}) {
    Engine engine(e);
    return engine.deduce(gamma, goal, opts);
}

}  // namespace intruder
