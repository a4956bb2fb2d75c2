#pragma once

// Conversions between the three proof systems, weakening, and the structural
// properties asserted on emitted proofs.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "check.hpp"
#include "derivation.hpp"
#include "elementary.hpp"
#include "engine.hpp"
#include "rewrite.hpp"
#include "subterms.hpp"
#include "theory.hpp"

namespace intruder {

class TranslationError : public Error {
public:
    using Error::Error;
};

/// Adds `extra` to the hypotheses of every sequent; the shape and height are
/// unchanged.
inline Derivation weaken(const Derivation& d, const TermSet& extra) {
    Derivation out = d;
    out.gamma.insert(extra.begin(), extra.end());
    if (d.aux.side) out.aux.side = std::make_shared<Derivation>(weaken(*d.aux.side, extra));
    for (Derivation& p : out.premises) p = weaken(p, extra);
    return out;
}

/// Reads a linear proof as the corresponding sequent proof: side conditions
/// become left premises, ls becomes acut.
inline Derivation l_to_s(const Derivation& d, Engine* engine = nullptr) {
    if (d.system != System::L) throw TranslationError("l_to_s expects a proof in system L");
    auto side = [&](Term k) -> Derivation {
        if (d.aux.side) return *d.aux.side;
        if (!engine) throw TranslationError("missing side proof for " + d.rule);
        auto r = engine->right_deduce(d.gamma, k);
        if (!r) throw TranslationError("side condition of " + d.rule + " does not hold");
        return *r;
    };
    if (d.rule == rules::r) return side(d.goal);
    if (d.premises.size() != 1 || !d.aux.principal) throw TranslationError("malformed L node " + d.rule);
    Term t = *d.aux.principal;
    Derivation rest = l_to_s(d.premises[0], engine);
    auto node = [&](const char* rule) {
        Derivation s(System::S, rule, d.gamma, d.goal);
        s.aux.principal = t;
        return s;
    };
    Derivation s;
    if (d.rule == rules::lp) {
        s = node(rules::p_L);
        s.premises = {std::move(rest)};
    } else if (d.rule == rules::sign) {
        s = node(rules::sign_L);
        s.premises = {std::move(rest)};
    } else if (d.rule == rules::le) {
        s = node(rules::e_L);
        s.premises = {side(t.arg(1)), std::move(rest)};
    } else if (d.rule == rules::blind1) {
        s = node(rules::blind_L1);
        s.premises = {side(t.arg(1)), std::move(rest)};
    } else if (d.rule == rules::blind2) {
        s = node(rules::blind_L2);
        s.premises = {side(t.arg(0).arg(1)), std::move(rest)};
    } else if (d.rule == rules::ls) {
        s = node(rules::acut);
        s.premises = {side(t), std::move(rest)};
    } else {
        throw TranslationError("unknown L rule " + d.rule);
    }
    return s;
}

/// Result of a structural property check; `message` names the first violation.
struct PropertyResult {
    bool ok = true;
    std::string message;
    explicit operator bool() const { return ok; }
};

/// Cut-free, no left rule above a right rule, and no left rule immediately
/// above the left premise of a branching left rule.
inline PropertyResult is_normal_derivation(const Derivation& d) {
    PropertyResult res;
    std::function<bool(const Derivation&)> has_left = [&](const Derivation& x) {
        if (rules::is_left_S(x.rule)) return true;
        for (const Derivation& p : x.premises)
            if (has_left(p)) return true;
        return false;
    };
    std::function<void(const Derivation&)> walk = [&](const Derivation& x) {
        if (!res.ok) return;
        if (x.system != System::S) {
            res = {false, "not a sequent-system proof"};
            return;
        }
        if (x.rule == rules::cut) {
            res = {false, "contains cut"};
            return;
        }
        if (rules::is_right_S(x.rule)) {
            for (const Derivation& p : x.premises)
                if (has_left(p)) {
                    res = {false, "left rule above right rule " + x.rule};
                    return;
                }
        }
        if (rules::is_branching_left_S(x.rule) && !x.premises.empty() && rules::is_left_S(x.premises[0].rule)) {
            res = {false, "left rule " + x.premises[0].rule + " directly above the left premise of " + x.rule};
            return;
        }
        for (const Derivation& p : x.premises) walk(p);
    };
    walk(d);
    return res;
}

/// Every sequent Γ' ⊢ M' in `d` (including side proofs) has Γ' ∪ {M'} ⊆ St.
inline PropertyResult within_saturated_set(const Derivation& d, const TermIndex& st) {
    PropertyResult res;
    visit(d, [&](const Derivation& x) {
        if (!res.ok) return;
        if (!st.contains(x.goal)) {
            res = {false, "goal " + to_string(x.goal) + " outside St"};
            return;
        }
        for (Term t : x.gamma)
            if (!st.contains(t)) {
                res = {false, "hypothesis " + to_string(t) + " outside St"};
                return;
            }
    });
    return res;
}

inline std::size_t left_rule_count(const Derivation& d) {
    if (d.system == System::L) return count_rules(d, rules::is_left_L);
    return count_rules(d, rules::is_left_S);
}

namespace translate_detail {

inline Derivation s_id(const TermSet& gamma, Term m) {
    Derivation d(System::S, rules::id, gamma, m);
    d.aux.witness = ElemWitness{"empty", Backend::Empty, {{m, 1}}};
    return d;
}

class NdToSeq {
public:
    NdToSeq(const Combination& e, Normalizer& norm) : e_(e), norm_(norm) {}

    // S proof of ⌜Γ⌝ ⊢ ⌜goal(d)⌝ over the normalized hypotheses `g`.
    Derivation run(const Derivation& d, const TermSet& g) {
        const std::string& r = d.rule;
        Term m = norm_.normalize(d.goal);
        if (r == rules::id) return s_id(g, m);
        if (r == rules::approx) return run(d.premises.at(0), g);
        if (r == rules::p_I || r == rules::e_I || r == rules::sign_I || r == rules::blind_I) {
            const char* sr = r == rules::p_I   ? rules::p_R
                             : r == rules::e_I ? rules::e_R
                             : r == rules::sign_I ? rules::sign_R
                                                  : rules::blind_R;
            return Derivation(System::S, sr, g, m, {run(d.premises.at(0), g), run(d.premises.at(1), g)});
        }
        if (r == rules::p_E) {
            Derivation pi = run(d.premises.at(0), g);
            Term p = pi.goal;
            Derivation pl(System::S, rules::p_L, with(g, {p}), m, {s_id(with(g, {p, p.arg(0), p.arg(1)}), m)});
            pl.aux.principal = p;
            return cut(std::move(pi), std::move(pl));
        }
        if (r == rules::e_E || r == rules::blind_E1) {
            // Γ ⊢ f(M,K) and Γ ⊢ K give f_L over the cut formula f(M,K).
            Derivation p1 = run(d.premises.at(0), g);
            Derivation p2 = run(d.premises.at(1), g);
            Term c = p1.goal;
            TermSet gc = with(g, {c});
            Derivation left(System::S, r == rules::e_E ? rules::e_L : rules::blind_L1, gc, m,
                            {weaken(p2, {c}), s_id(with(gc, {c.arg(0), c.arg(1)}), m)});
            left.aux.principal = c;
            return cut(std::move(p1), std::move(left));
        }
        if (r == rules::sign_E) {
            Derivation p1 = run(d.premises.at(0), g);
            Derivation p2 = run(d.premises.at(1), g);
            Term s = p1.goal, pk = p2.goal;
            TermSet gs = with(g, {s});
            TermSet gsk = with(gs, {pk});
            Derivation sl(System::S, rules::sign_L, gsk, m, {s_id(with(gsk, {s.arg(0)}), m)});
            sl.aux.principal = s;
            Derivation inner = cut(weaken(p2, {s}), std::move(sl));
            return cut(std::move(p1), std::move(inner));
        }
        if (r == rules::blind_E2) {
            Derivation p1 = run(d.premises.at(0), g);
            Derivation p2 = run(d.premises.at(1), g);
            Term c = p1.goal;
            Term rr = c.arg(0).arg(1);
            TermSet gc = with(g, {c});
            Derivation bl(System::S, rules::blind_L2, gc, m, {weaken(p2, {c}), s_id(with(gc, {m, rr}), m)});
            bl.aux.principal = c;
            return cut(std::move(p1), std::move(bl));
        }
        if (r == rules::f_I) {
            Symbol f = d.goal.symbol();
            const Theory* th = e_.theory_of(f);
            if (!th) throw TranslationError("f_I over symbol outside the theory");
            std::vector<Derivation> subs;
            for (const Derivation& p : d.premises) subs.push_back(run(p, g));
            // Witness of the context f(□,…,□) over the premise conclusions.
            std::map<Term, std::int64_t, TermLess> coeff;
            if (f.is_ac()) {
                for (const Derivation& s : subs) coeff[s.goal] += 1;
            } else if (f.arity() == 1) {
                coeff[subs.at(0).goal] -= 1;
            } else if (f.arity() != 0) {
                throw TranslationError("f_I over a symbol without a linear context");
            }
            ElemWitness w{th->key(), th->backend(), {}};
            for (const auto& [t, c] : coeff)
                if (c != 0) w.parts.emplace_back(t, c);
            TermSet top = g;
            for (const Derivation& s : subs) top.insert(s.goal);
            Derivation id(System::S, rules::id, top, m);
            id.aux.witness = w;
            // Successive cuts, innermost first.
            Derivation acc = std::move(id);
            TermSet cur = top;
            std::vector<TermSet> levels;
            TermSet lvl = g;
            for (const Derivation& s : subs) {
                levels.push_back(lvl);
                lvl.insert(s.goal);
            }
            for (std::size_t i = subs.size(); i-- > 0;) {
                const TermSet& below = levels[i];
                if (below.count(subs[i].goal)) continue;
                TermSet extra;
                for (Term t : below)
                    if (!g.count(t)) extra.insert(t);
                acc = cut(weaken(subs[i], extra), std::move(acc));
            }
            return acc;
        }
        throw TranslationError("unknown N rule " + r);
    }

private:
    static Derivation cut(Derivation left, Derivation right) {
        Derivation c(System::S, rules::cut, left.gamma, right.goal);
        c.aux.principal = left.goal;
        c.premises.push_back(std::move(left));
        c.premises.push_back(std::move(right));
        return c;
    }

    const Combination& e_;
    Normalizer& norm_;
};

class SeqToNd {
public:
    SeqToNd(const Combination& e, const TermSet& base) : e_(e), base_(base) {}

    using Env = std::map<Term, Derivation, TermLess>;

    Derivation run(const Derivation& d, Env env) {
        const std::string& r = d.rule;
        Term m = d.goal;
        if (r == rules::id) return from_witness(*d.aux.witness, m, env);
        if (rules::is_right_S(r)) {
            const char* nr = r == rules::p_R   ? rules::p_I
                             : r == rules::e_R ? rules::e_I
                             : r == rules::sign_R ? rules::sign_I
                                                  : rules::blind_I;
            return n(nr, m, {run(d.premises.at(0), env), run(d.premises.at(1), env)});
        }
        if (r == rules::cut || r == rules::acut) {
            Derivation a = run(d.premises.at(0), env);
            add(env, d.premises.at(0).goal, std::move(a));
            return run(d.premises.at(1), env);
        }
        Term t = d.aux.principal.value();
        Derivation pt = hyp(t, env);
        if (r == rules::p_L) {
            add(env, t.arg(0), n(rules::p_E, t.arg(0), {pt}));
            add(env, t.arg(1), n(rules::p_E, t.arg(1), {pt}));
            return run(d.premises.at(0), env);
        }
        if (r == rules::sign_L) {
            add(env, t.arg(0), n(rules::sign_E, t.arg(0), {pt, hyp(Term::pub(t.arg(1)), env)}));
            return run(d.premises.at(0), env);
        }
        if (r == rules::e_L || r == rules::blind_L1) {
            Derivation k = run(d.premises.at(0), env);
            add(env, t.arg(0), n(r == rules::e_L ? rules::e_E : rules::blind_E1, t.arg(0), {pt, k}));
            add(env, t.arg(1), k);
            return run(d.premises.at(1), env);
        }
        if (r == rules::blind_L2) {
            Derivation k = run(d.premises.at(0), env);
            Term sm = Term::sign(t.arg(0).arg(0), t.arg(1));
            add(env, sm, n(rules::blind_E2, sm, {pt, k}));
            add(env, t.arg(0).arg(1), k);
            return run(d.premises.at(1), env);
        }
        throw TranslationError("unknown S rule " + r);
    }

private:
    Derivation n(const char* rule, Term goal, std::vector<Derivation> ps = {}) {
        return Derivation(System::N, rule, base_, goal, std::move(ps));
    }

    void add(Env& env, Term t, Derivation d) {
        if (base_.count(t) || env.count(t)) return;
        env.emplace(t, std::move(d));
    }

    Derivation hyp(Term t, const Env& env) {
        if (base_.count(t)) return n(rules::id, t);
        auto it = env.find(t);
        if (it == env.end()) throw TranslationError("no derivation for hypothesis " + to_string(t));
        return it->second;
    }

    // Builds C[M_1,…,M_k] with f_I from the hole derivations, then ≈ to M.
    Derivation from_witness(const ElemWitness& w, Term m, const Env& env) {
        if (w.backend == Backend::Empty) return hyp(w.parts.at(0).first, env);
        const Theory* th = e_.find(w.theory);
        if (!th) throw TranslationError("witness theory not selected");
        std::vector<Derivation> holes;
        for (const auto& [t, c] : w.parts) {
            Derivation h = hyp(t, env);
            if (c < 0) {
                Derivation inv = n(rules::f_I, Term::app(*th->inverse(), {t}), {h});
                inv.aux.symbol = th->inverse()->name();
                h = std::move(inv);
            }
            for (std::int64_t k = 0; k < (c < 0 ? -c : c); ++k) holes.push_back(h);
        }
        Derivation acc;
        if (holes.empty()) {
            acc = n(rules::f_I, Term::app(*th->unit(), {}));
            acc.aux.symbol = th->unit()->name();
        } else {
            acc = holes[0];
            for (std::size_t i = 1; i < holes.size(); ++i) {
                Symbol f = th->ac_symbol();
                Derivation s = n(rules::f_I, Term::app(f, {acc.goal, holes[i].goal}), {acc, holes[i]});
                s.aux.symbol = f.name();
                acc = std::move(s);
            }
        }
        if (acc.goal == m) return acc;
        return n(rules::approx, m, {std::move(acc)});
    }

    const Combination& e_;
    TermSet base_;
};

}  // namespace translate_detail

/// Natural deduction to sequent calculus (with cuts). The result proves
/// ⌜Γ⌝ ⊢ ⌜M⌝. Unchecked input is rejected.
inline Derivation nd_to_seq(const Derivation& d, const Combination& e) {
    if (d.system != System::N) throw TranslationError("nd_to_seq expects a proof in system N");
    Checker checker(e);
    if (auto c = checker.check(d); !c) throw TranslationError("input proof does not check: " + c.describe());
    Normalizer norm(e);
    translate_detail::NdToSeq t(e, norm);
    return t.run(d, norm.normalize_all(d.gamma));
}

/// Sequent calculus (or a linear proof, read as one) to natural deduction.
inline Derivation seq_to_nd(const Derivation& d, const Combination& e) {
    Derivation s = d.system == System::L ? l_to_s(d) : d;
    if (s.system != System::S) throw TranslationError("seq_to_nd expects a proof in system S or L");
    Checker checker(e);
    if (auto c = checker.check(s); !c) throw TranslationError("input proof does not check: " + c.describe());
    translate_detail::SeqToNd t(e, s.gamma);
    return t.run(s, {});
}

}  // namespace intruder
