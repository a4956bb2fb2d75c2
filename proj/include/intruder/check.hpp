#pragma once

// Independent proof checking for the three systems. Every node is matched
// against its rule schema; id witnesses are replayed through the rewrite
// system; ⊩_R side conditions are checked as right-only S derivations, or
// re-established with right_deduce when absent.

#include <optional>
#include <string>

#include "derivation.hpp"
#include "elementary.hpp"
#include "engine.hpp"
#include "rewrite.hpp"
#include "subterms.hpp"
#include "syntax.hpp"
#include "theory.hpp"

namespace intruder {

struct CheckResult {
    bool ok = true;
    std::string path;  // premise indices from the root, e.g. "0.1"; "s" marks a side proof
    std::string message;

    explicit operator bool() const { return ok; }
    std::string describe() const {
        if (ok) return "ok";
        return "at " + (path.empty() ? std::string("root") : path) + ": " + message;
    }
};

class Checker {
public:
    explicit Checker(Combination e) : engine_(std::move(e)) {}

    const Combination& theory() const { return engine_.theory(); }

    CheckResult check(const Derivation& d) {
        CheckResult res;
        node(d, "", res);
        return res;
    }

    /// Checks `d` and that its conclusion is gamma ⊢ goal.
    CheckResult check(const Derivation& d, const TermSet& gamma, Term goal) {
        if (d.gamma != gamma || d.goal != goal) return {false, "", "conclusion is not the expected sequent"};
        return check(d);
    }

private:
    Normalizer& norm() { return engine_.normalizer(); }

    static bool fail(CheckResult& res, const std::string& path, const std::string& msg) {
        if (res.ok) {
            res.ok = false;
            res.path = path;
            res.message = msg;
        }
        return false;
    }

    static std::string join(const std::string& path, const std::string& step) {
        return path.empty() ? step : path + "." + step;
    }

    bool node(const Derivation& d, const std::string& path, CheckResult& res) {
        if (!d.goal.valid()) return fail(res, path, "missing goal");
        bool ok = false;
        switch (d.system) {
            case System::N: ok = node_n(d, path, res); break;
            case System::S: ok = node_s(d, path, res, false); break;
            case System::L: ok = node_l(d, path, res); break;
        }
        if (!ok) return false;
        for (std::size_t i = 0; i < d.premises.size(); ++i) {
            if (d.premises[i].system != d.system) return fail(res, join(path, std::to_string(i)), "mixed systems");
            if (!node(d.premises[i], join(path, std::to_string(i)), res)) return false;
        }
        return true;
    }

    bool arity(const Derivation& d, std::size_t n, const std::string& path, CheckResult& res) {
        if (d.premises.size() != n)
            return fail(res, path, d.rule + " expects " + std::to_string(n) + " premise(s), found " +
                                       std::to_string(d.premises.size()));
        return true;
    }

    bool same_gamma(const Derivation& d, const std::string& path, CheckResult& res) {
        for (const Derivation& p : d.premises)
            if (p.gamma != d.gamma) return fail(res, path, d.rule + ": premises must share the hypotheses");
        return true;
    }

    bool goal_is(const Derivation& p, Term want, const std::string& path, CheckResult& res, const char* what) {
        if (p.goal != want)
            return fail(res, path,
                        std::string(what) + ": expected " + to_string(want) + ", found " + to_string(p.goal));
        return true;
    }

    // f(A,B) introduction shape shared by N and S right rules.
    bool intro(const Derivation& d, Symbol f, const std::string& path, CheckResult& res) {
        if (!arity(d, 2, path, res) || !same_gamma(d, path, res)) return false;
        if (!d.goal.headed_by(f)) return fail(res, path, d.rule + ": goal must be headed by " + f.name());
        return goal_is(d.premises[0], d.goal.arg(0), path, res, "left premise") &&
               goal_is(d.premises[1], d.goal.arg(1), path, res, "right premise");
    }

    bool node_n(const Derivation& d, const std::string& path, CheckResult& res) {
        const std::string& r = d.rule;
        Term m = d.goal;
        if (r == rules::id) {
            if (!arity(d, 0, path, res)) return false;
            if (!d.gamma.count(m)) return fail(res, path, "id: goal is not a hypothesis");
            return true;
        }
        if (r == rules::e_I) return intro(d, Symbol::enc(), path, res);
        if (r == rules::p_I) return intro(d, Symbol::pair(), path, res);
        if (r == rules::sign_I) return intro(d, Symbol::sign(), path, res);
        if (r == rules::blind_I) return intro(d, Symbol::blind(), path, res);
        if (r == rules::p_E) {
            if (!arity(d, 1, path, res) || !same_gamma(d, path, res)) return false;
            Term p = d.premises[0].goal;
            if (!p.headed_by(Symbol::pair()) || (p.arg(0) != m && p.arg(1) != m))
                return fail(res, path, "p_E: premise must be a pair containing the goal");
            return true;
        }
        if (r == rules::e_E || r == rules::blind_E1) {
            if (!arity(d, 2, path, res) || !same_gamma(d, path, res)) return false;
            Term p = d.premises[0].goal;
            Symbol f = r == rules::e_E ? Symbol::enc() : Symbol::blind();
            if (!p.headed_by(f) || p.arg(0) != m) return fail(res, path, r + ": left premise has the wrong shape");
            return goal_is(d.premises[1], p.arg(1), path, res, "key premise");
        }
        if (r == rules::sign_E) {
            if (!arity(d, 2, path, res) || !same_gamma(d, path, res)) return false;
            Term p = d.premises[0].goal;
            if (!p.headed_by(Symbol::sign()) || p.arg(0) != m)
                return fail(res, path, "sign_E: left premise must be sign(goal, K)");
            return goal_is(d.premises[1], Term::pub(p.arg(1)), path, res, "public key premise");
        }
        if (r == rules::blind_E2) {
            if (!arity(d, 2, path, res) || !same_gamma(d, path, res)) return false;
            Term p = d.premises[0].goal;
            if (!m.headed_by(Symbol::sign()) || !p.headed_by(Symbol::sign()) ||
                !p.arg(0).headed_by(Symbol::blind()) || p.arg(1) != m.arg(1) || p.arg(0).arg(0) != m.arg(0))
                return fail(res, path, "blind_E2: expected sign(blind(M,R),K) over sign(M,K)");
            return goal_is(d.premises[1], p.arg(0).arg(1), path, res, "blinding factor premise");
        }
        if (r == rules::f_I) {
            if (!same_gamma(d, path, res)) return false;
            if (!m.is_app() || !theory().has_symbol(m.symbol()))
                return fail(res, path, "f_I: goal must be headed by an equational symbol");
            Symbol f = m.symbol();
            std::size_t n = f.arity();
            if (!arity(d, n, path, res)) return false;
            std::vector<Term> args;
            for (const Derivation& p : d.premises) args.push_back(p.goal);
            if (Term::app(f, args) != m) return fail(res, path, "f_I: goal is not f applied to the premises");
            return true;
        }
        if (r == rules::approx) {
            if (!arity(d, 1, path, res) || !same_gamma(d, path, res)) return false;
            if (norm().normalize(m) != norm().normalize(d.premises[0].goal))
                return fail(res, path, "approx: terms are not equal modulo the theory");
            return true;
        }
        return fail(res, path, "unknown N rule '" + r + "'");
    }

    bool normal_sequent(const Derivation& d, const std::string& path, CheckResult& res) {
        if (!norm().is_normal(d.goal)) return fail(res, path, "goal is not in normal form");
        for (Term t : d.gamma)
            if (!norm().is_normal(t)) return fail(res, path, "hypothesis " + to_string(t) + " is not in normal form");
        return true;
    }

    std::optional<Term> principal(const Derivation& d, const std::string& path, CheckResult& res) {
        if (!d.aux.principal) {
            fail(res, path, d.rule + ": missing principal term");
            return std::nullopt;
        }
        Term t = *d.aux.principal;
        if (!d.gamma.count(t)) {
            fail(res, path, d.rule + ": principal term " + to_string(t) + " is not a hypothesis");
            return std::nullopt;
        }
        return t;
    }

    bool premise_gamma(const Derivation& p, const TermSet& want, const std::string& path, CheckResult& res) {
        if (p.gamma != want) return fail(res, path, "premise hypotheses do not match the rule");
        return true;
    }

    bool node_s(const Derivation& d, const std::string& path, CheckResult& res, bool right_only) {
        const std::string& r = d.rule;
        Term m = d.goal;
        if (!normal_sequent(d, path, res)) return false;
        if (right_only && !(r == rules::id || rules::is_right_S(r)))
            return fail(res, path, "side proof uses rule " + r + " which is not a right rule");
        if (r == rules::id) {
            if (!arity(d, 0, path, res)) return false;
            if (!d.aux.witness) return fail(res, path, "id: missing context witness");
            const ElemWitness& w = *d.aux.witness;
            for (const auto& [t, c] : w.parts)
                if (!d.gamma.count(t)) return fail(res, path, "id: context hole filled by non-hypothesis " + to_string(t));
            try {
                if (replay(w, theory(), norm()) != m) return fail(res, path, "id: context does not yield the goal");
            } catch (const Error& e) {
                return fail(res, path, std::string("id: ") + e.what());
            }
            return true;
        }
        if (r == rules::p_R) return intro(d, Symbol::pair(), path, res);
        if (r == rules::e_R) return intro(d, Symbol::enc(), path, res);
        if (r == rules::sign_R) return intro(d, Symbol::sign(), path, res);
        if (r == rules::blind_R) return intro(d, Symbol::blind(), path, res);
        if (r == rules::cut || r == rules::acut) {
            if (!arity(d, 2, path, res)) return false;
            Term a = d.premises[0].goal;
            if (d.aux.principal && *d.aux.principal != a) return fail(res, path, r + ": principal differs from cut term");
            if (d.premises[0].gamma != d.gamma) return fail(res, path, r + ": left premise hypotheses differ");
            if (!premise_gamma(d.premises[1], with(d.gamma, {a}), path, res)) return false;
            if (!goal_is(d.premises[1], m, path, res, "right premise")) return false;
            if (r == rules::acut) {
                TermSet all = with(d.gamma, {m});
                if (!abstraction_points(all, theory()).count(a))
                    return fail(res, path, "acut: " + to_string(a) + " is not a factor of the sequent");
            }
            return true;
        }
        if (r == rules::p_L || r == rules::sign_L) {
            if (!arity(d, 1, path, res)) return false;
            auto t = principal(d, path, res);
            if (!t) return false;
            TermSet want;
            if (r == rules::p_L) {
                if (!t->headed_by(Symbol::pair())) return fail(res, path, "p_L: principal must be a pair");
                want = with(d.gamma, {t->arg(0), t->arg(1)});
            } else {
                if (!t->headed_by(Symbol::sign())) return fail(res, path, "sign_L: principal must be a signature");
                if (!d.gamma.count(Term::pub(t->arg(1))))
                    return fail(res, path, "sign_L: matching public key is not a hypothesis");
                want = with(d.gamma, {t->arg(0)});
            }
            return premise_gamma(d.premises[0], want, path, res) &&
                   goal_is(d.premises[0], m, path, res, "premise");
        }
        if (r == rules::e_L || r == rules::blind_L1 || r == rules::blind_L2) {
            if (!arity(d, 2, path, res)) return false;
            auto t = principal(d, path, res);
            if (!t) return false;
            Term need;
            TermSet want;
            if (r == rules::blind_L2) {
                if (!t->headed_by(Symbol::sign()) || !t->arg(0).headed_by(Symbol::blind()))
                    return fail(res, path, "blind_L2: principal must be sign(blind(M,R),K)");
                need = t->arg(0).arg(1);
                want = with(d.gamma, {Term::sign(t->arg(0).arg(0), t->arg(1)), need});
            } else {
                Symbol f = r == rules::e_L ? Symbol::enc() : Symbol::blind();
                if (!t->headed_by(f)) return fail(res, path, r + ": principal has the wrong constructor");
                need = t->arg(1);
                want = with(d.gamma, {t->arg(0), need});
            }
            if (d.premises[0].gamma != d.gamma) return fail(res, path, r + ": left premise hypotheses differ");
            if (!goal_is(d.premises[0], need, path, res, "left premise")) return false;
            return premise_gamma(d.premises[1], want, path, res) &&
                   goal_is(d.premises[1], m, path, res, "right premise");
        }
        return fail(res, path, "unknown S rule '" + r + "'");
    }

    // Checks a ⊩_R side condition Γ ⊢ k for an L node.
    bool side(const Derivation& d, Term k, const std::string& path, CheckResult& res) {
        if (!d.aux.side) {
            if (!engine_.right_deducible(d.gamma, k))
                return fail(res, path, d.rule + ": side condition " + to_string(k) + " is not right-deducible");
            return true;
        }
        const Derivation& s = *d.aux.side;
        std::string sp = join(path, "s");
        if (s.system != System::S || s.gamma != d.gamma || s.goal != k)
            return fail(res, sp, d.rule + ": side proof does not prove " + sequent_string(d.gamma, k));
        return right_tree(s, sp, res);
    }

    bool right_tree(const Derivation& s, const std::string& path, CheckResult& res) {
        if (!node_s(s, path, res, true)) return false;
        for (std::size_t i = 0; i < s.premises.size(); ++i)
            if (!right_tree(s.premises[i], join(path, std::to_string(i)), res)) return false;
        return true;
    }

    bool node_l(const Derivation& d, const std::string& path, CheckResult& res) {
        const std::string& r = d.rule;
        Term m = d.goal;
        if (!normal_sequent(d, path, res)) return false;
        if (r == rules::r) return arity(d, 0, path, res) && side(d, m, path, res);
        if (!rules::is_left_L(r)) return fail(res, path, "unknown L rule '" + r + "'");
        if (!arity(d, 1, path, res)) return false;
        if (!goal_is(d.premises[0], m, path, res, "premise")) return false;
        if (r == rules::ls) {
            if (!d.aux.principal) return fail(res, path, "ls: missing principal term");
            Term a = *d.aux.principal;
            if (!abstraction_points(with(d.gamma, {m}), theory()).count(a))
                return fail(res, path, "ls: " + to_string(a) + " is not a factor of the sequent");
            return side(d, a, path, res) && premise_gamma(d.premises[0], with(d.gamma, {a}), path, res);
        }
        auto t = principal(d, path, res);
        if (!t) return false;
        TermSet want;
        if (r == rules::lp) {
            if (!t->headed_by(Symbol::pair())) return fail(res, path, "lp: principal must be a pair");
            want = with(d.gamma, {t->arg(0), t->arg(1)});
        } else if (r == rules::le || r == rules::blind1) {
            Symbol f = r == rules::le ? Symbol::enc() : Symbol::blind();
            if (!t->headed_by(f)) return fail(res, path, r + ": principal has the wrong constructor");
            if (!side(d, t->arg(1), path, res)) return false;
            want = with(d.gamma, {t->arg(0), t->arg(1)});
        } else if (r == rules::sign) {
            if (!t->headed_by(Symbol::sign())) return fail(res, path, "sign: principal must be a signature");
            if (!d.gamma.count(Term::pub(t->arg(1)))) return fail(res, path, "sign: no matching public key");
            want = with(d.gamma, {t->arg(0)});
        } else {
            if (!t->headed_by(Symbol::sign()) || !t->arg(0).headed_by(Symbol::blind()))
                return fail(res, path, "blind2: principal must be sign(blind(M,R),K)");
            Term rr = t->arg(0).arg(1);
            if (!side(d, rr, path, res)) return false;
            want = with(d.gamma, {Term::sign(t->arg(0).arg(0), t->arg(1)), rr});
        }
        return premise_gamma(d.premises[0], want, path, res);
    }

    Engine engine_;
};

inline CheckResult check(const Derivation& d, const Combination& e) { return Checker(e).check(d); }

}  // namespace intruder
