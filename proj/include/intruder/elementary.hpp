#pragma once

// Elementary deduction Γ ⊩_{E_i} M: is M an E_i-context over members of Γ,
// modulo E? Each backend abstracts E_i-alien subterms to atoms and solves a
// linear problem over the atom coefficients.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "abstraction.hpp"
#include "rewrite.hpp"
#include "subterms.hpp"
#include "term.hpp"
#include "theory.hpp"

namespace intruder {

/// Linear description of the E_i-context: M ≈ Σ coeff·part, where a negative
/// coefficient stands for the inverse. Zero parts denote the unit.
struct ElemWitness {
    std::string theory;  // Theory::key()
    Backend backend = Backend::Empty;
    std::vector<std::pair<Term, std::int64_t>> parts;

    std::size_t holes() const {
        std::size_t n = 0;
        for (const auto& [t, c] : parts) n += static_cast<std::size_t>(c < 0 ? -c : c);
        return n;
    }

    friend bool operator==(const ElemWitness& a, const ElemWitness& b) {
        return a.theory == b.theory && a.backend == b.backend && a.parts == b.parts;
    }
};

class MalformedWitness : public Error {
public:
    using Error::Error;
};

/// Instantiates the context of `w` and returns the term before normalization.
inline Term instantiate(const ElemWitness& w, const Theory& th) {
    if (w.backend == Backend::Empty || !th.has_ac()) {
        if (w.parts.size() != 1 || w.parts[0].second != 1)
            throw MalformedWitness("a membership witness needs exactly one part with coefficient 1");
        return w.parts[0].first;
    }
    std::vector<Term> holes;
    for (const auto& [t, c] : w.parts) {
        if (c == 0) throw MalformedWitness("zero coefficient in witness");
        if (c < 0 && !th.inverse()) throw MalformedWitness("negative coefficient in a theory without inverse");
        Term filler = c < 0 ? Term::app(*th.inverse(), {t}) : t;
        for (std::int64_t k = 0; k < (c < 0 ? -c : c); ++k) holes.push_back(filler);
    }
    if (holes.empty()) {
        if (!th.unit()) throw MalformedWitness("empty context in a theory without unit");
        return Term::app(*th.unit(), {});
    }
    return Term::ac(th.ac_symbol(), std::move(holes));
}

/// ⌜C[M_1,…,M_k]⌝ for the witness context.
inline Term replay(const ElemWitness& w, const Theory& th, Normalizer& norm) {
    return norm.normalize(instantiate(w, th));
}

inline Term replay(const ElemWitness& w, const Combination& e, Normalizer& norm) {
    if (w.backend == Backend::Empty) {
        Theory th = theories::empty();
        return replay(w, th, norm);
    }
    const Theory* th = e.find(w.theory);
    if (!th) throw MalformedWitness("witness names theory '" + w.theory + "' which is not selected");
    if (th->backend() != w.backend) throw MalformedWitness("witness backend does not match its theory");
    return replay(w, *th, norm);
}

namespace elem_detail {

using boost::multiprecision::cpp_int;
using Vec = std::map<Term, std::int64_t, TermLess>;

// Coefficients of a pure E_i term in the free model of the theory.
inline void linear_form(Term p, const Theory& th, std::int64_t scale, Vec& out) {
    if (!p.is_app()) {
        out[p] += scale;
        return;
    }
    Symbol f = p.symbol();
    if (f.is_ac()) {
        for (Term a : p.args()) linear_form(a, th, scale, out);
    } else if (f.arity() == 0) {
    } else if (f.arity() == 1 && th.backend() == Backend::AG) {
        linear_form(p.arg(0), th, -scale, out);
    } else {
        throw Error("no linear form for symbol '" + f.name() + "'");
    }
}

inline Vec linear_form(Term p, const Theory& th) {
    Vec v;
    linear_form(p, th, 1, v);
    for (auto it = v.begin(); it != v.end();) {
        if (th.backend() == Backend::XOR) it->second &= 1;
        if (it->second == 0)
            it = v.erase(it);
        else
            ++it;
    }
    return v;
}

struct Problem {
    std::vector<Term> gamma;
    std::vector<Term> atoms;
    std::vector<std::vector<std::int64_t>> columns;  // one per Γ element
    std::vector<std::int64_t> target;
};

inline Problem build(const Theory& th, const TermSet& gamma, Term m) {
    Abstraction table;
    Problem pr;
    std::vector<Vec> forms;
    std::set<Term, TermLess> atoms;
    for (Term g : gamma) {
        forms.push_back(linear_form(abstract(g, th, table), th));
        pr.gamma.push_back(g);
    }
    Vec goal = linear_form(abstract(m, th, table), th);
    for (const Vec& v : forms)
        for (const auto& [a, c] : v) atoms.insert(a);
    for (const auto& [a, c] : goal) atoms.insert(a);
    pr.atoms.assign(atoms.begin(), atoms.end());
    auto dense = [&](const Vec& v) {
        std::vector<std::int64_t> d(pr.atoms.size(), 0);
        for (std::size_t i = 0; i < pr.atoms.size(); ++i) {
            auto it = v.find(pr.atoms[i]);
            if (it != v.end()) d[i] = it->second;
        }
        return d;
    };
    for (const Vec& v : forms) pr.columns.push_back(dense(v));
    pr.target = dense(goal);
    return pr;
}

inline ElemWitness make_witness(const Theory& th, const Problem& pr, const std::vector<std::int64_t>& x) {
    ElemWitness w{th.key(), th.backend(), {}};
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0) w.parts.emplace_back(pr.gamma[i], x[i]);
    return w;
}

// ℕ-combination with at least one hole.
class AcSolver {
public:
    explicit AcSolver(const Problem& pr) : pr_(pr) {
        for (std::size_t i = 0; i < pr.columns.size(); ++i) {
            bool fits = false, ok = true;
            for (std::size_t a = 0; a < pr.atoms.size(); ++a) {
                if (pr.columns[i][a] > pr.target[a]) ok = false;
                if (pr.columns[i][a] > 0) fits = true;
            }
            if (ok && fits) usable_.push_back(i);
        }
    }

    std::optional<std::vector<std::int64_t>> solve() {
        std::vector<std::int64_t> x(pr_.columns.size(), 0);
        std::vector<std::int64_t> residual = pr_.target;
        bool nonzero = false;
        for (std::int64_t c : residual) nonzero = nonzero || c != 0;
        if (!nonzero) return std::nullopt;
        if (dfs(0, residual, x)) return x;
        return std::nullopt;
    }

private:
    bool dfs(std::size_t k, std::vector<std::int64_t>& r, std::vector<std::int64_t>& x) {
        bool zero = true;
        for (std::int64_t c : r) zero = zero && c == 0;
        if (zero) return true;
        if (k == usable_.size()) return false;
        if (failed_.count({k, r})) return false;
        // Every remaining atom must still be coverable.
        for (std::size_t a = 0; a < r.size(); ++a) {
            if (r[a] == 0) continue;
            bool covered = false;
            for (std::size_t j = k; j < usable_.size() && !covered; ++j)
                covered = pr_.columns[usable_[j]][a] > 0;
            if (!covered) {
                failed_.insert({k, r});
                return false;
            }
        }
        const std::vector<std::int64_t>& col = pr_.columns[usable_[k]];
        std::int64_t max = -1;
        for (std::size_t a = 0; a < r.size(); ++a)
            if (col[a] > 0) {
                std::int64_t q = r[a] / col[a];
                max = max < 0 ? q : std::min(max, q);
            }
        for (std::int64_t m = max; m >= 0; --m) {
            for (std::size_t a = 0; a < r.size(); ++a) r[a] -= m * col[a];
            x[usable_[k]] = m;
            bool ok = dfs(k + 1, r, x);
            for (std::size_t a = 0; a < r.size(); ++a) r[a] += m * col[a];
            if (ok) return true;
        }
        x[usable_[k]] = 0;
        failed_.insert({k, r});
        return false;
    }

    const Problem& pr_;
    std::vector<std::size_t> usable_;
    std::set<std::pair<std::size_t, std::vector<std::int64_t>>> failed_;
};

// GF(2) elimination with combination tracking.
inline std::optional<std::vector<std::int64_t>> solve_xor(const Problem& pr) {
    using Bits = std::vector<bool>;
    std::size_t n = pr.atoms.size(), m = pr.columns.size();
    struct Row {
        Bits v;
        Bits combo;
        std::size_t pivot;
    };
    std::vector<Row> basis;
    auto reduce = [&](Bits& v, Bits& combo) {
        for (const Row& b : basis)
            if (v[b.pivot]) {
                for (std::size_t i = 0; i < n; ++i) v[i] = v[i] != b.v[i];
                for (std::size_t i = 0; i < m; ++i) combo[i] = combo[i] != b.combo[i];
            }
    };
    for (std::size_t j = 0; j < m; ++j) {
        Bits v(n), combo(m);
        for (std::size_t i = 0; i < n; ++i) v[i] = pr.columns[j][i] & 1;
        combo[j] = true;
        reduce(v, combo);
        std::size_t p = 0;
        while (p < n && !v[p]) ++p;
        if (p == n) continue;
        // Keep the basis fully reduced so `reduce` needs a single pass.
        for (Row& b : basis)
            if (b.v[p]) {
                for (std::size_t i = 0; i < n; ++i) b.v[i] = b.v[i] != v[i];
                for (std::size_t i = 0; i < m; ++i) b.combo[i] = b.combo[i] != combo[i];
            }
        basis.push_back(Row{v, combo, p});
    }
    Bits t(n), combo(m);
    for (std::size_t i = 0; i < n; ++i) t[i] = pr.target[i] & 1;
    reduce(t, combo);
    for (std::size_t i = 0; i < n; ++i)
        if (t[i]) return std::nullopt;
    std::vector<std::int64_t> x(m, 0);
    for (std::size_t i = 0; i < m; ++i) x[i] = combo[i] ? 1 : 0;
    return x;
}

// ℤ-lattice membership by integer column echelon form.
inline std::optional<std::vector<std::int64_t>> solve_ag(const Problem& pr) {
    std::size_t n = pr.atoms.size(), m = pr.columns.size();
    struct Gen {
        std::vector<cpp_int> v;
        std::vector<cpp_int> combo;
    };
    std::vector<Gen> pool;
    for (std::size_t j = 0; j < m; ++j) {
        Gen g{std::vector<cpp_int>(n), std::vector<cpp_int>(m)};
        for (std::size_t i = 0; i < n; ++i) g.v[i] = pr.columns[j][i];
        g.combo[j] = 1;
        pool.push_back(std::move(g));
    }
    auto axpy = [](std::vector<cpp_int>& y, const cpp_int& q, const std::vector<cpp_int>& x) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] -= q * x[i];
    };
    std::vector<std::pair<std::size_t, Gen>> pivots;
    for (std::size_t r = 0; r < n; ++r) {
        while (true) {
            std::size_t best = pool.size();
            std::size_t active = 0;
            for (std::size_t j = 0; j < pool.size(); ++j) {
                if (pool[j].v[r] == 0) continue;
                ++active;
                if (best == pool.size() || abs(pool[j].v[r]) < abs(pool[best].v[r])) best = j;
            }
            if (active == 0) break;
            if (active == 1) {
                Gen g = std::move(pool[best]);
                pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
                if (g.v[r] < 0) {
                    for (cpp_int& c : g.v) c = -c;
                    for (cpp_int& c : g.combo) c = -c;
                }
                pivots.emplace_back(r, std::move(g));
                break;
            }
            for (std::size_t j = 0; j < pool.size(); ++j) {
                if (j == best || pool[j].v[r] == 0) continue;
                cpp_int q = pool[j].v[r] / pool[best].v[r];
                axpy(pool[j].v, q, pool[best].v);
                axpy(pool[j].combo, q, pool[best].combo);
            }
        }
    }
    std::vector<cpp_int> b(n), x(m);
    for (std::size_t i = 0; i < n; ++i) b[i] = pr.target[i];
    for (const auto& [r, g] : pivots) {
        if (b[r] % g.v[r] != 0) return std::nullopt;
        cpp_int q = b[r] / g.v[r];
        axpy(b, q, g.v);
        for (std::size_t j = 0; j < m; ++j) x[j] += q * g.combo[j];
    }
    for (const cpp_int& c : b)
        if (c != 0) return std::nullopt;
    std::vector<std::int64_t> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (abs(x[j]) > cpp_int(std::numeric_limits<std::int64_t>::max()))
            throw Error("AG witness coefficient does not fit in 64 bits");
        out[j] = static_cast<std::int64_t>(x[j]);
    }
    return out;
}

}  // namespace elem_detail

/// Decides Γ ⊩_{E_i} M for one constituent theory. Inputs must be in normal
/// form. The returned witness always replays to M.
inline std::optional<ElemWitness> elem_deduce(const Theory& th, const TermSet& gamma, Term m) {
    if (th.backend() == Backend::None) throw Error("theory " + th.id() + " has no elementary backend");
    if (gamma.count(m)) {
        Backend b = th.has_ac() ? th.backend() : Backend::Empty;
        return ElemWitness{th.has_ac() ? th.key() : "empty", b, {{m, 1}}};
    }
    if (th.backend() == Backend::Empty || !th.has_ac()) return std::nullopt;
    // A goal outside Σ_{E_i} can only be a hole itself.
    if (m.is_app() && !th.has_symbol(m.symbol()) && th.backend() == Backend::AC) return std::nullopt;
    elem_detail::Problem pr = elem_detail::build(th, gamma, m);
    std::optional<std::vector<std::int64_t>> x;
    switch (th.backend()) {
        case Backend::AC: x = elem_detail::AcSolver(pr).solve(); break;
        case Backend::XOR: x = elem_detail::solve_xor(pr); break;
        case Backend::AG: x = elem_detail::solve_ag(pr); break;
        default: break;
    }
    if (!x) return std::nullopt;
    return elem_detail::make_witness(th, pr, *x);
}

/// Tries every constituent theory; an empty combination behaves as EMPTY.
inline std::optional<ElemWitness> elem_deduce(const Combination& e, const TermSet& gamma, Term m) {
    if (e.parts().empty()) return elem_deduce(theories::empty(), gamma, m);
    for (const Theory& th : e.parts())
        if (auto w = elem_deduce(th, gamma, m)) return w;
    return std::nullopt;
}

}  // namespace intruder
