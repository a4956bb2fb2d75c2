#pragma once

// Deducibility constraints for a Dolev-Yao intruder (pairing and symmetric
// encryption, no equational theory), solved by the reduction rules C1-C5.

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "substitution.hpp"
#include "syntax.hpp"
#include "term.hpp"
#include "theory.hpp"

namespace intruder {

enum class ConstraintKind { Proper, Right };

struct Constraint {
    ConstraintKind kind = ConstraintKind::Proper;
    TermSet sigma;
    Term goal;

    bool is_right() const { return kind == ConstraintKind::Right; }

    friend bool operator==(const Constraint& a, const Constraint& b) {
        return a.kind == b.kind && a.sigma == b.sigma && a.goal == b.goal;
    }
    friend bool operator<(const Constraint& a, const Constraint& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.goal != b.goal) return compare(a.goal, b.goal) < 0;
        return std::lexicographical_compare(a.sigma.begin(), a.sigma.end(), b.sigma.begin(), b.sigma.end(),
                                            TermLess{});
    }
};

struct ConstraintSystem {
    std::vector<Constraint> items;
    Term public_name;

    bool empty() const { return items.empty(); }
    std::size_t size() const { return items.size(); }

    friend bool operator==(const ConstraintSystem& a, const ConstraintSystem& b) {
        return a.public_name == b.public_name && a.items == b.items;
    }
    friend bool operator<(const ConstraintSystem& a, const ConstraintSystem& b) {
        if (a.public_name != b.public_name) return compare(a.public_name, b.public_name) < 0;
        return a.items < b.items;
    }
};

inline std::string to_string(const Constraint& c) {
    std::string out;
    for (Term t : c.sigma) {
        if (!out.empty()) out += ", ";
        out += to_string(t);
    }
    return out + (c.is_right() ? " |-R " : " |- ") + to_string(c.goal);
}

inline std::string to_string(const ConstraintSystem& c) {
    std::string out = "public " + (c.public_name.valid() ? to_string(c.public_name) : std::string("?")) + "\n";
    for (const Constraint& k : c.items) out += to_string(k) + "\n";
    return out;
}

inline TermSet vars_of(const Constraint& c) {
    TermSet out;
    for (Term t : c.sigma) collect_vars(t, out);
    collect_vars(c.goal, out);
    return out;
}

inline TermSet vars_of(const ConstraintSystem& c) {
    TermSet out;
    for (const Constraint& k : c.items) {
        TermSet v = vars_of(k);
        out.insert(v.begin(), v.end());
    }
    return out;
}

inline TermSet apply(const Substitution& s, const TermSet& ts) {
    TermSet out;
    for (Term t : ts) out.insert(s.apply(t));
    return out;
}

inline Constraint apply(const Substitution& s, const Constraint& c) {
    return Constraint{c.kind, apply(s, c.sigma), s.apply(c.goal)};
}

inline ConstraintSystem apply(const Substitution& s, const ConstraintSystem& c) {
    ConstraintSystem out{{}, c.public_name};
    for (const Constraint& k : c.items) out.items.push_back(intruder::apply(s, k));
    return out;
}

// ---------------------------------------------------------------------------
// Unification

namespace unify_detail {

inline Term walk(Term t, const Substitution& s) {
    while (t.is_var()) {
        auto v = s.lookup(t);
        if (!v) break;
        t = *v;
    }
    return t;
}

inline bool occurs_in(Term x, Term t, const Substitution& s) {
    t = walk(t, s);
    if (t == x) return true;
    if (!t.is_app()) return false;
    for (Term a : t.args())
        if (occurs_in(x, a, s)) return true;
    return false;
}

inline Term resolve(Term t, const Substitution& s) {
    t = walk(t, s);
    if (!t.is_app() || t.is_ground()) return t;
    std::vector<Term> args;
    for (Term a : t.args()) args.push_back(resolve(a, s));
    return rebuild(t, std::move(args));
}

}  // namespace unify_detail

/// Most general syntactic unifier (Robinson, with occurs check), returned in
/// idempotent form.
inline std::optional<Substitution> mgu(Term s, Term t) {
    using namespace unify_detail;
    Substitution tri;
    std::vector<std::pair<Term, Term>> todo{{s, t}};
    while (!todo.empty()) {
        auto [a, b] = todo.back();
        todo.pop_back();
        a = walk(a, tri);
        b = walk(b, tri);
        if (a == b) continue;
        if (b.is_var() && !a.is_var()) std::swap(a, b);
        if (a.is_var()) {
            if (occurs_in(a, b, tri)) return std::nullopt;
            tri.bind(a, b);
            continue;
        }
        if (!a.is_app() || !b.is_app() || a.symbol() != b.symbol() || a.arity() != b.arity()) return std::nullopt;
        if (a.symbol().is_ac()) throw Error("syntactic unification does not handle AC symbols");
        for (std::size_t i = 0; i < a.arity(); ++i) todo.emplace_back(a.arg(i), b.arg(i));
    }
    Substitution out;
    for (const auto& [x, v] : tri.bindings()) out.bind(x, resolve(v, tri));
    return out;
}

// ---------------------------------------------------------------------------
// Measure

/// |C| = (#V(C), multiset of (0,|M|) for right and (1,|Σ|) for proper).
struct Measure {
    std::size_t nvars = 0;
    std::vector<std::pair<int, std::size_t>> bag;  // sorted

    friend bool operator==(const Measure& a, const Measure& b) { return a.nvars == b.nvars && a.bag == b.bag; }
};

inline std::size_t weight(const TermSet& ts) {
    std::size_t n = 0;
    for (Term t : ts) n += t.size();
    return n;
}

inline Measure measure(const ConstraintSystem& c) {
    Measure m;
    m.nvars = vars_of(c).size();
    for (const Constraint& k : c.items)
        m.bag.emplace_back(k.is_right() ? 0 : 1, k.is_right() ? k.goal.size() : weight(k.sigma));
    std::sort(m.bag.begin(), m.bag.end());
    return m;
}

/// Dershowitz-Manna: A < B iff A ≠ B and every element with more copies in A
/// is dominated by some element with more copies in B.
template <class T>
bool multiset_less(const std::vector<T>& a, const std::vector<T>& b) {
    std::map<T, long> diff;
    for (const T& x : a) ++diff[x];
    for (const T& x : b) --diff[x];
    bool differs = false;
    for (const auto& [x, d] : diff) {
        if (d == 0) continue;
        differs = true;
        if (d < 0) continue;
        bool dominated = false;
        for (const auto& [y, e] : diff)
            if (e < 0 && x < y) {
                dominated = true;
                break;
            }
        if (!dominated) return false;
    }
    return differs;
}

inline bool operator<(const Measure& a, const Measure& b) {
    if (a.nvars != b.nvars) return a.nvars < b.nvars;
    return multiset_less(a.bag, b.bag);
}

// ---------------------------------------------------------------------------
// Well-formedness

struct WellFormedness {
    bool ok = true;
    int condition = 0;  // 1: knowledge monotonicity, 2: variable origination, 3: public name, 4: term shape
    std::string message;
    explicit operator bool() const { return ok; }
};

namespace constraint_detail {

inline bool allowed_term(Term t) {
    if (!t.is_app()) return true;
    if (!t.headed_by(Symbol::pair()) && !t.headed_by(Symbol::enc())) return false;
    return allowed_term(t.arg(0)) && allowed_term(t.arg(1));
}

inline WellFormedness fail(int cond, std::string msg) { return WellFormedness{false, cond, std::move(msg)}; }

inline WellFormedness common(const ConstraintSystem& c) {
    if (!c.public_name.valid() || !c.public_name.is_name()) return fail(3, "no public name declared");
    for (std::size_t i = 0; i < c.items.size(); ++i) {
        const Constraint& k = c.items[i];
        if (!k.goal.valid()) return fail(4, "constraint " + std::to_string(i + 1) + " has no goal");
        for (Term t : k.sigma)
            if (!allowed_term(t))
                return fail(4, "constraint " + std::to_string(i + 1) + ": term " + to_string(t) +
                                   " uses a symbol other than pair and enc");
        if (!allowed_term(k.goal))
            return fail(4, "constraint " + std::to_string(i + 1) + ": goal uses a symbol other than pair and enc");
        if (!k.sigma.count(c.public_name))
            return fail(3, "constraint " + std::to_string(i + 1) + " does not contain the public name " +
                               to_string(c.public_name));
    }
    TermSet seen;
    for (std::size_t i = 0; i < c.items.size(); ++i) {
        const Constraint& k = c.items[i];
        TermSet left;
        for (Term t : k.sigma) collect_vars(t, left);
        for (Term x : left)
            if (!seen.count(x))
                return fail(2, "condition 2 (variable origination) violated: " + to_string(x) +
                                   " first occurs in the left-hand side of constraint " + std::to_string(i + 1));
        TermSet v = vars_of(k);
        seen.insert(v.begin(), v.end());
    }
    return {};
}

}  // namespace constraint_detail

/// Input check: shape, public name, variable origination, and left-hand sides
/// ordered by inclusion (a sufficient form of condition 1).
inline WellFormedness check_input(const ConstraintSystem& c) {
    if (auto w = constraint_detail::common(c); !w) return w;
    for (std::size_t i = 0; i + 1 < c.items.size(); ++i)
        for (Term t : c.items[i].sigma)
            if (!c.items[i + 1].sigma.count(t))
                return constraint_detail::fail(1, "condition 1 (monotone knowledge) violated: " + to_string(t) +
                                                      " of constraint " + std::to_string(i + 1) +
                                                      " is missing from constraint " + std::to_string(i + 2));
    return {};
}

/// Check used on reduction successors. Condition 1 is verified through a
/// sufficient criterion that is stable under C1-C5: for i < j, every member of
/// Σ_i is deducible from Σ_j^{dv} extended with the goals of earlier
/// constraints whose left-hand sides are themselves deducible from it.
/// Variables are treated as opaque atoms, which makes the criterion hold under
/// every substitution.
class SuccessorChecker {
public:
    SuccessorChecker() : engine_(Combination()) {}

    WellFormedness check(const ConstraintSystem& c) {
        if (auto w = constraint_detail::common(c); !w) return w;
        for (std::size_t j = 1; j < c.items.size(); ++j)
            for (std::size_t i = 0; i < j; ++i)
                if (!pair_ok(c, i, j))
                    return constraint_detail::fail(1, "condition 1 may fail between constraints " +
                                                          std::to_string(i + 1) + " and " + std::to_string(j + 1));
        return {};
    }

private:
    bool deducible(const TermSet& known, Term t) {
        if (known.count(t)) return true;
        auto key = std::make_pair(known, t);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        bool ok = engine_.deduce(known, t).derivable();
        cache_.emplace(std::move(key), ok);
        return ok;
    }

    bool all_deducible(const TermSet& known, const TermSet& ts) {
        for (Term t : ts)
            if (!deducible(known, t)) return false;
        return true;
    }

    bool pair_ok(const ConstraintSystem& c, std::size_t i, std::size_t j) {
        const TermSet& si = c.items[i].sigma;
        const TermSet& sj = c.items[j].sigma;
        if (std::includes(sj.begin(), sj.end(), si.begin(), si.end(), TermLess{})) return true;
        TermSet vi;
        for (Term t : si) collect_vars(t, vi);
        TermSet known;
        for (Term t : sj) {
            TermSet v = vars_of(t);
            if (std::includes(vi.begin(), vi.end(), v.begin(), v.end(), TermLess{})) known.insert(t);
        }
        std::vector<bool> used(j, false);
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t k = 0; k < j; ++k) {
                if (used[k] || !all_deducible(known, c.items[k].sigma)) continue;
                used[k] = true;
                if (known.insert(c.items[k].goal).second) grew = true;
            }
        }
        return all_deducible(known, si);
    }

    Engine engine_;
    std::map<std::pair<TermSet, Term>, bool> cache_;
};

// ---------------------------------------------------------------------------
// Reduction

inline bool is_solved(const ConstraintSystem& c) {
    for (const Constraint& k : c.items)
        if (!k.is_right() || !k.goal.is_var()) return false;
    return true;
}

struct Edge {
    std::string rule;  // C1 .. C5
    std::size_t index = 0;
    Substitution theta;
    ConstraintSystem next;
};

namespace constraint_detail {

inline ConstraintSystem replace(const ConstraintSystem& c, std::size_t i, std::vector<Constraint> with) {
    ConstraintSystem out{{}, c.public_name};
    for (std::size_t k = 0; k < c.items.size(); ++k) {
        if (k == i)
            for (Constraint& w : with) out.items.push_back(std::move(w));
        else
            out.items.push_back(c.items[k]);
    }
    return out;
}

inline void steps_at(const ConstraintSystem& c, std::size_t i, std::vector<Edge>& out) {
    const Constraint& k = c.items[i];
    if (k.is_right()) {
        if (k.goal.is_var()) return;
        for (Term n : k.sigma) {
            auto theta = mgu(k.goal, n);
            if (!theta) continue;
            out.push_back({"C1", i, *theta, intruder::apply(*theta, replace(c, i, {}))});
        }
        if (k.goal.headed_by(Symbol::pair()) || k.goal.headed_by(Symbol::enc()))
            out.push_back({"C2", i, {},
                           replace(c, i,
                                   {Constraint{ConstraintKind::Right, k.sigma, k.goal.arg(0)},
                                    Constraint{ConstraintKind::Right, k.sigma, k.goal.arg(1)}})});
        return;
    }
    out.push_back({"C3", i, {}, replace(c, i, {Constraint{ConstraintKind::Right, k.sigma, k.goal}})});
    for (Term t : k.sigma) {
        if (t.headed_by(Symbol::pair())) {
            TermSet rest = k.sigma;
            rest.erase(t);
            if (rest.count(t)) continue;
            rest.insert(t.arg(0));
            rest.insert(t.arg(1));
            out.push_back({"C4", i, {}, replace(c, i, {Constraint{ConstraintKind::Proper, rest, k.goal}})});
        } else if (t.headed_by(Symbol::enc())) {
            TermSet rest = k.sigma;
            rest.erase(t);
            if (rest.count(t)) continue;
            rest.insert(t.arg(0));
            rest.insert(t.arg(1));
            out.push_back({"C5", i, {},
                           replace(c, i,
                                   {Constraint{ConstraintKind::Right, k.sigma, t.arg(1)},
                                    Constraint{ConstraintKind::Proper, rest, k.goal}})});
        }
    }
}

}  // namespace constraint_detail

/// All one-step successors.
inline std::vector<Edge> step(const ConstraintSystem& c) {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < c.items.size(); ++i) constraint_detail::steps_at(c, i, out);
    return out;
}

/// Successors that rewrite the first constraint not in solved form.
inline std::vector<Edge> step_first_unsolved(const ConstraintSystem& c) {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < c.items.size(); ++i) {
        const Constraint& k = c.items[i];
        if (k.is_right() && k.goal.is_var()) continue;
        constraint_detail::steps_at(c, i, out);
        break;
    }
    return out;
}

// FirstUnsolved rewrites only the first constraint not in solved form but
// branches over every rule and unifier there; every solution of the input is
// an instance of one of the solved forms it returns. Exhaustive also branches
// over the choice of constraint and can be exponentially larger.
enum class SearchStrategy { Exhaustive, FirstUnsolved };

struct SolveOptions {
    SearchStrategy strategy = SearchStrategy::FirstUnsolved;
    bool first_only = false;    // stop at the first solved form
    std::size_t workers = 1;
    std::size_t node_limit = 2'000'000;
    // Called for every explored edge; may be invoked from worker threads.
    std::function<void(const ConstraintSystem&, const Edge&)> on_edge;
};

struct SolvedForm {
    Substitution sigma;  // composed along the path, restricted to V(C)
    ConstraintSystem system;
    std::vector<std::string> path;

    friend bool operator<(const SolvedForm& a, const SolvedForm& b) {
        if (!(a.sigma == b.sigma)) return a.sigma < b.sigma;
        return a.system < b.system;
    }
};

struct SolveResult {
    std::vector<SolvedForm> solutions;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    bool truncated = false;

    bool satisfiable() const { return !solutions.empty(); }
};

namespace constraint_detail {

class Search {
public:
    Search(const SolveOptions& opts, TermSet vars) : opts_(opts), vars_(std::move(vars)) {}

    void run(const ConstraintSystem& c, const Substitution& sigma, std::vector<std::string>& path) {
        if (done_) return;
        auto key = std::make_pair(c, sigma.restrict(vars_));
        if (!seen_.insert(key).second) return;
        if (++res.nodes > opts_.node_limit) {
            res.truncated = true;
            done_ = true;
            return;
        }
        if (is_solved(c)) {
            res.solutions.push_back({key.second, c, path});
            if (opts_.first_only) done_ = true;
            return;
        }
        std::vector<Edge> edges =
            opts_.strategy == SearchStrategy::Exhaustive ? step(c) : step_first_unsolved(c);
        for (const Edge& e : edges) {
            ++res.edges;
            if (opts_.on_edge) opts_.on_edge(c, e);
            path.push_back(e.rule);
            run(e.next, sigma.then(e.theta), path);
            path.pop_back();
            if (done_) return;
        }
    }

    SolveResult res;

private:
    const SolveOptions& opts_;
    TermSet vars_;
    std::set<std::pair<ConstraintSystem, Substitution>> seen_;
    bool done_ = false;
};

inline void finish(SolveResult& r) {
    std::sort(r.solutions.begin(), r.solutions.end());
    r.solutions.erase(std::unique(r.solutions.begin(), r.solutions.end(),
                                  [](const SolvedForm& a, const SolvedForm& b) {
                                      return !(a < b) && !(b < a);
                                  }),
                      r.solutions.end());
}

}  // namespace constraint_detail

/// Explores the (finite) reduction tree under the chosen strategy and returns
/// the reachable solved forms, sorted. Throws on ill-formed input.
inline SolveResult solve(const ConstraintSystem& c, const SolveOptions& opts = {}) {
    if (auto w = check_input(c); !w) throw Error(w.message);
    TermSet vars = vars_of(c);
    if (opts.workers <= 1) {
        constraint_detail::Search s(opts, vars);
        std::vector<std::string> path;
        s.run(c, Substitution(), path);
        constraint_detail::finish(s.res);
        return std::move(s.res);
    }
    // Root successors are distributed round-robin; each worker has its own memo.
    SolveResult total;
    total.nodes = 1;
    if (is_solved(c)) {
        total.solutions.push_back({Substitution(), c, {}});
        return total;
    }
    std::vector<Edge> roots = opts.strategy == SearchStrategy::Exhaustive ? step(c) : step_first_unsolved(c);
    for (const Edge& e : roots) {
        ++total.edges;
        if (opts.on_edge) opts.on_edge(c, e);
    }
    std::vector<SolveResult> parts(opts.workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < opts.workers; ++w)
        pool.emplace_back([&, w] {
            constraint_detail::Search s(opts, vars);
            for (std::size_t i = w; i < roots.size(); i += opts.workers) {
                std::vector<std::string> path{roots[i].rule};
                s.run(roots[i].next, roots[i].theta.restrict(vars), path);
            }
            parts[w] = std::move(s.res);
        });
    for (std::thread& t : pool) t.join();
    for (SolveResult& p : parts) {
        total.nodes += p.nodes;
        total.edges += p.edges;
        total.truncated = total.truncated || p.truncated;
        for (SolvedForm& s : p.solutions) total.solutions.push_back(std::move(s));
    }
    constraint_detail::finish(total);
    if (opts.first_only && total.solutions.size() > 1) total.solutions.resize(1);
    return total;
}

/// σ followed by mapping every remaining variable to the public name,
/// restricted to V(C).
inline Substitution extract_solution(const Substitution& sigma, const ConstraintSystem& original) {
    Substitution to_public;
    TermSet vars = vars_of(original);
    for (const auto& [x, t] : sigma.bindings()) collect_vars(t, vars);
    for (Term x : vars) to_public.bind(x, original.public_name);
    Substitution out;
    for (Term x : vars_of(original)) out.bind(x, to_public.apply(sigma.apply(x)));
    return out;
}

/// Definition of a solution, decided with the empty-theory engine.
inline bool verify_solution(const ConstraintSystem& c, const Substitution& theta) {
    Engine engine{Combination()};
    for (const Constraint& k : c.items) {
        TermSet s = intruder::apply(theta, k.sigma);
        Term m = theta.apply(k.goal);
        for (Term t : s)
            if (!t.is_ground()) return false;
        if (!m.is_ground()) return false;
        bool ok = k.is_right() ? engine.right_deducible(s, m) : engine.deduce(s, m).derivable();
        if (!ok) return false;
    }
    return true;
}

}  // namespace intruder
