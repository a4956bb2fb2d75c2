#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "elementary.hpp"
#include "substitution.hpp"
#include "syntax.hpp"
#include "term.hpp"

namespace intruder {

/// Natural deduction, sequent calculus, linear system.
enum class System { N, S, L };

inline const char* system_name(System s) {
    switch (s) {
        case System::N: return "N";
        case System::S: return "S";
        case System::L: return "L";
    }
    return "?";
}

namespace rules {

// System N
inline constexpr const char* id = "id";
inline constexpr const char* e_E = "e_E";
inline constexpr const char* e_I = "e_I";
inline constexpr const char* p_E = "p_E";
inline constexpr const char* p_I = "p_I";
inline constexpr const char* sign_E = "sign_E";
inline constexpr const char* sign_I = "sign_I";
inline constexpr const char* blind_E1 = "blind_E1";
inline constexpr const char* blind_E2 = "blind_E2";
inline constexpr const char* blind_I = "blind_I";
inline constexpr const char* f_I = "f_I";
inline constexpr const char* approx = "approx";
// System S
inline constexpr const char* cut = "cut";
inline constexpr const char* p_L = "p_L";
inline constexpr const char* p_R = "p_R";
inline constexpr const char* e_L = "e_L";
inline constexpr const char* e_R = "e_R";
inline constexpr const char* sign_L = "sign_L";
inline constexpr const char* sign_R = "sign_R";
inline constexpr const char* blind_L1 = "blind_L1";
inline constexpr const char* blind_L2 = "blind_L2";
inline constexpr const char* blind_R = "blind_R";
inline constexpr const char* acut = "acut";
// System L
inline constexpr const char* r = "r";
inline constexpr const char* lp = "lp";
inline constexpr const char* le = "le";
inline constexpr const char* sign = "sign";
inline constexpr const char* blind1 = "blind1";
inline constexpr const char* blind2 = "blind2";
inline constexpr const char* ls = "ls";

inline bool is_left_S(const std::string& r) {
    return r == p_L || r == e_L || r == sign_L || r == blind_L1 || r == blind_L2 || r == acut;
}
inline bool is_right_S(const std::string& r) { return r == p_R || r == e_R || r == sign_R || r == blind_R; }
inline bool is_branching_left_S(const std::string& r) {
    return r == e_L || r == blind_L1 || r == blind_L2 || r == acut;
}
inline bool is_left_L(const std::string& r) {
    return r == lp || r == le || r == sign || r == blind1 || r == blind2 || r == ls;
}

}  // namespace rules

struct Derivation;

struct Aux {
    std::optional<Term> principal;
    std::optional<ElemWitness> witness;
    std::string symbol;                 // f_I
    std::shared_ptr<Derivation> side;   // L: proof of the ⊩_R side condition
};

/// A rule-labelled proof tree. The conclusion is gamma ⊢ goal.
struct Derivation {
    System system = System::S;
    std::string rule;
    TermSet gamma;
    Term goal;
    Aux aux;
    std::vector<Derivation> premises;

    Derivation() = default;
    Derivation(System sys, std::string r, TermSet g, Term m, std::vector<Derivation> ps = {})
        : system(sys), rule(std::move(r)), gamma(std::move(g)), goal(m), premises(std::move(ps)) {}

    const Derivation& premise(std::size_t i) const { return premises.at(i); }
};

inline std::size_t height(const Derivation& d) {
    std::size_t h = 0;
    for (const Derivation& p : d.premises) h = std::max(h, height(p));
    return h + 1;
}

inline std::size_t node_count(const Derivation& d) {
    std::size_t n = 1;
    for (const Derivation& p : d.premises) n += node_count(p);
    return n;
}

/// Visits every node, descending into side proofs when `sides` is set.
inline void visit(const Derivation& d, const std::function<void(const Derivation&)>& f, bool sides = true) {
    f(d);
    if (sides && d.aux.side) visit(*d.aux.side, f, sides);
    for (const Derivation& p : d.premises) visit(p, f, sides);
}

inline std::size_t count_rules(const Derivation& d, const std::function<bool(const std::string&)>& pred,
                               bool sides = false) {
    std::size_t n = 0;
    visit(d, [&](const Derivation& x) { n += pred(x.rule) ? 1 : 0; }, sides);
    return n;
}

inline bool uses_rule(const Derivation& d, const std::string& rule) {
    return count_rules(d, [&](const std::string& r) { return r == rule; }, true) > 0;
}

inline TermSet with(TermSet g, std::initializer_list<Term> extra) {
    for (Term t : extra) g.insert(t);
    return g;
}

inline std::string sequent_string(const TermSet& gamma, Term goal) {
    std::string out;
    for (Term t : gamma) {
        if (!out.empty()) out += ", ";
        out += to_string(t);
    }
    return out + (out.empty() ? "|- " : " |- ") + to_string(goal);
}

namespace detail {

inline void print_derivation(std::ostream& os, const Derivation& d, int depth) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    os << pad << "[" << d.rule << "] " << sequent_string(d.gamma, d.goal);
    if (d.aux.principal) os << "   principal " << to_string(*d.aux.principal);
    if (d.aux.witness) {
        os << "   context " << d.aux.witness->theory << ":";
        if (d.aux.witness->parts.empty()) os << " unit";
        const char* sep = " ";
        for (const auto& [t, c] : d.aux.witness->parts) {
            os << sep << c << "·[" << to_string(t) << "]";
            sep = ", ";
        }
    }
    if (!d.aux.symbol.empty()) os << "   symbol " << d.aux.symbol;
    os << "\n";
    if (d.aux.side) {
        os << pad << "  side:\n";
        print_derivation(os, *d.aux.side, depth + 2);
    }
    for (const Derivation& p : d.premises) print_derivation(os, p, depth + 1);
}

}  // namespace detail

/// Indented text rendering, conclusion first.
inline std::string to_text(const Derivation& d) {
    std::ostringstream os;
    os << "system " << system_name(d.system) << "\n";
    detail::print_derivation(os, d, 0);
    return os.str();
}

}  // namespace intruder
