#include <gtest/gtest.h>
#include <set>

#include "support.hpp"

using namespace itest;

namespace {

// Candidate images for a pattern variable: every subterm of the subject, and
// every partial sum of an AC-headed subterm.
TermSet match_candidates(Term subject) {
    TermSet out;
    for (Term s : subterms(subject)) {
        out.insert(s);
        if (!s.is_app() || !s.symbol().is_ac()) continue;
        std::vector<Term> args = s.args();
        std::size_t k = args.size();
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
            std::vector<Term> part;
            for (std::size_t i = 0; i < k; ++i)
                if (mask >> i & 1) part.push_back(args[i]);
            out.insert(part.size() == 1 ? part[0] : Term::ac(s.symbol(), part));
        }
    }
    return out;
}

std::set<Substitution> brute_force_matches(Term pattern, Term subject) {
    std::vector<Term> vars;
    for (Term x : vars_of(pattern)) vars.push_back(x);
    std::vector<Term> cand;
    for (Term t : match_candidates(subject)) cand.push_back(t);
    std::set<Substitution> out;
    std::vector<std::size_t> idx(vars.size(), 0);
    while (true) {
        Substitution s;
        for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], cand[idx[i]]);
        if (s.apply(pattern) == subject) out.insert(s);
        std::size_t i = 0;
        while (i < vars.size() && ++idx[i] == cand.size()) idx[i++] = 0;
        if (i == vars.size() || vars.empty()) break;
    }
    return out;
}

Term random_sum(Gen& g, Symbol f, std::size_t k) {
    std::vector<Term> parts;
    for (std::size_t i = 0; i < k; ++i) parts.push_back(g.coin(0.7) ? g.name(3) : Term::pair(g.name(2), g.name(2)));
    return parts.size() == 1 ? parts[0] : Term::ac(f, parts);
}

}  // namespace

TEST(Matching, SimpleAcMatch) {
    auto ms = match_mod_ac(P("?x + a"), P("a + b + c"));
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_EQ(ms[0].apply(v("x")), P("b + c"));
}

TEST(Matching, RepeatedVariable) {
    EXPECT_EQ(match_mod_ac(P("?x + ?x"), P("a + a")).size(), 1u);
    EXPECT_TRUE(match_mod_ac(P("?x + ?x"), P("a + b")).empty());
    EXPECT_EQ(match_mod_ac(P("?x + ?x + ?y"), P("a + a + b")).size(), 1u);
}

TEST(Matching, AgreesWithBruteForce) {
    Gen g(11);
    Symbol plus = theories::plus();
    const char* patterns[] = {"?x + ?y", "?x + ?x", "?x + a", "pair(?x, ?y) + ?z", "?x + ?x + ?y", "?x"};
    for (int i = 0; i < 300; ++i) {
        Term subject = random_sum(g, plus, 1 + g.below(4));
        Term pattern = P(patterns[g.below(6)]);
        auto got = match_mod_ac(pattern, subject);
        std::set<Substitution> mine(got.begin(), got.end());
        EXPECT_EQ(mine.size(), got.size()) << "duplicates for " << to_string(subject);
        EXPECT_EQ(mine, brute_force_matches(pattern, subject))
            << to_string(pattern) << " against " << to_string(subject);
    }
}

TEST(Normalize, XorExamples) {
    Normalizer norm(xor_plus());
    EXPECT_EQ(norm.normalize(P("a + a")), P("0"));
    EXPECT_EQ(norm.normalize(P("a + b + a")), n("b"));
    EXPECT_EQ(norm.normalize(P("a + 0")), n("a"));
    EXPECT_EQ(norm.normalize(P("pair(a + a, b)")), P("pair(0, b)"));
    EXPECT_EQ(norm.normalize(P("a + b + a + b + 0")), P("0"));
}

TEST(Normalize, AbelianGroupExamples) {
    Normalizer norm(ag_plus());
    EXPECT_EQ(norm.normalize(P("a + inv(a)")), P("1"));
    EXPECT_EQ(norm.normalize(P("inv(inv(a))")), n("a"));
    EXPECT_EQ(norm.normalize(P("inv(a + b)")), P("inv(a) + inv(b)"));
    EXPECT_EQ(norm.normalize(P("a + b + inv(a)")), n("b"));
    EXPECT_EQ(norm.normalize(P("inv(1)")), P("1"));
    EXPECT_EQ(norm.normalize(P("a + a + inv(a)")), n("a"));
}

namespace {

Term random_xor(Gen& g, int depth) {
    if (depth == 0 || g.coin(0.3)) return g.coin(0.15) ? P("0") : g.name(3);
    if (g.coin(0.2)) return Term::pair(random_xor(g, depth - 1), random_xor(g, depth - 1));
    return Term::ac(theories::plus(), {random_xor(g, depth - 1), random_xor(g, depth - 1)});
}

Term random_ag(Gen& g, int depth) {
    if (depth == 0 || g.coin(0.3)) return g.coin(0.15) ? P("1") : g.name(3);
    switch (g.below(3)) {
        case 0: return Term::app(Symbol::find("inv"), {random_ag(g, depth - 1)});
        default: return Term::ac(theories::plus(), {random_ag(g, depth - 1), random_ag(g, depth - 1)});
    }
}

// Canonical string for a term modulo XOR, recursing through aliens.
std::string xor_key(Term t) {
    Symbol plus = theories::plus();
    if (t.headed_by(plus) || to_string(t) == "0") {
        std::set<std::string> odd;
        for (auto [k, x] : xor_view(t, plus)) {
            std::string key = xor_key(k);
            if (!odd.erase(key)) odd.insert(key);
        }
        odd.erase("0");
        if (odd.empty()) return "0";
        if (odd.size() == 1) return *odd.begin();
        std::string out = "{";
        for (const std::string& k : odd) out += k + ";";
        return out + "}";
    }
    if (!t.is_app() || t.args().empty()) return to_string(t);
    std::string out = t.symbol().name() + "(";
    for (Term a : t.args()) out += xor_key(a) + ",";
    return out + ")";
}

}  // namespace

TEST(Normalize, XorNormalFormMatchesParityView) {
    Gen g(12);
    Normalizer norm(xor_plus());
    for (int i = 0; i < 500; ++i) {
        Term t = Term::ac(theories::plus(), {random_xor(g, 2), random_xor(g, 2), g.name(3)});
        Term nf = norm.normalize(t);
        EXPECT_TRUE(norm.is_normal(nf));
        EXPECT_EQ(xor_key(nf), xor_key(t)) << to_string(t);
        if (nf.headed_by(theories::plus())) {
            std::vector<Term> args = nf.args();
            EXPECT_EQ(std::adjacent_find(args.begin(), args.end()), args.end()) << to_string(nf);
            for (Term a : args) EXPECT_NE(a, P("0"));
        }
    }
}

TEST(Normalize, AbelianGroupNormalFormMatchesCoefficients) {
    Gen g(13);
    Normalizer norm(ag_plus());
    for (int i = 0; i < 500; ++i) {
        Term t = random_ag(g, 3);
        Term nf = norm.normalize(t);
        EXPECT_EQ(ag_view(nf, theories::plus()), ag_view(t, theories::plus())) << to_string(t);
        EXPECT_TRUE(norm.is_normal(nf));
    }
}

TEST(Normalize, IdempotentAndStrategyIndependent) {
    Gen g(14);
    for (Combination e : {xor_plus(), ag_plus()}) {
        Normalizer norm(e);
        for (int i = 0; i < 300; ++i) {
            Term t = e.parts()[0].backend() == Backend::XOR ? random_xor(g, 3) : random_ag(g, 3);
            Term a = norm.normalize(t);
            EXPECT_EQ(norm.normalize(a), a);
            Normalizer fresh(e);
            EXPECT_EQ(fresh.normalize(t, Strategy::Outermost), a) << to_string(t);
            EXPECT_TRUE(one_step_rewrites(a, e).empty());
        }
    }
}

TEST(Normalize, EmptyAndAcTheoriesAreIdentity) {
    Gen g(15);
    Normalizer empty{Combination()}, ac(ac_plus());
    for (int i = 0; i < 100; ++i) {
        Term t = Term::ac(theories::plus(), {g.dy(3, 2), g.dy(3, 2)});
        EXPECT_EQ(empty.normalize(t), t);
        EXPECT_EQ(ac.normalize(t), t);
    }
}

TEST(Normalize, BudgetIsEnforced) {
    Normalizer norm(xor_plus(), 2);
    EXPECT_THROW(norm.normalize(P("a + a + b + b + c + c + d + d")), BudgetExceeded);
}

TEST(Normalize, CombinedTheoriesNormalizeIndependently) {
    Normalizer norm(xor_ag());
    EXPECT_EQ(norm.normalize(P("(a + a) * b")), P("0 * b"));
    EXPECT_EQ(norm.normalize(P("(a * inv(a)) + b")), P("1 + b"));
    EXPECT_EQ(norm.normalize(P("(a + b) * inv(a + b)")), P("1"));
}

TEST(Abstraction, AbstractConcretizeRoundTrip) {
    Gen g(16);
    Theory th = theories::exclusive_or();
    Normalizer norm(Combination{th});
    for (int i = 0; i < 200; ++i) {
        Term t = norm.normalize(Term::ac(theories::plus(), {g.dy(3, 2), g.dy(3, 2), g.name(3)}));
        Abstraction table;
        Term pure = abstract(t, th, table, &norm);
        EXPECT_TRUE(is_pure(pure, th)) << to_string(pure);
        EXPECT_EQ(concretize(pure, table), t);
    }
}

TEST(Abstraction, SameAlienSameVariable) {
    Theory th = theories::exclusive_or();
    Abstraction table;
    Term a = abstract(P("pair(a,b) + c"), th, table);
    Term b = abstract(P("pair(a,b) + d"), th, table);
    EXPECT_EQ(table.size(), 1u);
    TermSet va = vars_of(a), vb = vars_of(b);
    EXPECT_EQ(va, vb);
}
