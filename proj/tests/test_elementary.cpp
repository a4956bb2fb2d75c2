#include <gtest/gtest.h>

#include "support.hpp"

using namespace itest;

namespace {

std::optional<ElemWitness> ded(const Theory& th, std::initializer_list<const char*> gamma, const char* m) {
    Normalizer norm{Combination(th)};
    return elem_deduce(th, norm.normalize_all(set_of(gamma)), norm.normalize(P(m)));
}

}  // namespace

TEST(Elementary, EmptyTheoryIsMembership) {
    Theory th = theories::empty();
    EXPECT_TRUE(ded(th, {"a", "b"}, "a"));
    EXPECT_FALSE(ded(th, {"a", "b"}, "c"));
    EXPECT_FALSE(ded(th, {"a", "b"}, "pair(a,b)"));
}

TEST(Elementary, AcNeedsExactMultiset) {
    Theory th = theories::ac();
    auto w = ded(th, {"a", "b"}, "a + a + b");
    ASSERT_TRUE(w);
    EXPECT_EQ(w->holes(), 3u);
    EXPECT_FALSE(ded(th, {"a + b"}, "a"));
    EXPECT_TRUE(ded(th, {"a + b", "c"}, "a + b + c"));
    EXPECT_TRUE(ded(th, {"a + b"}, "a + b + a + b"));
    EXPECT_FALSE(ded(th, {"a + b", "b + c"}, "a + c"));
}

TEST(Elementary, XorCancels) {
    Theory th = theories::exclusive_or();
    EXPECT_TRUE(ded(th, {"a + b", "b + c"}, "a + c"));
    EXPECT_TRUE(ded(th, {"a + b", "b"}, "a"));
    EXPECT_FALSE(ded(th, {"a + b"}, "a"));
    EXPECT_TRUE(ded(th, {"a"}, "0"));
}

TEST(Elementary, AbelianGroupUsesInverses) {
    Theory th = theories::abelian_group();
    EXPECT_TRUE(ded(th, {"a + b", "b"}, "a"));
    EXPECT_TRUE(ded(th, {"a"}, "inv(a) + inv(a) + inv(a)"));
    EXPECT_FALSE(ded(th, {"a + a"}, "a"));
    EXPECT_TRUE(ded(th, {"a + a + b", "b"}, "inv(a) + inv(a)"));
    EXPECT_TRUE(ded(th, {"b"}, "1"));
}

TEST(Elementary, AliensAreOpaque) {
    Theory th = theories::exclusive_or();
    EXPECT_TRUE(ded(th, {"pair(a,b) + c", "c"}, "pair(a,b)"));
    EXPECT_FALSE(ded(th, {"pair(a,b) + c", "c"}, "pair(a,b) + a"));
}

TEST(Elementary, WitnessReplaysAndUsesGamma) {
    Gen g(21);
    for (Combination e : {xor_plus(), ag_plus(), ac_plus()}) {
        const Theory& th = e.parts()[0];
        Normalizer norm(e);
        std::vector<Term> at{n("a"), n("b"), n("c"), P("enc(a,b)")};
        for (int i = 0; i < 300; ++i) {
            TermSet gamma;
            for (int j = 0; j < 3; ++j) gamma.insert(norm.normalize(g.sum(theories::plus(), at, 3, Term())));
            Term m = norm.normalize(g.sum(theories::plus(), at, 4, Term()));
            if (auto w = elem_deduce(th, gamma, m)) {
                EXPECT_EQ(replay(*w, th, norm), m);
                EXPECT_EQ(w->theory, th.key());
                for (const auto& [t, c] : w->parts) EXPECT_TRUE(gamma.count(t)) << to_string(t);
            }
        }
    }
}

TEST(Elementary, XorAgreesWithSubsetSearch) {
    Gen g(22);
    Theory th = theories::exclusive_or();
    Normalizer norm{Combination(th)};
    std::vector<Term> at{n("a"), n("b"), n("c"), n("d"), P("pair(a,b)")};
    for (int i = 0; i < 400; ++i) {
        TermSet gamma;
        std::size_t k = 1 + g.below(6);
        for (std::size_t j = 0; j < k; ++j) gamma.insert(norm.normalize(g.sum(theories::plus(), at, 3, Term())));
        Term m = norm.normalize(g.sum(theories::plus(), at, 3, Term()));
        std::vector<Term> gv(gamma.begin(), gamma.end());
        EXPECT_EQ(elem_deduce(th, gamma, m).has_value(), xor_subset_oracle(gv, m, theories::plus()))
            << sequent_string(gamma, m);
    }
}

TEST(Elementary, AcAgreesWithMultiplicityCount) {
    // AC deducibility of a sum from Γ: the target's multiset must be a
    // nonnegative integer combination of the Γ multisets.
    Gen g(23);
    Theory th = theories::ac();
    std::vector<Term> at{n("a"), n("b"), n("c")};
    for (int i = 0; i < 300; ++i) {
        TermSet gamma;
        for (int j = 0; j < 2; ++j) gamma.insert(g.sum(theories::plus(), at, 2, Term()));
        Term m = g.sum(theories::plus(), at, 4, Term());
        std::vector<Coeffs> views;
        for (Term t : gamma) views.push_back(ag_view(t, theories::plus()));
        Coeffs target = ag_view(m, theories::plus());
        bool oracle = false;
        for (int x = 0; x <= 4 && !oracle; ++x)
            for (int y = 0; y <= 4 && !oracle; ++y) {
                if (x + y == 0) continue;
                Coeffs s;
                if (views.size() == 1 && y > 0) continue;
                for (auto [k, c] : views[0])
                    if (x > 0) s[k] += x * c;
                if (views.size() > 1)
                    for (auto [k, c] : views[1])
                        if (y > 0) s[k] += y * c;
                oracle = s == target;
            }
        EXPECT_EQ(elem_deduce(th, gamma, m).has_value(), oracle) << sequent_string(gamma, m);
    }
}

TEST(Elementary, AbelianGroupCompleteForSmallCoefficients) {
    Gen g(24);
    Theory th = theories::abelian_group();
    Normalizer norm{Combination(th)};
    std::vector<Term> at{n("a"), n("b"), n("c")};
    for (int i = 0; i < 300; ++i) {
        TermSet gamma;
        for (int j = 0; j < 3; ++j) gamma.insert(norm.normalize(g.sum(theories::plus(), at, 3, Term())));
        Term m = norm.normalize(g.sum(theories::plus(), at, 4, Term()));
        std::vector<Term> gv(gamma.begin(), gamma.end());
        bool oracle = ag_bounded_oracle(gv, m, theories::plus(), 4);
        auto w = elem_deduce(th, gamma, m);
        if (oracle) EXPECT_TRUE(w) << sequent_string(gamma, m);
        if (w) EXPECT_EQ(replay(*w, th, norm), m);
    }
}

TEST(Elementary, InstantiateRejectsMalformedWitness) {
    ElemWitness w{"empty", Backend::Empty, {{n("a"), 2}}};
    EXPECT_THROW(instantiate(w, theories::empty()), MalformedWitness);
    ElemWitness unit{"xor(+)", Backend::XOR, {}};
    EXPECT_EQ(instantiate(unit, theories::exclusive_or()), P("0"));
}

TEST(Elementary, CombinationTriesEachTheory) {
    Combination e = xor_ag();
    Normalizer norm(e);
    TermSet gamma = norm.normalize_all(set_of({"a + b", "b", "c * d", "d"}));
    EXPECT_TRUE(elem_deduce(e, gamma, n("a")));
    EXPECT_TRUE(elem_deduce(e, gamma, n("c")));
    EXPECT_FALSE(elem_deduce(e, gamma, P("a * c")));
}
