#include "doctest.h"
#include "tensorfree/ensembles.hpp"
#include "tensorfree/melonic.hpp"
#include "tensorfree/partitions.hpp"

using namespace tf;

namespace {

PermTuple T(std::initializer_list<const char*> cs, int n) {
    PermTuple t;
    for (auto c : cs) t.push_back(Perm::parse(c, n));
    return t;
}

LaurentPoly N(int e, const Q& c = 1) { return LaurentPoly::monomial(e, c); }

}  // namespace

TEST_CASE("gaussian moments") {
    CHECK(gaussian_moment_exact(T({"()", "()", "()"}, 1)) == N(1));
    CHECK(gaussian_moment_exact(T({"()", "()", "()"}, 1), Q(3)) == N(1, 3));

    // melonic n=2: the canonical pairing gives N, the other one N^{2-2}
    CHECK(gaussian_moment_exact(T({"(1 2)", "()", "()"}, 2)) == N(1) + N(0));

    // D=2, one pure component with both colors n-cycles apart: leading C_n N
    for (int n = 1; n <= 5; ++n) {
        PermTuple s{Perm(n), Perm::cycle(n)};
        REQUIRE(K_pure(s) == 1);
        auto lead = gaussian_moment_exact(s).leading();
        CHECK(lead.first == 1);
        CHECK(lead.second == Q(catalan(n)));
    }

    // melonic purely connected: N + terms of exponent <= 3 - D
    for (int D = 3; D <= 4; ++D)
        for (int n = 1; n <= 4; ++n)
            for (auto& c : enumerate_classes(n, D, Flavor::Pure, true)) {
                if (!is_melonic(c.rep)) continue;
                auto p = gaussian_moment_exact(c.rep);
                CHECK(p.coeff(1) == 1);
                auto rest = p - N(1);
                if (!rest.is_zero()) CHECK(rest.max_exp() <= 3 - D);
            }
}

TEST_CASE("gaussian cumulants") {
    auto one = T({"()", "()", "()"}, 1);
    CHECK(gaussian_cumulant_exact({one}) == gaussian_moment_exact(one));
    // two n=1 traces: only the swap connects them, at distance 3
    CHECK(gaussian_cumulant_exact({one, one}) == N(-1));
    CHECK_THROWS(gaussian_cumulant_exact({disjoint_union(one, one)}));

    // moments are sums of products of cumulants over partitions of the components
    std::vector<PermTuple> comps = {one, T({"(1 2)", "()", "()"}, 2), T({"()", "(1 2)", "()"}, 2)};
    PermTuple u = comps[0];
    for (size_t i = 1; i < comps.size(); ++i) u = disjoint_union(u, comps[i]);
    std::function<LaurentPoly(const std::vector<int>&)> kappa = [&](const std::vector<int>& blk) {
        std::vector<PermTuple> sel;
        for (int i : blk) sel.push_back(comps[i]);
        return gaussian_cumulant_exact(sel);
    };
    CHECK(moment_from_cumulants<LaurentPoly>(int(comps.size()), kappa) == gaussian_moment_exact(u));

    // leading exponent from the order of dominance, leading coefficient the minimizer count
    for (int n = 1; n <= 3; ++n)
        for (auto& a : enumerate_classes(n, 3, Flavor::Pure, true))
            for (auto& b : enumerate_classes(1, 3, Flavor::Pure, true)) {
                auto k = gaussian_cumulant_exact({a.rep, b.rep});
                auto dom = dominance(disjoint_union(a.rep, b.rep), Scaling::PureGaussian);
                CHECK(k.max_exp() == 2 - dom.order);
                CHECK(k.leading().second == Q(long(dom.minimizers.size())));
            }
}

TEST_CASE("scaling reports") {
    auto one = T({"()", "()", "()"}, 1);
    CHECK(gaussian_scaling(one).r == 1);
    for (int n = 1; n <= 4; ++n)
        for (auto& c : enumerate_classes(n, 3, Flavor::Pure, true)) {
            if (!is_melonic(c.rep)) continue;
            auto r = gaussian_scaling(c.rep);
            CHECK(r.r == 1);
            CHECK(r.phi == 1);
            CHECK(r.minimizers[0] == *canonical_pairing(c.rep));
        }
    // connected mixed invariant that is not purely connected, with (s, id) melonic
    auto m = T({"(1 2)", "(1 2)"}, 2);
    CHECK(K_mixed(m) == 1);
    CHECK(K_pure(m) == 2);
    REQUIRE(is_melonic(append(m, Perm(2))));
    CHECK(wishart_scaling(m).r == 1);
    CHECK(wishart_scaling(T({"()", "()"}, 1)).r == 1);
}

TEST_CASE("wishart matrix moments") {
    CHECK(wishart_matrix_moment(1, Q(1, 2)) == N(1, Q(1, 2)));
    CHECK(wishart_matrix_moment_asymptotic(1, Q(1, 2)) == Q(1, 2));
    // n=3, t=1: five non-crossing tau at N, the reversed 3-cycle at N^-1
    CHECK(wishart_matrix_moment(3, 1) == N(1, 5) + N(-1));
    for (int n = 1; n <= 7; ++n) CHECK(wishart_matrix_moment_asymptotic(n, 1) == Q(catalan(n)));
    CHECK(wishart_matrix_moment_asymptotic(4, 1) == 14);
    // Narayana numbers at n=3: t + 3t^2 + t^3
    Q t(2, 3);
    CHECK(wishart_matrix_moment_asymptotic(3, t) == t + 3 * t * t + t * t * t);
    for (int n = 1; n <= 5; ++n) {
        auto lead = wishart_matrix_moment(n, t).leading();
        CHECK(lead.first == 1);
        CHECK(lead.second == wishart_matrix_moment_asymptotic(n, t));
    }
}

TEST_CASE("melonic fixed point") {
    auto G0 = melonic_fixed_point({}, 5);
    CHECK(G0 == MultiSeries::constant(0, 1));

    auto G = melonic_fixed_point({{"z", 2, 1}}, 4);
    CHECK(G.along({Q(1)}, 4) == std::vector<Q>{1, -2, 8, -40, 224});
    CHECK(G.str({"z"}) == "1 - 2*z + 8*z^2 - 40*z^3 + 224*z^4");

    // two couplings: check G + 2 a G^2 + 3 b G^3 = 1 up to the truncation order
    int order = 5;
    auto H = melonic_fixed_point({{"a", 2, 1}, {"b", 3, 1}}, order);
    auto a = MultiSeries::variable(2, 0), b = MultiSeries::variable(2, 1);
    auto lhs = H + a.mul(H.pow(2, order), order).scaled(2) + b.mul(H.pow(3, order), order).scaled(3);
    CHECK(lhs.truncated(order) == MultiSeries::constant(2, 1));
    // pure b direction: G = 1 - 3 b G^3 gives 1 - 3b + 27 b^2 - 324 b^3
    CHECK(H.coeff({0, 1}) == -3);
    CHECK(H.coeff({0, 2}) == 27);
    CHECK(H.coeff({0, 3}) == -324);
    // a b: 2a * 2(3b) + 3b * 3(2a)
    CHECK(H.coeff({1, 1}) == 12 + 18);
}

TEST_CASE("subadditivity") {
    auto one = T({"()", "()", "()"}, 1);
    auto s1 = subadditivity_probe({one});
    CHECK(s1.verdict == Subadditivity::Equal);
    auto s2 = subadditivity_probe({one, T({"(1 2)", "()", "()"}, 2)});
    CHECK(s2.r_sum == 2);
    CHECK(s2.r_union == 2 - 3);
    CHECK(s2.gap == 3);
    CHECK(s2.verdict == Subadditivity::Strict);
}
