#include "doctest.h"
#include "tensorfree/weingarten.hpp"

using namespace tf;

namespace {
RatFunc Npow(int k) { return RatFunc(LaurentPoly::monomial(k)); }
}  // namespace

TEST_CASE("characters") {
    // S_3 table
    CHECK(character({3}, {1, 1, 1}) == 1);
    CHECK(character({2, 1}, {1, 1, 1}) == 2);
    CHECK(character({2, 1}, {2, 1}) == 0);
    CHECK(character({2, 1}, {3}) == -1);
    CHECK(character({1, 1, 1}, {2, 1}) == -1);
    // column orthogonality: sum_lambda chi(mu)^2 = z_mu
    for (int n = 1; n <= 6; ++n)
        for (auto& mu : integer_partitions(n)) {
            Z s = 0;
            for (auto& lam : integer_partitions(n)) {
                Z c = character(lam, mu);
                s += c * c;
            }
            CHECK(s * class_size(mu) == factorial(n));
        }
}

TEST_CASE("small Weingarten values") {
    CHECK(weingarten(Perm(1)) == Npow(-1));
    // derived by inverting the 2x2 class Gram system: W(id) = 1/(N^2-1), W((12)) = -1/(N(N^2-1))
    CHECK(weingarten(Perm(2)) == RatFunc(LaurentPoly(1), {{1, 1}, {-1, 1}}));
    CHECK(weingarten(Perm::parse("(1 2)")) == RatFunc(LaurentPoly(-1), {{0, 1}, {1, 1}, {-1, 1}}));
    auto a = Perm::parse("(1 2)(3)"), e = Perm::parse("(1)(2 3)");
    CHECK(weingarten(a) == weingarten(e));
}

TEST_CASE("Gram identity as an exact rational identity, n <= 4") {
    for (int n = 1; n <= 4; ++n) {
        auto all = all_perms(n);
        for (auto& lam : integer_partitions(n)) {
            Perm s = perm_of_type(lam);
            for (auto& rho : all) {
                RatFunc acc;
                for (auto& t : all) acc += weingarten(s * t.inverse()) * Npow((t * rho.inverse()).num_cycles());
                CHECK(acc == RatFunc(Q(s == rho ? 1 : 0)));
            }
        }
    }
}

TEST_CASE("asymptotics") {
    CHECK(weingarten_asymptotic(Perm(3)) == std::make_pair(Q(1), -3));
    CHECK(weingarten_asymptotic(Perm::parse("(1 2)")) == std::make_pair(Q(-1), -3));
    CHECK(weingarten_asymptotic(Perm::parse("(1 2 3)")) == std::make_pair(Q(2), -5));
    for (int n = 1; n <= 5; ++n)
        for (auto& lam : integer_partitions(n)) {
            Perm nu = perm_of_type(lam);
            auto [c, e] = weingarten_asymptotic(nu);
            auto w = weingarten(nu);
            CHECK(w.leading() == std::make_pair(e, c));
            // next correction at least two orders below
            auto ex = w.expand(e - 2);
            CHECK(ex.coeff(e - 1) == 0);
        }
}

TEST_CASE("Weingarten product") {
    PermTuple s{Perm(1), Perm(1), Perm(1)};
    CHECK(weingarten_product(s, s) == Npow(-3));
    PermTuple a{Perm(2), Perm::parse("(1 2)")}, b{Perm(2), Perm(2)};
    CHECK(weingarten_product(a, b) == weingarten(Perm(2)) * weingarten(Perm::parse("(1 2)")));
}
