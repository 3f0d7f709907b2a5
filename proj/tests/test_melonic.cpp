#include "doctest.h"
#include "tensorfree/invariants.hpp"
#include "tensorfree/melonic.hpp"

#include <random>

using namespace tf;

namespace {

PermTuple T(std::initializer_list<const char*> cs, int n) {
    PermTuple t;
    for (auto c : cs) t.push_back(Perm::parse(c, n));
    return t;
}

PermTuple random_tuple(int n, int D, std::mt19937_64& rng) {
    PermTuple t;
    for (int c = 0; c < D; ++c) {
        std::vector<int> v(n);
        for (int i = 0; i < n; ++i) v[i] = i;
        std::shuffle(v.begin(), v.end(), rng);
        t.emplace_back(v);
    }
    return t;
}

}  // namespace

TEST_CASE("degree on small cases") {
    CHECK(degree(T({"()", "()", "()"}, 1)) == 0);
    CHECK(degree(T({"(1 2)", "()", "()"}, 2)) == 0);
    // every pair of colors differs by a 3-cycle
    auto s = T({"()", "(1 2 3)", "(1 3 2)"}, 3);
    CHECK(degree(s) == 2 * 3 - 2 * (3 - 1));
    for (int D = 1; D <= 4; ++D)
        for (int n = 1; n <= 3; ++n)
            for (auto& c : enumerate_classes(n, D, Flavor::Pure, false)) CHECK(degree(c.rep) >= 0);
}

TEST_CASE("melonic recognition") {
    auto one = T({"()", "()", "()"}, 1);
    CHECK(is_melonic(one));
    CHECK(*canonical_pairing(one) == Perm(1));

    auto s = T({"(1 2)", "()", "()"}, 2);
    REQUIRE(is_melonic(s));
    // colors 2 and 3 join black i to white i
    CHECK(*canonical_pairing(s) == Perm(2));

    // the 3-cycle triangle has no dipole
    CHECK_FALSE(is_melonic(T({"()", "(1 2 3)", "(1 3 2)"}, 3)));
    CHECK_FALSE(canonical_pairing(T({"()", "(1 2 3)", "(1 3 2)"}, 3)).has_value());

    // D=4: degree zero exactly on melonic graphs
    for (int n = 1; n <= 3; ++n)
        for (auto& c : enumerate_classes(n, 4, Flavor::Pure, false))
            CHECK((degree(c.rep) == 0) == is_melonic(c.rep));
    // D=3 melonic implies degree zero
    for (int n = 1; n <= 4; ++n)
        for (auto& c : enumerate_classes(n, 3, Flavor::Pure, false))
            if (is_melonic(c.rep)) CHECK(degree(c.rep) == 0);
}

TEST_CASE("canonical pairing does not depend on the removal order") {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (auto& c : enumerate_classes(4, 3, Flavor::Pure, false)) {
        auto base = canonical_pairing(c.rep);
        if (!base) continue;
        // conjugate by random relabellings too, so the pairing moves with the labels
        for (int k = 0; k < 4; ++k) {
            auto eta = random_tuple(4, 1, rng)[0], nu = random_tuple(4, 1, rng)[0];
            PermTuple s;
            for (auto& p : c.rep) s.push_back(eta * p * nu);
            auto ref = canonical_pairing(s);
            REQUIRE(ref);
            CHECK(*ref == eta * *base * nu);
            CHECK(*canonical_pairing_shuffled(s, rng()) == *ref);
        }
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("bar degree, nabla and their identities") {
    auto s = T({"(1 2)", "()", "()"}, 2);
    CHECK(bar_degree(s, *canonical_pairing(s)) == 0);
    CHECK(bar_degree(T({"()"}, 1), Perm(1)) == 0);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + int(rng() % 4), D = 3 + int(rng() % 2);
        auto sig = random_tuple(n, D, rng);
        auto eta = random_tuple(n, 1, rng)[0];
        int w = degree(sig), wb = bar_degree(sig, eta);
        CHECK(wb >= 0);
        CHECK(wb == degree(append(sig, eta)) - w);
        CHECK(nabla(sig, eta) == (D - 1) * wb - w + D * (D - 1) * (K_pure(sig) - K_pure(sig, eta)));
        CHECK(nabla(sig, eta) >= 0);
    }
}

TEST_CASE("compatibility") {
    auto c1 = compatibility(T({"()", "()", "()"}, 1));
    CHECK(c1.compatible);
    CHECK(c1.minimizers.size() == 1);

    for (auto& c : enumerate_classes(4, 3, Flavor::Pure, true)) {
        if (!is_melonic(c.rep)) continue;
        auto r = compatibility(c.rep);
        CHECK(r.compatible);
        REQUIRE(r.minimizers.size() == 1);
        CHECK(r.minimizers[0] == *canonical_pairing(c.rep));
    }

    // lower bound min wbar >= w/(D-1), equality iff compatible
    for (int n = 1; n <= 4; ++n)
        for (auto& c : enumerate_classes(n, 3, Flavor::Pure, true)) {
            int w = degree(c.rep);
            int mb = dominance(c.rep, Scaling::PureGaussian).min_bar_degree;
            bool comp = compatibility(c.rep).compatible;
            CHECK(2 * mb >= w);
            CHECK((2 * mb == w) == comp);
        }

    auto tri = T({"()", "(1 2 3)", "(1 3 2)"}, 3);
    auto r = compatibility(tri);
    int best = 1 << 30;
    for (auto& e : all_perms(3)) best = std::min(best, nabla(tri, e));
    CHECK(r.min_nabla == best);
}

TEST_CASE("nabla2") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = random_tuple(4, 3, rng), t = random_tuple(4, 3, rng);
        CHECK(nabla2(s, s) == 0);
        CHECK(nabla2(s, t) >= 0);
    }
    auto s = T({"(1 2)", "()", "()"}, 2), t = T({"()", "()", "(1 2)"}, 2);
    // pairs (1,2): 1+0+0-1, (1,3): 1+1+1-1, (2,3): 0+1+1-0
    CHECK(nabla2(s, t) == 0 + 2 + 2);
    CHECK_THROWS(nabla2(s, T({"()", "()"}, 2)));
}

TEST_CASE("order of dominance") {
    for (int n = 1; n <= 4; ++n)
        for (auto& c : enumerate_classes(n, 3, Flavor::Pure, true))
            if (is_melonic(c.rep)) {
                auto d = dominance(c.rep, Scaling::PureGaussian);
                CHECK(d.order == 1);
                CHECK(d.minimizers == std::vector<Perm>{*canonical_pairing(c.rep)});
            }

    auto two = disjoint_union(T({"()", "()", "()"}, 1), T({"()", "()", "()"}, 1));
    CHECK(order_of_dominance(two, Scaling::PureGaussian) == 3);
    auto two4 = disjoint_union(T({"(1 2)", "()", "()", "()"}, 2), T({"()", "()", "()", "()"}, 1));
    CHECK(order_of_dominance(two4, Scaling::PureGaussian) == 4);

    auto tri = T({"()", "(1 2 3)", "(1 3 2)"}, 3);
    int best = 1 << 30;
    for (auto& e : all_perms(3))
        if (K_pure(tri, e) == 1) best = std::min(best, bar_degree(tri, e));
    CHECK(order_of_dominance(tri, Scaling::PureGaussian) == 1 + best);

    // Wishart: n=1 is first order; a connected mixed tuple whose (s, id) is melonic too
    CHECK(order_of_dominance(T({"()", "()"}, 1), Scaling::WishartMixed) == 1);
    auto m = T({"(1 2)", "()"}, 2);
    CHECK(K_mixed(m) == 1);
    CHECK(is_melonic(append(m, Perm(2))));
    CHECK(order_of_dominance(m, Scaling::WishartMixed) == 1);
}

TEST_CASE("melonic census") {
    CHECK(fuss_catalan_probe(1, 3) == 1);
    CHECK(fuss_catalan_probe(2, 3) == 3);
    // D=2 has a single connected invariant for every n
    CHECK(fuss_catalan_probe(3, 2) == 1);
}
