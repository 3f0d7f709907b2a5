#include "doctest.h"
#include "tensorfree/perm.hpp"

#include <random>

using namespace tf;

TEST_CASE("compose") {
    CHECK(compose(Perm(3), Perm::parse("(1 2 3)")) == Perm::parse("(1 2 3)"));
    CHECK(compose(Perm::parse("(1 2)"), Perm::parse("(1 2)")) == Perm(2));
    CHECK(compose(Perm::parse("(1 2 3)"), Perm::parse("(1 2)(3)")) == Perm::parse("(1 3)(2)"));
    CHECK_THROWS(compose(Perm(2), Perm(3)));
}

TEST_CASE("text forms") {
    auto p = Perm::parse("(1 3 2)(4)");
    CHECK(p.str() == "(1 3 2)(4)");
    CHECK(p.one_line() == "[3,1,2,4]");
    CHECK(Perm::parse("[3,1,2,4]") == p);
    CHECK(Perm::parse("(2 1)", 3).str() == "(1 2)(3)");
}

TEST_CASE("cayley distance") {
    auto g3 = Perm::parse("(1 2 3)");
    CHECK(cayley_distance(g3, g3) == 0);
    CHECK(cayley_distance(Perm(3), g3) == 2);
    CHECK(cayley_distance(Perm::parse("(1 2)(3)"), g3) == 1);
    std::mt19937 g(3);
    auto all = all_perms(5);
    std::uniform_int_distribution<size_t> u(0, all.size() - 1);
    for (int i = 0; i < 300; ++i) {
        auto& a = all[u(g)];
        auto& b = all[u(g)];
        auto& c = all[u(g)];
        CHECK(cayley_distance(a, b) == cayley_distance(b, a));
        CHECK(cayley_distance(a, c) <= cayley_distance(a, b) + cayley_distance(b, c));
    }
}

TEST_CASE("geodesics on S_3") {
    auto g3 = Perm::parse("(1 2 3)");
    CHECK(is_geodesic(Perm(3), g3));
    CHECK(is_geodesic(g3, g3));
    CHECK(is_geodesic(Perm::parse("(1 3)", 3), g3));
    CHECK_FALSE(is_geodesic(Perm::parse("(1 3 2)"), g3));
}

TEST_CASE("non-crossing enumeration matches brute force") {
    for (int n = 1; n <= 8; ++n) {
        auto nc = enumerate_noncrossing(Perm::cycle(n));
        CHECK(Z(nc.size()) == catalan(n));
        if (n <= 6) {
            std::vector<Perm> brute;
            for (auto& t : all_perms(n))
                if (is_geodesic(t, Perm::cycle(n))) brute.push_back(t);
            CHECK(brute == nc);
        }
    }
    CHECK(enumerate_noncrossing(Perm(1)).size() == 1);
    CHECK(enumerate_noncrossing(Perm::parse("(1 2)(3 4)")).size() == 4);
    // product structure for an arbitrary sigma
    for (auto& s : all_perms(5)) {
        std::vector<Perm> brute;
        for (auto& t : all_perms(5))
            if (is_geodesic(t, s)) brute.push_back(t);
        CHECK(brute == enumerate_noncrossing(s));
    }
}

TEST_CASE("non-crossing elements have non-crossing increasing cycles") {
    int n = 6;
    for (auto& t : enumerate_noncrossing(Perm::cycle(n))) {
        auto cyc = t.cycles();
        for (auto& c : cyc)
            for (size_t i = 1; i < c.size(); ++i) CHECK(c[i] > c[i - 1]);
        for (auto& a : cyc)
            for (auto& b : cyc) {
                if (&a == &b) continue;
                for (int x1 : a)
                    for (int y1 : b)
                        for (int x2 : a)
                            for (int y2 : b) CHECK_FALSE((x1 < y1 && y1 < x2 && x2 < y2));
            }
    }
}

TEST_CASE("moebius on the non-crossing lattice") {
    CHECK(moebius_nc(Perm(4)) == 1);
    CHECK(moebius_nc(Perm::parse("(1 2)")) == -1);
    CHECK(moebius_nc(Perm::parse("(1 2 3)")) == 2);
    for (int n = 2; n <= 7; ++n) {
        Q s = 0;
        auto g = Perm::cycle(n);
        for (auto& t : enumerate_noncrossing(g)) s += moebius_nc(g * t.inverse());
        CHECK(s == 0);
    }
}

TEST_CASE("genus") {
    auto g3 = Perm::parse("(1 2 3)");
    CHECK(genus(Perm::cycle(5), Perm(5)) == 0);
    CHECK(genus(g3, Perm::parse("(1 3)", 3)) == 0);
    CHECK(genus(g3, Perm::parse("(1 3 2)")) == 1);
    // genus 0 against a full cycle iff geodesic
    for (int n = 1; n <= 5; ++n)
        for (auto& t : all_perms(n)) {
            CHECK(genus(Perm::cycle(n), t) >= 0);
            CHECK((genus(Perm::cycle(n), t) == 0) == is_geodesic(t, Perm::cycle(n)));
        }
}

TEST_CASE("catalan") {
    CHECK(catalan(0) == 1);
    CHECK(catalan(7) == 429);
    CHECK(catalan(3) == 5);
}

TEST_CASE("class sizes sum to n!") {
    for (int n = 1; n <= 7; ++n) {
        Z s = 0;
        for (auto& l : integer_partitions(n)) s += class_size(l);
        CHECK(s == factorial(n));
    }
}
