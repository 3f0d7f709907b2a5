#include "doctest.h"
#include "tensorfree/algebra.hpp"

#include <random>

using namespace tf;

namespace {
LaurentPoly rand_poly(std::mt19937& g) {
    std::uniform_int_distribution<int> e(-3, 3), c(-5, 5), k(0, 4);
    LaurentPoly p;
    int terms = k(g);
    for (int i = 0; i < terms; ++i) p.add_term(e(g), Q(c(g), 1 + k(g)));
    return p;
}
}  // namespace

TEST_CASE("laurent ring axioms on random inputs") {
    std::mt19937 g(7);
    for (int it = 0; it < 200; ++it) {
        auto a = rand_poly(g), b = rand_poly(g), c = rand_poly(g);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == LaurentPoly());
        CHECK(a * LaurentPoly(1) == a);
    }
}

TEST_CASE("laurent evaluation and printing") {
    LaurentPoly p = LaurentPoly::monomial(2) - LaurentPoly(Q(3, 2)) + LaurentPoly::monomial(-1);
    CHECK(p.str() == "N^2 - 3/2 + N^-1");
    CHECK(p.eval(2) == Q(4) - Q(3, 2) + Q(1, 2));
    CHECK(p.leading() == std::make_pair(2, Q(1)));
}

TEST_CASE("rational functions cancel common linear factors") {
    // (N^2 - 1) / ((N-1)(N+1)) == 1
    LaurentPoly p = LaurentPoly::monomial(2) - LaurentPoly(1);
    RatFunc r(p, {{-1, 1}, {1, 1}});
    CHECK(r == RatFunc(Q(1)));
    RatFunc a = RatFunc::inv_linear(1), b = RatFunc::inv_linear(-1);
    // 1/(N+1) + 1/(N-1) = 2N / (N^2-1)
    RatFunc s = a + b;
    CHECK(s.eval(3) == Q(3, 4));
    CHECK(s - a == b);
    CHECK((a * b).leading() == std::make_pair(-2, Q(1)));
}

TEST_CASE("rational function serialization round trip") {
    RatFunc w = RatFunc(LaurentPoly(-1), {{0, 1}, {1, 1}, {-1, 1}});  // -1/(N(N^2-1))
    CHECK(w.serialize() == "[-1]/[0,-1,0,1]");
    CHECK(RatFunc::deserialize(w.serialize()) == w);
    RatFunc x = RatFunc(LaurentPoly(Q(1, 3), 2) + LaurentPoly(2), {{2, 2}});
    CHECK(RatFunc::deserialize(x.serialize()) == x);
}

TEST_CASE("large N expansion") {
    // 1/(N^2-1) = N^-2 + N^-4 + ...
    RatFunc w(LaurentPoly(1), {{1, 1}, {-1, 1}});
    auto e = w.expand(-6);
    CHECK(e == LaurentPoly::monomial(-2) + LaurentPoly::monomial(-4) + LaurentPoly::monomial(-6));
}
