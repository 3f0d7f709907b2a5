#include "doctest.h"
#include "tensorfree/ensembles.hpp"
#include "tensorfree/melonic.hpp"
#include "tensorfree/transforms.hpp"

#include <random>
#include <set>

using namespace tf;

namespace {

PermTuple T(std::initializer_list<const char*> cs, int n) {
    PermTuple t;
    for (auto c : cs) t.push_back(Perm::parse(c, n));
    return t;
}

Q rand_q(std::mt19937& g) {
    Q q(int(g() % 19) - 9, int(g() % 5) + 1);
    q.canonicalize();
    return q;
}

std::vector<InvariantClass> classes_upto(int n, int D, Flavor f, bool connected) {
    std::vector<InvariantClass> out;
    for (int k = 1; k <= n; ++k)
        for (auto& c : enumerate_classes(k, D, f, connected)) out.push_back(c);
    return out;
}

// every labelled key of a class with labels in {0,1}
std::set<std::string> labelled_keys(const PermTuple& s) {
    int n = tuple_degree(s);
    std::set<std::string> keys;
    for (int m = 0; m < (1 << (2 * n)); ++m) {
        Word w(2 * n);
        for (int i = 0; i < 2 * n; ++i) w[i] = (m >> i) & 1;
        keys.insert(table_key(s, w, Flavor::Pure));
    }
    return keys;
}

Word word_of(const std::string& key) {
    Word w;
    auto ws = key.substr(key.find(";w=") + 3);
    for (size_t i = 0; i < ws.size(); i += 2) w.push_back(ws[i] - '0');
    return w;
}

}  // namespace

TEST_CASE("table keys and json") {
    auto a = T({"(1 2)", "()", "()"}, 2);
    auto b = T({"(1 2)", "(1 2)", "()"}, 2);
    CHECK(table_key(a, Flavor::Pure) == table_key(right_mul(a, Perm::parse("(1 2)", 2)), Flavor::Pure));
    CHECK(table_key(a, Flavor::Pure) != table_key(b, Flavor::Pure));

    AsymptoticTable t;
    t.values[table_key(a, Flavor::Pure)] = Q(3, 7);
    t.values[table_key(a, {0, 1, 1, 0}, Flavor::Pure)] = Q(-2);
    auto back = asymptotic_table_from_json(table_json(t));
    CHECK(back.values == t.values);
    CHECK(back.labelled);

    FiniteTable ft;
    ft.flavor = Flavor::Mixed;
    ft.values[table_key(a, Flavor::Mixed)] = RatFunc(LaurentPoly::monomial(2), {{1, 1}});
    CHECK(finite_table_from_json(table_json(ft)).values == ft.values);
    CHECK_THROWS(ft.at("nope"));
}

TEST_CASE("finite cumulants round trip") {
    std::mt19937 g(3);
    for (Flavor f : {Flavor::Pure, Flavor::Mixed})
        for (int D = 2; D <= 3; ++D) {
            int nmax = 3;
            auto all = classes_upto(nmax, D, f, false);
            FiniteTable mom;
            mom.flavor = f;
            for (auto& c : all)
                mom.values[c.str()] = RatFunc(LaurentPoly::monomial(int(g() % 3), rand_q(g)) + LaurentPoly(rand_q(g)));
            FiniteTable cum;
            cum.flavor = f;
            for (auto& c : all) cum.values[c.str()] = f == Flavor::Pure ? finite_cumulant_pure(mom, c.rep)
                                                                        : finite_cumulant_mixed(mom, c.rep);
            for (auto& c : all) CHECK(finite_moment_from_cumulants(cum, c.rep) == mom.at(c.str()));
        }
}

TEST_CASE("finite gaussian cumulants") {
    // only the single edge survives, at N^{1-D}
    int D = 3;
    auto all = classes_upto(3, D, Flavor::Pure, false);
    FiniteTable mom;
    for (auto& c : all) mom.values[c.str()] = RatFunc(gaussian_moment_exact(c.rep));
    auto edge = table_key(identity_tuple(1, D), Flavor::Pure);
    for (auto& c : all) {
        auto k = finite_cumulant_pure(mom, c.rep);
        if (c.str() == edge)
            CHECK(k == RatFunc(LaurentPoly::monomial(1 - D)));
        else
            CHECK(k.is_zero());
    }
}

TEST_CASE("finite cumulant of a rank-one mixed square") {
    // D=2: K of ((12),(12)) for A = M (x) M̄, written with matrix moments
    auto s = T({"(1 2)", "(1 2)"}, 2);
    auto em = mixed_as_pure(finite_cumulant_expansion(s, Flavor::Mixed));
    std::map<int, int> den{{-1, 2}, {1, 2}};
    auto sq = table_key(T({"()", "()"}, 2), Flavor::Pure);      // Tr(M M†)^2
    auto quart = table_key(T({"()", "(1 2)"}, 2), Flavor::Pure);  // Tr(M M† M M†)
    auto one = table_key(T({"()", "()"}, 1), Flavor::Pure);
    TableExpansion want;
    want.add({sq}, RatFunc(LaurentPoly::monomial(0) + LaurentPoly::monomial(-2), den));
    want.add({quart}, RatFunc(LaurentPoly::monomial(-1, -2), den));
    CHECK(em.terms == want.terms);

    // pure counterpart: the same plus the product of two single edges
    auto ep = finite_cumulant_expansion(s, Flavor::Pure);
    want.add({one, one}, RatFunc(LaurentPoly::monomial(-4, -1)));
    CHECK(ep.terms == want.terms);

    // the mixed identity tuple gives the pure expression as well
    auto eid = mixed_as_pure(finite_cumulant_expansion(T({"()", "()"}, 2), Flavor::Mixed));
    CHECK(eid.terms == want.terms);
}

TEST_CASE("microscopic pattern") {
    auto p = microscopic_cumulant(T({"(1 2)", "()"}, 2), Flavor::Pure);
    CHECK(p.factors.size() == 4);
    CHECK(p.str() == "k_4(T[2,1], Tbar[1,1], T[1,2], Tbar[2,2])");
    auto m = microscopic_cumulant(T({"(1 2)", "()"}, 2), Flavor::Mixed);
    CHECK(m.str() == "k_2(A[2,1;1,1], A[1,2;2,2])");
}

TEST_CASE("melonic transforms") {
    std::mt19937 g(11);
    int D = 3;
    AsymptoticTable phi;
    std::vector<InvariantClass> mel;
    for (auto& c : classes_upto(4, D, Flavor::Pure, true))
        if (is_melonic(c.rep)) {
            mel.push_back(c);
            phi.values[c.str()] = rand_q(g);
        }
    AsymptoticTable kappa;
    for (auto& c : mel) kappa.values[c.str()] = asymptotic_cumulant_melonic(phi, c.rep);
    for (auto& c : mel) CHECK(asymptotic_moment_from_cumulants_melonic(kappa, c.rep) == phi.at(c.str()));

    // any representative gives the same value
    for (auto& c : mel) {
        auto r = conjugate(c.rep, Perm::cycle(c.n()));
        CHECK(asymptotic_cumulant_melonic(phi, r) == kappa.at(c.str()));
    }

    // Gaussian: all first-order moments 1, free cumulants a single edge
    AsymptoticTable ones;
    for (auto& c : mel) ones.values[c.str()] = 1;
    for (auto& c : mel) CHECK(asymptotic_cumulant_melonic(ones, c.rep) == (c.n() == 1 ? 1 : 0));

    // all free cumulants 1: moments count tau, a product of Catalan numbers
    for (auto& c : mel) {
        Perm eta = *canonical_pairing(c.rep);
        Z want = 1;
        for (auto& p : right_mul(c.rep, eta.inverse()))
            for (int k : p.cycle_type()) want *= catalan(k);
        CHECK(asymptotic_moment_from_cumulants_melonic(ones, c.rep) == Q(want));
        CHECK(melonic_poset(c.rep).size() == want.get_ui());
    }

    AsymptoticTable two = free_additive_convolution_melonic(kappa, kappa);
    CHECK(two.at(mel.back().str()) == 2 * kappa.at(mel.back().str()));

    CHECK_THROWS(asymptotic_cumulant_melonic(phi, identity_tuple(2, D)));
    for (auto& c : enumerate_classes(3, D, Flavor::Pure, true))
        if (!is_melonic(c.rep)) CHECK_THROWS(asymptotic_cumulant_melonic(phi, c.rep));
}

TEST_CASE("labelled melonic transforms") {
    std::mt19937 g(2);
    int D = 3;
    AsymptoticTable phi;
    phi.labelled = true;
    std::vector<std::pair<PermTuple, Word>> items;
    for (auto& c : classes_upto(3, D, Flavor::Pure, true)) {
        if (!is_melonic(c.rep)) continue;
        for (auto& k : labelled_keys(c.rep)) {
            phi.values[k] = rand_q(g);
            items.push_back({canonicalize_labeled(c.rep, word_of(k), Flavor::Pure).first.rep, word_of(k)});
        }
    }
    AsymptoticTable kappa;
    kappa.labelled = true;
    for (auto& [s, w] : items) kappa.values[table_key(s, w, Flavor::Pure)] = asymptotic_cumulant_melonic(phi, s, &w);
    for (auto& [s, w] : items)
        CHECK(asymptotic_moment_from_cumulants_melonic(kappa, s, &w) == phi.at(table_key(s, w, Flavor::Pure)));

    // a non-canonical representative with its word moved along
    auto s = T({"(1 2)", "()", "(1 2)"}, 2);
    Word w{0, 1, 1, 1};
    Perm eta = Perm::parse("(1 2)", 2);
    PermTuple s2 = conjugate(s, eta);
    Word w2{w[1], w[0], w[3], w[2]};
    CHECK(asymptotic_cumulant_melonic(phi, s2, &w2) == asymptotic_cumulant_melonic(phi, s, &w));
}

TEST_CASE("wishart mixed transforms") {
    int D = 2;
    for (int n = 1; n <= 3; ++n) {
        auto fo = first_order_classes(n, D, Flavor::Mixed);
        REQUIRE(!fo.empty());
    }
    AsymptoticTable phi;
    phi.flavor = Flavor::Mixed;
    std::vector<InvariantClass> fo;
    for (int n = 1; n <= 4; ++n)
        for (auto& c : first_order_classes(n, D, Flavor::Mixed)) {
            fo.push_back(c);
            phi.values[c.str()] = Q(wishart_scaling(c.rep).phi);
        }
    // free cumulants sit on the tuples whose colors are all one n-cycle
    for (auto& c : fo) {
        bool diag = true;
        for (auto& p : c.rep) diag = diag && p == c.rep[0] && p.num_cycles() == 1;
        CHECK(asymptotic_cumulant_wishart_mixed(phi, c.rep) == (diag ? 1 : 0));
    }
    std::mt19937 g(4);
    AsymptoticTable r = phi;
    for (auto& [k, v] : r.values) v = rand_q(g);
    AsymptoticTable kr;
    kr.flavor = Flavor::Mixed;
    for (auto& c : fo) kr.values[c.str()] = asymptotic_cumulant_wishart_mixed(r, c.rep);
    for (auto& c : fo) CHECK(asymptotic_moment_from_cumulants_wishart_mixed(kr, c.rep) == r.at(c.str()));
}

TEST_CASE("bridges between flavors") {
    std::mt19937 g(8);
    int D = 2;
    AsymptoticTable km;
    km.flavor = Flavor::Mixed;
    std::vector<InvariantClass> fo;
    for (int n = 1; n <= 3; ++n)
        for (auto& c : first_order_classes(n, D, Flavor::Mixed)) {
            fo.push_back(c);
            km.values[c.str()] = rand_q(g);
        }
    // pure (D+1)-color cumulants of the melonic classes
    AsymptoticTable kp;
    for (int n = 1; n <= 3; ++n)
        for (auto& c : first_order_classes(n, D + 1, Flavor::Pure)) {
            auto m = pure_to_mixed(c.rep);
            kp.values[c.str()] = pure_from_mixed_cumulants(km, m);
        }
    for (auto& c : fo) CHECK(mixed_from_pure_cumulants(kp, c.rep) == km.at(c.str()));
}

TEST_CASE("dominant set") {
    std::mt19937 g(6);
    int D = 3;
    AsymptoticTable phi;
    for (auto& c : classes_upto(3, D, Flavor::Pure, false)) phi.values[c.str()] = rand_q(g);
    for (int n = 1; n <= 3; ++n)
        for (auto& c : enumerate_classes(n, D, Flavor::Pure, true)) {
            if (is_melonic(c.rep)) {
                // the melonic poset with pi the component partition
                std::set<std::pair<BipartitePartition, PermTuple>> want, got;
                Perm eta = *canonical_pairing(c.rep);
                for (auto& x : melonic_poset(c.rep)) {
                    auto t = right_mul(x, eta);
                    want.insert({components_pure(t), t});
                }
                for (auto& d : dominant_set(c.rep)) got.insert({d.pi, d.tau});
                CHECK(got == want);
                CHECK(asymptotic_cumulant_general(phi, c.rep) == asymptotic_cumulant_melonic(phi, c.rep));
            }
            if (compatibility(c.rep).compatible)
                CHECK(asymptotic_cumulant_general(phi, c.rep, true) == asymptotic_cumulant_general(phi, c.rep));
        }
}
