#include "doctest.h"
#include "tensorfree/invariants.hpp"

#include <numeric>
#include <random>
#include <set>

using namespace tf;

namespace {

PermTuple T(std::initializer_list<const char*> cs, int n) {
    PermTuple t;
    for (auto c : cs) t.push_back(Perm::parse(c, n));
    return t;
}

// orbits by explicit union-find over all tuples, no canonical forms involved
long brute_orbit_count(int n, int D, Flavor f, bool connected) {
    auto perms = all_perms(n);
    long F = long(perms.size()), total = 1;
    for (int c = 0; c < D; ++c) total *= F;
    auto decode = [&](long idx) {
        PermTuple t(D);
        for (int c = D - 1; c >= 0; --c) {
            t[c] = perms[idx % F];
            idx /= F;
        }
        return t;
    };
    auto encode = [&](const PermTuple& t) {
        long idx = 0;
        for (auto& p : t) idx = idx * F + perm_rank(p);
        return idx;
    };
    std::vector<long> par(total);
    std::iota(par.begin(), par.end(), 0);
    std::function<long(long)> find = [&](long x) { return par[x] == x ? x : par[x] = find(par[x]); };
    for (long i = 0; i < total; ++i) {
        auto t = decode(i);
        for (auto& e : perms) {
            if (f == Flavor::Mixed) {
                par[find(i)] = find(encode(conjugate(t, e)));
            } else {
                for (auto& v : perms) par[find(i)] = find(encode(left_mul(e, right_mul(t, v))));
            }
        }
    }
    long cnt = 0;
    for (long i = 0; i < total; ++i) {
        if (find(i) != i) continue;
        auto t = decode(i);
        if (connected && (f == Flavor::Mixed ? K_mixed(t) : K_pure(t)) != 1) continue;
        ++cnt;
    }
    return cnt;
}

}  // namespace

TEST_CASE("components") {
    auto id2 = identity_tuple(2, 3);
    CHECK(K_mixed(id2) == 2);
    CHECK(K_pure(id2) == 2);
    auto t = T({"(1 2)", "(1 2)"}, 2);
    CHECK(K_mixed(t) == 1);
    // both colors send black 1 to white 2 and black 2 to white 1
    CHECK(K_pure(t) == 2);
    CHECK(canonicalize(t, Flavor::Pure).rep == identity_tuple(2, 2));
    auto u = T({"(1 2)", "(1)(2)"}, 2);
    CHECK(K_mixed(u) == 1);
    CHECK(K_pure(u) == 1);
    CHECK(K_pure(identity_tuple(2, 2)) == 2);
    CHECK(components_pure(u).str() == "{1,2;1b,2b}");
}

TEST_CASE("canonical forms are orbit invariants") {
    std::mt19937 g(5);
    for (int n = 1; n <= 5; ++n) {
        auto perms = all_perms(n);
        std::uniform_int_distribution<size_t> u(0, perms.size() - 1);
        for (int it = 0; it < 40; ++it) {
            PermTuple s{perms[u(g)], perms[u(g)], perms[u(g)]};
            auto e = perms[u(g)], v = perms[u(g)];
            auto cm = canonicalize(s, Flavor::Mixed);
            CHECK(canonicalize(conjugate(s, e), Flavor::Mixed) == cm);
            CHECK(canonicalize(cm.rep, Flavor::Mixed) == cm);
            auto cp = canonicalize(s, Flavor::Pure);
            CHECK(canonicalize(left_mul(e, right_mul(s, v)), Flavor::Pure) == cp);
            CHECK(canonicalize(cp.rep, Flavor::Pure) == cp);
            // canonical element is in the orbit and no orbit element is smaller
            auto [c2, rel] = canonicalize_with(s, Flavor::Pure);
            CHECK(left_mul(rel.eta, right_mul(s, rel.nu)) == c2.rep);
            if (n <= 3)
                for (auto& a : perms)
                    for (auto& b : perms) CHECK_FALSE(left_mul(a, right_mul(s, b)) < cp.rep);
        }
    }
    // D = 1 mixed: minimal permutation of the cycle type
    for (auto& p : all_perms(4)) {
        auto c = canonicalize({p}, Flavor::Mixed);
        Perm best = p;
        for (auto& q : all_perms(4))
            if (q.cycle_type() == p.cycle_type() && q < best) best = q;
        CHECK(c.rep[0] == best);
    }
    // pure D = 2, ((12),(12)) reaches the identity pair
    CHECK(canonicalize(T({"(1 2)", "(1 2)"}, 2), Flavor::Pure).rep == identity_tuple(2, 2));
}

TEST_CASE("mixed equivalence implies pure equivalence, not conversely") {
    bool counterexample = false;
    for (int n = 1; n <= 3; ++n)
        for (int D = 1; D <= 3; ++D) {
            auto cls = enumerate_classes(n, D, Flavor::Mixed, false);
            std::set<InvariantClass> pure_images;
            for (auto& c : cls) pure_images.insert(canonicalize(c.rep, Flavor::Pure));
            if (pure_images.size() < cls.size()) counterexample = true;
            for (auto& a : cls)
                for (auto& e : all_perms(n))
                    CHECK(canonicalize(conjugate(a.rep, e), Flavor::Pure) == canonicalize(a.rep, Flavor::Pure));
        }
    CHECK(counterexample);
}

TEST_CASE("class enumeration matches brute-force orbit counting") {
    CHECK(enumerate_classes(1, 3, Flavor::Pure, false).size() == 1);
    CHECK(enumerate_classes(1, 4, Flavor::Mixed, false).size() == 1);
    CHECK(enumerate_classes(2, 1, Flavor::Mixed, false).size() == 2);
    for (int n = 1; n <= 6; ++n)
        CHECK(enumerate_classes(n, 1, Flavor::Mixed, false).size() == integer_partitions(n).size());
    for (int n = 1; n <= 3; ++n)
        for (int D = 1; D <= 3; ++D)
            for (auto f : {Flavor::Mixed, Flavor::Pure})
                for (bool conn : {false, true}) {
                    if (f == Flavor::Pure && n == 3 && D == 3) continue;  // brute force too slow
                    CHECK(long(enumerate_classes(n, D, f, conn).size()) == brute_orbit_count(n, D, f, conn));
                }
    CHECK(long(enumerate_classes(2, 3, Flavor::Pure, true).size()) == brute_orbit_count(2, 3, Flavor::Pure, true));
    // every enumerated representative is canonical
    for (auto& c : enumerate_classes(3, 3, Flavor::Pure, false)) CHECK(canonicalize(c.rep, Flavor::Pure) == c);
}

TEST_CASE("class text form round trips") {
    auto c = canonicalize(T({"(1 2)", "(1)(2)", "(1 2)"}, 2), Flavor::Pure);
    auto s = c.str();
    CHECK(s == "flavor=pure;D=3;n=2;c1=(1)(2);c2=(1 2);c3=(1)(2)");
    auto back = InvariantClass::parse(s);
    CHECK(back == c);
    CHECK(back.canonical);
    CHECK(back.str() == s);
}

TEST_CASE("orbit distances") {
    for (auto f : {Flavor::Mixed, Flavor::Pure}) {
        auto cls = enumerate_classes(3, 2, f, false);
        for (auto& a : cls) {
            auto d0 = orbit_distance(a, a);
            CHECK(d0.distance == 0);
            if (f == Flavor::Mixed) {
                long cent = 0;
                for (auto& e : all_perms(3)) cent += conjugate(a.rep, e) == a.rep;
                CHECK(d0.multiplicity == cent);
                CHECK(gram_leading(a, a) == std::make_pair(0, Z(cent)));
            }
            for (auto& b : cls) {
                auto dab = orbit_distance(a, b);
                CHECK(dab.distance == orbit_distance(b, a).distance);
                if (!(a == b)) CHECK(dab.distance >= 1);
                if (!(a == b)) CHECK(gram_leading(a, b).first <= -1);
                for (auto& c : cls)
                    CHECK(orbit_distance(a, c).distance <= dab.distance + orbit_distance(b, c).distance);
            }
        }
    }
    auto one = canonicalize(identity_tuple(1, 3), Flavor::Pure);
    CHECK(gram_leading(one, one) == std::make_pair(0, Z(1)));
    // n = 2, D = 2 mixed: (id,id) against ((12),(12)) needs two transpositions
    auto a = canonicalize(identity_tuple(2, 2), Flavor::Mixed);
    auto b = canonicalize(T({"(1 2)", "(1 2)"}, 2), Flavor::Mixed);
    CHECK(orbit_distance(a, b).distance == 2);
    CHECK(orbit_distance(a, b).multiplicity == 2);
}

TEST_CASE("Gram matrices are invertible at explicit N") {
    for (int n = 1; n <= 2; ++n)
        for (int D = 1; D <= 3; ++D)
            for (auto f : {Flavor::Mixed, Flavor::Pure}) {
                auto cls = enumerate_classes(n, D, f, false);
                auto g = gram_matrix(cls);
                for (int N : {3, 5, 10}) CHECK(gram_invertible_at(g, N));
                for (size_t i = 0; i < cls.size(); ++i)
                    for (size_t j = 0; j < cls.size(); ++j)
                        CHECK(g[i][j].max_exp() == (i == j ? 0 : g[i][j].max_exp()));
            }
}

TEST_CASE("pure to mixed reduction") {
    CHECK(pure_to_mixed(identity_tuple(3, 3)) == identity_tuple(3, 2));
    auto s = T({"(1 2 3)", "(1 2)"}, 3);
    CHECK(pure_to_mixed(s) == PermTuple{s[0] * s[1].inverse()});
    // pure equivalence is mixed equivalence of the reduced tuples
    auto perms = all_perms(3);
    std::mt19937 g(1);
    std::uniform_int_distribution<size_t> u(0, perms.size() - 1);
    for (int it = 0; it < 200; ++it) {
        PermTuple a{perms[u(g)], perms[u(g)], perms[u(g)]}, b{perms[u(g)], perms[u(g)], perms[u(g)]};
        if (it % 3 == 0) b = left_mul(perms[u(g)], right_mul(a, perms[u(g)]));
        bool pe = canonicalize(a, Flavor::Pure) == canonicalize(b, Flavor::Pure);
        bool me = canonicalize(pure_to_mixed(a), Flavor::Mixed) == canonicalize(pure_to_mixed(b), Flavor::Mixed);
        CHECK(pe == me);
    }
}

TEST_CASE("labelled canonical forms transport words") {
    auto s = T({"(1 2)", "(1)(2)", "(1 2)"}, 2);
    Word w{0, 1, 1, 0};
    auto [c, cw] = canonicalize_labeled(s, w, Flavor::Pure);
    auto perms = all_perms(2);
    for (auto& e : perms)
        for (auto& v : perms) {
            // relabel explicitly: black b' = v^-1(b), white w' = e(w)
            PermTuple t = left_mul(e, right_mul(s, v));
            Word tw(4);
            for (int b = 0; b < 2; ++b) tw[b] = w[v(b)];
            for (int x = 0; x < 2; ++x) tw[2 + e(x)] = w[2 + x];
            auto [c2, w2] = canonicalize_labeled(t, tw, Flavor::Pure);
            CHECK(c2 == c);
            CHECK(w2 == cw);
        }
}

TEST_CASE("dense contraction") {
    int N = 3;
    for (int D = 1; D <= 3; ++D) {
        DenseTensor A(N, 2 * D);
        // identity on (C^N)^D: A[i; j] = prod delta
        size_t half = 1;
        for (int c = 0; c < D; ++c) half *= N;
        for (size_t i = 0; i < half; ++i) A.data[i * half + i] = 1;
        auto v = eval_trace_invariant(identity_tuple(1, D), Flavor::Mixed, std::vector<DenseTensor>{A});
        CHECK(std::abs(v - std::pow(double(N), D)) < 1e-12);
    }
    // D = 1, full cycle: Tr M^n
    DenseTensor M(2, 2);
    M.data = {cplx(1, 1), cplx(2, 0), cplx(0, -1), cplx(3, 0.5)};
    auto mul = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        std::vector<cplx> r(4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) r[i * 2 + j] += a[i * 2 + k] * b[k * 2 + j];
        return r;
    };
    std::vector<cplx> P = M.data;
    for (int n = 1; n <= 4; ++n) {
        if (n > 1) P = mul(P, M.data);
        auto v = eval_trace_invariant({Perm::cycle(n)}, Flavor::Mixed, std::vector<DenseTensor>(n, M));
        CHECK(std::abs(v - (P[0] + P[3])) < 1e-10);
    }
}

TEST_CASE("pure evaluation factorizes over pure components") {
    std::mt19937 g(9);
    std::normal_distribution<double> nd;
    int N = 3, D = 3;
    DenseTensor t(N, D);
    for (auto& z : t.data) z = cplx(nd(g), nd(g));
    auto tb = t.conj();
    auto s = T({"(1 2)(3)(4)", "(1)(2)(3 4)", "(1 2)(3 4)"}, 4);
    std::vector<DenseTensor> ts;
    for (int i = 0; i < 4; ++i) ts.push_back(t);
    for (int i = 0; i < 4; ++i) ts.push_back(tb);
    cplx whole = eval_trace_invariant(s, Flavor::Pure, ts);
    cplx prod = 1;
    for (auto& comp : pure_components(s)) {
        int k = tuple_degree(comp);
        std::vector<DenseTensor> cts;
        for (int i = 0; i < k; ++i) cts.push_back(t);
        for (int i = 0; i < k; ++i) cts.push_back(tb);
        prod *= eval_trace_invariant(comp, Flavor::Pure, cts);
    }
    CHECK(pure_components(s).size() == 2);
    CHECK(std::abs(whole - prod) < 1e-9 * std::abs(whole));
}
