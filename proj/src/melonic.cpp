#include "tensorfree/melonic.hpp"

#include "tensorfree/budget.hpp"
#include "tensorfree/invariants.hpp"

#include <algorithm>
#include <climits>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tf {

namespace {

constexpr int kScanCap = 7;

int pair_sum(const PermTuple& s) {
    int acc = 0;
    for (size_t a = 0; a < s.size(); ++a)
        for (size_t b = a + 1; b < s.size(); ++b) acc += cayley_distance(s[a], s[b]);
    return acc;
}

std::vector<Perm> eta_range(int n, int D, const char* what) {
    if (n > kScanCap) throw BudgetExceeded(std::string(what) + ": n above scan cap");
    require_budget(factorial(n).get_d() * (D + 1) * n, what);
    return all_perms(n);
}

std::optional<Perm> reduce(const PermTuple& s, std::mt19937_64* rng) {
    int n = tuple_degree(s);
    int D = int(s.size());
    if (D == 0) return std::nullopt;
    std::vector<std::vector<int>> next(D), prev(D);
    for (int c = 0; c < D; ++c) {
        next[c] = s[c].images();
        prev[c] = s[c].inverse().images();
    }
    std::vector<char> alive(n, 1);
    std::vector<int> pair(n, -1);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> hits(n, 0);
    for (int left = n; left > 0;) {
        if (rng) std::shuffle(order.begin(), order.end(), *rng);
        bool found = false;
        for (int b : order) {
            if (!alive[b]) continue;
            for (int c = 0; c < D; ++c) ++hits[next[c][b]];
            int w = -1, odd = -1;
            for (int c = 0; c < D && w < 0; ++c) {
                int h = hits[next[c][b]];
                if (h == D || h == D - 1) w = next[c][b];
            }
            if (w >= 0 && hits[w] == D - 1)
                for (int c = 0; c < D; ++c)
                    if (next[c][b] != w) odd = c;
            for (int c = 0; c < D; ++c) hits[next[c][b]] = 0;
            if (w < 0) continue;
            if (odd >= 0) {
                int b2 = prev[odd][w], w2 = next[odd][b];
                next[odd][b2] = w2;
                prev[odd][w2] = b2;
            }
            alive[b] = 0;
            pair[b] = w;
            --left;
            found = true;
            break;
        }
        if (!found) return std::nullopt;
    }
    return Perm(pair);
}

}  // namespace

int degree(const PermTuple& s) {
    int n = tuple_degree(s);
    int D = int(s.size());
    int w = pair_sum(s) - (D - 1) * (n - K_pure(s));
    if (w < 0) throw std::logic_error("negative degree");
    return w;
}

int bar_degree(const PermTuple& s, const Perm& eta) {
    int n = tuple_degree(s);
    if (eta.n() != n) throw std::invalid_argument("degree mismatch");
    int D = int(s.size());
    return D * K_pure(s, eta) - (D - 1) * K_pure(s) - n + distance(s, eta);
}

bool is_melonic(const PermTuple& s) { return reduce(s, nullptr).has_value(); }

std::optional<Perm> canonical_pairing(const PermTuple& s) { return reduce(s, nullptr); }

std::optional<Perm> canonical_pairing_shuffled(const PermTuple& s, uint64_t seed) {
    std::mt19937_64 rng(seed);
    return reduce(s, &rng);
}

int nabla(const PermTuple& s, const Perm& eta) {
    int D = int(s.size());
    return (D - 1) * distance(s, eta) - pair_sum(s);
}

Compatibility compatibility(const PermTuple& s) {
    int n = tuple_degree(s);
    auto etas = eta_range(n, int(s.size()), "compatibility");
    int ps = pair_sum(s), D = int(s.size());
    // per-worker minima, merged afterwards
    unsigned T = thread_count();
    std::vector<int> best(T, INT_MAX);
    std::vector<std::vector<Perm>> arg(T);
    parallel_ranges(etas.size(), [&](size_t lo, size_t hi, unsigned w) {
        for (size_t i = lo; i < hi; ++i) {
            int v = (D - 1) * distance(s, etas[i]) - ps;
            if (v < best[w]) {
                best[w] = v;
                arg[w].clear();
            }
            if (v == best[w]) arg[w].push_back(etas[i]);
        }
    });
    Compatibility r;
    r.min_nabla = *std::min_element(best.begin(), best.end());
    for (unsigned w = 0; w < T; ++w)
        if (best[w] == r.min_nabla) r.minimizers.insert(r.minimizers.end(), arg[w].begin(), arg[w].end());
    std::sort(r.minimizers.begin(), r.minimizers.end());
    r.compatible = r.min_nabla == 0;
    return r;
}

int nabla2(const PermTuple& s, const PermTuple& t) {
    if (s.size() != t.size() || tuple_degree(s) != tuple_degree(t)) throw std::invalid_argument("shape mismatch");
    int acc = 0;
    for (size_t a = 0; a < s.size(); ++a)
        for (size_t b = a + 1; b < s.size(); ++b)
            acc += cayley_distance(s[a], t[a]) + cayley_distance(t[a], t[b]) + cayley_distance(t[b], s[b]) -
                   cayley_distance(s[a], s[b]);
    return acc;
}

std::string scaling_name(Scaling s) { return s == Scaling::PureGaussian ? "pure-gaussian" : "wishart-mixed"; }

Dominance dominance(const PermTuple& s0, Scaling sc) {
    int n = tuple_degree(s0);
    PermTuple s = sc == Scaling::WishartMixed ? append(s0, Perm(n)) : s0;
    int D = int(s.size());
    int K = K_pure(s);
    auto etas = eta_range(n, D, "order_of_dominance");
    unsigned T = thread_count();
    std::vector<int> best(T, INT_MAX);
    std::vector<std::vector<Perm>> arg(T);
    parallel_ranges(etas.size(), [&](size_t lo, size_t hi, unsigned w) {
        for (size_t i = lo; i < hi; ++i) {
            // with K_p(s,eta) = 1 the bar degree reduces to D - (D-1)K - n + d
            int d = distance(s, etas[i]);
            int v = D - (D - 1) * K - n + d;
            if (v > best[w]) continue;
            if (K_pure(s, etas[i]) != 1) continue;
            if (v < best[w]) {
                best[w] = v;
                arg[w].clear();
            }
            arg[w].push_back(etas[i]);
        }
    });
    Dominance r;
    r.min_bar_degree = *std::min_element(best.begin(), best.end());
    for (unsigned w = 0; w < T; ++w)
        if (best[w] == r.min_bar_degree) r.minimizers.insert(r.minimizers.end(), arg[w].begin(), arg[w].end());
    std::sort(r.minimizers.begin(), r.minimizers.end());
    r.order = 1 + (D - 1) * (K - 1) + r.min_bar_degree;
    return r;
}

int order_of_dominance(const PermTuple& s, Scaling sc) { return dominance(s, sc).order; }

Z fuss_catalan_probe(int n, int D) {
    Z count = 0;
    for (auto& c : enumerate_classes(n, D, Flavor::Pure, true))
        if (is_melonic(c.rep)) ++count;
    return count;
}

}  // namespace tf
