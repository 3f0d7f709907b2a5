#include "tensorfree/weingarten.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace tf {

namespace {

// beta-set of lambda with `len` beads
std::vector<int> beta_set(const IntPartition& lambda) {
    int l = int(lambda.size());
    std::vector<int> b(l);
    for (int i = 0; i < l; ++i) b[i] = lambda[i] + (l - 1 - i);
    return b;
}

IntPartition from_beta(std::vector<int> b) {
    std::sort(b.rbegin(), b.rend());
    int l = int(b.size());
    IntPartition lam;
    for (int i = 0; i < l; ++i) {
        int part = b[i] - (l - 1 - i);
        if (part > 0) lam.push_back(part);
    }
    return lam;
}

Z mn_rec(const IntPartition& lambda, const IntPartition& mu, size_t k,
         std::map<std::pair<IntPartition, size_t>, Z>& memo) {
    if (k == mu.size()) return lambda.empty() ? Z(1) : Z(0);
    auto key = std::make_pair(lambda, k);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int r = mu[k];
    auto b = beta_set(lambda);
    Z acc = 0;
    for (size_t i = 0; i < b.size(); ++i) {
        int to = b[i] - r;
        if (to < 0 || std::find(b.begin(), b.end(), to) != b.end()) continue;
        // sign: beads strictly between to and b[i]
        int between = 0;
        for (int x : b)
            if (x > to && x < b[i]) ++between;
        auto nb = b;
        nb[i] = to;
        Z v = mn_rec(from_beta(nb), mu, k + 1, memo);
        acc += (between % 2) ? Z(-v) : v;
    }
    memo[key] = acc;
    return acc;
}

constexpr int kCap = 10;

std::mutex cache_mu;
std::map<IntPartition, RatFunc> cache;

}  // namespace

int weingarten_cap() { return kCap; }

Z character(const IntPartition& lambda, const IntPartition& mu) {
    int a = std::accumulate(lambda.begin(), lambda.end(), 0);
    int b = std::accumulate(mu.begin(), mu.end(), 0);
    if (a != b) throw std::invalid_argument("character: sizes differ");
    std::map<std::pair<IntPartition, size_t>, Z> memo;
    return mn_rec(lambda, mu, 0, memo);
}

RatFunc weingarten(const IntPartition& type) {
    {
        std::lock_guard<std::mutex> g(cache_mu);
        if (auto it = cache.find(type); it != cache.end()) return it->second;
    }
    int n = std::accumulate(type.begin(), type.end(), 0);
    if (n > kCap) throw std::length_error("Weingarten function above size cap");
    IntPartition one(n, 1);
    RatFunc acc;
    for (auto& lam : integer_partitions(n)) {
        Z dim = character(lam, one);
        Z chi = character(lam, type);
        if (chi == 0) continue;
        // 1 / prod over boxes (N + content)
        std::map<int, int> den;
        for (int i = 0; i < int(lam.size()); ++i)
            for (int j = 0; j < lam[i]; ++j) ++den[j - i];
        acc += RatFunc(LaurentPoly(Q(dim * chi)), den);
    }
    acc *= RatFunc(Q(1, 1) / Q(factorial(n)));
    std::lock_guard<std::mutex> g(cache_mu);
    cache.emplace(type, acc);
    return acc;
}

RatFunc weingarten(const Perm& nu) { return weingarten(nu.cycle_type()); }

std::pair<Q, int> weingarten_asymptotic(const Perm& nu) {
    return {moebius_nc(nu), -nu.n() - nu.length()};
}

RatFunc weingarten_product(const PermTuple& s, const PermTuple& t) {
    if (s.size() != t.size()) throw std::invalid_argument("tuple length mismatch");
    RatFunc r(Q(1));
    for (size_t c = 0; c < s.size(); ++c) r *= weingarten(s[c] * t[c].inverse());
    return r;
}

}  // namespace tf
