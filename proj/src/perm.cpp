#include "tensorfree/perm.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tf {

Perm::Perm(int n) : p_(n) { std::iota(p_.begin(), p_.end(), 0); }

Perm::Perm(std::vector<int> images0) : p_(std::move(images0)) {
    std::vector<char> seen(p_.size(), 0);
    for (int x : p_) {
        if (x < 0 || x >= n() || seen[x]) throw std::invalid_argument("not a permutation");
        seen[x] = 1;
    }
}

Perm Perm::cycle(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = (i + 1) % n;
    return Perm(v);
}

Perm Perm::from_cycles(int n, const std::vector<std::vector<int>>& cycles1) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::vector<char> used(n, 0);
    for (auto& c : cycles1) {
        for (size_t i = 0; i < c.size(); ++i) {
            int a = c[i] - 1, b = c[(i + 1) % c.size()] - 1;
            if (a < 0 || a >= n || b < 0 || b >= n || used[a])
                throw std::invalid_argument("bad cycle notation");
            used[a] = 1;
            v[a] = b;
        }
    }
    return Perm(v);
}

Perm Perm::parse(const std::string& s, int n) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) {
        if (n < 0) throw std::invalid_argument("empty permutation");
        return Perm(n);
    }
    if (s[a] == '[') {
        auto b = s.find(']', a);
        if (b == std::string::npos) throw std::invalid_argument("unterminated one-line form");
        std::vector<int> v;
        std::stringstream ss(s.substr(a + 1, b - a - 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.find_first_not_of(" \t") == std::string::npos) continue;
            v.push_back(std::stoi(tok) - 1);
        }
        if (n >= 0 && int(v.size()) != n) throw std::invalid_argument("degree mismatch");
        return Perm(v);
    }
    std::vector<std::vector<int>> cyc;
    int mx = 0;
    size_t i = a;
    while (i < s.size()) {
        if (std::isspace((unsigned char)s[i])) {
            ++i;
            continue;
        }
        if (s[i] != '(') throw std::invalid_argument("bad cycle notation: " + s);
        auto j = s.find(')', i);
        if (j == std::string::npos) throw std::invalid_argument("unterminated cycle");
        std::stringstream ss(s.substr(i + 1, j - i - 1));
        std::vector<int> c;
        int x;
        while (ss >> x) {
            c.push_back(x);
            mx = std::max(mx, x);
            if (ss.peek() == ',') ss.ignore();
        }
        if (!c.empty()) cyc.push_back(c);
        i = j + 1;
    }
    if (n < 0) n = mx;
    if (mx > n) throw std::invalid_argument("element exceeds degree");
    return from_cycles(n, cyc);
}

Perm Perm::inverse() const {
    std::vector<int> v(p_.size());
    for (int i = 0; i < n(); ++i) v[p_[i]] = i;
    Perm r;
    r.p_ = std::move(v);
    return r;
}

Perm operator*(const Perm& p, const Perm& q) {
    if (p.n() != q.n()) throw std::invalid_argument("degree mismatch");
    Perm r;
    r.p_.resize(p.n());
    for (int i = 0; i < p.n(); ++i) r.p_[i] = p.p_[q.p_[i]];
    return r;
}

std::vector<std::vector<int>> Perm::cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(n(), 0);
    for (int i = 0; i < n(); ++i) {
        if (seen[i]) continue;
        std::vector<int> c;
        for (int j = i; !seen[j]; j = p_[j]) {
            seen[j] = 1;
            c.push_back(j);
        }
        out.push_back(std::move(c));
    }
    return out;
}

int Perm::num_cycles() const {
    int k = 0;
    std::vector<char> seen(n(), 0);
    for (int i = 0; i < n(); ++i) {
        if (seen[i]) continue;
        ++k;
        for (int j = i; !seen[j]; j = p_[j]) seen[j] = 1;
    }
    return k;
}

IntPartition Perm::cycle_type() const { return cycle_type_of(p_); }

bool Perm::is_identity() const {
    for (int i = 0; i < n(); ++i)
        if (p_[i] != i) return false;
    return true;
}

std::string Perm::str() const {
    std::string s;
    for (auto& c : cycles()) {
        s += "(";
        for (size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i] + 1);
        s += ")";
    }
    return s.empty() ? "()" : s;
}

std::string Perm::one_line() const {
    std::string s = "[";
    for (int i = 0; i < n(); ++i) s += (i ? "," : "") + std::to_string(p_[i] + 1);
    return s + "]";
}

Perm compose(const Perm& p, const Perm& q) { return p * q; }

int cayley_distance(const Perm& p, const Perm& q) { return (p * q.inverse()).length(); }

bool is_geodesic(const Perm& tau, const Perm& sigma) {
    return tau.length() + cayley_distance(tau, sigma) == sigma.length();
}

namespace {

using Blocks = std::vector<std::vector<int>>;

void nc_interval(int lo, int hi, Blocks& cur, std::vector<Blocks>& out);

// fill the gaps of `block` (inside [., hi)) left to right
void nc_gaps(const std::vector<int>& block, size_t gi, int hi, Blocks& cur, std::vector<Blocks>& out) {
    if (gi == block.size()) {
        out.push_back(cur);
        return;
    }
    int a = block[gi] + 1;
    int b = gi + 1 < block.size() ? block[gi + 1] : hi;
    std::vector<Blocks> sub;
    Blocks tmp;
    nc_interval(a, b, tmp, sub);
    for (auto& s : sub) {
        size_t base = cur.size();
        cur.insert(cur.end(), s.begin(), s.end());
        nc_gaps(block, gi + 1, hi, cur, out);
        cur.resize(base);
    }
}

// non-crossing partitions of [lo, hi): pick the block of lo, recurse on gaps
void nc_interval(int lo, int hi, Blocks& cur, std::vector<Blocks>& out) {
    if (lo >= hi) {
        out.push_back(cur);
        return;
    }
    int m = hi - lo - 1;
    for (long mask = 0; mask < (1L << m); ++mask) {
        std::vector<int> block{lo};
        for (int j = 0; j < m; ++j)
            if (mask >> j & 1) block.push_back(lo + 1 + j);
        cur.push_back(block);
        nc_gaps(block, 0, hi, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Perm> enumerate_noncrossing(const Perm& sigma) {
    int n = sigma.n();
    std::vector<Perm> acc{Perm(n)};
    for (auto& cyc : sigma.cycles()) {
        int p = int(cyc.size());
        if (p == 1) continue;
        std::vector<Blocks> parts;
        Blocks cur;
        nc_interval(0, p, cur, parts);
        std::vector<Perm> next;
        next.reserve(acc.size() * parts.size());
        for (auto& base : acc) {
            for (auto& part : parts) {
                std::vector<int> v = base.images();
                for (auto& blk : part)
                    for (size_t i = 0; i < blk.size(); ++i)
                        v[cyc[blk[i]]] = cyc[blk[(i + 1) % blk.size()]];
                next.emplace_back(v);
            }
        }
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

Q moebius_nc(const Perm& nu) {
    Q m = 1;
    for (int p : nu.cycle_type()) {
        Q c(catalan(p - 1));
        m *= (p % 2 == 0) ? -c : c;
    }
    return m;
}

int genus(const Perm& sigma, const Perm& tau) {
    int n = sigma.n();
    // K: blocks of the join of the cycle partitions
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i) {
        parent[find(i)] = find(sigma(i));
        parent[find(i)] = find(tau(i));
    }
    int K = 0;
    for (int i = 0; i < n; ++i) K += find(i) == i;
    int twice = 2 * K - sigma.num_cycles() - tau.num_cycles() - (sigma * tau.inverse()).num_cycles() + n;
    if (twice < 0 || twice % 2) throw std::logic_error("Euler characteristic parity violated");
    return twice / 2;
}

Z binomial(int n, int k) {
    Z r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Z factorial(int n) {
    Z r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Z catalan(int n) { return binomial(2 * n, n) / (n + 1); }

std::vector<Perm> all_perms(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::vector<Perm> out;
    do out.emplace_back(v);
    while (std::next_permutation(v.begin(), v.end()));
    return out;
}

IntPartition cycle_type_of(const std::vector<int>& p) {
    int n = int(p.size());
    IntPartition lam;
    std::vector<char> seen(n, 0);
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j]; j = p[j]) {
            seen[j] = 1;
            ++len;
        }
        lam.push_back(len);
    }
    std::sort(lam.rbegin(), lam.rend());
    return lam;
}

std::vector<IntPartition> integer_partitions(int n) {
    std::vector<IntPartition> out;
    IntPartition cur;
    auto rec = [&](auto& self, int rem, int mx) -> void {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(rem, mx); k >= 1; --k) {
            cur.push_back(k);
            self(self, rem - k, k);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

Perm perm_of_type(const IntPartition& lambda) {
    int n = std::accumulate(lambda.begin(), lambda.end(), 0);
    std::vector<int> v(n);
    int s = 0;
    for (int k : lambda) {
        for (int i = 0; i < k; ++i) v[s + i] = s + (i + 1) % k;
        s += k;
    }
    return Perm(v);
}

Z class_size(const IntPartition& lambda) {
    int n = std::accumulate(lambda.begin(), lambda.end(), 0);
    Z z = 1;
    std::vector<int> mult(n + 1, 0);
    for (int k : lambda) {
        ++mult[k];
        z *= k;
    }
    for (int m : mult) z *= factorial(m);
    return factorial(n) / z;
}

std::string partition_str(const IntPartition& lambda) {
    std::string s = "[";
    for (size_t i = 0; i < lambda.size(); ++i) s += (i ? "," : "") + std::to_string(lambda[i]);
    return s + "]";
}

long perm_rank(const Perm& p) {
    int n = p.n();
    long r = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j) smaller += p(j) < p(i);
        r = r * (n - i) + smaller;
    }
    return r;
}

}  // namespace tf
