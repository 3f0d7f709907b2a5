#include "tensorfree/partitions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tf {

namespace {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
    std::vector<int> labels() {
        std::vector<int> l(p.size());
        for (size_t i = 0; i < p.size(); ++i) l[i] = find(int(i));
        return l;
    }
};

Q signed_factorial(int k) {  // (-1)^{k-1} (k-1)!
    Q f(factorial(k - 1));
    return (k % 2 == 0) ? -f : f;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back(std::stoi(tok));
    }
    return out;
}

std::string strip_braces(const std::string& s) {
    auto a = s.find('{'), b = s.rfind('}');
    if (a == std::string::npos || b == std::string::npos || b < a)
        throw std::invalid_argument("partition must be enclosed in braces: " + s);
    return s.substr(a + 1, b - a - 1);
}

std::vector<std::string> split(const std::string& s, char c) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, c)) out.push_back(tok);
    return out;
}

}  // namespace

SetPartition::SetPartition(std::vector<int> labels) {
    std::vector<int> map;
    lab_.resize(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        int l = labels[i];
        if (l < 0) throw std::invalid_argument("negative block label");
        if (l >= int(map.size())) map.resize(l + 1, -1);
        if (map[l] < 0) map[l] = nb_++;
        lab_[i] = map[l];
    }
}

SetPartition SetPartition::finest(int n) {
    std::vector<int> l(n);
    std::iota(l.begin(), l.end(), 0);
    return SetPartition(l);
}

SetPartition SetPartition::coarsest(int n) { return SetPartition(std::vector<int>(n, 0)); }

SetPartition SetPartition::of_perm(const Perm& p) {
    UnionFind uf(p.n());
    for (int i = 0; i < p.n(); ++i) uf.unite(i, p(i));
    return SetPartition(uf.labels());
}

SetPartition SetPartition::from_blocks(int n, const std::vector<std::vector<int>>& blocks0) {
    std::vector<int> l(n, -1);
    for (size_t b = 0; b < blocks0.size(); ++b)
        for (int x : blocks0[b]) {
            if (x < 0 || x >= n || l[x] >= 0) throw std::invalid_argument("blocks do not partition the set");
            l[x] = int(b);
        }
    for (int x : l)
        if (x < 0) throw std::invalid_argument("blocks do not cover the set");
    return SetPartition(l);
}

SetPartition SetPartition::parse(const std::string& s) {
    std::vector<std::vector<int>> bl;
    int mx = 0;
    for (auto& part : split(strip_braces(s), '|')) {
        auto v = parse_ints(part);
        for (int& x : v) {
            mx = std::max(mx, x);
            --x;
        }
        if (!v.empty()) bl.push_back(v);
    }
    return from_blocks(mx, bl);
}

std::vector<std::vector<int>> SetPartition::blocks() const {
    std::vector<std::vector<int>> b(nb_);
    for (int i = 0; i < n(); ++i) b[lab_[i]].push_back(i);
    return b;
}

std::string SetPartition::str() const {
    std::string s = "{";
    auto bl = blocks();
    for (size_t b = 0; b < bl.size(); ++b) {
        if (b) s += "|";
        for (size_t i = 0; i < bl[b].size(); ++i) s += (i ? "," : "") + std::to_string(bl[b][i] + 1);
    }
    return s + "}";
}

SetPartition join(const SetPartition& a, const SetPartition& b) {
    if (a.n() != b.n()) throw std::invalid_argument("partition size mismatch");
    UnionFind uf(a.n());
    std::vector<int> fa(a.num_blocks(), -1), fb(b.num_blocks(), -1);
    for (int i = 0; i < a.n(); ++i) {
        int x = a.block_of(i), y = b.block_of(i);
        if (fa[x] < 0) fa[x] = i; else uf.unite(i, fa[x]);
        if (fb[y] < 0) fb[y] = i; else uf.unite(i, fb[y]);
    }
    return SetPartition(uf.labels());
}

bool leq(const SetPartition& a, const SetPartition& b) {
    if (a.n() != b.n()) throw std::invalid_argument("partition size mismatch");
    std::vector<int> img(a.num_blocks(), -1);
    for (int i = 0; i < a.n(); ++i) {
        int& t = img[a.block_of(i)];
        if (t < 0) t = b.block_of(i);
        else if (t != b.block_of(i)) return false;
    }
    return true;
}

Q moebius_partition(const SetPartition& pi) { return signed_factorial(pi.num_blocks()); }

Q moebius_partition_rel(const SetPartition& finer, const SetPartition& coarser) {
    if (!leq(finer, coarser)) throw std::invalid_argument("refinement order violated");
    std::vector<int> cnt(coarser.num_blocks(), 0);
    std::vector<int> marked(finer.num_blocks(), 0);
    for (int i = 0; i < finer.n(); ++i) {
        int f = finer.block_of(i);
        if (!marked[f]) {
            marked[f] = 1;
            ++cnt[coarser.block_of(i)];
        }
    }
    Q m = 1;
    for (int c : cnt) m *= signed_factorial(c);
    return m;
}

std::vector<SetPartition> enumerate_partitions(int n, int cap) {
    if (n > cap) throw std::length_error("partition enumeration above cap");
    std::vector<SetPartition> out;
    std::vector<int> rgs(n, 0);
    auto rec = [&](auto& self, int i, int mx) -> void {
        if (i == n) {
            out.emplace_back(rgs);
            return;
        }
        for (int b = 0; b <= mx + 1; ++b) {
            rgs[i] = b;
            self(self, i + 1, std::max(mx, b));
        }
    };
    if (n == 0) {
        out.emplace_back(std::vector<int>{});
        return out;
    }
    rgs[0] = 0;
    rec(rec, 1, 0);
    return out;
}

std::vector<SetPartition> coarsenings(const SetPartition& base) {
    std::vector<SetPartition> out;
    for (auto& q : enumerate_partitions(base.num_blocks(), 64)) {
        std::vector<int> l(base.n());
        for (int i = 0; i < base.n(); ++i) l[i] = q.block_of(base.block_of(i));
        out.emplace_back(l);
    }
    return out;
}

// ---------------------------------------------------------------- bipartite

BipartitePartition::BipartitePartition(SetPartition p) : p_(std::move(p)) {
    if (p_.n() % 2) throw std::invalid_argument("bipartite partition needs an even ground set");
    int n = p_.n() / 2;
    std::vector<int> bal(p_.num_blocks(), 0);
    for (int i = 0; i < n; ++i) {
        ++bal[p_.block_of(i)];
        --bal[p_.block_of(n + i)];
    }
    for (int b : bal)
        if (b) throw std::invalid_argument("unbalanced bipartite block");
}

BipartitePartition BipartitePartition::of_perm(const Perm& p) {
    int n = p.n();
    std::vector<int> l(2 * n);
    for (int i = 0; i < n; ++i) l[i] = l[n + p(i)] = i;
    return BipartitePartition(SetPartition(l));
}

BipartitePartition BipartitePartition::coarsest(int n) {
    return BipartitePartition(SetPartition::coarsest(2 * n));
}

BipartitePartition BipartitePartition::parse(const std::string& s) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> bl;
    int mx = 0;
    for (auto& part : split(strip_braces(s), '|')) {
        auto halves = split(part, ';');
        std::vector<int> u, b;
        if (!halves.empty()) u = parse_ints(halves[0]);
        if (halves.size() > 1) {
            std::string t;
            for (char c : halves[1])
                if (c != 'b') t += c;
            b = parse_ints(t);
        }
        for (int x : u) mx = std::max(mx, x);
        for (int x : b) mx = std::max(mx, x);
        bl.emplace_back(u, b);
    }
    std::vector<std::vector<int>> blocks;
    for (auto& [u, b] : bl) {
        std::vector<int> blk;
        for (int x : u) blk.push_back(x - 1);
        for (int x : b) blk.push_back(mx + x - 1);
        blocks.push_back(blk);
    }
    return BipartitePartition(SetPartition::from_blocks(2 * mx, blocks));
}

std::string BipartitePartition::str() const {
    int n = this->n();
    std::string s = "{";
    auto bl = p_.blocks();
    for (size_t b = 0; b < bl.size(); ++b) {
        if (b) s += "|";
        std::string u, w;
        for (int x : bl[b]) {
            if (x < n) u += (u.empty() ? "" : ",") + std::to_string(x + 1);
            else w += (w.empty() ? "" : ",") + std::to_string(x - n + 1) + "b";
        }
        s += u + ";" + w;
    }
    return s + "}";
}

BipartitePartition join(const BipartitePartition& a, const BipartitePartition& b) {
    return BipartitePartition(join(a.as_set(), b.as_set()));
}

bool leq(const BipartitePartition& a, const BipartitePartition& b) { return leq(a.as_set(), b.as_set()); }

// the upper interval [Pi, 1] is the lattice of partitions of the blocks of Pi
Q moebius_partition(const BipartitePartition& pi) { return signed_factorial(pi.num_blocks()); }

IntPartition block_profile(const SetPartition& p) {
    IntPartition prof;
    for (auto& b : p.blocks()) prof.push_back(int(b.size()));
    std::sort(prof.rbegin(), prof.rend());
    return prof;
}

std::vector<BipartitePartition> enumerate_bipartite(int n, int cap) {
    if (n > cap) throw std::length_error("bipartite enumeration above cap");
    auto parts = enumerate_partitions(n, cap);
    std::vector<BipartitePartition> out;
    for (auto& pu : parts) {
        auto bu = pu.blocks();
        for (auto& pb : parts) {
            if (block_profile(pu) != block_profile(pb)) continue;
            auto bb = pb.blocks();
            // match blocks of equal size
            std::vector<int> match(bu.size());
            std::vector<char> used(bb.size(), 0);
            auto rec = [&](auto& self, size_t i) -> void {
                if (i == bu.size()) {
                    std::vector<int> l(2 * n);
                    for (size_t k = 0; k < bu.size(); ++k) {
                        for (int x : bu[k]) l[x] = int(k);
                        for (int x : bb[match[k]]) l[n + x] = int(k);
                    }
                    out.emplace_back(SetPartition(l));
                    return;
                }
                for (size_t j = 0; j < bb.size(); ++j) {
                    if (used[j] || bb[j].size() != bu[i].size()) continue;
                    used[j] = 1;
                    match[i] = int(j);
                    self(self, i + 1);
                    used[j] = 0;
                }
            };
            rec(rec, 0);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<BipartitePartition> coarsenings(const BipartitePartition& base) {
    std::vector<BipartitePartition> out;
    for (auto& c : coarsenings(base.as_set())) out.emplace_back(c);
    return out;
}

Z bipartite_count(const IntPartition& profile) {
    int n = 0;
    std::map<int, int> d;
    for (int k : profile) {
        n += k;
        ++d[k];
    }
    Z den = 1;
    for (auto& [i, di] : d) {
        den *= factorial(di);
        Z f = factorial(i);
        for (int j = 0; j < 2 * di; ++j) den *= f;
    }
    Z nf = factorial(n);
    return nf * nf / den;
}

}  // namespace tf
