#include "tensorfree/invariants.hpp"

#include "tensorfree/budget.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tf {

std::string flavor_name(Flavor f) { return f == Flavor::Pure ? "pure" : "mixed"; }

Flavor parse_flavor(const std::string& s) {
    if (s == "pure") return Flavor::Pure;
    if (s == "mixed") return Flavor::Mixed;
    throw std::invalid_argument("unknown flavor: " + s);
}

int tuple_degree(const PermTuple& s) {
    if (s.empty()) throw std::invalid_argument("empty permutation tuple");
    for (auto& p : s)
        if (p.n() != s[0].n()) throw std::invalid_argument("tuple entries of different degree");
    return s[0].n();
}

PermTuple identity_tuple(int n, int D) { return PermTuple(D, Perm(n)); }

PermTuple tuple_inverse(const PermTuple& s) {
    PermTuple r;
    for (auto& p : s) r.push_back(p.inverse());
    return r;
}

PermTuple right_mul(const PermTuple& s, const Perm& eta) {
    PermTuple r;
    for (auto& p : s) r.push_back(p * eta);
    return r;
}

PermTuple left_mul(const Perm& eta, const PermTuple& s) {
    PermTuple r;
    for (auto& p : s) r.push_back(eta * p);
    return r;
}

PermTuple conjugate(const PermTuple& s, const Perm& eta) {
    Perm ei = eta.inverse();
    PermTuple r;
    for (auto& p : s) r.push_back(eta * p * ei);
    return r;
}

PermTuple append(const PermTuple& s, const Perm& p) {
    PermTuple r = s;
    r.push_back(p);
    return r;
}

std::string tuple_str(const PermTuple& s) {
    std::string o = "(";
    for (size_t c = 0; c < s.size(); ++c) o += (c ? ", " : "") + s[c].str();
    return o + ")";
}

int distance(const PermTuple& s, const PermTuple& t) {
    if (s.size() != t.size()) throw std::invalid_argument("tuple length mismatch");
    int d = 0;
    for (size_t c = 0; c < s.size(); ++c) d += cayley_distance(s[c], t[c]);
    return d;
}

int distance(const PermTuple& s, const Perm& eta) {
    int d = 0;
    for (auto& p : s) d += cayley_distance(p, eta);
    return d;
}

namespace {

struct UF {
    std::vector<int> p;
    explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
    int count() {
        int k = 0;
        for (int i = 0; i < int(p.size()); ++i) k += find(i) == i;
        return k;
    }
    std::vector<int> labels() {
        std::vector<int> l(p.size());
        for (size_t i = 0; i < p.size(); ++i) l[i] = find(int(i));
        return l;
    }
};

}  // namespace

SetPartition components_mixed(const PermTuple& s) {
    int n = tuple_degree(s);
    UF uf(n);
    for (auto& p : s)
        for (int i = 0; i < n; ++i) uf.unite(i, p(i));
    return SetPartition(uf.labels());
}

BipartitePartition components_pure(const PermTuple& s) {
    int n = tuple_degree(s);
    UF uf(2 * n);
    for (auto& p : s)
        for (int i = 0; i < n; ++i) uf.unite(i, n + p(i));
    return BipartitePartition(SetPartition(uf.labels()));
}

int K_mixed(const PermTuple& s) { return components_mixed(s).num_blocks(); }
int K_pure(const PermTuple& s) { return components_pure(s).num_blocks(); }

int K_pure(const PermTuple& s, const Perm& eta) {
    int n = tuple_degree(s);
    UF uf(2 * n);
    for (auto& p : s)
        for (int i = 0; i < n; ++i) uf.unite(i, n + p(i));
    for (int i = 0; i < n; ++i) uf.unite(i, n + eta(i));
    return uf.count();
}

int K_mixed(const PermTuple& s, const Perm& eta) {
    int n = tuple_degree(s);
    UF uf(n);
    for (auto& p : s)
        for (int i = 0; i < n; ++i) uf.unite(i, p(i));
    for (int i = 0; i < n; ++i) uf.unite(i, eta(i));
    return uf.count();
}

PermTuple restrict_mixed(const PermTuple& s, const std::vector<int>& verts) {
    int n = tuple_degree(s);
    std::vector<int> pos(n, -1);
    std::vector<int> v = verts;
    std::sort(v.begin(), v.end());
    for (size_t i = 0; i < v.size(); ++i) pos[v[i]] = int(i);
    PermTuple r;
    for (auto& p : s) {
        std::vector<int> img(v.size());
        for (size_t i = 0; i < v.size(); ++i) {
            int t = pos[p(v[i])];
            if (t < 0) throw std::invalid_argument("restriction to a non-invariant set");
            img[i] = t;
        }
        r.emplace_back(img);
    }
    return r;
}

PermTuple restrict_pure(const PermTuple& s, const std::vector<int>& blacks, const std::vector<int>& whites) {
    int n = tuple_degree(s);
    if (blacks.size() != whites.size()) throw std::invalid_argument("unbalanced restriction");
    std::vector<int> b = blacks, w = whites;
    std::sort(b.begin(), b.end());
    std::sort(w.begin(), w.end());
    std::vector<int> wpos(n, -1);
    for (size_t i = 0; i < w.size(); ++i) wpos[w[i]] = int(i);
    PermTuple r;
    for (auto& p : s) {
        std::vector<int> img(b.size());
        for (size_t i = 0; i < b.size(); ++i) {
            int t = wpos[p(b[i])];
            if (t < 0) throw std::invalid_argument("restriction to a non-invariant set");
            img[i] = t;
        }
        r.emplace_back(img);
    }
    return r;
}

std::vector<PermTuple> pure_components(const PermTuple& s) {
    int n = tuple_degree(s);
    std::vector<PermTuple> out;
    for (auto& blk : components_pure(s).as_set().blocks()) {
        std::vector<int> b, w;
        for (int x : blk) (x < n ? b : w).push_back(x < n ? x : x - n);
        out.push_back(restrict_pure(s, b, w));
    }
    return out;
}

std::vector<PermTuple> mixed_components(const PermTuple& s) {
    std::vector<PermTuple> out;
    for (auto& blk : components_mixed(s).blocks()) out.push_back(restrict_mixed(s, blk));
    return out;
}

PermTuple disjoint_union(const PermTuple& a, const PermTuple& b) {
    int na = tuple_degree(a), nb = tuple_degree(b);
    if (a.size() != b.size()) throw std::invalid_argument("tuple length mismatch");
    PermTuple r;
    for (size_t c = 0; c < a.size(); ++c) {
        std::vector<int> img(na + nb);
        for (int i = 0; i < na; ++i) img[i] = a[c](i);
        for (int i = 0; i < nb; ++i) img[na + i] = na + b[c](i);
        r.emplace_back(img);
    }
    return r;
}

// ------------------------------------------------------------ class text form

std::string InvariantClass::str() const {
    std::string s = "flavor=" + flavor_name(flavor) + ";D=" + std::to_string(D()) + ";n=" + std::to_string(n());
    for (int c = 0; c < D(); ++c) s += ";c" + std::to_string(c + 1) + "=" + rep[c].str();
    return s;
}

InvariantClass InvariantClass::parse(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad class field: " + tok);
        auto k = tok.substr(0, eq);
        k.erase(0, k.find_first_not_of(" \t"));
        kv[k] = tok.substr(eq + 1);
    }
    InvariantClass c;
    c.flavor = parse_flavor(kv.at("flavor"));
    int D = std::stoi(kv.at("D")), n = std::stoi(kv.at("n"));
    for (int i = 1; i <= D; ++i) c.rep.push_back(Perm::parse(kv.at("c" + std::to_string(i)), n));
    c.canonical = canonicalize(c.rep, c.flavor).rep == c.rep;
    return c;
}

// ------------------------------------------------------------ canonical forms

namespace {

// lexicographic minimum of eta s eta^-1 over eta, with the minimizing eta
std::pair<PermTuple, Perm> mixed_lexmin(const PermTuple& s) {
    int n = tuple_degree(s);
    int D = int(s.size());
    std::vector<int> eta(n), inv(n);
    std::iota(eta.begin(), eta.end(), 0);
    std::vector<int> best(size_t(n) * D), cur(size_t(n) * D);
    std::vector<int> best_eta = eta;
    bool have = false;
    do {
        for (int i = 0; i < n; ++i) inv[eta[i]] = i;
        // compare lazily while building the conjugate
        bool smaller = !have, decided = !have;
        for (int c = 0; c < D && !(decided && !smaller); ++c)
            for (int i = 0; i < n; ++i) {
                int v = eta[s[c](inv[i])];
                cur[size_t(c) * n + i] = v;
                if (!decided) {
                    int b = best[size_t(c) * n + i];
                    if (v < b) {
                        smaller = decided = true;
                    } else if (v > b) {
                        decided = true;
                        break;
                    }
                }
            }
        if (smaller) {
            best = cur;
            best_eta = eta;
            have = true;
        }
    } while (std::next_permutation(eta.begin(), eta.end()));
    PermTuple r;
    for (int c = 0; c < D; ++c) r.emplace_back(std::vector<int>(best.begin() + size_t(c) * n, best.begin() + size_t(c + 1) * n));
    return {r, Perm(best_eta)};
}

}  // namespace

std::pair<InvariantClass, Relabel> canonicalize_with(const PermTuple& s, Flavor f, int cap) {
    int n = tuple_degree(s);
    if (n > cap) throw BudgetExceeded("canonicalization above size cap");
    InvariantClass out;
    out.flavor = f;
    out.canonical = true;
    if (f == Flavor::Mixed) {
        auto [rep, eta] = mixed_lexmin(s);
        out.rep = rep;
        return {out, Relabel{eta, eta.inverse()}};
    }
    // pure: the orbit minimum has identity first color
    Perm s1i = s[0].inverse();
    PermTuple red;
    for (size_t c = 1; c < s.size(); ++c) red.push_back(s[c] * s1i);
    Perm eta(n);
    out.rep.push_back(Perm(n));
    if (!red.empty()) {
        auto [rep, e] = mixed_lexmin(red);
        eta = e;
        for (auto& p : rep) out.rep.push_back(p);
    }
    return {out, Relabel{eta, s1i * eta.inverse()}};
}

InvariantClass canonicalize(const PermTuple& s, Flavor f, int cap) { return canonicalize_with(s, f, cap).first; }

Word transport_word(const Word& w, const Relabel& r, Flavor f, int n) {
    Word out(w.size());
    if (f == Flavor::Mixed) {
        for (int s = 0; s < n; ++s) out[r.eta(s)] = w[s];
        return out;
    }
    for (int b = 0; b < n; ++b) out[b] = w[r.nu(b)];
    for (int x = 0; x < n; ++x) out[n + r.eta(x)] = w[n + x];
    return out;
}

std::pair<InvariantClass, Word> canonicalize_labeled(const PermTuple& s, const Word& w, Flavor f) {
    int n = tuple_degree(s);
    auto [cls, rel] = canonicalize_with(s, f);
    if (int(w.size()) != (f == Flavor::Mixed ? n : 2 * n)) throw std::invalid_argument("word length mismatch");
    Word best = transport_word(w, rel, f, n);
    // scan every relabelling reaching the same representative
    for (auto& eta : all_perms(n)) {
        Relabel r;
        PermTuple img;
        if (f == Flavor::Mixed) {
            r = {eta, eta.inverse()};
            img = conjugate(s, eta);
        } else {
            r = {eta, s[0].inverse() * eta.inverse()};
            img = left_mul(eta, right_mul(s, r.nu));
        }
        if (img != cls.rep) continue;
        Word cand = transport_word(w, r, f, n);
        if (cand < best) best = cand;
    }
    return {cls, best};
}

// ------------------------------------------------------------ enumeration

namespace {

std::vector<InvariantClass> enumerate_mixed(int n, int D, bool connected_only) {
    auto perms = all_perms(n);
    long F = long(perms.size());
    double total = std::pow(double(F), D);
    require_budget(total * F, "class enumeration");
    if (n > 6) throw BudgetExceeded("class enumeration above n = 6");
    // conjugation table on ranks
    std::vector<int> conj(size_t(F) * F);
    for (long e = 0; e < F; ++e) {
        Perm ei = perms[e].inverse();
        for (long p = 0; p < F; ++p) conj[size_t(e) * F + p] = int(perm_rank(perms[e] * perms[p] * ei));
    }
    long T = 1;
    for (int c = 0; c < D; ++c) T *= F;
    std::vector<char> marked(T, 0);
    std::vector<InvariantClass> out;
    std::vector<int> digits(D);
    for (long idx = 0; idx < T; ++idx) {
        if (marked[idx]) continue;
        long x = idx;
        for (int c = D - 1; c >= 0; --c) {
            digits[c] = int(x % F);
            x /= F;
        }
        for (long e = 0; e < F; ++e) {
            long y = 0;
            for (int c = 0; c < D; ++c) y = y * F + conj[size_t(e) * F + digits[c]];
            marked[y] = 1;
        }
        InvariantClass cls;
        cls.flavor = Flavor::Mixed;
        cls.canonical = true;
        for (int c = 0; c < D; ++c) cls.rep.push_back(perms[digits[c]]);
        if (connected_only && K_mixed(cls.rep) != 1) continue;
        out.push_back(std::move(cls));
    }
    return out;
}

}  // namespace

std::vector<InvariantClass> enumerate_classes(int n, int D, Flavor f, bool connected_only) {
    if (D < 1 || n < 1) throw std::invalid_argument("need n, D >= 1");
    if (f == Flavor::Mixed) return enumerate_mixed(n, D, connected_only);
    std::vector<InvariantClass> out;
    if (D == 1) {
        InvariantClass c{identity_tuple(n, 1), Flavor::Pure, true};
        if (!connected_only || K_pure(c.rep) == 1) out.push_back(c);
        return out;
    }
    for (auto& m : enumerate_mixed(n, D - 1, false)) {
        InvariantClass c;
        c.flavor = Flavor::Pure;
        c.canonical = true;
        c.rep.push_back(Perm(n));
        for (auto& p : m.rep) c.rep.push_back(p);
        if (connected_only && K_pure(c.rep) != 1) continue;
        out.push_back(std::move(c));
    }
    return out;
}

PermTuple pure_to_mixed(const PermTuple& s) {
    if (s.size() < 2) throw std::invalid_argument("pure_to_mixed needs D >= 2");
    Perm li = s.back().inverse();
    PermTuple r;
    for (size_t c = 0; c + 1 < s.size(); ++c) r.push_back(s[c] * li);
    return r;
}

// ------------------------------------------------------------ distances, Gram

namespace {

void check_same_shape(const InvariantClass& a, const InvariantClass& b) {
    if (a.flavor != b.flavor) throw std::invalid_argument("flavor mismatch");
    if (a.D() != b.D() || a.n() != b.n()) throw std::invalid_argument("shape mismatch");
}

// histogram of distances over all relabellings
std::map<int, Z> distance_histogram(const InvariantClass& a, const InvariantClass& b) {
    check_same_shape(a, b);
    int n = a.n();
    auto perms = all_perms(n);
    std::map<int, Z> h;
    if (a.flavor == Flavor::Mixed) {
        for (auto& eta : perms) ++h[distance(a.rep, conjugate(b.rep, eta))];
        return h;
    }
    require_budget(double(perms.size()) * perms.size() * a.D(), "pure orbit distance");
    PermTuple bi = tuple_inverse(b.rep);
    for (auto& eta : perms)
        for (auto& nu : perms) {
            int d = 0;
            for (int c = 0; c < a.D(); ++c) d += (a.rep[c] * eta * bi[c] * nu).length();
            ++h[d];
        }
    return h;
}

}  // namespace

OrbitDistance orbit_distance(const InvariantClass& a, const InvariantClass& b) {
    auto h = distance_histogram(a, b);
    return {h.begin()->first, h.begin()->second};
}

std::pair<int, Z> gram_leading(const InvariantClass& a, const InvariantClass& b) {
    auto d = orbit_distance(a, b);
    return {-d.distance, d.multiplicity};
}

LaurentPoly gram_entry(const InvariantClass& a, const InvariantClass& b) {
    LaurentPoly p;
    for (auto& [d, m] : distance_histogram(a, b)) p.add_term(-d, Q(m));
    return p;
}

std::vector<std::vector<LaurentPoly>> gram_matrix(const std::vector<InvariantClass>& cls) {
    size_t k = cls.size();
    std::vector<std::vector<LaurentPoly>> g(k, std::vector<LaurentPoly>(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i; j < k; ++j) g[i][j] = g[j][i] = gram_entry(cls[i], cls[j]);
    return g;
}

Q determinant(std::vector<std::vector<Q>> m) {
    size_t k = m.size();
    Q det = 1;
    for (size_t c = 0; c < k; ++c) {
        size_t piv = c;
        while (piv < k && m[piv][c] == 0) ++piv;
        if (piv == k) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (size_t r = c + 1; r < k; ++r) {
            if (m[r][c] == 0) continue;
            Q f = m[r][c] / m[c][c];
            for (size_t j = c; j < k; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

bool gram_invertible_at(const std::vector<std::vector<LaurentPoly>>& g, const Q& N) {
    std::vector<std::vector<Q>> m(g.size(), std::vector<Q>(g.size()));
    for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) m[i][j] = g[i][j].eval(N);
    return determinant(m) != 0;
}

// ------------------------------------------------------------ contraction

DenseTensor::DenseTensor(int N_, int slots_) : N(N_), slots(slots_) {
    size_t sz = 1;
    for (int i = 0; i < slots; ++i) sz *= size_t(N);
    data.assign(sz, cplx(0));
}

DenseTensor DenseTensor::conj() const {
    DenseTensor r = *this;
    for (auto& z : r.data) z = std::conj(z);
    return r;
}

namespace {

struct Node {
    std::vector<int> labels;
    std::vector<cplx> data;
};

size_t ipow(int N, size_t k) {
    size_t r = 1;
    for (size_t i = 0; i < k; ++i) r *= size_t(N);
    return r;
}

// sum over repeated labels of a single node
Node self_trace(const Node& a, int N) {
    std::map<int, int> cnt;
    for (int l : a.labels) ++cnt[l];
    bool any = false;
    for (auto& [l, c] : cnt) any |= c > 1;
    if (!any) return a;
    Node r;
    for (int l : a.labels)
        if (cnt[l] == 1) r.labels.push_back(l);
    r.data.assign(ipow(N, r.labels.size()), cplx(0));
    size_t k = a.labels.size();
    std::vector<int> idx(k, 0);
    std::map<int, int> val;
    for (size_t lin = 0; lin < a.data.size(); ++lin) {
        size_t x = lin;
        for (size_t i = k; i-- > 0;) {
            idx[i] = int(x % N);
            x /= N;
        }
        val.clear();
        bool ok = true;
        for (size_t i = 0; i < k && ok; ++i) {
            auto [it, fresh] = val.emplace(a.labels[i], idx[i]);
            if (!fresh && it->second != idx[i]) ok = false;
        }
        if (!ok) continue;
        size_t out = 0;
        for (int l : r.labels) out = out * N + size_t(val[l]);
        r.data[out] += a.data[lin];
    }
    return r;
}

// reorder a node's axes to the given label order
std::vector<cplx> permute(const Node& a, const std::vector<int>& order, int N) {
    size_t k = a.labels.size();
    std::vector<size_t> src_axis(k);
    for (size_t i = 0; i < k; ++i)
        src_axis[i] = size_t(std::find(a.labels.begin(), a.labels.end(), order[i]) - a.labels.begin());
    std::vector<size_t> stride(k, 1);
    for (size_t i = k; i-- > 1;) stride[i - 1] = stride[i] * N;
    std::vector<cplx> out(a.data.size());
    std::vector<int> idx(k, 0);
    for (size_t lin = 0; lin < out.size(); ++lin) {
        size_t src = 0;
        for (size_t i = 0; i < k; ++i) src += size_t(idx[i]) * stride[src_axis[i]];
        out[lin] = a.data[src];
        for (size_t i = k; i-- > 0;) {
            if (++idx[i] < N) break;
            idx[i] = 0;
        }
    }
    return out;
}

Node contract(const Node& a, const Node& b, int N) {
    std::vector<int> shared, fa, fb;
    for (int l : a.labels)
        if (std::find(b.labels.begin(), b.labels.end(), l) != b.labels.end())
            shared.push_back(l);
        else
            fa.push_back(l);
    for (int l : b.labels)
        if (std::find(shared.begin(), shared.end(), l) == shared.end()) fb.push_back(l);
    std::vector<int> oa = fa, ob = shared;
    oa.insert(oa.end(), shared.begin(), shared.end());
    ob.insert(ob.end(), fb.begin(), fb.end());
    auto A = permute(a, oa, N), B = permute(b, ob, N);
    size_t m = ipow(N, fa.size()), s = ipow(N, shared.size()), q = ipow(N, fb.size());
    Node r;
    r.labels = fa;
    r.labels.insert(r.labels.end(), fb.begin(), fb.end());
    r.data.assign(m * q, cplx(0));
    for (size_t i = 0; i < m; ++i)
        for (size_t k = 0; k < s; ++k) {
            cplx av = A[i * s + k];
            if (av == cplx(0)) continue;
            for (size_t j = 0; j < q; ++j) r.data[i * q + j] += av * B[k * q + j];
        }
    return r;
}

cplx contract_network(std::vector<Node> nodes, int N) {
    for (auto& nd : nodes) nd = self_trace(nd, N);
    cplx scalar = 1;
    while (true) {
        // peel off finished scalars
        for (size_t i = 0; i < nodes.size();) {
            if (nodes[i].labels.empty()) {
                scalar *= nodes[i].data[0];
                nodes.erase(nodes.begin() + long(i));
            } else {
                ++i;
            }
        }
        if (nodes.empty()) return scalar;
        // greedy: the sharing pair with the smallest result
        size_t bi = 0, bj = 0;
        size_t best = SIZE_MAX;
        for (size_t i = 0; i < nodes.size(); ++i)
            for (size_t j = i + 1; j < nodes.size(); ++j) {
                size_t sh = 0;
                for (int l : nodes[i].labels)
                    sh += std::count(nodes[j].labels.begin(), nodes[j].labels.end(), l);
                if (!sh) continue;
                size_t res = nodes[i].labels.size() + nodes[j].labels.size() - 2 * sh;
                if (res < best) {
                    best = res;
                    bi = i;
                    bj = j;
                }
            }
        if (best == SIZE_MAX) throw std::logic_error("dangling labels in tensor network");
        Node r = contract(nodes[bi], nodes[bj], N);
        nodes.erase(nodes.begin() + long(bj));
        nodes[bi] = self_trace(r, N);
    }
}

}  // namespace

cplx eval_trace_invariant(const PermTuple& s, Flavor f, const std::vector<const DenseTensor*>& ts) {
    int n = tuple_degree(s);
    int D = int(s.size());
    if (ts.empty()) throw std::invalid_argument("no tensors");
    int N = ts[0]->N;
    double work = 1;
    for (int i = 0; i < D; ++i) work *= N;
    require_budget(work * work * n, "trace-invariant contraction");
    std::vector<Node> nodes;
    auto label = [&](int c, int x) { return c * n + x; };
    if (f == Flavor::Mixed) {
        if (int(ts.size()) != n) throw std::invalid_argument("mixed evaluation needs n tensors");
        for (int x = 0; x < n; ++x) {
            if (ts[x]->slots != 2 * D || ts[x]->N != N) throw std::invalid_argument("tensor shape mismatch");
            Node nd;
            for (int c = 0; c < D; ++c) nd.labels.push_back(label(c, x));
            for (int c = 0; c < D; ++c) nd.labels.push_back(label(c, s[c].inverse()(x)));
            nd.data = ts[x]->data;
            nodes.push_back(std::move(nd));
        }
    } else {
        if (int(ts.size()) != 2 * n) throw std::invalid_argument("pure evaluation needs 2n tensors");
        for (int x = 0; x < 2 * n; ++x) {
            if (ts[x]->slots != D || ts[x]->N != N) throw std::invalid_argument("tensor shape mismatch");
            Node nd;
            for (int c = 0; c < D; ++c) nd.labels.push_back(x < n ? label(c, x) : label(c, s[c].inverse()(x - n)));
            nd.data = ts[x]->data;
            nodes.push_back(std::move(nd));
        }
    }
    return contract_network(std::move(nodes), N);
}

cplx eval_trace_invariant(const PermTuple& s, Flavor f, const std::vector<DenseTensor>& ts) {
    std::vector<const DenseTensor*> p;
    for (auto& t : ts) p.push_back(&t);
    return eval_trace_invariant(s, f, p);
}

}  // namespace tf
