#include "tensorfree/transforms.hpp"

#include "tensorfree/budget.hpp"
#include "tensorfree/melonic.hpp"
#include "tensorfree/weingarten.hpp"

#include <json.hpp>

#include <algorithm>
#include <climits>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>

namespace tf {

namespace {

std::mutex g_key_mu;
std::map<std::pair<int, PermTuple>, std::string> g_key_cache;

std::string word_str(const Word& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    return s;
}

Word restrict_word_pure(const Word& w, int n, const std::vector<int>& blacks, const std::vector<int>& whites) {
    Word r;
    for (int b : blacks) r.push_back(w[b]);
    for (int x : whites) r.push_back(w[n + x]);
    return r;
}

Word restrict_word_mixed(const Word& w, const std::vector<int>& verts) {
    Word r;
    for (int v : verts) r.push_back(w[v]);
    return r;
}

struct Block {
    std::vector<int> blacks, whites;
};

std::vector<Block> bipartite_blocks(const BipartitePartition& p) {
    int n = p.n();
    std::vector<Block> out;
    for (auto& blk : p.as_set().blocks()) {
        Block b;
        for (int x : blk) (x < n ? b.blacks : b.whites).push_back(x < n ? x : x - n);
        out.push_back(std::move(b));
    }
    return out;
}

// odometer over S_n^D
template <class F>
void for_each_tuple(int n, int D, F&& body) {
    auto perms = all_perms(n);
    require_budget(std::pow(double(perms.size()), D) * n * D, "sum over S_n^D");
    std::vector<size_t> idx(D, 0);
    PermTuple t(D, perms[0]);
    while (true) {
        body(t);
        int c = 0;
        while (c < D && ++idx[c] == perms.size()) {
            idx[c] = 0;
            t[c] = perms[0];
            ++c;
        }
        if (c == D) break;
        t[c] = perms[idx[c]];
    }
}

// cycle types of rho restricted to each group of points
std::vector<IntPartition> split_types(const Perm& rho, const std::vector<std::vector<int>>& groups) {
    std::vector<int> grp(rho.n(), -1);
    for (size_t g = 0; g < groups.size(); ++g)
        for (int x : groups[g]) grp[x] = int(g);
    std::vector<IntPartition> out(groups.size());
    for (auto& cyc : rho.cycles()) out[grp[cyc[0]]].push_back(int(cyc.size()));
    for (auto& t : out) std::sort(t.rbegin(), t.rend());
    return out;
}

RatFunc weingarten_of_types(const std::vector<IntPartition>& types) {
    RatFunc r(Q(1));
    for (auto& t : types) r *= weingarten(t);
    return r;
}

Q moebius_tuple(const PermTuple& s, const PermTuple& t) {
    Q m = 1;
    for (size_t c = 0; c < s.size(); ++c) m *= moebius_nc(s[c] * t[c].inverse());
    return m;
}

// all tau with tau_c <= s_c for every color
std::vector<PermTuple> nc_product(const PermTuple& s) {
    std::vector<PermTuple> acc{PermTuple{}};
    for (auto& p : s) {
        auto opts = enumerate_noncrossing(p);
        std::vector<PermTuple> next;
        next.reserve(acc.size() * opts.size());
        for (auto& a : acc)
            for (auto& o : opts) {
                next.push_back(a);
                next.back().push_back(o);
            }
        acc = std::move(next);
    }
    return acc;
}

void check_flavor(Flavor want, Flavor got, const char* what) {
    if (want != got) throw std::invalid_argument(std::string(what) + ": table flavor mismatch");
}

// product over pure components of entries of the table
Q pure_component_product(const AsymptoticTable& t, const PermTuple& tau, const Word* w) {
    int n = tuple_degree(tau);
    Q acc = 1;
    for (auto& b : bipartite_blocks(components_pure(tau))) {
        auto sub = restrict_pure(tau, b.blacks, b.whites);
        std::string key = w ? table_key(sub, restrict_word_pure(*w, n, b.blacks, b.whites), Flavor::Pure)
                            : table_key(sub, Flavor::Pure);
        acc *= t.at(key);
        if (acc == 0) break;
    }
    return acc;
}

Q mixed_component_product(const AsymptoticTable& t, const PermTuple& tau, const Word* w = nullptr) {
    Q acc = 1;
    for (auto& g : components_mixed(tau).blocks()) {
        auto sub = restrict_mixed(tau, g);
        acc *= t.at(w ? table_key(sub, restrict_word_mixed(*w, g), Flavor::Mixed) : table_key(sub, Flavor::Mixed));
        if (acc == 0) break;
    }
    return acc;
}

Perm pairing_or_throw(const PermTuple& s, const char* what) {
    auto eta = canonical_pairing(s);
    if (!eta) throw std::invalid_argument(std::string(what) + ": invariant is not melonic");
    return *eta;
}

// move the pairing to the identity; blacks are relabelled b -> eta(b)
Word normalize_word(const Word& w, const Perm& eta) {
    int n = eta.n();
    Word r = w;
    for (int b = 0; b < n; ++b) r[eta(b)] = w[b];
    return r;
}

}  // namespace

// ------------------------------------------------------------ keys and tables

std::string table_key(const PermTuple& s, Flavor f) {
    std::pair<int, PermTuple> k{int(f), s};
    {
        std::lock_guard<std::mutex> g(g_key_mu);
        auto it = g_key_cache.find(k);
        if (it != g_key_cache.end()) return it->second;
    }
    std::string key = canonicalize(s, f).str();
    std::lock_guard<std::mutex> g(g_key_mu);
    if (g_key_cache.size() > 200000) g_key_cache.clear();
    g_key_cache.emplace(std::move(k), key);
    return key;
}

std::string table_key(const PermTuple& s, const Word& w, Flavor f) {
    auto [cls, cw] = canonicalize_labeled(s, w, f);
    return cls.str() + ";w=" + word_str(cw);
}

const RatFunc& FiniteTable::at(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw std::out_of_range("missing table entry: " + key);
    return it->second;
}

Q AsymptoticTable::at(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw std::out_of_range("missing table entry: " + key);
    return it->second;
}

Q AsymptoticTable::get(const std::string& key, const Q& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

namespace {

nlohmann::json entry_json(const std::string& key, const std::string& value) {
    nlohmann::json e;
    auto p = key.find(";w=");
    e["class"] = key.substr(0, p);
    if (p != std::string::npos) e["word"] = key.substr(p + 3);
    e["value"] = value;
    return e;
}

std::string entry_key(const nlohmann::json& e) {
    // re-canonicalize so hand-written tables need not use canonical forms
    auto cls = InvariantClass::parse(e.at("class").get<std::string>());
    if (!e.contains("word")) return table_key(cls.rep, cls.flavor);
    Word w;
    std::string ws = e.at("word").get<std::string>();
    size_t i = 0;
    while (i < ws.size()) {
        size_t j = ws.find(',', i);
        if (j == std::string::npos) j = ws.size();
        w.push_back(std::stoi(ws.substr(i, j - i)));
        i = j + 1;
    }
    return table_key(cls.rep, w, cls.flavor);
}

}  // namespace

std::string table_json(const FiniteTable& t) {
    nlohmann::json j;
    j["flavor"] = flavor_name(t.flavor);
    j["entries"] = nlohmann::json::array();
    for (auto& [k, v] : t.values) j["entries"].push_back(entry_json(k, v.serialize()));
    return j.dump(2);
}

std::string table_json(const AsymptoticTable& t) {
    nlohmann::json j;
    j["flavor"] = flavor_name(t.flavor);
    j["entries"] = nlohmann::json::array();
    for (auto& [k, v] : t.values) j["entries"].push_back(entry_json(k, q_str(v)));
    return j.dump(2);
}

FiniteTable finite_table_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    FiniteTable t;
    t.flavor = parse_flavor(j.at("flavor").get<std::string>());
    for (auto& e : j.at("entries")) t.values[entry_key(e)] = RatFunc::deserialize(e.at("value").get<std::string>());
    return t;
}

AsymptoticTable asymptotic_table_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    AsymptoticTable t;
    t.flavor = parse_flavor(j.at("flavor").get<std::string>());
    for (auto& e : j.at("entries")) {
        if (e.contains("word")) t.labelled = true;
        t.values[entry_key(e)] = q_parse(e.at("value").get<std::string>());
    }
    return t;
}

void TableExpansion::add(std::vector<std::string> keys, const RatFunc& c) {
    if (c.is_zero()) return;
    std::sort(keys.begin(), keys.end());
    auto it = terms.find(keys);
    if (it == terms.end()) {
        terms.emplace(std::move(keys), c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

RatFunc TableExpansion::evaluate(const FiniteTable& t) const {
    RatFunc acc;
    for (auto& [keys, c] : terms) {
        RatFunc x = c;
        for (auto& k : keys) x *= t.at(k);
        acc += x;
    }
    return acc;
}

std::string TableExpansion::str() const {
    std::string s;
    for (auto& [keys, c] : terms) {
        s += "(" + c.str() + ")";
        for (auto& k : keys) s += " E[" + k + "]";
        s += "\n";
    }
    return s;
}

// ------------------------------------------------------------ finite N

TableExpansion finite_cumulant_expansion(const PermTuple& s, Flavor f) {
    int n = tuple_degree(s);
    int D = int(s.size());
    if (n > weingarten_cap()) throw BudgetExceeded("finite cumulant: n above Weingarten cap");
    // (block keys, Weingarten types) -> summed Moebius weights
    std::map<std::pair<std::vector<std::string>, std::vector<IntPartition>>, Q> acc;
    if (f == Flavor::Pure) {
        auto ps = components_pure(s);
        for_each_tuple(n, D, [&](const PermTuple& t) {
            auto J = join(ps, components_pure(t));
            std::vector<Perm> rho;
            for (int c = 0; c < D; ++c) rho.push_back(s[c] * t[c].inverse());
            for (auto& P : coarsenings(J)) {
                auto blocks = bipartite_blocks(P);
                std::vector<std::vector<int>> wgroups;
                std::vector<std::string> keys;
                for (auto& b : blocks) {
                    wgroups.push_back(b.whites);
                    keys.push_back(table_key(restrict_pure(t, b.blacks, b.whites), Flavor::Pure));
                }
                std::vector<IntPartition> types;
                for (auto& r : rho)
                    for (auto& ty : split_types(r, wgroups)) types.push_back(ty);
                std::sort(keys.begin(), keys.end());
                std::sort(types.begin(), types.end());
                acc[{keys, types}] += moebius_partition(P);
            }
        });
    } else {
        auto ps = components_mixed(s);
        for_each_tuple(n, D, [&](const PermTuple& t) {
            auto J = join(ps, components_mixed(t));
            std::vector<Perm> rho;
            for (int c = 0; c < D; ++c) rho.push_back(s[c] * t[c].inverse());
            for (auto& P : coarsenings(J)) {
                auto groups = P.blocks();
                std::vector<std::string> keys;
                for (auto& g : groups) keys.push_back(table_key(restrict_mixed(t, g), Flavor::Mixed));
                std::vector<IntPartition> types;
                for (auto& r : rho)
                    for (auto& ty : split_types(r, groups)) types.push_back(ty);
                std::sort(keys.begin(), keys.end());
                std::sort(types.begin(), types.end());
                acc[{keys, types}] += moebius_partition(P);
            }
        });
    }
    TableExpansion e;
    for (auto& [k, lam] : acc)
        if (lam != 0) e.add(k.first, weingarten_of_types(k.second) * RatFunc(lam));
    return e;
}

RatFunc finite_cumulant_pure(const FiniteTable& moments, const PermTuple& s) {
    check_flavor(Flavor::Pure, moments.flavor, "finite_cumulant_pure");
    return finite_cumulant_expansion(s, Flavor::Pure).evaluate(moments);
}

RatFunc finite_cumulant_mixed(const FiniteTable& moments, const PermTuple& s) {
    check_flavor(Flavor::Mixed, moments.flavor, "finite_cumulant_mixed");
    return finite_cumulant_expansion(s, Flavor::Mixed).evaluate(moments);
}

TableExpansion mixed_as_pure(const TableExpansion& e) {
    TableExpansion out;
    for (auto& [keys, c] : e.terms) {
        std::vector<std::string> pk;
        for (auto& k : keys) {
            auto cls = InvariantClass::parse(k);
            if (cls.flavor != Flavor::Mixed) throw std::invalid_argument("mixed_as_pure: expected mixed keys");
            pk.push_back(table_key(cls.rep, Flavor::Pure));
        }
        out.add(pk, c);
    }
    return out;
}

TableExpansion finite_moment_expansion(const PermTuple& s, Flavor f) {
    int n = tuple_degree(s);
    int D = int(s.size());
    std::map<std::vector<std::string>, LaurentPoly> acc;
    for_each_tuple(n, D, [&](const PermTuple& t) {
        int e = n * D - distance(s, t);
        if (f == Flavor::Pure) {
            for (auto& P : coarsenings(components_pure(t))) {
                std::vector<std::string> keys;
                for (auto& b : bipartite_blocks(P))
                    keys.push_back(table_key(restrict_pure(t, b.blacks, b.whites), Flavor::Pure));
                std::sort(keys.begin(), keys.end());
                acc[keys].add_term(e, 1);
            }
        } else {
            for (auto& P : coarsenings(components_mixed(t))) {
                std::vector<std::string> keys;
                for (auto& g : P.blocks()) keys.push_back(table_key(restrict_mixed(t, g), Flavor::Mixed));
                std::sort(keys.begin(), keys.end());
                acc[keys].add_term(e, 1);
            }
        }
    });
    TableExpansion out;
    for (auto& [k, p] : acc) out.add(k, RatFunc(p));
    return out;
}

RatFunc finite_moment_from_cumulants(const FiniteTable& cumulants, const PermTuple& s) {
    return finite_moment_expansion(s, cumulants.flavor).evaluate(cumulants);
}

std::string MicroscopicPattern::str() const {
    auto idx = [](const std::vector<int>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i] + 1);
        return s;
    };
    std::string s = "k_" + std::to_string(factors.size()) + "(";
    for (size_t i = 0; i < factors.size(); ++i) {
        auto& e = factors[i];
        s += i ? ", " : "";
        if (flavor == Flavor::Mixed)
            s += "A[" + idx(e.out) + ";" + idx(e.in) + "]";
        else
            s += std::string(e.conjugate ? "Tbar" : "T") + "[" + idx(e.out) + "]";
    }
    return s + ")";
}

MicroscopicPattern microscopic_cumulant(const PermTuple& s, Flavor f) {
    MicroscopicPattern p;
    p.flavor = f;
    p.n = tuple_degree(s);
    p.D = int(s.size());
    for (int v = 0; v < p.n; ++v) {
        std::vector<int> out, in;
        for (auto& sc : s) {
            out.push_back(sc(v));
            in.push_back(v);
        }
        if (f == Flavor::Mixed) {
            p.factors.push_back({false, out, in});
        } else {
            p.factors.push_back({false, out, {}});
            p.factors.push_back({true, in, {}});
        }
    }
    return p;
}

// ------------------------------------------------------------ first order

std::vector<PermTuple> melonic_poset(const PermTuple& s) {
    Perm eta = pairing_or_throw(s, "melonic_poset");
    return nc_product(right_mul(s, eta.inverse()));
}

Q asymptotic_cumulant_melonic(const AsymptoticTable& phi, const PermTuple& s, const Word* w) {
    check_flavor(Flavor::Pure, phi.flavor, "asymptotic_cumulant_melonic");
    if (K_pure(s) != 1) throw std::invalid_argument("asymptotic_cumulant_melonic: not purely connected");
    Perm eta = pairing_or_throw(s, "asymptotic_cumulant_melonic");
    PermTuple sn = right_mul(s, eta.inverse());
    Word wn;
    if (w) wn = normalize_word(*w, eta);
    Q acc = 0;
    for (auto& t : nc_product(sn)) {
        Q v = pure_component_product(phi, t, w ? &wn : nullptr);
        if (v != 0) acc += v * moebius_tuple(sn, t);
    }
    return acc;
}

Q asymptotic_moment_from_cumulants_melonic(const AsymptoticTable& kappa, const PermTuple& s, const Word* w) {
    check_flavor(Flavor::Pure, kappa.flavor, "asymptotic_moment_from_cumulants_melonic");
    Perm eta = pairing_or_throw(s, "asymptotic_moment_from_cumulants_melonic");
    PermTuple sn = right_mul(s, eta.inverse());
    Word wn;
    if (w) wn = normalize_word(*w, eta);
    Q acc = 0;
    for (auto& t : nc_product(sn)) acc += pure_component_product(kappa, t, w ? &wn : nullptr);
    return acc;
}

namespace {

// tau with tau eta^-1 <= s eta^-1, eta the pairing of (s, id)
std::vector<PermTuple> wishart_poset(const PermTuple& s, Perm& eta) {
    int n = tuple_degree(s);
    eta = pairing_or_throw(append(s, Perm(n)), "wishart poset");
    std::vector<PermTuple> out;
    for (auto& x : nc_product(right_mul(s, eta.inverse()))) out.push_back(right_mul(x, eta));
    return out;
}

}  // namespace

Q asymptotic_cumulant_wishart_mixed(const AsymptoticTable& phi, const PermTuple& s, const Word* w) {
    check_flavor(Flavor::Mixed, phi.flavor, "asymptotic_cumulant_wishart_mixed");
    if (K_mixed(s) != 1) throw std::invalid_argument("asymptotic_cumulant_wishart_mixed: not connected");
    Perm eta;
    Q acc = 0;
    for (auto& t : wishart_poset(s, eta)) {
        Q v = mixed_component_product(phi, t, w);
        if (v != 0) acc += v * moebius_tuple(s, t);
    }
    return acc;
}

Q asymptotic_moment_from_cumulants_wishart_mixed(const AsymptoticTable& kappa, const PermTuple& s, const Word* w) {
    check_flavor(Flavor::Mixed, kappa.flavor, "asymptotic_moment_from_cumulants_wishart_mixed");
    Perm eta;
    Q acc = 0;
    for (auto& t : wishart_poset(s, eta)) acc += mixed_component_product(kappa, t, w);
    return acc;
}

Q pure_from_mixed_cumulants(const AsymptoticTable& kappa_m, const PermTuple& s) {
    check_flavor(Flavor::Mixed, kappa_m.flavor, "pure_from_mixed_cumulants");
    int n = tuple_degree(s);
    Perm eta = pairing_or_throw(append(s, Perm(n)), "pure_from_mixed_cumulants");
    Q acc = 0;
    for (auto& x : enumerate_noncrossing(eta.inverse())) {
        Perm nu = x * eta;
        Q v = mixed_component_product(kappa_m, right_mul(s, nu.inverse()));
        if (v != 0) acc += v * moebius_nc(nu);
    }
    return acc;
}

Q mixed_from_pure_cumulants(const AsymptoticTable& kappa_p, const PermTuple& s) {
    check_flavor(Flavor::Pure, kappa_p.flavor, "mixed_from_pure_cumulants");
    int n = tuple_degree(s);
    Perm eta = pairing_or_throw(append(s, Perm(n)), "mixed_from_pure_cumulants");
    Q acc = 0;
    for (auto& x : enumerate_noncrossing(eta.inverse()))
        acc += pure_component_product(kappa_p, append(s, x * eta), nullptr);
    return acc;
}

std::vector<InvariantClass> first_order_classes(int n, int D, Flavor f) {
    std::vector<InvariantClass> out;
    for (auto& c : enumerate_classes(n, D, f, true)) {
        bool first = f == Flavor::Pure ? is_melonic(c.rep) : is_melonic(append(c.rep, Perm(n)));
        if (first) out.push_back(c);
    }
    return out;
}

// ------------------------------------------------------------ dominant set

namespace {

// eta in H_{tau,pi}: eta maps every block's blacks onto its whites and
// connects the restriction of tau on each block
bool in_H(const PermTuple& t, const Perm& eta, const BipartitePartition& pi) {
    int n = tuple_degree(t);
    const auto& lab = pi.as_set().labels();
    for (int b = 0; b < n; ++b)
        if (lab[b] != lab[n + eta(b)]) return false;
    for (auto& blk : bipartite_blocks(pi)) {
        auto sub = restrict_pure(append(t, eta), blk.blacks, blk.whites);
        if (K_pure(sub) != 1) return false;
    }
    return true;
}

}  // namespace

std::vector<DominantTerm> dominant_set(const PermTuple& s, bool assume_conjecture) {
    int n = tuple_degree(s);
    int D = int(s.size());
    if (K_pure(s) != 1) throw std::invalid_argument("dominant_set: not purely connected");
    std::vector<DominantTerm> out;
    if (assume_conjecture) {
        auto comp = compatibility(s);
        if (!comp.compatible) throw std::invalid_argument("dominant_set: conjectural branch needs a compatible invariant");
        std::set<std::pair<BipartitePartition, PermTuple>> seen;
        for (auto& eta : comp.minimizers)
            for (auto& x : nc_product(right_mul(s, eta.inverse()))) {
                PermTuple t = right_mul(x, eta);
                auto pi = components_pure(t);
                if (!in_H(t, eta, pi)) continue;
                if (seen.insert({pi, t}).second) out.push_back({pi, t});
            }
        return out;
    }
    auto etas = all_perms(n);
    int m0 = INT_MAX;
    for (auto& e : etas) m0 = std::min(m0, distance(s, e));
    require_budget(std::pow(double(etas.size()), D + 1) * n * D, "dominant_set");
    for_each_tuple(n, D, [&](const PermTuple& t) {
        int dst = distance(s, t);
        if (dst > m0) return;
        std::vector<Perm> cands;
        for (auto& e : etas)
            if (distance(t, e) == m0 - dst) cands.push_back(e);
        if (cands.empty()) return;
        for (auto& pi : coarsenings(components_pure(t))) {
            bool ok = false;
            for (auto& e : cands)
                if (in_H(t, e, pi)) {
                    ok = true;
                    break;
                }
            if (ok) out.push_back({pi, t});
        }
    });
    return out;
}

Q asymptotic_cumulant_general(const AsymptoticTable& phi, const PermTuple& s, bool assume_conjecture) {
    check_flavor(Flavor::Pure, phi.flavor, "asymptotic_cumulant_general");
    Q acc = 0;
    for (auto& term : dominant_set(s, assume_conjecture)) {
        Q v = 1;
        for (auto& b : bipartite_blocks(term.pi)) {
            v *= phi.at(table_key(restrict_pure(term.tau, b.blacks, b.whites), Flavor::Pure));
            if (v == 0) break;
        }
        if (v != 0) acc += v * moebius_tuple(s, term.tau);
    }
    return acc;
}

AsymptoticTable free_additive_convolution_melonic(const AsymptoticTable& a, const AsymptoticTable& b) {
    if (a.flavor != b.flavor) throw std::invalid_argument("free_additive_convolution_melonic: flavor mismatch");
    AsymptoticTable r = a;
    r.labelled = a.labelled || b.labelled;
    for (auto& [k, v] : b.values) r.values[k] += v;
    return r;
}

}  // namespace tf
