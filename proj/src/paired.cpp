#include "tensorfree/paired.hpp"

#include "tensorfree/budget.hpp"
#include "tensorfree/ensembles.hpp"
#include "tensorfree/melonic.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace tf {

namespace {

struct DSU {
    std::vector<int> p;
    explicit DSU(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

Perm canonical_pairing_for(const PermTuple& s, Flavor f) {
    int n = tuple_degree(s);
    auto eta = f == Flavor::Pure ? canonical_pairing(s) : canonical_pairing(append(s, Perm(n)));
    if (!eta) throw std::invalid_argument("invariant is not first order");
    return *eta;
}

std::string graph_str(const PairedGraph& g) {
    std::string s = "q=" + std::to_string(g.q()) + " labels=";
    for (int e = 0; e < g.q(); ++e) s += (e ? "," : "") + std::to_string(g.edges[e].label());
    for (int c = 0; c < g.D; ++c) s += " " + g.cycles[c].str();
    return s;
}

Q lookup(const PermTuple& s, const Word& w, Flavor f, const AsymptoticTable& phi) {
    return phi.at(phi.labelled ? table_key(s, w, f) : table_key(s, f));
}

}  // namespace

// ------------------------------------------------------------ paired tensors

int PairedTensor::D() const { return identity ? int(id_shape.size()) : int(closed.size()); }

std::vector<int> PairedTensor::shape() const {
    if (identity) return id_shape;
    std::vector<int> k;
    for (auto& v : sources) k.push_back(int(v.size()));
    return k;
}

int PairedTensor::inputs() const {
    auto k = shape();
    return std::accumulate(k.begin(), k.end(), 0);
}

int PairedTensor::label() const {
    if (identity) return -1;
    for (int x : word)
        if (x != word[0]) return -2;
    return word.empty() ? -2 : word[0];
}

bool is_first_order(const PermTuple& s, Flavor f) {
    int n = tuple_degree(s);
    if (f == Flavor::Pure) {
        // thick edges are the canonical pairs
        if (K_pure(s) != 1 || !is_melonic(s)) return false;
        return canonical_pairing(s)->is_identity();
    }
    return K_mixed(s) == 1 && is_melonic(append(s, Perm(n)));
}

namespace {

// normalized tuple and word (pure: pairing moved to the identity) plus the
// alternating cycles of every color
struct Prepared {
    PermTuple s;
    Word w;
    std::vector<std::vector<std::vector<int>>> cycles;  // [c][cycle][vertex]
    Perm relabel;                                       // original source -> prepared source
};

Prepared prepare(const PermTuple& s, Flavor f, const Word& w) {
    int n = tuple_degree(s);
    bool ok = f == Flavor::Pure ? K_pure(s) == 1 : K_mixed(s) == 1;
    if (!ok) throw std::invalid_argument("split_first_order: invariant is not connected");
    Perm eta = canonical_pairing_for(s, f);
    Prepared p;
    if (int(w.size()) != (f == Flavor::Pure ? 2 * n : n)) throw std::invalid_argument("split_first_order: word length");
    if (f == Flavor::Pure) {
        p.s = right_mul(s, eta.inverse());
        p.w = w;
        for (int b = 0; b < n; ++b) p.w[eta(b)] = w[b];
        p.relabel = eta;
        for (auto& sc : p.s) p.cycles.push_back(sc.cycles());
    } else {
        p.s = s;
        p.w = w;
        p.relabel = Perm(n);
        for (auto& sc : s) p.cycles.push_back((eta.inverse() * sc).cycles());
    }
    return p;
}

}  // namespace

PairedTensor split_first_order(const PermTuple& s, Flavor f, const Word& w, const std::vector<std::vector<int>>& E) {
    auto p = prepare(s, f, w);
    int D = int(s.size());
    if (!E.empty() && int(E.size()) != D) throw std::invalid_argument("split_first_order: one source list per color");
    PairedTensor h;
    h.flavor = f;
    h.closed = p.s;
    h.word = p.w;
    h.sources.assign(D, {});
    for (int c = 0; c < D; ++c) {
        std::set<int> chosen;
        if (!E.empty())
            for (int v : E[c]) chosen.insert(p.relabel(v));
        size_t used = 0;
        for (auto& cyc : p.cycles[c]) {
            if (E.empty()) {
                h.sources[c].push_back(cyc[0]);
                continue;
            }
            int hit = -1, count = 0;
            for (int v : cyc)
                if (chosen.count(v)) hit = v, ++count;
            if (count != 1) throw std::invalid_argument("split_first_order: need one edge per alternating cycle");
            h.sources[c].push_back(hit);
            ++used;
        }
        if (!E.empty() && used != chosen.size()) throw std::invalid_argument("split_first_order: malformed edge set");
    }
    return h;
}

std::vector<PairedTensor> all_strict_splits(const PermTuple& s, Flavor f, int label) {
    int n = tuple_degree(s);
    Word w(f == Flavor::Pure ? 2 * n : n, label);
    auto p = prepare(s, f, w);
    std::vector<std::vector<int>> flat;  // one entry per (color, cycle)
    std::vector<int> color;
    for (int c = 0; c < int(s.size()); ++c)
        for (auto& cyc : p.cycles[c]) {
            flat.push_back(cyc);
            color.push_back(c);
        }
    std::vector<PairedTensor> out;
    std::vector<size_t> idx(flat.size(), 0);
    while (true) {
        PairedTensor h;
        h.flavor = f;
        h.closed = p.s;
        h.word = p.w;
        h.sources.assign(s.size(), {});
        for (size_t i = 0; i < flat.size(); ++i) h.sources[color[i]].push_back(flat[i][idx[i]]);
        out.push_back(std::move(h));
        size_t i = 0;
        while (i < flat.size() && ++idx[i] == flat[i].size()) idx[i++] = 0;
        if (i == flat.size()) break;
    }
    return out;
}

PairedTensor identity_paired(Flavor f, const std::vector<int>& shape) {
    PairedTensor h;
    h.flavor = f;
    h.identity = true;
    h.id_shape = shape;
    if (std::accumulate(shape.begin(), shape.end(), 0) < 1) throw std::invalid_argument("identity needs an input");
    return h;
}

// ------------------------------------------------------------ graphs

int PairedGraph::slots(int c) const {
    int k = 0;
    for (auto& e : edges) k += e.shape()[c];
    return k;
}

std::pair<int, int> PairedGraph::owner(int c, int slot) const {
    for (int e = 0; e < q(); ++e) {
        int k = edges[e].shape()[c];
        if (slot < k) return {e, slot};
        slot -= k;
    }
    throw std::out_of_range("slot out of range");
}

int PairedGraph::slot_of(int c, int edge, int shade) const {
    int k = 0;
    for (int e = 0; e < edge; ++e) k += edges[e].shape()[c];
    return k + shade;
}

PairedGraph closure(const PairedTensor& h) {
    PairedGraph g;
    g.flavor = h.flavor;
    g.D = h.D();
    g.edges = {h};
    for (int k : h.shape()) g.cycles.push_back(Perm(k));
    return g;
}

namespace {

// slot owners for every color, computed once
std::vector<std::vector<int>> owners(const PairedGraph& g) {
    std::vector<std::vector<int>> o(g.D);
    for (int e = 0; e < g.q(); ++e) {
        auto k = g.edges[e].shape();
        for (int c = 0; c < g.D; ++c) o[c].insert(o[c].end(), k[c], e);
    }
    return o;
}

std::vector<int> component_labels(const PairedGraph& g) {
    DSU d(g.q());
    auto o = owners(g);
    for (int c = 0; c < g.D; ++c)
        for (int i = 0; i < g.cycles[c].n(); ++i) d.unite(o[c][i], o[c][g.cycles[c](i)]);
    std::vector<int> lab(g.q(), -1);
    int next = 0;
    std::vector<int> root_lab(g.q(), -1);
    for (int e = 0; e < g.q(); ++e) {
        int r = d.find(e);
        if (root_lab[r] < 0) root_lab[r] = next++;
        lab[e] = root_lab[r];
    }
    return lab;
}

// subgraph on the thick edges `keep` (in order); cycles must not leave it
PairedGraph subgraph(const PairedGraph& g, const std::vector<int>& keep) {
    PairedGraph h;
    h.flavor = g.flavor;
    h.D = g.D;
    for (int e : keep) h.edges.push_back(g.edges[e]);
    for (int c = 0; c < g.D; ++c) {
        std::vector<int> newidx(g.cycles[c].n(), -1);
        int k = 0;
        for (int e : keep) {
            int base = g.slot_of(c, e, 0);
            for (int r = 0; r < g.edges[e].shape()[c]; ++r) newidx[base + r] = k++;
        }
        std::vector<int> img(k);
        for (int i = 0; i < g.cycles[c].n(); ++i)
            if (newidx[i] >= 0) {
                int j = newidx[g.cycles[c](i)];
                if (j < 0) throw std::logic_error("subgraph: cycle leaves the kept edges");
                img[newidx[i]] = j;
            }
        h.cycles.push_back(Perm(img));
    }
    return h;
}

}  // namespace

bool is_connected(const PairedGraph& g) {
    auto lab = component_labels(g);
    return std::all_of(lab.begin(), lab.end(), [](int x) { return x == 0; });
}

std::vector<PairedGraph> components(const PairedGraph& g, std::vector<int>* labels) {
    auto lab = component_labels(g);
    if (labels) *labels = lab;
    int k = lab.empty() ? 0 : *std::max_element(lab.begin(), lab.end()) + 1;
    std::vector<std::vector<int>> keep(k);
    for (int e = 0; e < g.q(); ++e) keep[lab[e]].push_back(e);
    std::vector<PairedGraph> out;
    for (auto& kp : keep) out.push_back(subgraph(g, kp));
    return out;
}

PairedGraph remove_thick_edges(const PairedGraph& g, const std::vector<int>& I) {
    std::vector<bool> gone(g.q(), false);
    for (int e : I) gone.at(e) = true;
    auto o = owners(g);
    PairedGraph h;
    h.flavor = g.flavor;
    h.D = g.D;
    for (int e = 0; e < g.q(); ++e)
        if (!gone[e]) h.edges.push_back(g.edges[e]);
    for (int c = 0; c < g.D; ++c) {
        int m = g.cycles[c].n();
        std::vector<int> succ = g.cycles[c].images(), pred(m);
        for (int i = 0; i < m; ++i) pred[succ[i]] = i;
        for (int i = 0; i < m; ++i) {
            if (!gone[o[c][i]]) continue;
            int p = pred[i], t = succ[i];
            if (p != i) {
                succ[p] = t;
                pred[t] = p;
            }
        }
        std::vector<int> newidx(m, -1);
        int k = 0;
        for (int i = 0; i < m; ++i)
            if (!gone[o[c][i]]) newidx[i] = k++;
        std::vector<int> img(k);
        for (int i = 0; i < m; ++i)
            if (newidx[i] >= 0) img[newidx[i]] = newidx[succ[i]];
        h.cycles.push_back(Perm(img));
    }
    return h;
}

namespace {

// a generated paired tensor of the given shape; any one will do, since
// melonicity does not depend on the internals of the thick edges
const PairedTensor* stand_in(Flavor f, const std::vector<int>& shape) {
    static std::mutex mu;
    static std::map<std::pair<Flavor, std::vector<int>>, std::optional<PairedTensor>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(f, shape);
    auto it = cache.find(key);
    if (it == cache.end()) {
        int D = int(shape.size());
        int inputs = std::accumulate(shape.begin(), shape.end(), 0);
        std::optional<PairedTensor> found;
        for (int n = 1; !found && n * (D - 1) + 1 <= inputs; ++n)
            for (auto& c : first_order_classes(n, D, f)) {
                for (auto& h : all_strict_splits(c.rep, f, 0))
                    if (h.shape() == shape) {
                        found = h;
                        break;
                    }
                if (found) break;
            }
        it = cache.emplace(key, std::move(found)).first;
    }
    return it->second ? &*it->second : nullptr;
}

}  // namespace

bool is_melonic(const PairedGraph& g) {
    if (g.q() == 0 || !is_connected(g)) return false;
    PairedGraph r = g;
    for (auto& e : r.edges)
        if (e.identity) {
            auto* h = stand_in(g.flavor, e.id_shape);
            if (!h) throw std::invalid_argument("identity shape is not generated by any first-order invariant");
            e = *h;
        }
    auto u = ungroup(r);
    if (!is_first_order(u.s, g.flavor)) return false;
    if (g.flavor == Flavor::Pure) return true;
    // the thick edges must carry the canonical pairs
    std::vector<int> img;
    for (size_t e = 0; e < r.edges.size(); ++e) {
        int n = r.edges[e].n();
        Perm eta = canonical_pairing_for(r.edges[e].closed, Flavor::Mixed);
        for (int v = 0; v < n; ++v) img.push_back(u.offset[e] + eta(v));
    }
    return canonical_pairing_for(u.s, Flavor::Mixed) == Perm(img);
}

Ungrouped ungroup(const PairedGraph& g) {
    Ungrouped u;
    int n = 0;
    for (auto& e : g.edges) {
        if (e.identity) throw std::invalid_argument("ungroup: contract identity thick edges first");
        u.offset.push_back(n);
        n += e.n();
    }
    Word blacks, whites;
    for (int c = 0; c < g.D; ++c) {
        std::vector<int> img(n);
        for (int e = 0; e < g.q(); ++e)
            for (int v = 0; v < g.edges[e].n(); ++v) img[u.offset[e] + v] = u.offset[e] + g.edges[e].closed[c](v);
        // split edges re-joined along the cycles of g
        int m = g.cycles[c].n();
        std::vector<int> src(m), tgt(m);
        for (int i = 0; i < m; ++i) {
            auto [e, r] = g.owner(c, i);
            int v = g.edges[e].sources[c][r];
            src[i] = u.offset[e] + v;
            tgt[i] = u.offset[e] + g.edges[e].closed[c](v);
        }
        for (int i = 0; i < m; ++i) img[src[i]] = tgt[g.cycles[c](i)];
        u.s.push_back(Perm(img));
    }
    for (auto& e : g.edges) {
        int k = e.n();
        if (g.flavor == Flavor::Pure) {
            blacks.insert(blacks.end(), e.word.begin(), e.word.begin() + k);
            whites.insert(whites.end(), e.word.begin() + k, e.word.end());
        } else {
            blacks.insert(blacks.end(), e.word.begin(), e.word.end());
        }
    }
    u.w = blacks;
    u.w.insert(u.w.end(), whites.begin(), whites.end());
    return u;
}

Grouping group(const PairedGraph& g, const std::vector<std::pair<int, int>>& E) {
    if (!is_melonic(g)) throw std::invalid_argument("group: graph is not melonic");
    for (auto& e : g.edges)
        if (e.identity) throw std::invalid_argument("group: identity thick edges are not supported");
    int D = g.D;
    std::vector<std::vector<bool>> cut(D);
    for (int c = 0; c < D; ++c) cut[c].assign(g.cycles[c].n(), false);
    for (auto [c, i] : E) cut.at(c).at(i) = true;

    Grouping out;
    out.h.flavor = g.flavor;
    out.h.D = D;
    out.h.edges = g.edges;
    // start of the path through each slot, and the path end
    std::vector<std::vector<int>> start(D), end(D);
    for (int c = 0; c < D; ++c) {
        int m = g.cycles[c].n();
        Perm inv = g.cycles[c].inverse();
        start[c].assign(m, -1);
        end[c].assign(m, -1);
        std::vector<int> tau = g.cycles[c].images();
        for (int i = 0; i < m; ++i) {
            if (!cut[c][i]) continue;
            int j = i;
            while (!cut[c][inv(j)]) j = inv(j);
            tau[i] = j;
            for (int x = j;; x = g.cycles[c](x)) {
                start[c][x] = j;
                end[c][x] = i;
                if (x == i) break;
            }
        }
        out.h.cycles.push_back(Perm(tau));
    }

    std::vector<int> lab;
    auto hs = components(out.h, &lab);
    out.part_of = lab;
    int P = int(hs.size());
    std::vector<std::vector<int>> members(P);
    for (int e = 0; e < g.q(); ++e) members[lab[e]].push_back(e);

    // k slot of each path, indexed by its end slot in g
    std::vector<std::vector<int>> kslot(D);
    for (int c = 0; c < D; ++c) kslot[c].assign(g.cycles[c].n(), -1);
    for (int j = 0; j < P; ++j) {
        auto u = ungroup(hs[j]);
        PairedTensor p;
        p.flavor = g.flavor;
        p.closed = u.s;
        p.word = u.w;
        p.sources.assign(D, {});
        for (int c = 0; c < D; ++c)
            for (int local = 0; local < int(members[j].size()); ++local) {
                int e = members[j][local];
                for (int r = 0; r < g.edges[e].shape()[c]; ++r) {
                    int i = g.slot_of(c, e, r);
                    if (!cut[c][i]) continue;
                    p.sources[c].push_back(u.offset[local] + g.edges[e].sources[c][r]);
                }
            }
        out.parts.push_back(std::move(p));
    }
    out.k.flavor = g.flavor;
    out.k.D = D;
    out.k.edges = out.parts;
    for (int c = 0; c < D; ++c) {
        int next = 0;
        for (int j = 0; j < P; ++j)
            for (int e : members[j])
                for (int r = 0; r < g.edges[e].shape()[c]; ++r) {
                    int i = g.slot_of(c, e, r);
                    if (cut[c][i]) kslot[c][i] = next++;
                }
        std::vector<int> img(next);
        for (int i = 0; i < g.cycles[c].n(); ++i)
            if (cut[c][i]) img[kslot[c][i]] = kslot[c][end[c][g.cycles[c](i)]];
        out.k.cycles.push_back(Perm(img));
    }
    return out;
}

// ------------------------------------------------------------ json

std::string paired_graph_json(const PairedGraph& g) {
    using nlohmann::json;
    json j;
    j["flavor"] = flavor_name(g.flavor);
    j["D"] = g.D;
    j["thick_edges"] = json::array();
    for (auto& e : g.edges) {
        json t;
        t["shape"] = e.shape();
        if (e.identity) {
            t["label"] = "1";
        } else {
            t["label"] = e.label();
            std::vector<std::string> cl;
            for (auto& p : e.closed) cl.push_back(p.str());
            t["closed"] = cl;
            t["word"] = e.word;
            std::vector<std::vector<int>> src = e.sources;
            for (auto& v : src)
                for (int& x : v) ++x;
            t["sources"] = src;
        }
        j["thick_edges"].push_back(t);
    }
    json cyc = json::object();
    for (int c = 0; c < g.D; ++c) {
        json list = json::array();
        for (auto& cy : g.cycles[c].cycles()) {
            json one = json::array();
            for (int i : cy) {
                auto [e, r] = g.owner(c, i);
                one.push_back({e + 1, r + 1});
            }
            list.push_back(one);
        }
        cyc[std::to_string(c + 1)] = list;
    }
    j["cycles"] = cyc;
    return j.dump(2);
}

PairedGraph paired_graph_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    PairedGraph g;
    g.flavor = parse_flavor(j.at("flavor").get<std::string>());
    g.D = j.at("D").get<int>();
    for (auto& t : j.at("thick_edges")) {
        auto shape = t.at("shape").get<std::vector<int>>();
        if (t.at("label").is_string()) {
            g.edges.push_back(identity_paired(g.flavor, shape));
            continue;
        }
        PairedTensor h;
        h.flavor = g.flavor;
        auto cl = t.at("closed").get<std::vector<std::string>>();
        h.word = t.at("word").get<Word>();
        int n = g.flavor == Flavor::Pure ? int(h.word.size()) / 2 : int(h.word.size());
        for (auto& p : cl) h.closed.push_back(Perm::parse(p, n));
        h.sources = t.at("sources").get<std::vector<std::vector<int>>>();
        for (auto& v : h.sources)
            for (int& x : v) --x;
        if (h.shape() != shape) throw std::invalid_argument("paired graph json: shape mismatch");
        g.edges.push_back(std::move(h));
    }
    for (int c = 0; c < g.D; ++c) {
        std::vector<int> img(g.slots(c), -1);
        for (auto& cy : j.at("cycles").at(std::to_string(c + 1))) {
            std::vector<int> idx;
            for (auto& er : cy) idx.push_back(g.slot_of(c, er[0].get<int>() - 1, er[1].get<int>() - 1));
            for (size_t a = 0; a < idx.size(); ++a) img[idx[a]] = idx[(a + 1) % idx.size()];
        }
        for (int x : img)
            if (x < 0) throw std::invalid_argument("paired graph json: slot missing from the cycles");
        g.cycles.push_back(Perm(img));
    }
    return g;
}

// ------------------------------------------------------------ moments and cumulants

Q phi_generator(const PairedTensor& h, const AsymptoticTable& phi) {
    if (h.identity) return 1;
    return lookup(h.closed, h.word, h.flavor, phi);
}

Q phi_paired(const PairedGraph& g, const AsymptoticTable& phi) {
    std::vector<int> I;
    for (int e = 0; e < g.q(); ++e)
        if (g.edges[e].identity) I.push_back(e);
    PairedGraph r = I.empty() ? g : remove_thick_edges(g, I);
    Q acc = 1;
    for (auto& comp : components(r)) {
        auto u = ungroup(comp);
        acc *= lookup(u.s, u.w, g.flavor, phi);
        if (acc == 0) break;
    }
    return acc;
}

std::vector<PairedGraph> paired_poset(const PairedGraph& g) {
    std::vector<std::vector<Perm>> opts;
    double total = 1;
    for (auto& c : g.cycles) {
        opts.push_back(enumerate_noncrossing(c));
        total *= double(opts.back().size());
    }
    require_budget(total * g.q(), "paired poset");
    std::vector<PairedGraph> out;
    std::vector<size_t> idx(g.D, 0);
    while (true) {
        PairedGraph h = g;
        for (int c = 0; c < g.D; ++c) h.cycles[c] = opts[c][idx[c]];
        out.push_back(std::move(h));
        int c = 0;
        while (c < g.D && ++idx[c] == opts[c].size()) idx[c++] = 0;
        if (c == g.D) break;
    }
    return out;
}

Q varkappa_paired(const PairedGraph& g, const AsymptoticTable& phi) {
    if (!is_connected(g)) throw std::invalid_argument("varkappa_paired: graph is not connected");
    if (!is_melonic(g)) throw std::invalid_argument("varkappa_paired: graph is not melonic");
    Q acc = 0;
    for (auto& h : paired_poset(g)) {
        Q m = 1;
        for (int c = 0; c < g.D; ++c) m *= moebius_nc(g.cycles[c] * h.cycles[c].inverse());
        if (m == 0) continue;
        Q v = phi_paired(h, phi);
        if (v != 0) acc += v * m;
    }
    return acc;
}

Q phi_from_paired_cumulants(const PairedGraph& g, const std::function<Q(const PairedGraph&)>& kappa) {
    Q acc = 0;
    for (auto& h : paired_poset(g)) {
        Q v = 1;
        for (auto& comp : components(h)) {
            v *= kappa(comp);
            if (v == 0) break;
        }
        acc += v;
    }
    return acc;
}

PairedCombination center(const PairedTensor& h, const AsymptoticTable& phi) {
    PairedCombination r;
    if (h.identity) return r;
    r.terms.push_back({Q(1), h});
    r.terms.push_back({-phi_generator(h, phi), identity_paired(h.flavor, h.shape())});
    return r;
}

Q phi_paired_multilinear(const PairedGraph& g, const std::vector<PairedCombination>& args,
                         const AsymptoticTable& phi, long* terms) {
    if (int(args.size()) != g.q()) throw std::invalid_argument("phi_paired_multilinear: one argument per thick edge");
    std::vector<size_t> idx(args.size(), 0);
    for (auto& a : args)
        if (a.terms.empty()) {
            if (terms) *terms = 0;
            return 0;
        }
    Q acc = 0;
    long count = 0;
    PairedGraph h = g;
    while (true) {
        Q coef = 1;
        for (size_t e = 0; e < args.size(); ++e) {
            auto& [c, t] = args[e].terms[idx[e]];
            if (t.shape() != g.edges[e].shape()) throw std::invalid_argument("multilinear: shape mismatch");
            coef *= c;
            h.edges[e] = t;
        }
        ++count;
        if (coef != 0) acc += coef * phi_paired(h, phi);
        size_t e = 0;
        while (e < args.size() && ++idx[e] == args[e].terms.size()) idx[e++] = 0;
        if (e == args.size()) break;
    }
    if (terms) *terms = count;
    return acc;
}

// ------------------------------------------------------------ freeness

std::string alternation_name(Alternation a) {
    switch (a) {
        case Alternation::Strict: return "strict";
        case Alternation::Almost: return "almost";
        default: return "neither";
    }
}

Alternation classify_alternating(const PairedGraph& g) {
    if (g.q() < 2) return Alternation::Neither;
    auto o = owners(g);
    int diff = 0, same = 0;
    for (int c = 0; c < g.D; ++c)
        for (int i = 0; i < g.cycles[c].n(); ++i) {
            int a = o[c][i], b = o[c][g.cycles[c](i)];
            if (a == b) continue;
            (g.edges[a].label() == g.edges[b].label() ? same : diff)++;
        }
    if (diff == 0 || same > 1) return Alternation::Neither;
    return same == 0 ? Alternation::Strict : Alternation::Almost;
}

namespace {

void for_each_word(int len, int labels, const std::function<void(const Word&)>& fn) {
    Word w(len, 0);
    while (true) {
        fn(w);
        int i = 0;
        while (i < len && ++w[i] == labels) w[i++] = 0;
        if (i == len) break;
    }
}

// a canonical pair joins black b with white eta(b) (pure), vertex i with
// eta(i) (mixed)
bool mismatched(const Word& w, const Perm& eta, Flavor f) {
    int n = eta.n();
    for (int b = 0; b < n; ++b)
        if (w[b] != w[f == Flavor::Pure ? n + eta(b) : eta(b)]) return true;
    return false;
}

std::string word_text(const Word& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    return s;
}

struct Generator {
    PairedTensor h;
    int n;
};

}  // namespace

FreenessReport freeness_check(const AsymptoticTable& phi, Flavor f, int D, int n_max, int labels) {
    FreenessReport r;
    bool ok[3] = {true, true, true};
    auto fail = [&](int k, const std::string& why) {
        if (ok[k]) r.counterexample[k] = why;
        ok[k] = false;
    };
    auto cumulant = [&](const PermTuple& s, const Word& w) {
        return f == Flavor::Pure ? asymptotic_cumulant_melonic(phi, s, &w) : asymptotic_cumulant_wishart_mixed(phi, s, &w);
    };

    std::vector<std::vector<InvariantClass>> fo(n_max + 1);
    for (int n = 1; n <= n_max; ++n) fo[n] = first_order_classes(n, D, f);

    // conditions on single invariants
    for (int n = 1; n <= n_max; ++n)
        for (auto& c : fo[n]) {
            Perm eta = canonical_pairing_for(c.rep, f);
            std::set<std::string> seen;
            for_each_word(f == Flavor::Pure ? 2 * n : n, labels, [&](const Word& w) {
                if (std::all_of(w.begin(), w.end(), [&](int x) { return x == w[0]; })) return;
                auto key = table_key(c.rep, w, f);
                if (!seen.insert(key).second) return;
                std::string where = c.str() + " w=" + word_text(w);
                Q k = cumulant(c.rep, w);
                ++r.checked[0];
                if (k != 0) fail(0, "kappa " + where + " = " + q_str(k));
                if (!mismatched(w, eta, f)) return;
                ++r.checked[1];
                ++r.checked[2];
                if (k != 0) fail(1, "kappa " + where + " = " + q_str(k));
                Q m = phi.at(key);
                if (m != 0) fail(2, "phi " + where + " = " + q_str(m));
            });
        }

    // conditions on melonic graphs of generators
    std::vector<Generator> gens;
    for (int m = 1; m < n_max; ++m)
        for (auto& c : fo[m])
            for (int l = 0; l < labels; ++l)
                for (auto& h : all_strict_splits(c.rep, f, l)) gens.push_back({h, m});

    std::vector<size_t> pick;
    std::function<void(size_t, int)> rec = [&](size_t from, int used) {
        if (pick.size() >= 2) {
            std::set<int> ls;
            for (size_t i : pick) ls.insert(gens[i].h.label());
            if (ls.size() >= 2) {
                PairedGraph g;
                g.flavor = f;
                g.D = D;
                for (size_t i : pick) g.edges.push_back(gens[i].h);
                std::vector<std::vector<Perm>> opts;
                double total = 1;
                for (int c = 0; c < D; ++c) {
                    opts.push_back(all_perms(g.slots(c)));
                    total *= double(opts.back().size());
                }
                require_budget(total, "freeness graph scan");
                std::vector<size_t> idx(D, 0);
                g.cycles.assign(D, Perm());
                while (true) {
                    for (int c = 0; c < D; ++c) g.cycles[c] = opts[c][idx[c]];
                    if (is_melonic(g)) {
                        ++r.checked[1];
                        Q k = varkappa_paired(g, phi);
                        if (k != 0) fail(1, "varkappa " + graph_str(g) + " = " + q_str(k));
                        if (classify_alternating(g) != Alternation::Neither) {
                            std::vector<PairedCombination> args;
                            for (auto& e : g.edges) args.push_back(center(e, phi));
                            Q m = phi_paired_multilinear(g, args, phi);
                            ++r.checked[2];
                            if (m != 0) fail(2, "centered phi " + graph_str(g) + " = " + q_str(m));
                        }
                    }
                    int c = 0;
                    while (c < D && ++idx[c] == opts[c].size()) idx[c++] = 0;
                    if (c == D) break;
                }
            }
        }
        for (size_t i = from; i < gens.size(); ++i) {
            if (used + gens[i].n > n_max) continue;
            pick.push_back(i);
            rec(i, used + gens[i].n);
            pick.pop_back();
        }
    };
    rec(0, 0);

    r.cumulants = ok[0];
    r.paired_cumulants = ok[1];
    r.centered_moments = ok[2];
    return r;
}

namespace {

AsymptoticTable multilabel_table(int D, int n_max, const std::vector<Q>& C, Flavor f) {
    AsymptoticTable t;
    t.flavor = f;
    t.labelled = true;
    int L = int(C.size());
    for (int n = 1; n <= n_max; ++n)
        for (auto& c : first_order_classes(n, D, f)) {
            auto sc = f == Flavor::Pure ? gaussian_scaling(c.rep) : wishart_scaling(c.rep);
            for_each_word(f == Flavor::Pure ? 2 * n : n, L, [&](const Word& w) {
                Q v = 0;
                for (auto& eta : sc.minimizers)
                    if (!mismatched(w, eta, f)) v += 1;
                for (int b = 0; b < n; ++b) v *= C[w[b]];
                t.values[table_key(c.rep, w, f)] = v;
            });
        }
    return t;
}

}  // namespace

AsymptoticTable gaussian_multilabel_table(int D, int n_max, const std::vector<Q>& C) {
    return multilabel_table(D, n_max, C, Flavor::Pure);
}

AsymptoticTable wishart_multilabel_table(int D, int n_max, const std::vector<Q>& C) {
    return multilabel_table(D, n_max, C, Flavor::Mixed);
}

}  // namespace tf
