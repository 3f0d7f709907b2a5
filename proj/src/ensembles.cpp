#include "tensorfree/ensembles.hpp"

#include "tensorfree/budget.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <stdexcept>

namespace tf {

namespace {

constexpr int kMomentCap = 8;

enum class Connect { None, Pure, Mixed };

// histogram of d(s, eta) over all eta, optionally only connecting ones
std::vector<long> distance_histogram(const PermTuple& s, Connect mode) {
    int n = tuple_degree(s);
    if (n > kMomentCap) throw BudgetExceeded("Wick sum: n above cap");
    require_budget(factorial(n).get_d() * (s.size() + 1) * n, "Wick sum");
    auto etas = all_perms(n);
    int dmax = int(s.size()) * n + 1;
    unsigned T = thread_count();
    std::vector<std::vector<long>> part(T, std::vector<long>(dmax, 0));
    parallel_ranges(etas.size(), [&](size_t lo, size_t hi, unsigned w) {
        for (size_t i = lo; i < hi; ++i) {
            if (mode == Connect::Pure && K_pure(s, etas[i]) != 1) continue;
            if (mode == Connect::Mixed && K_mixed(s, etas[i]) != 1) continue;
            ++part[w][distance(s, etas[i])];
        }
    });
    for (unsigned w = 1; w < T; ++w)
        for (int d = 0; d < dmax; ++d) part[0][d] += part[w][d];
    return part[0];
}

LaurentPoly from_histogram(const std::vector<long>& h, int n, const Q& C) {
    LaurentPoly p;
    for (size_t d = 0; d < h.size(); ++d)
        if (h[d]) p.add_term(n - int(d), Q(h[d]));
    Q cn = 1;
    for (int i = 0; i < n; ++i) cn *= C;
    return p * cn;
}

ScalingReport scan_scaling(const PermTuple& s, Connect mode, Flavor f) {
    int n = tuple_degree(s);
    require_budget(factorial(n).get_d() * (s.size() + 1) * n, "scaling scan");
    ScalingReport r;
    r.invariant = canonicalize(s, f);
    int best = INT_MAX;
    for (auto& eta : all_perms(n)) {
        int d = distance(s, eta);
        if (d > best) continue;
        if (mode == Connect::Pure ? K_pure(s, eta) != 1 : K_mixed(s, eta) != 1) continue;
        if (d < best) {
            best = d;
            r.minimizers.clear();
        }
        r.minimizers.push_back(eta);
    }
    r.r = n - best;
    r.phi = Z(long(r.minimizers.size()));
    return r;
}

}  // namespace

LaurentPoly gaussian_moment_exact(const PermTuple& s, const Q& C) {
    return from_histogram(distance_histogram(s, Connect::None), tuple_degree(s), C);
}

LaurentPoly gaussian_cumulant_exact(const std::vector<PermTuple>& components, const Q& C) {
    if (components.empty()) throw std::invalid_argument("no components");
    PermTuple u = components[0];
    for (size_t i = 0; i < components.size(); ++i) {
        if (K_pure(components[i]) != 1) throw std::invalid_argument("component is not purely connected");
        if (i) u = disjoint_union(u, components[i]);
    }
    return from_histogram(distance_histogram(u, Connect::Pure), tuple_degree(u), C);
}

ScalingReport gaussian_scaling(const PermTuple& s) { return scan_scaling(s, Connect::Pure, Flavor::Pure); }

ScalingReport wishart_scaling(const PermTuple& s) {
    auto r = scan_scaling(append(s, Perm(tuple_degree(s))), Connect::Mixed, Flavor::Mixed);
    r.invariant = canonicalize(s, Flavor::Mixed);
    return r;
}

LaurentPoly wishart_matrix_moment(int n, const Q& t) {
    if (n < 1 || n > 9) throw std::invalid_argument("wishart_matrix_moment: n out of range");
    Perm g = Perm::cycle(n);
    std::vector<Q> tp(n + 1, 1);
    for (int k = 1; k <= n; ++k) tp[k] = tp[k - 1] * t;
    LaurentPoly p;
    for (auto& tau : all_perms(n)) {
        int k = tau.num_cycles();
        p.add_term((g * tau.inverse()).num_cycles() + k - n, tp[k]);
    }
    return p;
}

Q wishart_matrix_moment_asymptotic(int n, const Q& t) {
    Q acc = 0;
    for (auto& tau : enumerate_noncrossing(Perm::cycle(n))) {
        Q x = 1;
        for (int k = tau.num_cycles(); k > 0; --k) x *= t;
        acc += x;
    }
    return acc;
}

// ------------------------------------------------------------ formal series

MultiSeries MultiSeries::constant(int vars, const Q& c) {
    MultiSeries s;
    s.vars = vars;
    if (c != 0) s.terms[std::vector<int>(vars, 0)] = c;
    return s;
}

MultiSeries MultiSeries::variable(int vars, int i) {
    MultiSeries s;
    s.vars = vars;
    std::vector<int> e(vars, 0);
    e[i] = 1;
    s.terms[e] = 1;
    return s;
}

Q MultiSeries::coeff(const std::vector<int>& e) const {
    auto it = terms.find(e);
    return it == terms.end() ? Q(0) : it->second;
}

static int total_degree(const std::vector<int>& e) { return std::accumulate(e.begin(), e.end(), 0); }

MultiSeries MultiSeries::truncated(int order) const {
    MultiSeries r;
    r.vars = vars;
    for (auto& [e, c] : terms)
        if (total_degree(e) <= order) r.terms[e] = c;
    return r;
}

MultiSeries MultiSeries::mul(const MultiSeries& o, int order) const {
    MultiSeries r;
    r.vars = vars;
    for (auto& [e1, c1] : terms) {
        int d1 = total_degree(e1);
        for (auto& [e2, c2] : o.terms) {
            if (d1 + total_degree(e2) > order) continue;
            std::vector<int> e(vars);
            for (int i = 0; i < vars; ++i) e[i] = e1[i] + e2[i];
            Q& slot = r.terms[e];
            slot += c1 * c2;
            if (slot == 0) r.terms.erase(e);
        }
    }
    return r;
}

MultiSeries MultiSeries::pow(int k, int order) const {
    MultiSeries r = constant(vars, 1);
    for (int i = 0; i < k; ++i) r = r.mul(*this, order);
    return r;
}

MultiSeries MultiSeries::operator+(const MultiSeries& o) const {
    MultiSeries r = *this;
    r.vars = std::max(vars, o.vars);
    for (auto& [e, c] : o.terms) {
        Q& slot = r.terms[e];
        slot += c;
        if (slot == 0) r.terms.erase(e);
    }
    return r;
}

MultiSeries MultiSeries::operator-(const MultiSeries& o) const { return *this + o.scaled(-1); }

MultiSeries MultiSeries::scaled(const Q& c) const {
    MultiSeries r;
    r.vars = vars;
    if (c == 0) return r;
    for (auto& [e, v] : terms) r.terms[e] = v * c;
    return r;
}

std::vector<Q> MultiSeries::along(const std::vector<Q>& values, int order) const {
    std::vector<Q> out(order + 1, 0);
    for (auto& [e, c] : terms) {
        int d = total_degree(e);
        if (d > order) continue;
        Q x = c;
        for (int i = 0; i < vars; ++i)
            for (int k = 0; k < e[i]; ++k) x *= values.at(i);
        out[d] += x;
    }
    return out;
}

std::string MultiSeries::str(const std::vector<std::string>& names) const {
    if (terms.empty()) return "0";
    // by total degree, then lexicographically descending exponents
    std::vector<std::pair<std::vector<int>, Q>> v(terms.begin(), terms.end());
    std::stable_sort(v.begin(), v.end(), [](auto& a, auto& b) {
        int da = total_degree(a.first), db = total_degree(b.first);
        if (da != db) return da < db;
        return a.first > b.first;
    });
    std::string s;
    for (auto& [e, c] : v) {
        Q a = abs(c);
        bool neg = c < 0;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        std::string mono;
        for (int i = 0; i < vars; ++i) {
            if (!e[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += names.at(i);
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty())
            s += q_str(a);
        else if (a == 1)
            s += mono;
        else
            s += q_str(a) + "*" + mono;
    }
    return s;
}

MultiSeries melonic_fixed_point(const std::vector<Coupling>& couplings, int order) {
    int k = int(couplings.size());
    if (order < 0) throw std::invalid_argument("negative truncation order");
    MultiSeries one = MultiSeries::constant(k, 1);
    MultiSeries G = one;
    // each pass fixes one more total degree
    for (int it = 0; it <= order; ++it) {
        MultiSeries next = one;
        for (int i = 0; i < k; ++i) {
            auto term = MultiSeries::variable(k, i).mul(G.pow(couplings[i].n_tau, order), order);
            next = next - term.scaled(couplings[i].n_tau);
        }
        if (next == G) break;
        G = next;
    }
    return G;
}

MultiSeries rescaled_moment_factor(const MultiSeries& G, int n, int order) { return G.pow(n, order); }

// ------------------------------------------------------------ subadditivity

std::string subadditivity_name(Subadditivity v) {
    switch (v) {
        case Subadditivity::Strict: return "strict";
        case Subadditivity::Equal: return "equal";
        default: return "violation";
    }
}

SubadditivityReport subadditivity_probe(const std::vector<PermTuple>& components) {
    if (components.empty()) throw std::invalid_argument("no components");
    SubadditivityReport r;
    PermTuple u = components[0];
    for (size_t i = 0; i < components.size(); ++i) {
        if (K_pure(components[i]) != 1) throw std::invalid_argument("component is not purely connected");
        r.r_sum += gaussian_scaling(components[i]).r;
        if (i) u = disjoint_union(u, components[i]);
    }
    r.r_union = gaussian_scaling(u).r;
    r.gap = r.r_sum - r.r_union;
    r.verdict = r.gap > 0 ? Subadditivity::Strict : r.gap == 0 ? Subadditivity::Equal : Subadditivity::Violation;
    return r;
}

}  // namespace tf
