#pragma once

#include "tensorfree/algebra.hpp"
#include "tensorfree/invariants.hpp"
#include "tensorfree/perm.hpp"

#include <map>
#include <string>
#include <vector>

namespace tf {

// Complex Gaussian tensor with E[T T̄] = C N^{1-D} per index pair.
// E[Tr_s] = C^n sum_eta N^{n - d(s, eta)}
LaurentPoly gaussian_moment_exact(const PermTuple& s, const Q& C = 1);
// classical cumulant of the traces of the given purely connected components:
// the same sum restricted to Wick pairings connecting everything
LaurentPoly gaussian_cumulant_exact(const std::vector<PermTuple>& components, const Q& C = 1);

struct ScalingReport {
    InvariantClass invariant;
    int r = 0;
    Z phi = 0;  // number of minimizers
    std::vector<Perm> minimizers;
};
// r = n - min { d(s,eta) : K_p(s,eta) = 1 }
ScalingReport gaussian_scaling(const PermTuple& s);
// the same for (s, id), connectivity taken in the mixed sense
ScalingReport wishart_scaling(const PermTuple& s);

// sum_{tau in S_n} N^{#(gamma tau^-1) + #tau - n} t^{#tau}
LaurentPoly wishart_matrix_moment(int n, const Q& t);
// sum over non-crossing tau of t^{#tau}
Q wishart_matrix_moment_asymptotic(int n, const Q& t);

// Multivariate formal power series with rational coefficients.  Keys are
// exponent vectors, one entry per variable.
struct MultiSeries {
    int vars = 0;
    std::map<std::vector<int>, Q> terms;

    static MultiSeries constant(int vars, const Q& c);
    static MultiSeries variable(int vars, int i);
    Q coeff(const std::vector<int>& e) const;
    MultiSeries truncated(int order) const;  // drop total degree > order
    MultiSeries mul(const MultiSeries& o, int order) const;
    MultiSeries pow(int k, int order) const;
    MultiSeries operator+(const MultiSeries& o) const;
    MultiSeries operator-(const MultiSeries& o) const;
    MultiSeries scaled(const Q& c) const;
    // substitute z_i -> values[i] g; coefficients of g^0..g^order
    std::vector<Q> along(const std::vector<Q>& values, int order) const;
    std::string str(const std::vector<std::string>& names) const;
    friend bool operator==(const MultiSeries&, const MultiSeries&) = default;
};

struct Coupling {
    std::string name;   // usually the text form of a melonic class
    int n_tau = 1;      // number of black vertices of the interaction
    Q z = 1;            // numeric value, used by MultiSeries::along
};
// unique solution of G = 1 - sum_tau n_tau z_tau G^{n_tau}, one variable per
// coupling, truncated at total degree `order`
MultiSeries melonic_fixed_point(const std::vector<Coupling>& couplings, int order);
// first-order moments of a melonic class of size n rescale by G^n
MultiSeries rescaled_moment_factor(const MultiSeries& G, int n, int order);

enum class Subadditivity { Strict, Equal, Violation };
std::string subadditivity_name(Subadditivity v);
struct SubadditivityReport {
    int r_union = 0;
    int r_sum = 0;
    int gap = 0;  // r_sum - r_union
    Subadditivity verdict = Subadditivity::Equal;
};
SubadditivityReport subadditivity_probe(const std::vector<PermTuple>& components);

}  // namespace tf
