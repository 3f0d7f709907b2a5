#pragma once

#include "tensorfree/algebra.hpp"
#include "tensorfree/invariants.hpp"
#include "tensorfree/partitions.hpp"
#include "tensorfree/perm.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tf {

// Table keys are the text form of the canonical class.  Labelled entries
// append ";w=" and the canonical word, e.g. "...;c3=(1)(2);w=0,1,1,0".
std::string table_key(const PermTuple& s, Flavor f);
std::string table_key(const PermTuple& s, const Word& w, Flavor f);

// finite N values (moments or cumulants) as rational functions of N
struct FiniteTable {
    Flavor flavor = Flavor::Pure;
    std::map<std::string, RatFunc> values;
    const RatFunc& at(const std::string& key) const;  // throws on a missing entry
};

// first-order values (asymptotic moments or free cumulants)
struct AsymptoticTable {
    Flavor flavor = Flavor::Pure;
    std::map<std::string, Q> values;
    bool labelled = false;
    Q at(const std::string& key) const;  // throws on a missing entry
    Q get(const std::string& key, const Q& fallback) const;
};

std::string table_json(const FiniteTable& t);
std::string table_json(const AsymptoticTable& t);
FiniteTable finite_table_from_json(const std::string& text);
AsymptoticTable asymptotic_table_from_json(const std::string& text);

// Linear combination of products of table entries: each key is the sorted
// list of table keys in a product, the value its coefficient.
struct TableExpansion {
    std::map<std::vector<std::string>, RatFunc> terms;
    void add(std::vector<std::string> keys, const RatFunc& c);
    RatFunc evaluate(const FiniteTable& t) const;
    std::string str() const;
};

// ------------------------------------------------------------ finite N

// sum over tau and over (bipartite) partitions above the join of the
// component partitions of sigma and tau, of lambda times block moments times
// block Weingarten products
TableExpansion finite_cumulant_expansion(const PermTuple& s, Flavor f);
RatFunc finite_cumulant_pure(const FiniteTable& moments, const PermTuple& s);
RatFunc finite_cumulant_mixed(const FiniteTable& moments, const PermTuple& s);

// For the rank-one A = T (x) T̄ of a pure tensor T, the mixed trace of A on
// a tuple is the pure trace of T on it; rewrites mixed keys as pure keys.
TableExpansion mixed_as_pure(const TableExpansion& e);

// E[Tr_s] = sum_tau sum_{Pi >= Pi(tau)} K_{Pi,tau} N^{nD - d(s,tau)}
TableExpansion finite_moment_expansion(const PermTuple& s, Flavor f);
RatFunc finite_moment_from_cumulants(const FiniteTable& cumulants, const PermTuple& s);

// Classical cumulant of tensor entries with distinct indices i_c(s) = s.
struct EntryFactor {
    bool conjugate = false;      // pure: T̄ factor
    std::vector<int> out, in;    // mixed uses both, pure uses `out` only
};
struct MicroscopicPattern {
    Flavor flavor = Flavor::Pure;
    int n = 0, D = 0;
    std::vector<EntryFactor> factors;  // pure: T then T̄ per s; mixed: one A per s
    std::string str() const;
};
MicroscopicPattern microscopic_cumulant(const PermTuple& s, Flavor f);

// ------------------------------------------------------------ first order

// kappa_s = sum_{tau eta^-1 <= s eta^-1} phi_{Pi_p(tau),tau} M(s tau^-1), with
// eta the canonical pairing.  With a word, entries are looked up labelled.
Q asymptotic_cumulant_melonic(const AsymptoticTable& phi, const PermTuple& s, const Word* w = nullptr);
// phi_{Pi_p(s),s} = sum_{tau eta^-1 <= s eta^-1} kappa_{Pi_p(tau),tau}
Q asymptotic_moment_from_cumulants_melonic(const AsymptoticTable& kappa, const PermTuple& s,
                                           const Word* w = nullptr);

// the tau of the melonic sum, with the pairing moved to the identity
std::vector<PermTuple> melonic_poset(const PermTuple& s);

// Wishart-scaled mixed flavor; eta is the canonical pairing of (s, id) and
// the tables hold mixed connected classes; the optional word labels vertices
Q asymptotic_cumulant_wishart_mixed(const AsymptoticTable& phi, const PermTuple& s, const Word* w = nullptr);
Q asymptotic_moment_from_cumulants_wishart_mixed(const AsymptoticTable& kappa, const PermTuple& s,
                                                 const Word* w = nullptr);

// (s, id) melonic with pairing eta; nu runs over nu eta^-1 <= eta^-1.
// pure (D+1 colors) from mixed: sum_nu kappa^m_{Pi(s nu^-1), s nu^-1} M(nu)
Q pure_from_mixed_cumulants(const AsymptoticTable& kappa_m, const PermTuple& s);
// mixed from pure: sum_nu kappa_{Pi_p(s,nu),(s,nu)}
Q mixed_from_pure_cumulants(const AsymptoticTable& kappa_p, const PermTuple& s);

// the first-order classes of a flavor: purely connected melonic (pure) or
// connected with (s, id) melonic (mixed)
std::vector<InvariantClass> first_order_classes(int n, int D, Flavor f);

struct DominantTerm {
    BipartitePartition pi;
    PermTuple tau;
};
// pairs (pi, tau), pi >= Pi_p(tau), for which the finite cumulant term
// survives at leading order.  The default is a direct minimization.  With
// assume_conjecture the set is generated from the eta rendering s compatible,
// restricted to pi = Pi_p(tau); this relies on an unproven statement.
std::vector<DominantTerm> dominant_set(const PermTuple& s, bool assume_conjecture = false);
// sum over the dominant set of phi_{pi,tau} M(s tau^-1); phi of a block is
// looked up under the class of tau restricted to it
Q asymptotic_cumulant_general(const AsymptoticTable& phi, const PermTuple& s, bool assume_conjecture = false);

// entrywise sum
AsymptoticTable free_additive_convolution_melonic(const AsymptoticTable& a, const AsymptoticTable& b);

}  // namespace tf
