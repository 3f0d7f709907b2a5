#pragma once

#include "tensorfree/algebra.hpp"
#include "tensorfree/partitions.hpp"
#include "tensorfree/perm.hpp"

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace tf {

enum class Flavor { Mixed, Pure };

std::string flavor_name(Flavor f);
Flavor parse_flavor(const std::string& s);

int tuple_degree(const PermTuple& s);  // n, checks consistency
PermTuple identity_tuple(int n, int D);
PermTuple tuple_inverse(const PermTuple& s);
// sigma_c * eta for every color, or eta * sigma_c
PermTuple right_mul(const PermTuple& s, const Perm& eta);
PermTuple left_mul(const Perm& eta, const PermTuple& s);
PermTuple conjugate(const PermTuple& s, const Perm& eta);  // eta s eta^-1
PermTuple append(const PermTuple& s, const Perm& p);
std::string tuple_str(const PermTuple& s);

// sum_c |s_c t_c^-1| and sum_c |s_c eta^-1|
int distance(const PermTuple& s, const PermTuple& t);
int distance(const PermTuple& s, const Perm& eta);

SetPartition components_mixed(const PermTuple& s);
// black vertex s joined to white vertex sigma_c(s); whites are the barred points
BipartitePartition components_pure(const PermTuple& s);
int K_mixed(const PermTuple& s);
int K_pure(const PermTuple& s);
// components of (s, eta) seen as a (D+1)-tuple
int K_pure(const PermTuple& s, const Perm& eta);
int K_mixed(const PermTuple& s, const Perm& eta);

// restriction of s to the union of the given vertices (which must be a
// union of components), relabelled to 0..k-1 in increasing order
PermTuple restrict_mixed(const PermTuple& s, const std::vector<int>& verts);
// restriction to a balanced block given as black and white vertex lists;
// blacks and whites are each relabelled in increasing order
PermTuple restrict_pure(const PermTuple& s, const std::vector<int>& blacks, const std::vector<int>& whites);

// pure components as separate tuples (in order of smallest black vertex)
std::vector<PermTuple> pure_components(const PermTuple& s);
std::vector<PermTuple> mixed_components(const PermTuple& s);
// disjoint union
PermTuple disjoint_union(const PermTuple& a, const PermTuple& b);

struct InvariantClass {
    PermTuple rep;
    Flavor flavor = Flavor::Mixed;
    bool canonical = false;

    int n() const { return rep.empty() ? 0 : rep[0].n(); }
    int D() const { return int(rep.size()); }
    std::string str() const;  // "flavor=pure;D=3;n=2;c1=(1 2);c2=(1)(2);c3=(1 2)"
    static InvariantClass parse(const std::string& s);

    friend bool operator==(const InvariantClass& a, const InvariantClass& b) {
        return a.flavor == b.flavor && a.rep == b.rep;
    }
    friend bool operator<(const InvariantClass& a, const InvariantClass& b) {
        if (a.flavor != b.flavor) return a.flavor < b.flavor;
        if (a.rep.size() != b.rep.size()) return a.rep.size() < b.rep.size();
        if (a.n() != b.n()) return a.n() < b.n();
        return a.rep < b.rep;
    }
};

// relabelling that maps a tuple to its canonical representative:
// mixed  rep = eta s eta^-1           (nu unused, equal to eta^-1)
// pure   rep = eta s nu
struct Relabel {
    Perm eta, nu;
};

InvariantClass canonicalize(const PermTuple& s, Flavor f, int cap = 8);
std::pair<InvariantClass, Relabel> canonicalize_with(const PermTuple& s, Flavor f, int cap = 8);

// Label words attached to the vertices.  Mixed: word[s] labels vertex s.
// Pure: word[s] labels the black vertex s and word[n + w] the white w.
using Word = std::vector<int>;
Word transport_word(const Word& w, const Relabel& r, Flavor f, int n);
// canonical (class, word): the minimal word over all relabellings that
// reach the canonical representative
std::pair<InvariantClass, Word> canonicalize_labeled(const PermTuple& s, const Word& w, Flavor f);

// one representative per orbit, found by orbit marking in lexicographic order
std::vector<InvariantClass> enumerate_classes(int n, int D, Flavor f, bool connected_only);

PermTuple pure_to_mixed(const PermTuple& s);  // (s_1 s_D^-1, ..., s_{D-1} s_D^-1)

struct OrbitDistance {
    int distance;
    Z multiplicity;
};
OrbitDistance orbit_distance(const InvariantClass& a, const InvariantClass& b);
// leading term of the normalized Gram entry, (exponent, coefficient)
std::pair<int, Z> gram_leading(const InvariantClass& a, const InvariantClass& b);
// exact normalized Gram entry: sum over relabellings of N^{-distance}
LaurentPoly gram_entry(const InvariantClass& a, const InvariantClass& b);
std::vector<std::vector<LaurentPoly>> gram_matrix(const std::vector<InvariantClass>& cls);
Q determinant(std::vector<std::vector<Q>> m);
bool gram_invertible_at(const std::vector<std::vector<LaurentPoly>>& g, const Q& N);

// ------------------------------------------------------------ dense tensors

using cplx = std::complex<double>;

// Row-major array of N^slots complex numbers, all slot ranges equal to N.
struct DenseTensor {
    int N = 0;
    int slots = 0;
    std::vector<cplx> data;

    DenseTensor() = default;
    DenseTensor(int N_, int slots_);
    size_t size() const { return data.size(); }
    DenseTensor conj() const;
};

// Mixed: n tensors with 2D slots (D outputs then D inputs).
// Pure: 2n tensors with D slots (the n blacks, then the n whites).
cplx eval_trace_invariant(const PermTuple& s, Flavor f, const std::vector<const DenseTensor*>& tensors);
cplx eval_trace_invariant(const PermTuple& s, Flavor f, const std::vector<DenseTensor>& tensors);

}  // namespace tf
