#pragma once

#include "tensorfree/algebra.hpp"
#include "tensorfree/invariants.hpp"
#include "tensorfree/transforms.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tf {

// A paired tensor obtained by splitting a first-order invariant open, one
// edge per cycle alternating a color with canonical pairs.  Slot r of color
// c is the split edge sources[c][r] -> closed[c](sources[c][r]).
//
// Pure generators are stored with canonical pairing the identity, so black
// s and white s sit on the same thick edge.  The rescaled identity carries
// only a shape.
struct PairedTensor {
    Flavor flavor = Flavor::Pure;
    bool identity = false;
    PermTuple closed;
    Word word;  // pure: 2n labels (blacks then whites), mixed: n
    std::vector<std::vector<int>> sources;
    std::vector<int> id_shape;  // k_c for the identity

    int D() const;
    int n() const { return identity ? 0 : tuple_degree(closed); }
    std::vector<int> shape() const;  // k_c
    int inputs() const;              // sum of k_c
    int label() const;               // common label, -1 for the identity, -2 if several
};

// E picks, for every alternating cycle, the edge to split by its source
// (a black vertex or a mixed vertex); an empty E picks the smallest source.
// Throws unless s is first order for the flavor (pure: purely connected
// melonic; mixed: connected with (s, id) melonic).
PairedTensor split_first_order(const PermTuple& s, Flavor f, const Word& w,
                               const std::vector<std::vector<int>>& E = {});
// every strict split of s with a constant label
std::vector<PairedTensor> all_strict_splits(const PermTuple& s, Flavor f, int label);
PairedTensor identity_paired(Flavor f, const std::vector<int>& shape);

// Thick edges plus, per color, a permutation of that color's slots.  Slots
// of color c are numbered thick edge by thick edge, shades in order.
struct PairedGraph {
    Flavor flavor = Flavor::Pure;
    int D = 0;
    std::vector<PairedTensor> edges;
    std::vector<Perm> cycles;

    int q() const { return int(edges.size()); }
    int slots(int c) const;
    std::pair<int, int> owner(int c, int slot) const;  // (thick edge, shade)
    int slot_of(int c, int edge, int shade) const;
};

PairedGraph closure(const PairedTensor& h);  // Tr(h): every slot closed on itself
std::string paired_graph_json(const PairedGraph& g);
PairedGraph paired_graph_from_json(const std::string& text);

bool is_connected(const PairedGraph& g);
// thick-edge components of g, each as its own graph, and their labels
std::vector<PairedGraph> components(const PairedGraph& g, std::vector<int>* labels = nullptr);
// connected, with a first-order ungrouped invariant whose canonical pairs are
// those of the thick edges; identity thick edges are replaced by any
// generated paired tensor of the same shape
bool is_melonic(const PairedGraph& g);
// drops the given thick edges, bridging their slots in each cycle
PairedGraph remove_thick_edges(const PairedGraph& g, const std::vector<int>& I);

struct Ungrouped {
    PermTuple s;
    Word w;
    std::vector<int> offset;  // first regular vertex of each thick edge
};
// merges the cycles of g with the internals of its generators
Ungrouped ungroup(const PairedGraph& g);
bool is_first_order(const PermTuple& s, Flavor f);

struct Grouping {
    std::vector<PairedTensor> parts;  // the P_j
    std::vector<int> part_of;         // thick edge of g -> j
    PairedGraph h;                    // g with every path closed on itself
    PairedGraph k;                    // the P_j joined by the edges of E
};
// E lists edges as (color, slot), the edge leaving that slot
Grouping group(const PairedGraph& g, const std::vector<std::pair<int, int>>& E);

// first-order moment; identity thick edges are contracted away and the
// remaining components looked up in the table (labelled when it is)
Q phi_paired(const PairedGraph& g, const AsymptoticTable& phi);
Q phi_generator(const PairedTensor& h, const AsymptoticTable& phi);

// sum over h <= g (non-crossing in every cycle) of phi_{Pi(h),h} M(h,g)
Q varkappa_paired(const PairedGraph& g, const AsymptoticTable& phi);
// sum over h <= g of the product of kappa over components of h
Q phi_from_paired_cumulants(const PairedGraph& g, const std::function<Q(const PairedGraph&)>& kappa);
// the graphs h <= g
std::vector<PairedGraph> paired_poset(const PairedGraph& g);

// h - phi(h) 1, as a formal combination
struct PairedCombination {
    std::vector<std::pair<Q, PairedTensor>> terms;
};
PairedCombination center(const PairedTensor& h, const AsymptoticTable& phi);
// multilinear extension of phi_paired; `terms` receives the expansion size
Q phi_paired_multilinear(const PairedGraph& g, const std::vector<PairedCombination>& args,
                         const AsymptoticTable& phi, long* terms = nullptr);

enum class Alternation { Strict, Almost, Neither };
std::string alternation_name(Alternation a);
Alternation classify_alternating(const PairedGraph& g);

struct FreenessReport {
    bool cumulants = false;       // mixed-label first-order cumulants vanish
    bool paired_cumulants = false;
    bool centered_moments = false;
    std::string counterexample[3];
    long checked[3] = {0, 0, 0};
    bool agree() const { return cumulants == paired_cumulants && paired_cumulants == centered_moments; }
};
// labels 0 .. labels-1; tables must hold every labelled first-order class up
// to n_max
FreenessReport freeness_check(const AsymptoticTable& phi, Flavor f, int D, int n_max, int labels = 2);

// exact first-order multilabel tables of independent ensembles: complex
// Gaussians with covariances C (pure), or Wishart tensors scaled by C
// (mixed).  Labels index C.
AsymptoticTable gaussian_multilabel_table(int D, int n_max, const std::vector<Q>& C);
AsymptoticTable wishart_multilabel_table(int D, int n_max, const std::vector<Q>& C);

}  // namespace tf
