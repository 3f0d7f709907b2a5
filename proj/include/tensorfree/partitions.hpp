#pragma once

#include "tensorfree/algebra.hpp"
#include "tensorfree/perm.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tf {

// Set partition of {0..n-1}, stored as block labels numbered in order of
// first appearance, so equal partitions have equal label vectors.
class SetPartition {
public:
    SetPartition() = default;
    explicit SetPartition(std::vector<int> labels);  // any labelling, renumbered

    static SetPartition finest(int n);    // 0_n
    static SetPartition coarsest(int n);  // 1_n
    static SetPartition of_perm(const Perm& p);
    static SetPartition from_blocks(int n, const std::vector<std::vector<int>>& blocks0);
    static SetPartition parse(const std::string& s);  // "{1,2|3}"

    int n() const { return int(lab_.size()); }
    int num_blocks() const { return nb_; }
    int block_of(int i) const { return lab_[i]; }
    const std::vector<int>& labels() const { return lab_; }
    std::vector<std::vector<int>> blocks() const;
    std::string str() const;

    friend bool operator==(const SetPartition&, const SetPartition&) = default;
    friend auto operator<=>(const SetPartition& a, const SetPartition& b) { return a.lab_ <=> b.lab_; }

private:
    std::vector<int> lab_;
    int nb_ = 0;
};

SetPartition join(const SetPartition& a, const SetPartition& b);
bool leq(const SetPartition& a, const SetPartition& b);

// (-1)^{#pi-1} (#pi-1)!, the Moebius value mu(pi, 1_n)
Q moebius_partition(const SetPartition& pi);
// mu(finer, coarser) as a product over the blocks of coarser
Q moebius_partition_rel(const SetPartition& finer, const SetPartition& coarser);

// all set partitions (restricted growth strings); throws above the cap
std::vector<SetPartition> enumerate_partitions(int n, int cap = 7);
// every partition coarser than or equal to base (partitions of its blocks)
std::vector<SetPartition> coarsenings(const SetPartition& base);

// Partition of {0..n-1} (unbarred) and {n..2n-1} (barred) with balanced
// blocks.  Stored as a SetPartition on 2n points.
class BipartitePartition {
public:
    BipartitePartition() = default;
    explicit BipartitePartition(SetPartition p);  // checks balance

    static BipartitePartition of_perm(const Perm& p);  // s ~ bar p(s)
    static BipartitePartition coarsest(int n);
    static BipartitePartition parse(const std::string& s);  // "{1,2;1b,2b|3;3b}"

    int n() const { return p_.n() / 2; }
    const SetPartition& as_set() const { return p_; }
    int num_blocks() const { return p_.num_blocks(); }
    std::string str() const;

    friend bool operator==(const BipartitePartition&, const BipartitePartition&) = default;
    friend auto operator<=>(const BipartitePartition& a, const BipartitePartition& b) {
        return a.p_ <=> b.p_;
    }

private:
    SetPartition p_;
};

BipartitePartition join(const BipartitePartition& a, const BipartitePartition& b);
bool leq(const BipartitePartition& a, const BipartitePartition& b);
Q moebius_partition(const BipartitePartition& pi);

// exhaustive, built from a partition of the unbarred points, a partition of
// the barred points with the same block profile, and a size-preserving
// matching of their blocks
std::vector<BipartitePartition> enumerate_bipartite(int n, int cap = 7);
std::vector<BipartitePartition> coarsenings(const BipartitePartition& base);
// n!^2 / prod_i d_i! (i!)^{2 d_i}
Z bipartite_count(const IntPartition& profile);
IntPartition block_profile(const SetPartition& p);

// Classical cumulant from moments: k = sum_pi mu(pi,1) prod_B m(B).
// `moment` receives a sorted block of {0..n-1}.
template <class T>
T cumulant_from_moments(int n, const std::function<T(const std::vector<int>&)>& moment) {
    T acc{};
    for (auto& pi : enumerate_partitions(n, 64)) {
        auto bl = pi.blocks();
        T prod = moment(bl[0]);
        for (size_t i = 1; i < bl.size(); ++i) prod = prod * moment(bl[i]);
        acc = acc + prod * T(moebius_partition(pi));
    }
    return acc;
}

// E[x_1 ... x_n] = sum_pi prod_B k(B)
template <class T>
T moment_from_cumulants(int n, const std::function<T(const std::vector<int>&)>& cumulant) {
    T acc{};
    for (auto& pi : enumerate_partitions(n, 64)) {
        auto bl = pi.blocks();
        T prod = cumulant(bl[0]);
        for (size_t i = 1; i < bl.size(); ++i) prod = prod * cumulant(bl[i]);
        acc = acc + prod;
    }
    return acc;
}

// Bipartite variants: the sums run over balanced partitions of the 2n points
// and blocks are subsets of {0..2n-1}.
template <class T>
T cumulant_from_moments_bipartite(int n, const std::function<T(const std::vector<int>&)>& moment) {
    T acc{};
    for (auto& pi : enumerate_bipartite(n, 64)) {
        auto bl = pi.as_set().blocks();
        T prod = moment(bl[0]);
        for (size_t i = 1; i < bl.size(); ++i) prod = prod * moment(bl[i]);
        acc = acc + prod * T(moebius_partition(pi));
    }
    return acc;
}

template <class T>
T moment_from_cumulants_bipartite(int n, const std::function<T(const std::vector<int>&)>& cumulant) {
    T acc{};
    for (auto& pi : enumerate_bipartite(n, 64)) {
        auto bl = pi.as_set().blocks();
        T prod = cumulant(bl[0]);
        for (size_t i = 1; i < bl.size(); ++i) prod = prod * cumulant(bl[i]);
        acc = acc + prod;
    }
    return acc;
}

}  // namespace tf
