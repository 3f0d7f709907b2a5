#pragma once

#include "tensorfree/algebra.hpp"

#include <compare>
#include <string>
#include <vector>

namespace tf {

// Integer partition, parts weakly decreasing.
using IntPartition = std::vector<int>;

// Bijection of {0..n-1}.  The text forms are 1-based.
class Perm {
public:
    Perm() = default;
    explicit Perm(int n);  // identity
    explicit Perm(std::vector<int> images0);

    static Perm identity(int n) { return Perm(n); }
    static Perm cycle(int n);                             // 0 -> 1 -> ... -> n-1 -> 0
    static Perm from_cycles(int n, const std::vector<std::vector<int>>& cycles1);
    static Perm parse(const std::string& s, int n = -1);  // "(1 3 2)(4)" or "[3,1,2,4]"

    int n() const { return int(p_.size()); }
    int operator()(int i) const { return p_[i]; }
    const std::vector<int>& images() const { return p_; }

    Perm inverse() const;
    // (p * q)(i) = p(q(i))
    friend Perm operator*(const Perm& p, const Perm& q);

    std::vector<std::vector<int>> cycles() const;  // 0-based, each starts at its minimum
    int num_cycles() const;
    int length() const { return n() - num_cycles(); }
    IntPartition cycle_type() const;
    bool is_identity() const;

    std::string str() const;  // canonical cycle notation
    std::string one_line() const;

    friend bool operator==(const Perm&, const Perm&) = default;
    friend auto operator<=>(const Perm& a, const Perm& b) { return a.p_ <=> b.p_; }

private:
    std::vector<int> p_;
};

// a D-tuple of permutations of the same degree
using PermTuple = std::vector<Perm>;

Perm compose(const Perm& p, const Perm& q);
int cayley_distance(const Perm& p, const Perm& q);  // |p q^-1|
bool is_geodesic(const Perm& tau, const Perm& sigma);  // tau on a geodesic id -> sigma

// all tau with tau <= sigma, as the product over cycles of non-crossing sets
std::vector<Perm> enumerate_noncrossing(const Perm& sigma);

// Moebius function of the non-crossing lattice, from the cycle type of nu
Q moebius_nc(const Perm& nu);
int genus(const Perm& sigma, const Perm& tau);

Z catalan(int n);
Z factorial(int n);
Z binomial(int n, int k);

// all permutations of {0..n-1} in lexicographic order
std::vector<Perm> all_perms(int n);

IntPartition cycle_type_of(const std::vector<int>& images0);
std::vector<IntPartition> integer_partitions(int n);  // reverse lex order
Perm perm_of_type(const IntPartition& lambda);        // consecutive cycles
Z class_size(const IntPartition& lambda);             // n! / z_lambda
std::string partition_str(const IntPartition& lambda);

// Lehmer rank, equal to the position in all_perms(n)
long perm_rank(const Perm& p);

}  // namespace tf
