#pragma once

#include "tensorfree/algebra.hpp"
#include "tensorfree/perm.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tf {

// sum_{c1<c2} |s_c1 s_c2^-1| - (D-1)(n - K_p)
int degree(const PermTuple& s);
// D K_p(s,eta) - (D-1) K_p(s) - n + d(s,eta)
int bar_degree(const PermTuple& s, const Perm& eta);

// Recursive removal of (D-1)-dipoles.  The pairing maps each black vertex to
// the white vertex removed with it.
bool is_melonic(const PermTuple& s);
std::optional<Perm> canonical_pairing(const PermTuple& s);
// same reduction with the dipoles picked in a random order
std::optional<Perm> canonical_pairing_shuffled(const PermTuple& s, uint64_t seed);

int nabla(const PermTuple& s, const Perm& eta);
struct Compatibility {
    bool compatible = false;
    int min_nabla = 0;
    std::vector<Perm> minimizers;  // all of them, sorted
};
Compatibility compatibility(const PermTuple& s);

int nabla2(const PermTuple& s, const PermTuple& t);

enum class Scaling { PureGaussian, WishartMixed };
std::string scaling_name(Scaling s);

struct Dominance {
    int order = 0;
    int min_bar_degree = 0;
    std::vector<Perm> minimizers;  // connecting eta reaching the minimum
};
// 1 + (D-1)(K_p - 1) + min { bar_degree : K_p(s,eta) = 1 }; the Wishart
// variant applies this to (s, id) with D+1 colors.
Dominance dominance(const PermTuple& s, Scaling sc);
int order_of_dominance(const PermTuple& s, Scaling sc);

// number of connected melonic pure classes found by enumeration
Z fuss_catalan_probe(int n, int D);

}  // namespace tf
