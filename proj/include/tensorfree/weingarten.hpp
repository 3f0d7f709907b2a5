#pragma once

#include "tensorfree/algebra.hpp"
#include "tensorfree/perm.hpp"

#include <utility>
#include <vector>

namespace tf {

// chi^lambda evaluated on the class mu (Murnaghan-Nakayama)
Z character(const IntPartition& lambda, const IntPartition& mu);

// Exact unitary Weingarten function as a rational function of N.
// Cached per cycle type; safe to call from several threads.
RatFunc weingarten(const IntPartition& type);
RatFunc weingarten(const Perm& nu);
// leading term M(nu) N^{-n-|nu|}, returned as (coefficient, exponent)
std::pair<Q, int> weingarten_asymptotic(const Perm& nu);
// prod_c W(s_c t_c^-1)
RatFunc weingarten_product(const PermTuple& s, const PermTuple& t);

int weingarten_cap();  // largest supported n

}  // namespace tf
