#pragma once

#include "tensorfree/invariants.hpp"
#include "tensorfree/transforms.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tf {

// Monte Carlo oracle.  Every sample draws from its own generator, seeded from
// (seed, stream, sample), so estimates do not depend on the thread count.

enum class Ensemble { Ginibre, Wishart };
std::string ensemble_name(Ensemble e);
Ensemble parse_ensemble(const std::string& s);

struct McConfig {
    Ensemble ensemble = Ensemble::Ginibre;
    Flavor flavor = Flavor::Pure;
    int N = 4, D = 3;
    double C = 1;        // covariance scale (Ginibre only)
    long samples = 10000;
    uint64_t seed = 1;
    int blocks = 64;     // jackknife blocks
    int summands = 1;    // each tensor is a sum of this many independent draws
    std::vector<std::string> classes;  // text forms, from repeated class= lines
};
// flat key=value lines; '#' starts a comment
McConfig parse_mc_config(const std::string& text);
std::string mc_config_text(const McConfig& c);

std::mt19937_64 sample_rng(uint64_t seed, uint64_t stream, uint64_t sample);

// E[T T̄] = C N^{1-D} per entry
DenseTensor sample_ginibre(int N, int D, double C, std::mt19937_64& g);
// W_{i;j} = sum_k T_{ik} T̄_{jk} with T a (D+1)-index Ginibre tensor; 2D slots
DenseTensor sample_wishart_tensor(int N, int D, std::mt19937_64& g);
// rank one A = T (x) T̄ with 2D slots
DenseTensor outer_conj(const DenseTensor& T);
// Haar unitary from Gram-Schmidt on a Ginibre matrix; 2 slots, row major
DenseTensor sample_haar_unitary(int N, std::mt19937_64& g);
// U_c on outputs; conj(U_c) on the inputs of a mixed tensor
DenseTensor lu_rotate(const DenseTensor& A, const std::vector<DenseTensor>& U, Flavor f);
// max relative change of Tr_s under a random local unitary rotation
double lu_invariance_residual(const PermTuple& s, Flavor f, int N, uint64_t seed, int trials = 3);

struct Estimate {
    cplx mean = 0;
    double stderr_ = 0;
    long samples = 0;
    double z(const cplx& exact) const;  // |mean - exact| / stderr
};

// E[Tr_s] for each tuple, all from the same samples; the word assigns an
// independent copy of the ensemble to every black/white (pure) or vertex (mixed)
std::vector<Estimate> estimate_moments(const std::vector<PermTuple>& s, const McConfig& cfg,
                                       const Word* w = nullptr);
Estimate estimate_moment(const PermTuple& s, const McConfig& cfg, const Word* w = nullptr);
// joint classical cumulant of the traces of the components (plug-in, jackknife error)
Estimate estimate_classical_cumulant(const std::vector<PermTuple>& components, const McConfig& cfg);

// exact finite moment of the configured ensemble at numeric N
double exact_moment(const PermTuple& s, const McConfig& cfg);

struct MicroscopicReport {
    std::string pattern;
    double exact = 0;  // finite cumulant of s at N
    Estimate mc;       // classical cumulant of the entries
    double z = 0;
    bool pass = false;
};
// With `pattern_of` the entries are taken from another tuple (negative control).
MicroscopicReport check_microscopic_cumulant(const PermTuple& s, const McConfig& cfg, double band = 3,
                                             const PermTuple* pattern_of = nullptr);

}  // namespace tf
