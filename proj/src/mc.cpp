#include "tensorfree/mc.hpp"

#include "tensorfree/budget.hpp"
#include "tensorfree/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tf {

namespace {

constexpr double kMemoryCap = 1e7;

uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double ipow(int N, int k) {
    double r = 1;
    for (int i = 0; i < k; ++i) r *= N;
    return r;
}

void check_memory(int N, int k, const std::string& what) {
    if (ipow(N, k) > kMemoryCap) throw BudgetExceeded(what + ": tensor exceeds the memory cap");
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// M applied to slot k of A
DenseTensor mode_product(const DenseTensor& A, const DenseTensor& M, int k) {
    int N = A.N;
    size_t inner = size_t(ipow(N, A.slots - k - 1));
    size_t outer = A.size() / (inner * N);
    DenseTensor out(N, A.slots);
    for (size_t o = 0; o < outer; ++o)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                cplx m = M.data[size_t(i) * N + j];
                if (m == cplx(0)) continue;
                const cplx* src = &A.data[(o * N + j) * inner];
                cplx* dst = &out.data[(o * N + i) * inner];
                for (size_t r = 0; r < inner; ++r) dst[r] += m * src[r];
            }
    return out;
}

size_t flat(const std::vector<int>& idx, int N) {
    size_t r = 0;
    for (int i : idx) r = r * N + size_t(i);
    return r;
}

DenseTensor sample_summed(const McConfig& cfg, std::mt19937_64& g) {
    auto one = [&] {
        return cfg.ensemble == Ensemble::Wishart ? sample_wishart_tensor(cfg.N, cfg.D, g)
                                                 : sample_ginibre(cfg.N, cfg.D, cfg.C, g);
    };
    DenseTensor A = one();
    for (int k = 1; k < cfg.summands; ++k) {
        DenseTensor B = one();
        for (size_t i = 0; i < A.size(); ++i) A.data[i] += B.data[i];
    }
    return A;
}

// one draw of every labelled copy, ready for eval_trace_invariant
struct Sampler {
    const McConfig& cfg;
    int labels;

    DenseTensor draw(std::mt19937_64& g) const {
        if (cfg.ensemble == Ensemble::Wishart) return sample_summed(cfg, g);
        DenseTensor T = sample_summed(cfg, g);
        return cfg.flavor == Flavor::Mixed ? outer_conj(T) : T;
    }
    // copies[l] for l < labels; pure copies are T, their conjugates follow
    std::vector<DenseTensor> sample(long i) const {
        std::vector<DenseTensor> out;
        for (int l = 0; l < labels; ++l) {
            auto g = sample_rng(cfg.seed, uint64_t(l), uint64_t(i));
            out.push_back(draw(g));
        }
        if (cfg.flavor == Flavor::Pure)
            for (int l = 0; l < labels; ++l) out.push_back(out[l].conj());
        return out;
    }
    std::vector<const DenseTensor*> slots(const std::vector<DenseTensor>& copies, int n, const Word* w) const {
        std::vector<const DenseTensor*> r;
        if (cfg.flavor == Flavor::Mixed) {
            for (int x = 0; x < n; ++x) r.push_back(&copies[w ? (*w)[x] : 0]);
        } else {
            for (int x = 0; x < n; ++x) r.push_back(&copies[w ? (*w)[x] : 0]);
            for (int x = 0; x < n; ++x) r.push_back(&copies[labels + (w ? (*w)[n + x] : 0)]);
        }
        return r;
    }
};

void check_config(const McConfig& cfg) {
    if (cfg.N < 1 || cfg.D < 1) throw std::invalid_argument("mc: N and D must be positive");
    if (cfg.samples < 2) throw std::invalid_argument("mc: at least two samples needed");
    if (cfg.blocks < 2 || cfg.blocks > cfg.samples) throw std::invalid_argument("mc: bad block count");
    if (cfg.summands < 1) throw std::invalid_argument("mc: summands must be positive");
    if (cfg.ensemble == Ensemble::Wishart && cfg.flavor == Flavor::Pure)
        throw std::invalid_argument("mc: Wishart tensors are mixed");
    check_memory(cfg.N, cfg.D + 1, "mc");
}

// per block sums of the products of every subset of q variables
struct SubsetSums {
    long count = 0;
    std::vector<cplx> sum;
};

// sum over set partitions of the mask's points, restricted growth order
cplx joint_cumulant(const std::vector<cplx>& mean, int q) {
    std::vector<int> a(q, 0);
    cplx total = 0;
    while (true) {
        int blocks = *std::max_element(a.begin(), a.end()) + 1;
        std::vector<unsigned> masks(blocks, 0);
        for (int i = 0; i < q; ++i) masks[a[i]] |= 1u << i;
        cplx prod = 1;
        for (unsigned m : masks) prod *= mean[m];
        double coef = (blocks % 2 ? 1.0 : -1.0) * std::tgamma(double(blocks));
        total += coef * prod;
        int i = q - 1;
        while (i > 0) {
            int mx = *std::max_element(a.begin(), a.begin() + i);
            if (a[i] <= mx) break;
            --i;
        }
        if (i == 0) break;
        ++a[i];
        for (int j = i + 1; j < q; ++j) a[j] = 0;
    }
    return total;
}

// plug-in joint cumulant of q per-sample variables with jackknife error
Estimate cumulant_estimate(const McConfig& cfg, int q,
                           const std::function<std::vector<cplx>(long)>& variables) {
    if (q < 1 || q > 12) throw std::invalid_argument("mc: cumulant order out of range");
    unsigned full = (1u << q);
    require_budget(double(cfg.samples) * full, "mc cumulant");
    std::vector<SubsetSums> blocks(cfg.blocks);
    for (auto& b : blocks) b.sum.assign(full, 0);
    parallel_ranges(size_t(cfg.blocks), [&](size_t lo, size_t hi, unsigned) {
        for (size_t b = lo; b < hi; ++b) {
            long s0 = long(b) * cfg.samples / cfg.blocks, s1 = long(b + 1) * cfg.samples / cfg.blocks;
            auto& acc = blocks[b];
            std::vector<cplx> prod(full);
            for (long i = s0; i < s1; ++i) {
                auto x = variables(i);
                prod[0] = 1;
                for (unsigned m = 1; m < full; ++m) {
                    int low = __builtin_ctz(m);
                    prod[m] = prod[m & (m - 1)] * x[low];
                    acc.sum[m] += prod[m];
                }
                ++acc.count;
            }
        }
    });
    std::vector<cplx> total(full, 0);
    long n = 0;
    for (auto& b : blocks) {
        for (unsigned m = 0; m < full; ++m) total[m] += b.sum[m];
        n += b.count;
    }
    auto kappa_without = [&](const SubsetSums* drop) {
        long c = n - (drop ? drop->count : 0);
        std::vector<cplx> mean(full);
        for (unsigned m = 1; m < full; ++m) mean[m] = (total[m] - (drop ? drop->sum[m] : cplx(0))) / double(c);
        return joint_cumulant(mean, q);
    };
    Estimate e;
    e.samples = n;
    e.mean = kappa_without(nullptr);
    int B = cfg.blocks;
    std::vector<cplx> loo(B);
    cplx avg = 0;
    for (int b = 0; b < B; ++b) avg += (loo[b] = kappa_without(&blocks[b]));
    avg /= double(B);
    double ss = 0;
    for (auto& v : loo) ss += std::norm(v - avg);
    e.stderr_ = std::sqrt(ss * (B - 1) / B);
    return e;
}

LaurentPoly exact_moment_poly(const PermTuple& s, const McConfig& cfg) {
    // a sum of Ginibre draws is Ginibre with the summed covariance
    if (cfg.ensemble == Ensemble::Ginibre) return gaussian_moment_exact(s, Q(cfg.C) * cfg.summands);
    if (cfg.summands != 1) throw std::invalid_argument("mc: no exact moments for summed Wishart tensors");
    return gaussian_moment_exact(append(s, Perm(tuple_degree(s))), 1);
}

}  // namespace

std::string ensemble_name(Ensemble e) { return e == Ensemble::Ginibre ? "ginibre" : "wishart"; }

Ensemble parse_ensemble(const std::string& s) {
    if (s == "ginibre" || s == "gaussian") return Ensemble::Ginibre;
    if (s == "wishart") return Ensemble::Wishart;
    throw std::invalid_argument("unknown ensemble: " + s);
}

McConfig parse_mc_config(const std::string& text) {
    McConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("mc config line " + std::to_string(lineno) + ": expected key=value");
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        try {
            if (k == "N") c.N = std::stoi(v);
            else if (k == "D") c.D = std::stoi(v);
            else if (k == "C") c.C = std::stod(v);
            else if (k == "samples") c.samples = std::stol(v);
            else if (k == "seed") c.seed = std::stoull(v);
            else if (k == "blocks") c.blocks = std::stoi(v);
            else if (k == "summands") c.summands = std::stoi(v);
            else if (k == "ensemble") c.ensemble = parse_ensemble(v);
            else if (k == "flavor") c.flavor = parse_flavor(v);
            else if (k == "class") c.classes.push_back(v);
            else throw std::invalid_argument("unknown key " + k);
        } catch (const std::logic_error& e) {
            throw std::invalid_argument("mc config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return c;
}

std::string mc_config_text(const McConfig& c) {
    std::ostringstream o;
    o << "ensemble=" << ensemble_name(c.ensemble) << "\nflavor=" << flavor_name(c.flavor) << "\nN=" << c.N
      << "\nD=" << c.D << "\nC=" << c.C << "\nsamples=" << c.samples << "\nseed=" << c.seed
      << "\nblocks=" << c.blocks << "\nsummands=" << c.summands << "\n";
    for (auto& k : c.classes) o << "class=" << k << "\n";
    return o.str();
}

std::mt19937_64 sample_rng(uint64_t seed, uint64_t stream, uint64_t sample) {
    uint64_t h = splitmix(seed);
    h = splitmix(h ^ stream);
    h = splitmix(h ^ sample);
    return std::mt19937_64(h);
}

DenseTensor sample_ginibre(int N, int D, double C, std::mt19937_64& g) {
    check_memory(N, D, "sample_ginibre");
    // real and imaginary parts each carry half the variance
    std::normal_distribution<double> nd(0.0, std::sqrt(C / ipow(N, D - 1) / 2));
    DenseTensor T(N, D);
    for (auto& x : T.data) {
        double re = nd(g);
        x = cplx(re, nd(g));
    }
    return T;
}

DenseTensor sample_wishart_tensor(int N, int D, std::mt19937_64& g) {
    check_memory(N, D + 1, "sample_wishart_tensor");
    require_budget(ipow(N, 2 * D + 1), "sample_wishart_tensor");
    // covariance N^{-D} so that E Tr W = N
    DenseTensor T = sample_ginibre(N, D + 1, 1.0, g);
    size_t M = size_t(ipow(N, D));
    DenseTensor W(N, 2 * D);
    for (size_t i = 0; i < M; ++i)
        for (size_t j = i; j < M; ++j) {
            cplx acc = 0;
            const cplx* a = &T.data[i * N];
            const cplx* b = &T.data[j * N];
            for (int k = 0; k < N; ++k) acc += a[k] * std::conj(b[k]);
            W.data[i * M + j] = acc;
            W.data[j * M + i] = std::conj(acc);
        }
    return W;
}

DenseTensor outer_conj(const DenseTensor& T) {
    DenseTensor A(T.N, 2 * T.slots);
    size_t M = T.size();
    for (size_t i = 0; i < M; ++i)
        for (size_t j = 0; j < M; ++j) A.data[i * M + j] = T.data[i] * std::conj(T.data[j]);
    return A;
}

DenseTensor sample_haar_unitary(int N, std::mt19937_64& g) {
    DenseTensor Z = sample_ginibre(N, 2, 1.0, g);
    // columns of Z, orthonormalized in order; R then has a positive diagonal
    std::vector<std::vector<cplx>> col(N, std::vector<cplx>(N));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) col[j][i] = Z.data[size_t(i) * N + j];
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < j; ++k) {
            cplx dot = 0;
            for (int i = 0; i < N; ++i) dot += std::conj(col[k][i]) * col[j][i];
            for (int i = 0; i < N; ++i) col[j][i] -= dot * col[k][i];
        }
        double nrm = 0;
        for (auto& x : col[j]) nrm += std::norm(x);
        nrm = std::sqrt(nrm);
        for (auto& x : col[j]) x /= nrm;
    }
    DenseTensor U(N, 2);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) U.data[size_t(i) * N + j] = col[j][i];
    return U;
}

DenseTensor lu_rotate(const DenseTensor& A, const std::vector<DenseTensor>& U, Flavor f) {
    int D = int(U.size());
    if (A.slots != (f == Flavor::Mixed ? 2 * D : D)) throw std::invalid_argument("lu_rotate: slot count mismatch");
    DenseTensor out = A;
    for (int c = 0; c < D; ++c) {
        out = mode_product(out, U[c], c);
        if (f == Flavor::Mixed) out = mode_product(out, U[c].conj(), D + c);
    }
    return out;
}

double lu_invariance_residual(const PermTuple& s, Flavor f, int N, uint64_t seed, int trials) {
    int n = tuple_degree(s), D = int(s.size());
    double worst = 0;
    for (int t = 0; t < trials; ++t) {
        auto g = sample_rng(seed, 0, uint64_t(t));
        int count = f == Flavor::Mixed ? n : 2 * n;
        std::vector<DenseTensor> ts, rot;
        std::vector<DenseTensor> U;
        for (int c = 0; c < D; ++c) U.push_back(sample_haar_unitary(N, g));
        for (int x = 0; x < count; ++x) {
            // generic tensors, not conjugates of each other
            DenseTensor A = f == Flavor::Mixed ? sample_ginibre(N, 2 * D, 1.0, g) : sample_ginibre(N, D, 1.0, g);
            if (f == Flavor::Pure && x >= n) {
                // whites transform with the conjugate unitaries
                std::vector<DenseTensor> Uc;
                for (auto& u : U) Uc.push_back(u.conj());
                rot.push_back(lu_rotate(A, Uc, f));
            } else {
                rot.push_back(lu_rotate(A, U, f));
            }
            ts.push_back(std::move(A));
        }
        cplx a = eval_trace_invariant(s, f, ts), b = eval_trace_invariant(s, f, rot);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    return worst;
}

double Estimate::z(const cplx& exact) const {
    double d = std::abs(mean - exact);
    if (stderr_ == 0) return d == 0 ? 0 : INFINITY;
    return d / stderr_;
}

std::vector<Estimate> estimate_moments(const std::vector<PermTuple>& s, const McConfig& cfg, const Word* w) {
    check_config(cfg);
    if (s.empty()) return {};
    int n = tuple_degree(s[0]);
    for (auto& t : s) {
        if (int(t.size()) != cfg.D) throw std::invalid_argument("estimate_moments: tuple has the wrong D");
        if (w && tuple_degree(t) != n) throw std::invalid_argument("estimate_moments: a word needs a common n");
    }
    int labels = 1;
    if (w) {
        if (int(w->size()) != (cfg.flavor == Flavor::Mixed ? n : 2 * n))
            throw std::invalid_argument("estimate_moments: word length");
        for (int l : *w) {
            if (l < 0) throw std::invalid_argument("estimate_moments: negative label");
            labels = std::max(labels, l + 1);
        }
    }
    Sampler sm{cfg, labels};
    size_t k = s.size();
    struct Acc {
        long count = 0;
        std::vector<cplx> sum;
        std::vector<double> sq;
    };
    std::vector<Acc> blocks(cfg.blocks);
    for (auto& b : blocks) {
        b.sum.assign(k, 0);
        b.sq.assign(k, 0);
    }
    parallel_ranges(size_t(cfg.blocks), [&](size_t lo, size_t hi, unsigned) {
        for (size_t b = lo; b < hi; ++b) {
            long s0 = long(b) * cfg.samples / cfg.blocks, s1 = long(b + 1) * cfg.samples / cfg.blocks;
            for (long i = s0; i < s1; ++i) {
                auto copies = sm.sample(i);
                for (size_t j = 0; j < k; ++j) {
                    cplx v = eval_trace_invariant(s[j], cfg.flavor, sm.slots(copies, tuple_degree(s[j]), w));
                    blocks[b].sum[j] += v;
                    blocks[b].sq[j] += std::norm(v);
                }
                ++blocks[b].count;
            }
        }
    });
    std::vector<Estimate> out(k);
    long n_s = 0;
    for (auto& b : blocks) n_s += b.count;
    for (size_t j = 0; j < k; ++j) {
        cplx sum = 0;
        double sq = 0;
        for (auto& b : blocks) {
            sum += b.sum[j];
            sq += b.sq[j];
        }
        cplx mean = sum / double(n_s);
        double var = std::max(0.0, (sq - double(n_s) * std::norm(mean)) / double(n_s - 1));
        out[j] = {mean, std::sqrt(var / double(n_s)), n_s};
    }
    return out;
}

Estimate estimate_moment(const PermTuple& s, const McConfig& cfg, const Word* w) {
    return estimate_moments({s}, cfg, w)[0];
}

Estimate estimate_classical_cumulant(const std::vector<PermTuple>& components, const McConfig& cfg) {
    check_config(cfg);
    for (auto& t : components)
        if (int(t.size()) != cfg.D) throw std::invalid_argument("estimate_classical_cumulant: tuple has the wrong D");
    Sampler sm{cfg, 1};
    return cumulant_estimate(cfg, int(components.size()), [&](long i) {
        auto copies = sm.sample(i);
        std::vector<cplx> x;
        for (auto& t : components) x.push_back(eval_trace_invariant(t, cfg.flavor, sm.slots(copies, tuple_degree(t), nullptr)));
        return x;
    });
}

double exact_moment(const PermTuple& s, const McConfig& cfg) {
    return exact_moment_poly(s, cfg).eval(Q(cfg.N)).get_d();
}

MicroscopicReport check_microscopic_cumulant(const PermTuple& s, const McConfig& cfg, double band,
                                             const PermTuple* pattern_of) {
    check_config(cfg);
    int n = tuple_degree(s);
    if (int(s.size()) != cfg.D) throw std::invalid_argument("check_microscopic_cumulant: tuple has the wrong D");
    if (cfg.N < n) throw std::invalid_argument("check_microscopic_cumulant: N < n leaves no distinct indices");
    const PermTuple& ps = pattern_of ? *pattern_of : s;
    if (tuple_degree(ps) != n || ps.size() != s.size())
        throw std::invalid_argument("check_microscopic_cumulant: pattern tuple has another shape");

    // exact finite cumulant from the exact moments of every class up to n
    FiniteTable mom;
    mom.flavor = cfg.flavor;
    for (int k = 1; k <= n; ++k)
        for (auto& c : enumerate_classes(k, cfg.D, cfg.flavor, false))
            mom.values[c.str()] = RatFunc(exact_moment_poly(c.rep, cfg));
    RatFunc kappa = cfg.flavor == Flavor::Pure ? finite_cumulant_pure(mom, s) : finite_cumulant_mixed(mom, s);

    MicroscopicReport r;
    auto pat = microscopic_cumulant(ps, cfg.flavor);
    r.pattern = pat.str();
    r.exact = kappa.eval(Q(cfg.N)).get_d();
    int N = cfg.N;
    r.mc = cumulant_estimate(cfg, int(pat.factors.size()), [&](long i) {
        auto g = sample_rng(cfg.seed, 0, uint64_t(i));
        DenseTensor A = sample_summed(cfg, g);
        std::vector<cplx> x;
        size_t M = size_t(ipow(N, cfg.D));
        for (auto& e : pat.factors) {
            if (cfg.flavor == Flavor::Pure) {
                cplx v = A.data[flat(e.out, N)];
                x.push_back(e.conjugate ? std::conj(v) : v);
            } else if (cfg.ensemble == Ensemble::Wishart) {
                x.push_back(A.data[flat(e.out, N) * M + flat(e.in, N)]);
            } else {
                x.push_back(A.data[flat(e.out, N)] * std::conj(A.data[flat(e.in, N)]));
            }
        }
        return x;
    });
    r.z = r.mc.z(r.exact);
    r.pass = r.z <= band;
    return r;
}

}  // namespace tf
