#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tf {

using Z = mpz_class;
using Q = mpq_class;

std::string q_str(const Q& q);
Q q_parse(const std::string& s);

// Finite sum of c_k N^k with k in Z.  Zero coefficients are never stored.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(const Q& c, int e = 0);

    static LaurentPoly monomial(int e, const Q& c = 1) { return LaurentPoly(c, e); }

    const std::map<int, Q>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    Q coeff(int e) const;
    int max_exp() const;   // throws on zero
    int min_exp() const;
    std::pair<int, Q> leading() const;
    Q eval(const Q& N) const;

    void add_term(int e, const Q& c);

    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const LaurentPoly& o);
    LaurentPoly& operator*=(const Q& c);
    LaurentPoly operator-() const;

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const LaurentPoly& b) { return a *= b; }
    friend LaurentPoly operator*(LaurentPoly a, const Q& c) { return a *= c; }
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    LaurentPoly shifted(int k) const;  // times N^k
    LaurentPoly pow(unsigned k) const;

    // "N^2 - 3/2 + N^-1" style
    std::string str() const;

private:
    std::map<int, Q> t_;
};

// p(N) / prod_{k != 0} (N+k)^{e_k} with p a Laurent polynomial.
// Factors (N+k) are cancelled whenever p(-k) = 0, which makes the
// representation unique (Q[N, 1/N] is a UFD whose units are c N^j).
class RatFunc {
public:
    RatFunc() = default;
    RatFunc(const Q& c) : num_(c) {}
    RatFunc(LaurentPoly p) : num_(std::move(p)) {}
    RatFunc(LaurentPoly p, std::map<int, int> den);

    // 1 / (N+k)
    static RatFunc inv_linear(int k);

    const LaurentPoly& num() const { return num_; }
    const std::map<int, int>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_.empty(); }

    RatFunc& operator+=(const RatFunc& o);
    RatFunc& operator-=(const RatFunc& o);
    RatFunc& operator*=(const RatFunc& o);
    RatFunc operator-() const;

    friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
    friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
    friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    Q eval(const Q& N) const;  // throws if N is a pole
    // leading behaviour c N^e as N -> infinity (throws on zero)
    std::pair<int, Q> leading() const;
    // large-N expansion keeping every exponent >= min_exp
    LaurentPoly expand(int min_exp) const;

    // ordinary integer polynomials P/Q, lowest degree first, overall
    // content 1 and positive leading denominator coefficient
    std::pair<std::vector<Z>, std::vector<Z>> int_coeffs() const;
    std::string serialize() const;  // "[p0,p1,...]/[q0,q1,...]"
    static RatFunc deserialize(const std::string& s);
    std::string str() const;

private:
    void normalize();
    LaurentPoly num_;
    std::map<int, int> den_;
};

}  // namespace tf
