#include "tensorfree/algebra.hpp"

#include <sstream>
#include <stdexcept>

namespace tf {

std::string q_str(const Q& q) {
    Q c = q;
    c.canonicalize();
    return c.get_str();
}

Q q_parse(const std::string& s) {
    Q q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(const Q& c, int e) {
    if (c != 0) {
        t_[e] = c;
        t_[e].canonicalize();
    }
}

Q LaurentPoly::coeff(int e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Q(0) : it->second;
}

int LaurentPoly::max_exp() const {
    if (t_.empty()) throw std::domain_error("zero polynomial has no degree");
    return t_.rbegin()->first;
}

int LaurentPoly::min_exp() const {
    if (t_.empty()) throw std::domain_error("zero polynomial has no degree");
    return t_.begin()->first;
}

std::pair<int, Q> LaurentPoly::leading() const {
    if (t_.empty()) throw std::domain_error("zero polynomial has no leading term");
    return *t_.rbegin();
}

Q LaurentPoly::eval(const Q& N) const {
    if (N == 0 && !t_.empty() && t_.begin()->first < 0)
        throw std::domain_error("negative power at N=0");
    Q s = 0;
    for (auto& [e, c] : t_) {
        Q p = 1;
        if (e >= 0) {
            mpz_pow_ui(p.get_num_mpz_t(), N.get_num_mpz_t(), e);
            mpz_pow_ui(p.get_den_mpz_t(), N.get_den_mpz_t(), e);
        } else {
            mpz_pow_ui(p.get_num_mpz_t(), N.get_den_mpz_t(), -e);
            mpz_pow_ui(p.get_den_mpz_t(), N.get_num_mpz_t(), -e);
        }
        p.canonicalize();
        s += c * p;
    }
    return s;
}

void LaurentPoly::add_term(int e, const Q& c0) {
    if (c0 == 0) return;
    Q c = c0;
    c.canonicalize();
    auto [it, fresh] = t_.emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) t_.erase(it);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (auto& [e, c] : o.t_) add_term(e, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (auto& [e, c] : o.t_) add_term(e, -c);
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
    LaurentPoly r;
    for (auto& [e1, c1] : t_)
        for (auto& [e2, c2] : o.t_) r.add_term(e1 + e2, c1 * c2);
    t_ = std::move(r.t_);
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(const Q& c) {
    if (c == 0) {
        t_.clear();
        return *this;
    }
    Q k = c;
    k.canonicalize();
    for (auto& [e, v] : t_) v *= k;
    return *this;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& [e, v] : r.t_) v = -v;
    return r;
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly r;
    for (auto& [e, c] : t_) r.t_[e + k] = c;
    return r;
}

LaurentPoly LaurentPoly::pow(unsigned k) const {
    LaurentPoly r(1), b = *this;
    while (k) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

std::string LaurentPoly::str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        Q c = it->second;
        int e = it->first;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        if (e == 0) {
            os << q_str(c);
            continue;
        }
        if (c != 1) os << q_str(c) << " ";
        os << "N";
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

// ---------------------------------------------------------------- RatFunc

namespace {

// exact division of a Laurent polynomial by (N+k); caller guarantees p(-k)=0
LaurentPoly div_linear(const LaurentPoly& p, int k) {
    if (p.is_zero()) return p;
    int lo = p.min_exp(), hi = p.max_exp();
    // ordinary polynomial a_0 + ... + a_m N^m with a_i = coeff(lo+i)
    int m = hi - lo;
    std::vector<Q> a(m + 1);
    for (auto& [e, c] : p.terms()) a[e - lo] = c;
    // synthetic division by (N - r), r = -k
    Q r = -k;
    std::vector<Q> b(m);
    Q carry = 0;
    for (int i = m; i >= 1; --i) {
        carry = a[i] + carry * r;
        b[i - 1] = carry;
    }
    LaurentPoly out;
    for (int i = 0; i < m; ++i) out.add_term(lo + i, b[i]);
    return out;
}

LaurentPoly linear(int k) {
    LaurentPoly l(1, 1);
    l.add_term(0, k);
    return l;
}

}  // namespace

RatFunc::RatFunc(LaurentPoly p, std::map<int, int> den) : num_(std::move(p)), den_(std::move(den)) {
    for (auto it = den_.begin(); it != den_.end();) {
        if (it->first == 0) {
            num_ = num_.shifted(-it->second);
            it = den_.erase(it);
        } else if (it->second == 0) {
            it = den_.erase(it);
        } else {
            if (it->second < 0) {
                num_ *= linear(it->first).pow(-it->second);
                it = den_.erase(it);
                continue;
            }
            ++it;
        }
    }
    normalize();
}

RatFunc RatFunc::inv_linear(int k) {
    if (k == 0) return RatFunc(LaurentPoly(1, -1));
    return RatFunc(LaurentPoly(1), {{k, 1}});
}

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
        while (it->second > 0 && num_.eval(Q(-it->first)) == 0) {
            num_ = div_linear(num_, it->first);
            --it->second;
        }
        if (it->second == 0)
            it = den_.erase(it);
        else
            ++it;
    }
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    std::map<int, int> d = den_;
    for (auto& [k, e] : o.den_) d[k] = std::max(d[k], e);
    LaurentPoly a = num_, b = o.num_;
    for (auto& [k, e] : d) {
        auto ia = den_.find(k);
        int ea = ia == den_.end() ? 0 : ia->second;
        auto ib = o.den_.find(k);
        int eb = ib == o.den_.end() ? 0 : ib->second;
        if (e > ea) a *= linear(k).pow(e - ea);
        if (e > eb) b *= linear(k).pow(e - eb);
    }
    num_ = a + b;
    den_ = std::move(d);
    normalize();
    return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
    num_ *= o.num_;
    for (auto& [k, e] : o.den_) den_[k] += e;
    normalize();
    return *this;
}

RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
}

Q RatFunc::eval(const Q& N) const {
    Q d = 1;
    for (auto& [k, e] : den_) {
        Q f = N + k;
        if (f == 0) throw std::domain_error("evaluation at a pole");
        for (int i = 0; i < e; ++i) d *= f;
    }
    return num_.eval(N) / d;
}

std::pair<int, Q> RatFunc::leading() const {
    auto [e, c] = num_.leading();
    int deg = 0;
    for (auto& [k, m] : den_) deg += m;
    return {e - deg, c};
}

LaurentPoly RatFunc::expand(int min_exp) const {
    if (is_zero()) return {};
    // 1/(N+k) = sum_j (-k)^j N^{-1-j}
    int top = num_.max_exp();
    LaurentPoly acc = num_;
    auto trunc = [&](LaurentPoly p) {
        LaurentPoly r;
        for (auto& [e, c] : p.terms())
            if (e >= min_exp) r.add_term(e, c);
        return r;
    };
    for (auto& [k, m] : den_) {
        int span = top - min_exp + 1;
        LaurentPoly ser;
        Q pw = 1;
        for (int j = 0; j < span + 1; ++j) {
            ser.add_term(-1 - j, pw);
            pw *= -k;
        }
        for (int i = 0; i < m; ++i) {
            acc = trunc(acc * ser);
            --top;
        }
    }
    return trunc(acc);
}

std::pair<std::vector<Z>, std::vector<Z>> RatFunc::int_coeffs() const {
    if (is_zero()) return {{Z(0)}, {Z(1)}};
    // bring to P(N)/Q(N) with P, Q ordinary polynomials
    int lo = num_.min_exp();
    std::vector<Q> P(num_.max_exp() - lo + 1);
    for (auto& [e, c] : num_.terms()) P[e - lo] = c;
    std::vector<Q> D{Q(1)};
    for (auto& [k, m] : den_)
        for (int i = 0; i < m; ++i) {
            std::vector<Q> nd(D.size() + 1);
            for (size_t j = 0; j < D.size(); ++j) {
                nd[j] += D[j] * k;
                nd[j + 1] += D[j];
            }
            D = std::move(nd);
        }
    if (lo > 0)
        P.insert(P.begin(), lo, Q(0));
    else if (lo < 0)
        D.insert(D.begin(), -lo, Q(0));
    // clear denominators, then remove content
    Z l = 1;
    for (auto* v : {&P, &D})
        for (auto& q : *v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    std::vector<Z> p, d;
    for (auto& q : P) p.push_back(Z(q * l));
    for (auto& q : D) d.push_back(Z(q * l));
    Z g = 0;
    for (auto* v : {&p, &d})
        for (auto& z : *v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    if (d.back() < 0) g = -g;
    for (auto* v : {&p, &d})
        for (auto& z : *v) z /= g;
    return {p, d};
}

namespace {
std::string zlist(const std::vector<Z>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s + "]";
}

std::vector<Z> parse_zlist(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument("bad coefficient list: " + s);
    std::vector<Z> out;
    std::stringstream ss(s.substr(1, s.size() - 2));
    std::string tok;
    while (std::getline(ss, tok, ',')) out.emplace_back(tok);
    if (out.empty()) throw std::invalid_argument("empty coefficient list");
    return out;
}
}  // namespace

std::string RatFunc::serialize() const {
    auto [p, d] = int_coeffs();
    return zlist(p) + "/" + zlist(d);
}

RatFunc RatFunc::deserialize(const std::string& s) {
    auto slash = s.find("]/[");
    if (slash == std::string::npos) throw std::invalid_argument("bad rational function: " + s);
    auto p = parse_zlist(s.substr(0, slash + 1));
    auto d = parse_zlist(s.substr(slash + 2));
    LaurentPoly num;
    for (size_t i = 0; i < p.size(); ++i) num.add_term(int(i), Q(p[i]));
    // factor the denominator into N^a prod (N+k)^e over integer roots
    std::vector<Q> D(d.begin(), d.end());
    int shift = 0;
    while (D.size() > 1 && D.front() == 0) {
        D.erase(D.begin());
        ++shift;
    }
    std::map<int, int> den;
    while (D.size() > 1) {
        // integer roots divide the constant term of the primitive form
        Z l = 1;
        for (auto& q : D) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
        Z ct = abs(Z(D.front() * l));
        if (!ct.fits_slong_p()) throw std::invalid_argument("denominator constant term too large");
        long lim = ct.get_si();
        bool found = false;
        for (long k = 1; k <= lim && !found; ++k) {
            if (lim % k) continue;
            for (long sk : {k, -k}) {
                Q v = 0, pw = 1;
                for (auto& q : D) {
                    v += q * pw;
                    pw *= -sk;
                }
                if (v != 0) continue;
                std::vector<Q> nd(D.size() - 1);
                Q carry = 0;
                for (size_t i = D.size() - 1; i >= 1; --i) {
                    carry = D[i] + carry * Q(-sk);
                    nd[i - 1] = carry;
                }
                D = std::move(nd);
                ++den[int(sk)];
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("denominator does not split over the integers");
    }
    num *= Q(1) / D.front();
    return RatFunc(num.shifted(-shift), den);
}

std::string RatFunc::str() const {
    if (den_.empty()) return num_.str();
    std::string d;
    for (auto& [k, e] : den_) {
        d += "(N" + std::string(k > 0 ? "+" : "-") + std::to_string(std::abs(k)) + ")";
        if (e > 1) d += "^" + std::to_string(e);
    }
    return "(" + num_.str() + ")/" + d;
}

}  // namespace tf
