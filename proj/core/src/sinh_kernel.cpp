#include "qsa/sinh_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "qsa/errors.hpp"

namespace qsa {

namespace {

using Key = std::tuple<int, int, int, int>; // (t_inv_pow, x_pow, cosh_pow, sinh_pow)

void add_coeff(std::map<Key, long long>& acc, const Key& key, long long c) {
    long long& slot = acc[key];
    if (__builtin_add_overflow(slot, c, &slot))
        throw std::overflow_error("sinh_op_apply: integer coefficient overflow");
}

long long mul_checked(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("sinh_op_apply: integer coefficient overflow");
    return r;
}

// ---- double-double arithmetic for the small-x cancellation region ----

struct DD {
    double hi = 0, lo = 0;
};

DD dd_from(double a) { return {a, 0.0}; }

DD dd_add(DD a, DD b) {
    double s = a.hi + b.hi;
    const double bb = s - a.hi;
    double err = (a.hi - (s - bb)) + (b.hi - bb);
    err += a.lo + b.lo;
    const double hi = s + err;
    return {hi, err - (hi - s)};
}

DD dd_mul(DD a, DD b) {
    const double p = a.hi * b.hi;
    double err = std::fma(a.hi, b.hi, -p);
    err += a.hi * b.lo + a.lo * b.hi;
    const double hi = p + err;
    return {hi, err - (hi - p)};
}

DD dd_div(DD a, DD b) {
    const double q1 = a.hi / b.hi;
    DD r = dd_add(a, dd_mul(dd_from(-q1), b));
    const double q2 = r.hi / b.hi;
    r = dd_add(r, dd_mul(dd_from(-q2), b));
    const double q3 = r.hi / b.hi;
    DD q = dd_add(dd_from(q1), dd_from(q2));
    return dd_add(q, dd_from(q3));
}

DD dd_ipow(DD base, int e) {
    DD r = dd_from(1.0);
    DD b = base;
    int k = e < 0 ? -e : e;
    while (k) {
        if (k & 1) r = dd_mul(r, b);
        b = dd_mul(b, b);
        k >>= 1;
    }
    if (e < 0) r = dd_div(dd_from(1.0), r);
    return r;
}

// Taylor series of sinh/cosh; for |x| < 0.05 six terms reach ~1e-34.
DD dd_sinh_small(double x) {
    const DD x2 = dd_mul(dd_from(x), dd_from(x));
    DD term = dd_from(x);
    DD sum = term;
    for (int k = 1; k <= 8; ++k) {
        term = dd_mul(term, x2);
        term = dd_div(term, dd_from(double(2 * k) * double(2 * k + 1)));
        sum = dd_add(sum, term);
        if (std::fabs(term.hi) < 1e-40 * std::fabs(sum.hi)) break;
    }
    return sum;
}

DD dd_cosh_small(double x) {
    const DD x2 = dd_mul(dd_from(x), dd_from(x));
    DD term = dd_from(1.0);
    DD sum = term;
    for (int k = 1; k <= 8; ++k) {
        term = dd_mul(term, x2);
        term = dd_div(term, dd_from(double(2 * k - 1) * double(2 * k)));
        sum = dd_add(sum, term);
        if (std::fabs(term.hi) < 1e-40 * std::fabs(sum.hi)) break;
    }
    return sum;
}

// ---- term-list cache keyed by n ----

std::mutex g_cache_mutex;
std::map<int, std::unique_ptr<const std::vector<SinhOpTerm>>> g_cache;

const std::vector<SinhOpTerm>* cached_terms(int n) {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_cache.find(n);
    if (it == g_cache.end()) {
        auto terms = sinh_op_apply({SinhOpTerm{1, 0, 0, 0, 0}}, 2 * n);
        it = g_cache.emplace(n, std::make_unique<const std::vector<SinhOpTerm>>(std::move(terms))).first;
    }
    return it->second.get();
}

double log_cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)) - 0.6931471805599453094; }
double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - 0.6931471805599453094; }

} // namespace

std::vector<SinhOpTerm> sinh_op_apply(std::vector<SinhOpTerm> terms, int k) {
    if (k < 0) throw DomainError("sinh_op_apply requires k >= 0");
    for (int step = 0; step < k; ++step) {
        std::map<Key, long long> acc;
        for (const SinhOpTerm& t : terms) {
            // d/dx then multiply by 1/sinh: every output sinh power is shifted by -1.
            if (t.x_pow != 0)
                add_coeff(acc, {t.t_inv_pow, t.x_pow - 1, t.cosh_pow, t.sinh_pow - 1},
                          mul_checked(t.coeff, t.x_pow));
            if (t.cosh_pow != 0)
                add_coeff(acc, {t.t_inv_pow, t.x_pow, t.cosh_pow - 1, t.sinh_pow},
                          mul_checked(t.coeff, t.cosh_pow));
            if (t.sinh_pow != 0)
                add_coeff(acc, {t.t_inv_pow, t.x_pow, t.cosh_pow + 1, t.sinh_pow - 2},
                          mul_checked(t.coeff, t.sinh_pow));
            // Gaussian factor: d e^{-x^2/2t} = -(x/t) e^{-x^2/2t}
            add_coeff(acc, {t.t_inv_pow + 1, t.x_pow + 1, t.cosh_pow, t.sinh_pow - 1},
                      mul_checked(t.coeff, -1));
        }
        terms.clear();
        for (const auto& [key, c] : acc)
            if (c != 0)
                terms.push_back({c, std::get<0>(key), std::get<1>(key), std::get<2>(key),
                                 std::get<3>(key)});
    }
    return terms;
}

double sinh_op_eval(const std::vector<SinhOpTerm>& terms, double t, double x) {
    const double ch = std::cosh(x), sh = std::sinh(x);
    double sum = 0.0;
    for (const SinhOpTerm& tm : terms) {
        double v = double(tm.coeff) * std::pow(t, -tm.t_inv_pow) * std::pow(x, tm.x_pow);
        if (tm.cosh_pow) v *= std::pow(ch, tm.cosh_pow);
        if (tm.sinh_pow) v *= std::pow(sh, tm.sinh_pow);
        sum += v;
    }
    return sum * std::exp(-x * x / (2.0 * t));
}

HyperbolicHeatKernel::HyperbolicHeatKernel(int n) : n_(n), terms_(nullptr) {
    if (n < 1) throw DomainError("HyperbolicHeatKernel requires n >= 1");
    terms_ = cached_terms(n);
}

double HyperbolicHeatKernel::operator()(double t, double x) const {
    if (!(t > 0.0)) throw DomainError("heat kernel requires t > 0");
    if (!(x > 0.0)) throw DomainError("heat kernel requires x > 0");
    const double log_pref = -2.0 * double(n_) * double(n_) * t -
                            2.0 * n_ * std::log(2.0 * M_PI) -
                            0.5 * std::log(2.0 * M_PI * t);
    if (x >= 30.0) {
        const double lv = log_value(t, x);
        return std::isfinite(lv) ? std::exp(lv) : 0.0;
    }
    if (x < 0.05) {
        // cancellation between x^a sinh^{-|s|} monomials reaches ~x^{-4n}
        const DD ch = dd_cosh_small(x);
        const DD sh = dd_sinh_small(x);
        DD sum = dd_from(0.0);
        for (const SinhOpTerm& tm : *terms_) {
            DD v = dd_from(double(tm.coeff));
            v = dd_mul(v, dd_ipow(dd_from(t), -tm.t_inv_pow));
            v = dd_mul(v, dd_ipow(dd_from(x), tm.x_pow));
            if (tm.cosh_pow) v = dd_mul(v, dd_ipow(ch, tm.cosh_pow));
            if (tm.sinh_pow) v = dd_mul(v, dd_ipow(sh, tm.sinh_pow));
            sum = dd_add(sum, v);
        }
        return sum.hi * std::exp(-x * x / (2.0 * t) + log_pref);
    }
    return sinh_op_eval(*terms_, t, x) * std::exp(log_pref);
}

double HyperbolicHeatKernel::log_value(double t, double x) const {
    if (!(t > 0.0)) throw DomainError("heat kernel requires t > 0");
    if (!(x > 0.0)) throw DomainError("heat kernel requires x > 0");
    if (x < 0.05) {
        const double v = (*this)(t, x);
        return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
    }
    const double log_pref = -2.0 * double(n_) * double(n_) * t -
                            2.0 * n_ * std::log(2.0 * M_PI) -
                            0.5 * std::log(2.0 * M_PI * t);
    const double lx = std::log(x), lt = std::log(t);
    const double lch = log_cosh(x), lsh = log_sinh(x);
    double shift = -std::numeric_limits<double>::infinity();
    for (const SinhOpTerm& tm : *terms_)
        shift = std::max(shift, tm.x_pow * lx - tm.t_inv_pow * lt + tm.cosh_pow * lch +
                                    tm.sinh_pow * lsh);
    double sum = 0.0;
    for (const SinhOpTerm& tm : *terms_) {
        const double theta = tm.x_pow * lx - tm.t_inv_pow * lt + tm.cosh_pow * lch +
                             tm.sinh_pow * lsh;
        sum += double(tm.coeff) * std::exp(theta - shift);
    }
    if (!(sum > 0.0)) return -std::numeric_limits<double>::infinity();
    return -x * x / (2.0 * t) + shift + std::log(sum) + log_pref;
}

} // namespace qsa
