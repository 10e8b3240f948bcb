#pragma once

// Exact continued-fraction engine.  Coefficients and convergents are exact
// big integers; the frequency itself is pinned to the exact rational bracket
// (p_N/q_N, mediant) shared by every irrational continuation of the certified
// coefficients, so torus norms of q_n*alpha can be certified by pure mpq
// comparisons.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mosaic/errors.hpp"
#include "mosaic/real.hpp"

namespace mosaic {

struct ContinuedFraction {
    std::vector<mpz_class> coeffs;   // a_1..a_N (a_0 = 0)
    std::vector<mpz_class> p, q;     // convergents p_k/q_k, k = 0..N
    Real value{64};                  // alpha in (0,1)
    int precision_bits = 256;
    bool value_is_convergent = false;  // value is exactly p_N/q_N (rational truncation)
    bool precision_exhausted = false;  // cf_expand stopped before the requested depth
    mpq_class lower, upper;            // exact open bracket containing alpha

    int depth() const { return static_cast<int>(coeffs.size()); }

    const mpz_class& qn(int n) const {
        if (n < 0 || n >= static_cast<int>(q.size())) throw DepthExceeded("q_" + std::to_string(n));
        return q[static_cast<size_t>(n)];
    }
    const mpz_class& pn(int n) const {
        if (n < 0 || n >= static_cast<int>(p.size())) throw DepthExceeded("p_" + std::to_string(n));
        return p[static_cast<size_t>(n)];
    }
};

namespace detail {

inline void push_convergent(std::vector<mpz_class>& p, std::vector<mpz_class>& q, const mpz_class& a) {
    const size_t k = p.size();
    if (k == 0) { p.push_back(0); q.push_back(1); return; }  // k = 0 seed, no coefficient
    if (k == 1) { p.push_back(1); q.push_back(a); return; }  // p_1 = 1, q_1 = a_1
    p.push_back(a * p[k - 1] + p[k - 2]);
    q.push_back(a * q[k - 1] + q[k - 2]);
}

// open bracket of all irrational continuations: between p_N/q_N (tail -> inf)
// and the mediant (p_N+p_{N-1})/(q_N+q_{N-1}) (tail -> 1)
inline void set_bracket(ContinuedFraction& cf) {
    const size_t N = cf.p.size() - 1;
    mpq_class a(cf.p[N], cf.q[N]);
    mpq_class b(cf.p[N] + cf.p[N - 1], cf.q[N] + cf.q[N - 1]);
    a.canonicalize();
    b.canonicalize();
    cf.lower = std::min(a, b);
    cf.upper = std::max(a, b);
}

} // namespace detail

inline ContinuedFraction cf_from_coeffs(const std::vector<mpz_class>& coeffs, int precision_bits = 256) {
    if (coeffs.empty()) throw EmptyCoefficients();
    for (const auto& a : coeffs)
        if (a < 1) throw ConfigError("cf_from_coeffs: coefficients must be >= 1");
    ContinuedFraction cf;
    cf.coeffs = coeffs;
    detail::push_convergent(cf.p, cf.q, 0);
    for (const auto& a : coeffs) detail::push_convergent(cf.p, cf.q, a);
    const size_t N = coeffs.size();
    cf.precision_bits = precision_bits;
    cf.value = Real(mpq_class(cf.p[N], cf.q[N]), precision_bits);
    cf.value_is_convergent = true;
    detail::set_bracket(cf);
    return cf;
}

inline ContinuedFraction cf_from_coeffs(const std::vector<long>& coeffs, int precision_bits = 256) {
    std::vector<mpz_class> z(coeffs.begin(), coeffs.end());
    return cf_from_coeffs(z, precision_bits);
}

// Gauss-map expansion with interval certification.  Each coefficient is
// accepted only if the whole uncertainty ball around alpha agrees on it.
inline ContinuedFraction cf_expand(const Real& alpha, int depth, int precision_bits,
                                   bool allow_partial = false) {
    if (depth < 1) throw ConfigError("cf_expand: depth >= 1 required");
    if (alpha <= 0.0 || alpha >= 1.0) throw NotInUnitInterval();

    const mpfr_prec_t W = precision_bits + 32;
    Real lo(W), hi(W), ball(W);
    mpfr_set_ui_2exp(ball.raw(), 1, 1 - precision_bits, MPFR_RNDU);
    mpfr_sub(lo.raw(), alpha.raw(), ball.raw(), MPFR_RNDD);
    mpfr_add(hi.raw(), alpha.raw(), ball.raw(), MPFR_RNDU);

    std::vector<mpz_class> coeffs;
    bool exhausted = false;
    Real ilo(W), ihi(W);
    for (int k = 1; k <= depth; ++k) {
        if (mpfr_sgn(lo.raw()) <= 0) { exhausted = true; break; }  // ball touches a rational
        mpfr_ui_div(ilo.raw(), 1, hi.raw(), MPFR_RNDD);
        mpfr_ui_div(ihi.raw(), 1, lo.raw(), MPFR_RNDU);
        mpz_class alo, ahi;
        mpfr_get_z(alo.get_mpz_t(), ilo.raw(), MPFR_RNDD);
        mpfr_get_z(ahi.get_mpz_t(), ihi.raw(), MPFR_RNDD);
        if (alo != ahi || alo < 1) { exhausted = true; break; }
        coeffs.push_back(alo);
        Real nlo(W), nhi(W);
        mpfr_sub_z(nlo.raw(), ilo.raw(), alo.get_mpz_t(), MPFR_RNDD);
        mpfr_sub_z(nhi.raw(), ihi.raw(), alo.get_mpz_t(), MPFR_RNDU);
        lo = nlo;
        hi = nhi;
    }
    if (coeffs.empty() || (exhausted && !allow_partial))
        throw PrecisionExhausted("cf_expand: " + std::to_string(coeffs.size()) + " of " +
                                 std::to_string(depth) + " coefficients certifiable");

    ContinuedFraction cf = cf_from_coeffs(coeffs, precision_bits);
    cf.value = alpha;
    cf.value_is_convergent = false;
    cf.precision_exhausted = exhausted;
    return cf;
}

// ||q_n alpha|| as an exact rational interval, certified against eq. (2.2).
inline std::pair<mpq_class, mpq_class> qn_alpha_norm_bracket(const ContinuedFraction& cf, int n) {
    if (n < 0 || n + 1 >= static_cast<int>(cf.q.size())) throw DepthExceeded("qn_alpha_norm: need q_{n+1}");
    const auto sn = static_cast<size_t>(n);
    mpq_class a = cf.q[sn] * cf.lower - cf.p[sn];
    mpq_class b = cf.q[sn] * cf.upper - cf.p[sn];
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    mpq_class lo = std::min(a, b), hi = std::max(a, b);
    mpq_class bound_lo(1, 2 * cf.q[sn + 1]), bound_hi(1, cf.q[sn + 1]);
    bound_lo.canonicalize();
    bound_hi.canonicalize();
    if (lo < bound_lo || hi > bound_hi)
        throw PrecisionExhausted("qn_alpha_norm: eq. (2.2) certification failed at n=" + std::to_string(n));
    return {lo, hi};
}

inline Real qn_alpha_norm(const ContinuedFraction& cf, int n) {
    auto [lo, hi] = qn_alpha_norm_bracket(cf, n);
    mpq_class mid = (lo + hi) / 2;
    return Real(mid, std::max(256, cf.precision_bits));
}

inline double beta_n(const ContinuedFraction& cf, int n) {
    if (n < 1 || n + 1 >= static_cast<int>(cf.q.size())) throw DepthExceeded("beta_n");
    Real lq(Real(cf.q[static_cast<size_t>(n) + 1], 128));
    Real l = log(lq);
    Real qn(cf.q[static_cast<size_t>(n)], 128);
    return (l / qn).to_double();
}

struct LiouvilleBuild {
    ContinuedFraction cf;
    std::vector<double> achieved_beta;  // beta_n for n = 1..depth-1
};

// Prescribed-beta frequency: a_{n+1} = max(1, ceil(e^{beta q_n}/q_n)).
inline LiouvilleBuild build_liouville(double beta_target, int depth, long budget_bits = (1L << 22),
                                      int precision_bits = 0) {
    if (!(beta_target > 0.0 && beta_target <= 10.0)) throw ConfigError("build_liouville: beta_target in (0,10]");
    if (depth < 3) throw ConfigError("build_liouville: depth >= 3");
    std::vector<mpz_class> coeffs{1};
    std::vector<mpz_class> p, q;
    detail::push_convergent(p, q, 0);
    detail::push_convergent(p, q, coeffs[0]);
    for (int n = 1; n < depth; ++n) {
        // bits of a_{n+1} ~ beta*q_n/ln2
        Real qn(q[static_cast<size_t>(n)], 128);
        double bits_est = beta_target * qn.to_double() * 1.4427;
        if (!(bits_est < static_cast<double>(budget_bits)))
            throw OverflowBudget("build_liouville: a_" + std::to_string(n + 1) + " needs ~" +
                                 std::to_string(static_cast<long>(bits_est)) + " bits");
        const mpfr_prec_t W = static_cast<mpfr_prec_t>(bits_est) + 96;
        Real e(W);
        mpfr_mul_d(e.raw(), qn.raw(), beta_target, MPFR_RNDN);
        mpfr_exp(e.raw(), e.raw(), MPFR_RNDN);
        mpfr_div_z(e.raw(), e.raw(), q[static_cast<size_t>(n)].get_mpz_t(), MPFR_RNDN);
        mpfr_ceil(e.raw(), e.raw());
        mpz_class a = to_mpz(e);
        if (a < 1) a = 1;
        coeffs.push_back(a);
        detail::push_convergent(p, q, a);
        if (static_cast<long>(mpz_sizeinbase(q.back().get_mpz_t(), 2)) > budget_bits)
            throw OverflowBudget("build_liouville: q_" + std::to_string(n + 1) + " over budget");
    }
    long qbits = static_cast<long>(mpz_sizeinbase(q.back().get_mpz_t(), 2));
    int pb = precision_bits > 0 ? precision_bits : static_cast<int>(std::max(256L, 4 * qbits + 64));
    LiouvilleBuild out{cf_from_coeffs(coeffs, pb), {}};
    for (int n = 1; n + 1 < static_cast<int>(out.cf.q.size()); ++n)
        out.achieved_beta.push_back(beta_n(out.cf, n));
    return out;
}

// signed q_n*alpha - p_n at working precision W
inline Real sigma_n(const ContinuedFraction& cf, int n, mpfr_prec_t W) {
    Real s(W);
    mpfr_mul_z(s.raw(), cf.value.raw(), cf.qn(n).get_mpz_t(), MPFR_RNDN);
    mpfr_sub_z(s.raw(), s.raw(), cf.pn(n).get_mpz_t(), MPFR_RNDN);
    return s;
}

inline mpfr_prec_t working_prec(const ContinuedFraction& cf) {
    long qbits = static_cast<long>(mpz_sizeinbase(cf.q.back().get_mpz_t(), 2));
    return static_cast<mpfr_prec_t>(std::max({256L, 4 * qbits, static_cast<long>(cf.precision_bits)}));
}

} // namespace mosaic
