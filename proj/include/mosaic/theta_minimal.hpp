#pragma once

// Anti-resonance machinery: theta-minimal (m, ell) search on scale q_n,
// the cosine values c_{n,ell} at the reindexed even sublattice, and the
// resonant / even-resonant site labels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mosaic/arithmetic_profile.hpp"
#include "mosaic/continued_fraction.hpp"
#include "mosaic/errors.hpp"
#include "mosaic/real.hpp"

namespace mosaic {

struct ThetaMinimalPoint {
    long m_n = 0;
    long ell_n = 0;
    int scale_n = 0;
    double witness_norm = 0.0;
    bool ell_truncated = false;  // |ell| search range hit the configured cap
    bool j_truncated = false;    // condition (4i) j range hit the cap
};

struct SearchDiagnostics {
    long fail_cond3 = 0;
    long fail_cond4 = 0;
    long candidates = 0;
};

namespace detail {

inline double wrap_half(double x) {
    double f = x - std::floor(x);
    return f < 0.5 ? f : f - 1.0;  // representative in [-1/2, 1/2)
}

inline long qn_as_long(const ContinuedFraction& cf, int n, long cap, const char* who) {
    if (mpz_sizeinbase(cf.qn(n).get_mpz_t(), 2) > 62 || cf.qn(n) > cap)
        throw IntervalTooLarge(std::string(who) + ": q_n exceeds desk-scale cap");
    return cf.qn(n).get_si();
}

} // namespace detail

inline constexpr long kEllSearchCap = 1000000;
inline constexpr long kJSearchCap = 64;

inline ThetaMinimalPoint find_theta_minimal(const ContinuedFraction& cf, const Real& theta, int n,
                                            SearchDiagnostics* diag = nullptr) {
    const long qn = detail::qn_as_long(cf, n, 2000000L, "find_theta_minimal");
    const mpfr_prec_t W = std::max(working_prec(cf), theta.prec());

    ArithmeticProfile prof = arithmetic_profile(cf, theta, n);
    const double dn = std::max(0.0, prof.delta(n));
    const double u = abs(sigma_n(cf, n, W)).to_double();  // ||q_n alpha||
    const double sig = sigma_n(cf, n, W).to_double();
    const double alpha = cf.value.to_double();

    bool ell_truncated = false;
    long ellmax;
    double ellmax_d = (std::exp(std::min(40.0, dn * static_cast<double>(qn))) +
                       static_cast<double>(qn) + 0.5) / static_cast<double>(qn);
    if (dn * static_cast<double>(qn) >= 40.0 || ellmax_d > static_cast<double>(kEllSearchCap)) {
        ellmax = kEllSearchCap;
        ell_truncated = true;
    } else {
        ellmax = static_cast<long>(ellmax_d);
    }

    // x_m = theta - 1/2 + m alpha, representative in [-1/2, 1/2)
    Real x0r(W);
    mpfr_sub_d(x0r.raw(), theta.raw(), 0.5, MPFR_RNDN);
    const double x0 = detail::wrap_half(frac1(x0r).to_double());
    std::vector<double> xs(static_cast<size_t>(qn) + 1);  // index m + qn/2
    const long mlo = -(qn / 2);
    {
        double fwd = x0;
        for (long m = 0; m < qn - qn / 2; ++m) {
            xs[static_cast<size_t>(m - mlo)] = detail::wrap_half(fwd);
            fwd += alpha;
            if (fwd >= 0.5) fwd -= 1.0;
        }
        double bwd = x0;
        for (long m = -1; m >= mlo; --m) {
            bwd -= alpha;
            if (bwd < -0.5) bwd += 1.0;
            xs[static_cast<size_t>(m - mlo)] = detail::wrap_half(bwd);
        }
    }
    double window_min = 1.0;
    for (long m = mlo; m < qn - qn / 2; ++m) window_min = std::min(window_min, std::fabs(xs[static_cast<size_t>(m - mlo)]));

    const mpz_class& an1 = cf.coeffs.at(static_cast<size_t>(n));  // a_{n+1}
    const bool big_branch = an1 >= 4;
    long jmax = 0;
    bool j_truncated = false;
    if (big_branch) {
        mpz_class j6 = an1 / 6;
        if (j6 > kJSearchCap) { jmax = kJSearchCap; j_truncated = true; }
        else jmax = j6.get_si();
    }

    SearchDiagnostics local;
    const double thresh3 = (0.5 + 0.5 / static_cast<double>(qn)) * u;

    auto cond4_holds = [&](long m) -> bool {
        const double xm = xs[static_cast<size_t>(m - mlo)];
        if (!big_branch) {
            return std::fabs(xm) <= 20.0 * window_min;
        }
        for (long j = -jmax; j <= jmax; ++j) {
            double y = detail::wrap_half(xm + static_cast<double>(j) * sig);
            // min over |k| < q_n of ||y + k alpha||
            double mn = std::fabs(y);
            double f = y, b = y;
            for (long k = 1; k < qn; ++k) {
                f += alpha; if (f >= 0.5) f -= 1.0;
                b -= alpha; if (b < -0.5) b += 1.0;
                mn = std::min({mn, std::fabs(f), std::fabs(b)});
            }
            if (std::fabs(y) > 20.0 * mn) return false;
        }
        return true;
    };

    // tie-break order: |m| ascending, positive first; then |ell| ascending, positive first
    for (long mi = 0; mi < qn; ++mi) {
        long m = (mi % 2 == 1) ? (mi + 1) / 2 : -(mi / 2);  // 0, +1, -1, +2, -2, ...
        if (m < mlo || m >= qn - qn / 2) continue;
        const double xm = xs[static_cast<size_t>(m - mlo)];
        std::vector<long> cand;
        if (ellmax <= 4096) {
            for (long ell = -ellmax; ell <= ellmax; ++ell) cand.push_back(ell);
        } else {
            // condition (3) needs x_m + ell*sig near an integer k; enumerate k
            long kspan = static_cast<long>(std::ceil(static_cast<double>(ellmax) * std::fabs(sig))) + 1;
            for (long k = -kspan; k <= kspan; ++k) {
                long ell0 = (sig != 0.0)
                                ? static_cast<long>(std::llround((static_cast<double>(k) - xm) / sig))
                                : 0;
                for (long d = -1; d <= 1; ++d)
                    if (std::labs(ell0 + d) <= ellmax) cand.push_back(ell0 + d);
            }
        }
        std::sort(cand.begin(), cand.end(), [](long a, long b) {
            long aa = std::labs(a), bb = std::labs(b);
            return aa != bb ? aa < bb : a > b;
        });
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (long ell : cand) {
            ++local.candidates;
            double w = std::fabs(detail::wrap_half(xm + static_cast<double>(ell) * sig));
            if (!(w < thresh3)) { ++local.fail_cond3; continue; }
            if (!cond4_holds(m)) { ++local.fail_cond4; continue; }
            ThetaMinimalPoint pt;
            pt.m_n = m;
            pt.ell_n = ell;
            pt.scale_n = n;
            pt.ell_truncated = ell_truncated;
            pt.j_truncated = j_truncated;
            // high-precision witness
            Real wr(W);
            mpz_class shift = m + mpz_class(ell) * cf.qn(n);
            mpfr_mul_z(wr.raw(), cf.value.raw(), shift.get_mpz_t(), MPFR_RNDN);
            mpfr_add(wr.raw(), wr.raw(), theta.raw(), MPFR_RNDN);
            mpfr_sub_d(wr.raw(), wr.raw(), 0.5, MPFR_RNDN);
            pt.witness_norm = torus_norm(wr).to_double();
            if (diag) *diag = local;
            return pt;
        }
    }
    if (diag) *diag = local;
    throw NotFound("find_theta_minimal: no (m,ell) at scale " + std::to_string(n) +
                   " [cond3 fails " + std::to_string(local.fail_cond3) +
                   ", cond4 fails " + std::to_string(local.fail_cond4) +
                   (ell_truncated ? ", ell range truncated" : "") + "]");
}

// re-checks the four defining inequalities at prec_scale x working precision
inline bool verify_theta_minimal(const ContinuedFraction& cf, const Real& theta,
                                 const ThetaMinimalPoint& pt, int prec_scale = 2) {
    const int n = pt.scale_n;
    const long qn = detail::qn_as_long(cf, n, 2000000L, "verify_theta_minimal");
    const mpfr_prec_t W = static_cast<mpfr_prec_t>(std::max(working_prec(cf), theta.prec()) * prec_scale);

    if (!(pt.m_n >= -(qn / 2) && pt.m_n < qn - qn / 2)) return false;

    ArithmeticProfile prof = arithmetic_profile(cf, theta, n);
    const double dn = std::max(0.0, prof.delta(n));
    double ellmax_d = (std::exp(std::min(40.0, dn * static_cast<double>(qn))) +
                       static_cast<double>(qn) + 0.5) / static_cast<double>(qn);
    if (dn * static_cast<double>(qn) < 40.0 && std::labs(pt.ell_n) > ellmax_d && !pt.ell_truncated) return false;

    Real alpha(W);
    mpfr_set(alpha.raw(), cf.value.raw(), MPFR_RNDN);
    auto norm_at = [&](const mpz_class& shift) {
        Real r(W);
        mpfr_mul_z(r.raw(), alpha.raw(), shift.get_mpz_t(), MPFR_RNDN);
        mpfr_add(r.raw(), r.raw(), theta.raw(), MPFR_RNDN);
        mpfr_sub_d(r.raw(), r.raw(), 0.5, MPFR_RNDN);
        return torus_norm(r).to_double();
    };

    const double u = abs(sigma_n(cf, n, W)).to_double();
    mpz_class shift = pt.m_n + mpz_class(pt.ell_n) * cf.qn(n);
    if (!(norm_at(shift) < (0.5 + 0.5 / static_cast<double>(qn)) * u)) return false;

    const mpz_class& an1 = cf.coeffs.at(static_cast<size_t>(n));
    if (an1 >= 4) {
        mpz_class j6 = an1 / 6;
        long jmax = j6 > kJSearchCap ? kJSearchCap : j6.get_si();
        for (long j = -jmax; j <= jmax; ++j) {
            mpz_class base = pt.m_n + mpz_class(j) * cf.qn(n);
            double lhs = norm_at(base);
            double mn = lhs;
            for (long k = 1; k < qn; ++k) {
                mn = std::min(mn, norm_at(base + k));
                mn = std::min(mn, norm_at(base - k));
            }
            if (lhs > 20.0 * mn) return false;
        }
    } else {
        double lhs = norm_at(mpz_class(pt.m_n));
        double mn = lhs;
        for (long k = -(qn / 2); k < qn - qn / 2; ++k) mn = std::min(mn, norm_at(mpz_class(k)));
        if (lhs > 20.0 * mn) return false;
    }
    return true;
}

// c_{n,ell} = |cos(pi (theta + (m_n + ell q_n) alpha))|
inline double c_n_ell(const ContinuedFraction& cf, const Real& theta, int n, long ell,
                      const ThetaMinimalPoint* cached = nullptr) {
    mpz_class bound = cf.qn(n + 1) / (6 * cf.qn(n));
    if (bound < 1) bound = 1;  // adjacent blocks are always addressable
    if (mpz_class(std::labs(ell)) > bound) throw EllOutOfRange("c_n_ell: |ell| > q_{n+1}/(6 q_n)");
    ThetaMinimalPoint pt = cached ? *cached : find_theta_minimal(cf, theta, n);
    const mpfr_prec_t W = std::max(working_prec(cf), theta.prec());
    mpz_class shift = pt.m_n + mpz_class(ell) * cf.qn(n);
    Real a(W);
    mpfr_mul_z(a.raw(), cf.value.raw(), shift.get_mpz_t(), MPFR_RNDN);
    mpfr_add(a.raw(), a.raw(), theta.raw(), MPFR_RNDN);
    return std::fabs(cos_pi_times(frac1(a)).to_double());
}

struct ResonanceLabel {
    enum class Kind { Resonant, NonResonant, EvenResonant, NotEvenResonant };
    Kind kind = Kind::NonResonant;        // dist(y, q_n Z) vs b_n
    Kind even_kind = Kind::NotEvenResonant;  // dist(y, 2 q_n Z) vs 2 b_n
    int scale_n = 0;
    long b_n = 0;
    double tau_n = 0.0;
    bool tau_fallback = false;  // no multiple of 1/q_n in the half-open interval
};

inline ResonanceLabel classify_site_resonance(long y, const ContinuedFraction& cf, int n,
                                              double epsilon, double L) {
    if (!(epsilon > 0.0) || !(L > 0.0)) throw ConfigError("classify_site_resonance: need epsilon, L > 0");
    const long qn = detail::qn_as_long(cf, n, 2000000000L, "classify_site_resonance");
    const double mL = std::max(L, 1.0);
    ResonanceLabel lab;
    lab.scale_n = n;
    const double lo = epsilon * static_cast<double>(qn) / (2.0 * mL);
    const double hi = epsilon * static_cast<double>(qn) / mL;
    long t = static_cast<long>(std::floor(hi));
    if (static_cast<double>(t) > lo && t >= 1) {
        lab.b_n = t;
    } else {
        lab.b_n = static_cast<long>(std::ceil(lo));
        if (lab.b_n < 1) lab.b_n = 1;
        lab.tau_fallback = true;
    }
    lab.tau_n = static_cast<double>(lab.b_n) / static_cast<double>(qn);

    auto dist_to_lattice = [](long v, long period) {
        long r = v % period;
        if (r < 0) r += period;
        return std::min(r, period - r);
    };
    lab.kind = dist_to_lattice(y, qn) <= lab.b_n ? ResonanceLabel::Kind::Resonant
                                                 : ResonanceLabel::Kind::NonResonant;
    lab.even_kind = dist_to_lattice(y, 2 * qn) <= 2 * lab.b_n ? ResonanceLabel::Kind::EvenResonant
                                                              : ResonanceLabel::Kind::NotEvenResonant;
    return lab;
}

} // namespace mosaic
