#pragma once

// Per-scale arithmetic indices beta_n, delta_n and the resonant-phase
// constructor.  delta_n follows the ln||q_n(theta-1/2)|| - ln||q_n alpha||
// normalization; the ln q_{n+1} variant is recorded alongside so the two
// finite-depth readings can be compared downstream.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "mosaic/continued_fraction.hpp"
#include "mosaic/errors.hpp"
#include "mosaic/real.hpp"

namespace mosaic {

struct ArithmeticProfile {
    std::vector<double> beta_seq;       // beta_n, n = 1..depth
    std::vector<double> delta_seq;      // (ln||q_n(theta-1/2)|| - ln||q_n alpha||)/q_n
    std::vector<double> delta_alt_seq;  // (ln q_{n+1} + ln||q_n(theta-1/2)||)/q_n
    double beta_hat = 0.0;
    double delta_hat = 0.0;
    double delta_alt_hat = 0.0;
    int depth = 0;
    int n_min = 1;

    double beta(int n) const { return beta_seq.at(static_cast<size_t>(n - 1)); }
    double delta(int n) const { return delta_seq.at(static_cast<size_t>(n - 1)); }
};

namespace detail {

inline constexpr long kOrbitScanCap = 1L << 17;

// min_{|k| <= K} ||x - k*alpha||, scanned at working precision
inline Real orbit_min_distance(const Real& x, const Real& alpha, long K, mpfr_prec_t W) {
    Real best = torus_norm(x);
    Real fwd(W), bwd(W);
    mpfr_set(fwd.raw(), x.raw(), MPFR_RNDN);
    mpfr_set(bwd.raw(), x.raw(), MPFR_RNDN);
    for (long k = 1; k <= K; ++k) {
        mpfr_sub(fwd.raw(), fwd.raw(), alpha.raw(), MPFR_RNDN);
        mpfr_add(bwd.raw(), bwd.raw(), alpha.raw(), MPFR_RNDN);
        Real a = torus_norm(fwd), b = torus_norm(bwd);
        if (a < best) best = a;
        if (b < best) best = b;
    }
    return best;
}

} // namespace detail

inline ArithmeticProfile arithmetic_profile(const ContinuedFraction& cf, const Real& theta,
                                            int depth, int n_min = 1) {
    if (depth < 1 || depth + 1 >= static_cast<int>(cf.q.size()))
        throw DepthExceeded("arithmetic_profile: depth requires q_{depth+1}");
    if (n_min < 1) n_min = 1;

    const mpfr_prec_t W = std::max(working_prec(cf), theta.prec());
    const double resolution = -0.5 * static_cast<double>(cf.precision_bits) * std::log(2.0);

    // theta not in Theta = 1/2 + alpha Z + Z, scanned up to the cap
    {
        Real x(W);
        mpfr_sub_d(x.raw(), theta.raw(), 0.5, MPFR_RNDN);
        long K = detail::kOrbitScanCap;
        if (mpz_sizeinbase(cf.q.back().get_mpz_t(), 2) < 40) {
            long qd = cf.q.back().get_si();
            K = std::min(K, qd);
        }
        Real alpha(W);
        mpfr_set(alpha.raw(), cf.value.raw(), MPFR_RNDN);
        Real dmin = detail::orbit_min_distance(x, alpha, K, W);
        Real lmin = log(dmin);
        if (!(lmin.to_double() > resolution))
            throw ForbiddenPhase("theta within 2^-pb/2 of 1/2 + alpha Z + Z");
    }

    ArithmeticProfile prof;
    prof.depth = depth;
    prof.n_min = n_min;
    Real x(W);
    mpfr_sub_d(x.raw(), theta.raw(), 0.5, MPFR_RNDN);

    for (int n = 1; n <= depth; ++n) {
        const auto sn = static_cast<size_t>(n);
        Real lq1 = log(Real(cf.q[sn + 1], 128));
        double qn_d = Real(cf.q[sn], 128).to_double();
        double bn = lq1.to_double() / qn_d;

        Real t(W);
        mpfr_mul_z(t.raw(), x.raw(), cf.q[sn].get_mpz_t(), MPFR_RNDN);
        Real nt = torus_norm(t);
        // certification floor: q_n*x carries ~bitlen(q_n) lost bits at precision W
        long lost = static_cast<long>(mpz_sizeinbase(cf.q[sn].get_mpz_t(), 2));
        double floor_log = (static_cast<double>(lost + 16) - static_cast<double>(W)) * std::log(2.0);
        Real lnt = log(nt);
        double lnt_d = lnt.to_double();
        if (!(lnt_d > std::max(resolution, floor_log)))
            throw ForbiddenPhase("||q_n(theta-1/2)|| below certifiable resolution at n=" + std::to_string(n));

        auto [qa_lo, qa_hi] = qn_alpha_norm_bracket(cf, n);
        mpq_class mid = (qa_lo + qa_hi) / 2;
        double ln_qa = log(Real(mid, 192)).to_double();

        double dn = (lnt_d - ln_qa) / qn_d;
        double dn_alt = (lq1.to_double() + lnt_d) / qn_d;
        prof.beta_seq.push_back(bn);
        prof.delta_seq.push_back(dn);
        prof.delta_alt_seq.push_back(dn_alt);
    }

    prof.beta_hat = 0.0;
    prof.delta_hat = 0.0;
    prof.delta_alt_hat = 0.0;
    for (int n = n_min; n <= depth; ++n) {
        prof.beta_hat = std::max(prof.beta_hat, prof.beta(n));
        prof.delta_hat = std::max(prof.delta_hat, prof.delta(n));
        prof.delta_alt_hat = std::max(prof.delta_alt_hat, prof.delta_alt_seq[static_cast<size_t>(n - 1)]);
    }
    return prof;
}

struct ResonantPhase {
    Real theta{64};
    std::vector<int> subsequence;       // scales n_i where delta_{n_i} targets delta_target
    std::vector<mpz_class> digits;      // Ostrowski digits b_n actually used
    ArithmeticProfile measured;         // re-measured profile
};

// Greedy Ostrowski construction: theta = 1/2 + sum b_n sigma_n + rho with
// partial sums W_n = sum_{k<=n} b_k q_k ~ e^{delta_target q_n} at every scale
// with capacity beta_n >= delta_target + 0.2.  rho keeps theta off Theta.
inline ResonantPhase build_resonant_phase(const ContinuedFraction& cf, double delta_target, int depth) {
    if (delta_target < 0.0) throw ConfigError("build_resonant_phase: delta_target >= 0");
    if (depth + 1 >= static_cast<int>(cf.q.size())) depth = static_cast<int>(cf.q.size()) - 2;
    if (depth < 1) throw DepthExceeded("build_resonant_phase");

    // capacity scales: beta_n leaves room for the target and q_n is large
    // enough that ln-granularity stays inside the +-0.1 window
    auto has_capacity = [&](int n) {
        return beta_n(cf, n) >= delta_target + 0.2 && cf.qn(n) >= 5;
    };
    if (delta_target > 0.05) {
        bool any = false;
        for (int n = 1; n <= depth; ++n) any = any || has_capacity(n);
        double beta_hat = 0.0;
        for (int n = 1; n <= depth; ++n) beta_hat = std::max(beta_hat, beta_n(cf, n));
        if (!any)
            throw TargetUnreachable("delta_target " + std::to_string(delta_target) +
                                    " has no capacity scale (beta_hat " + std::to_string(beta_hat) + ")");
    }

    const mpfr_prec_t W = working_prec(cf);

    // digits: W_n tracks sum_{k<=n} b_k q_k
    std::vector<mpz_class> digits(static_cast<size_t>(depth) + 1, mpz_class(0));
    mpz_class Wsum = 1;  // b_0 = 1 seeds W_n ~ 1 so delta_n ~ 0 at uncontrolled scales
    digits[0] = 1;
    for (int n = 1; n <= depth; ++n) {
        if (!has_capacity(n)) continue;
        Real tq(W);
        mpfr_set_z(tq.raw(), cf.qn(n).get_mpz_t(), MPFR_RNDN);
        mpfr_mul_d(tq.raw(), tq.raw(), delta_target, MPFR_RNDN);
        mpfr_exp(tq.raw(), tq.raw(), MPFR_RNDN);
        mpz_class target = to_mpz(round(tq));
        if (target < 1) target = 1;
        mpz_class need = target - Wsum;
        if (need <= 0) continue;
        mpz_class b = (need + cf.qn(n) / 2) / cf.qn(n);
        if (n < static_cast<int>(cf.coeffs.size()) && b > cf.coeffs[static_cast<size_t>(n)])
            b = cf.coeffs[static_cast<size_t>(n)];  // capacity a_{n+1}
        digits[static_cast<size_t>(n)] = b;
        Wsum += b * cf.qn(n);
    }

    // x = sum b_n sigma_n + rho; rho keeps theta off Theta without touching
    // the measured scales, retried if it happens to collide with the orbit
    const int N = cf.depth();
    const int top = std::min(depth + 1, N - 1);
    Real x_base(W);
    mpfr_set_zero(x_base.raw(), 1);
    for (int n = 0; n <= depth; ++n) {
        if (digits[static_cast<size_t>(n)] == 0) continue;
        Real s = sigma_n(cf, n, W);
        mpfr_mul_z(s.raw(), s.raw(), digits[static_cast<size_t>(n)].get_mpz_t(), MPFR_RNDN);
        mpfr_add(x_base.raw(), x_base.raw(), s.raw(), MPFR_RNDN);
    }
    Real sig_top = abs(sigma_n(cf, top, W));

    const double rho_fracs[] = {1.0 / 3.0, 1.0 / 7.0, 2.0 / 5.0, 1.0 / 11.0, 3.0 / 7.0};
    for (double fr : rho_fracs) {
        Real rho(W);
        mpfr_div_z(rho.raw(), sig_top.raw(), cf.qn(top).get_mpz_t(), MPFR_RNDN);
        mpfr_mul_d(rho.raw(), rho.raw(), fr, MPFR_RNDN);
        Real theta(W);
        mpfr_add(theta.raw(), x_base.raw(), rho.raw(), MPFR_RNDN);
        mpfr_add_d(theta.raw(), theta.raw(), 0.5, MPFR_RNDN);
        theta = frac1(theta);
        try {
            ResonantPhase out;
            out.measured = arithmetic_profile(cf, theta, depth);
            out.theta = theta;
            out.digits = digits;
            for (int n = 1; n <= depth; ++n)
                if (std::fabs(out.measured.delta(n) - delta_target) <= 0.1) out.subsequence.push_back(n);
            if (out.subsequence.empty())
                throw TargetUnreachable("build_resonant_phase: no scale reached the target window");
            return out;
        } catch (const ForbiddenPhase&) {
            continue;  // rho collided with the orbit, try the next fraction
        }
    }
    throw ForbiddenPhase("build_resonant_phase: no rho offset cleared the orbit");
}

} // namespace mosaic
