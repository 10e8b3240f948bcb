#pragma once

// One operator instance (E, lambda, alpha, theta).  The even-site potential
// is lambda*tan(pi(theta + n*alpha/2)); site angles are reduced mod 1 in
// MPFR so pole distances survive large |n|.

#include <cmath>
#include <vector>

#include "mosaic/continued_fraction.hpp"
#include "mosaic/errors.hpp"
#include "mosaic/real.hpp"

namespace mosaic {

inline constexpr double kPoleGuard = 1e-13;

struct ModelParams {
    double E = 0.0;
    double lambda = 1.0;
    ContinuedFraction cf;
    Real theta{256};

    double alpha_d() const { return cf.value.to_double(); }
    double theta_d() const { return frac1(theta).to_double(); }
};

inline ModelParams make_params(double E, double lambda, ContinuedFraction cf, Real theta) {
    ModelParams p;
    p.E = E;
    p.lambda = lambda;
    p.cf = std::move(cf);
    p.theta = std::move(theta);
    return p;
}

// frac(theta + n*alpha/2) for n = from..to, one mpfr pass
inline std::vector<double> site_angle_fracs(const ModelParams& p, long from, long to) {
    const mpfr_prec_t W = std::max(working_prec(p.cf), p.theta.prec());
    Real half_alpha(W);
    mpfr_div_ui(half_alpha.raw(), p.cf.value.raw(), 2, MPFR_RNDN);
    Real ang(W);
    mpfr_mul_si(ang.raw(), half_alpha.raw(), from, MPFR_RNDN);
    mpfr_add(ang.raw(), ang.raw(), p.theta.raw(), MPFR_RNDN);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(to - from + 1));
    for (long n = from; n <= to; ++n) {
        out.push_back(frac1(ang).to_double());
        mpfr_add(ang.raw(), ang.raw(), half_alpha.raw(), MPFR_RNDN);
    }
    return out;
}

// distance of the site angle to the tan pole at 1/2
inline double pole_distance(double angle_frac) { return std::fabs(angle_frac - 0.5); }

} // namespace mosaic
