#pragma once

// Transfer matrices and Lyapunov exponents.  L2 is the two-step exponent
// (the arccosh closed form equals ln rho(D_inf)); L1 = L2/2 is the per-site
// rate.  All dynamical estimates run on the regularized cocycle
// A(theta) = cos(pi theta) D(theta), whose entries stay bounded, and add
// back ln 2 at the end.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mosaic/errors.hpp"
#include "mosaic/mat2.hpp"
#include "mosaic/model.hpp"

namespace mosaic {

inline constexpr double kGoldenFrac = 0.6180339887498948482;

enum class LeMethod { ClosedForm, Dynamical, SpectralRadiusDinf };

struct LyapunovResult {
    double L2 = 0.0;  // two-step exponent
    double L1 = 0.0;  // per-site, = L2/2
    LeMethod method = LeMethod::ClosedForm;
    std::int64_t n_steps = 0;
    double std_error = 0.0;
    bool non_convergence = false;
};

inline Mat2d step_S(const ModelParams& p, long n) {
    double v = 0.0;
    if (n % 2 == 0) {
        double f = site_angle_fracs(p, n, n)[0];
        if (pole_distance(f) <= kPoleGuard) throw SingularityHit("step_S: even site " + std::to_string(n));
        v = p.lambda * std::tan(M_PI * f);
    }
    return {p.E - v, -1.0, 1.0, 0.0};
}

inline Mat2d two_step_D(const ModelParams& p, double theta_eff) {
    double f = theta_eff - std::floor(theta_eff);
    if (pole_distance(f) <= kPoleGuard) throw SingularityHit("two_step_D: pole");
    double t = p.lambda * std::tan(M_PI * f);
    double E = p.E;
    return {E * E - E * t - 1.0, -E, E - t, -1.0};
}

// cos(pi theta) * D(theta) with tan*cos expanded to sin; finite for all theta
inline Mat2d regularized_A(double E, double lambda, double theta) {
    double c = std::cos(M_PI * theta), s = std::sin(M_PI * theta);
    return {(E * E - 1.0) * c - lambda * E * s, -E * c, E * c - lambda * s, -c};
}

inline Mat2d regularized_step_A(const ModelParams& p, long j) {
    const mpfr_prec_t W = std::max(working_prec(p.cf), p.theta.prec());
    Real a(W);
    mpfr_mul_si(a.raw(), p.cf.value.raw(), j, MPFR_RNDN);
    mpfr_add(a.raw(), a.raw(), p.theta.raw(), MPFR_RNDN);
    double c = cos_pi_times(a).to_double(), s = sin_pi_times(a).to_double();
    const double E = p.E, lam = p.lambda;
    return {(E * E - 1.0) * c - lam * E * s, -E * c, E * c - lam * s, -c};
}

template <class Provider>
LogMat2d product_lognorm(Provider&& step, std::int64_t count, std::int64_t start_index = 0) {
    if (count < 1) throw ConfigError("product_lognorm: count >= 1");
    LogMat2d acc;
    for (std::int64_t j = 0; j < count; ++j) acc.push_left(step(start_index + j));
    return acc;
}

// closed form, written so that arg-1 is evaluated without cancellation
inline LyapunovResult lyapunov_closed_form(double E, double lambda) {
    double A = (E * E - 4.0) * (E * E - 4.0) + lambda * lambda * E * E;
    double sA = std::sqrt(A);
    double u = (E * E * (E * E - 8.0 + lambda * lambda) / (sA + 4.0) +
                std::fabs(E) * std::sqrt(E * E + lambda * lambda)) / 4.0;
    if (u < -1e-9) throw FormulaArgumentBelowOne("arccosh argument " + std::to_string(1.0 + u));
    if (u < 0.0) u = 0.0;
    LyapunovResult r;
    r.L2 = std::log1p(u + std::sqrt(u * (2.0 + u)));
    r.L1 = r.L2 / 2.0;
    r.method = LeMethod::ClosedForm;
    return r;
}

// spectral radius of D_inf = (E -1; 1 0)(E-i lambda -1; 1 0):
// roots of x^2 - (E^2 - i lambda E - 2) x + 1 = 0
inline LyapunovResult lyapunov_dinf(double E, double lambda) {
    std::complex<double> w(0.5 * (E * E - 2.0), -0.5 * lambda * E);
    std::complex<double> s = std::sqrt(w * w - 1.0);
    std::complex<double> x2 = (std::norm(w + s) >= std::norm(w - s)) ? w + s : w - s;
    double v = std::norm(x2) - 1.0;
    LyapunovResult r;
    r.L2 = v <= 0.0 ? 0.0 : 0.5 * std::log1p(v);
    r.L1 = r.L2 / 2.0;
    r.method = LeMethod::SpectralRadiusDinf;
    return r;
}

namespace detail {

inline double le_regularized_single(double E, double lambda, double alpha, double theta0,
                                    std::int64_t n_steps) {
    double th = theta0 - std::floor(theta0);
    double fa = alpha - std::floor(alpha);
    LogMat2d acc;
    for (std::int64_t j = 0; j < n_steps; ++j) {
        acc.push_left(regularized_A(E, lambda, th));
        th += fa;
        if (th >= 1.0) th -= 1.0;
    }
    return acc.log_norm() / static_cast<double>(n_steps);
}

inline double jackknife_se(const std::vector<double>& xs) {
    const size_t m = xs.size();
    if (m < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(m);
    double s2 = 0.0;
    for (double x : xs) s2 += (x - mean) * (x - mean);
    return std::sqrt(s2 / static_cast<double>(m * (m - 1)));
}

} // namespace detail

inline LyapunovResult lyapunov_dynamical(const ModelParams& p, std::int64_t n_steps, int n_phases,
                                         double seed_phase = -1.0) {
    if (n_steps < 1000) throw ConfigError("lyapunov_dynamical: n_steps >= 1e3");
    if (n_phases < 1) throw ConfigError("lyapunov_dynamical: n_phases >= 1");
    double th0 = seed_phase >= 0.0 ? seed_phase : p.theta_d();
    std::vector<double> per_phase;
    per_phase.reserve(static_cast<size_t>(n_phases));
    for (int i = 0; i < n_phases; ++i) {
        double th = th0 + static_cast<double>(i) * kGoldenFrac;
        per_phase.push_back(detail::le_regularized_single(p.E, p.lambda, p.alpha_d(), th, n_steps));
    }
    double mean = 0.0;
    for (double x : per_phase) mean += x;
    mean /= static_cast<double>(n_phases);
    LyapunovResult r;
    r.L2 = mean + std::log(2.0);  // L(alpha, A) = L(alpha, D) - ln 2
    r.L1 = r.L2 / 2.0;
    r.method = LeMethod::Dynamical;
    r.n_steps = n_steps * n_phases;
    r.std_error = detail::jackknife_se(per_phase);
    if (n_phases >= 2) {
        double lo = per_phase[0], hi = per_phase[0];
        for (double x : per_phase) { lo = std::min(lo, x); hi = std::max(hi, x); }
        if (hi - lo > 10.0 * std::max(r.std_error * std::sqrt(static_cast<double>(n_phases)), 1e-12) &&
            hi - lo > 1e-3)
            r.non_convergence = true;
    }
    return r;
}

// LE of theta -> D(theta + i eps); tan evaluated through its Moebius form in
// z = e^{2 pi i (theta + i eps)}, bounded for eps > 0
inline double complexified_le(double E, double lambda, double eps, std::int64_t n_steps = 100000,
                              int n_phases = 2, double alpha = kGoldenFrac, double seed_phase = 0.2137) {
    if (eps < 0.0) throw ConfigError("complexified_le: eps >= 0");
    const double r = std::exp(-2.0 * M_PI * eps);
    const std::complex<double> zstep = std::polar(1.0, 2.0 * M_PI * (alpha - std::floor(alpha)));
    const std::complex<double> I(0.0, 1.0);
    std::vector<double> per_phase;
    for (int i = 0; i < n_phases; ++i) {
        double th0 = seed_phase + static_cast<double>(i) * kGoldenFrac;
        std::complex<double> z = std::polar(r, 2.0 * M_PI * (th0 - std::floor(th0)));
        LogMat2c acc;
        for (std::int64_t j = 0; j < n_steps; ++j) {
            if (std::abs(z + 1.0) < 1e-12) throw SingularityHit("complexified_le: orbit hit the pole");
            std::complex<double> t = lambda * (-I) * (z - 1.0) / (z + 1.0);
            acc.push_left(Mat2c{E * E - E * t - 1.0, {-E, 0.0}, E - t, {-1.0, 0.0}});
            z *= zstep;
            if ((j & 4095) == 4095) z *= r / std::abs(z);  // keep |z| pinned
        }
        per_phase.push_back(acc.log_norm() / static_cast<double>(n_steps));
    }
    double mean = 0.0;
    for (double x : per_phase) mean += x;
    return mean / static_cast<double>(n_phases);
}

struct AccelerationEstimate {
    double omega = 0.0;
    double snapped_half_integer = 0.0;
    double distance = 0.0;
};

inline AccelerationEstimate snap_half_integer(double omega) {
    AccelerationEstimate a;
    a.omega = omega;
    a.snapped_half_integer = std::round(omega * 2.0) / 2.0;
    a.distance = std::fabs(omega - a.snapped_half_integer);
    return a;
}

inline AccelerationEstimate acceleration_estimate(double E, double lambda, double eps, double h,
                                                  std::int64_t n_steps = 100000, int n_phases = 2) {
    if (!(eps > 0.0) || !(h > 0.0)) throw ConfigError("acceleration_estimate: eps, h > 0");
    if (!(h < eps)) throw ConfigError("acceleration_estimate: need h < eps");
    double up = complexified_le(E, lambda, eps + h, n_steps, n_phases);
    double dn = complexified_le(E, lambda, eps - h, n_steps, n_phases);
    return snap_half_integer((up - dn) / (2.0 * h) / (2.0 * M_PI));
}

} // namespace mosaic
