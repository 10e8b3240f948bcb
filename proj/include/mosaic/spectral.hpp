#pragma once

// Eigenfunction decay analysis, Gordon norms, and the spectral-type
// classifier.  Gordon products run through the regularized A-cocycle in MPFR
// at a precision scaled to L2*q_n, with the cosine product divided out in
// the log domain.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mosaic/arithmetic_profile.hpp"
#include "mosaic/cocycle.hpp"
#include "mosaic/errors.hpp"
#include "mosaic/theta_minimal.hpp"
#include "mosaic/tridiag.hpp"

namespace mosaic {

struct DecayFit {
    double slope = 0.0;      // per-site log-decay rate (positive)
    double r_squared = 0.0;
    long window_lo = 0, window_hi = 0;  // site range used for the fit
    std::vector<double> block_maxima;   // r_ell over R_ell, centered at the peak
    std::vector<long> block_ells;
    std::vector<double> block_margins;  // log(bound) - log(r_ell), positive = holds
    double theorem_margin = 0.0;        // min over k of bound_log - log|phi(k)|
};

struct FitRejected : Error {
    explicit FitRejected(const std::string& w) : Error(w) {}
};

inline DecayFit decay_fit(const EigenPair& pair, const ContinuedFraction& cf, int n_scale,
                          double epsilon, double L1, const ArithmeticProfile* profile = nullptr) {
    const long dim = static_cast<long>(pair.vector.size());
    const long N = (dim - 1) / 2;
    if (pair.peak_index < dim / 10 || pair.peak_index > dim - 1 - dim / 10)
        throw ConfigError("decay_fit: peak within 10% of the boundary");

    const double peak = std::fabs(pair.vector[static_cast<size_t>(pair.peak_index)]);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, cnt = 0;
    long lo = pair.peak_index, hi = pair.peak_index;
    for (long i = 0; i < dim; ++i) {
        double v = std::fabs(pair.vector[static_cast<size_t>(i)]);
        if (!(v > 1e-12 * peak) || i == pair.peak_index) continue;
        double x = static_cast<double>(std::labs(i - pair.peak_index));
        double y = std::log(v / peak);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y; cnt += 1;
        lo = std::min(lo, i); hi = std::max(hi, i);
    }
    DecayFit fit;
    fit.window_lo = lo - N;
    fit.window_hi = hi - N;
    if (cnt < 8) throw FitRejected("decay_fit: too few points");
    double denom = cnt * sxx - sx * sx;
    double slope = (cnt * sxy - sx * sy) / denom;
    double ss_tot = syy - sy * sy / cnt;
    double ss_res = ss_tot - slope * (sxy - sx * sy / cnt);
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
    fit.slope = -slope;
    if (fit.r_squared < 0.8) throw FitRejected("decay_fit: r^2 = " + std::to_string(fit.r_squared));

    // block maxima r_ell over R_ell = [2 ell q_n - 2 b_n, 2 ell q_n + 2 b_n],
    // offsets relative to the peak site
    const double delta_n = profile ? std::max(0.0, profile->delta(n_scale)) : 0.0;
    long qn = 0;
    {
        const mpz_class& q = cf.qn(n_scale);
        if (mpz_sizeinbase(q.get_mpz_t(), 2) < 40) qn = q.get_si();
    }
    if (qn > 0) {
        ResonanceLabel lab = classify_site_resonance(0, cf, n_scale, epsilon, std::max(L1, 1e-6));
        const long bn = lab.b_n;
        for (long ell = -N / (2 * qn) - 1; ell <= N / (2 * qn) + 1; ++ell) {
            if (ell == 0) continue;
            long c0 = pair.peak_index + 2 * ell * qn;
            long a = c0 - 2 * bn, b = c0 + 2 * bn;
            if (a < 0 || b >= dim) continue;
            double r = 0.0;
            for (long i = a; i <= b; ++i) r = std::max(r, std::fabs(pair.vector[static_cast<size_t>(i)]) / peak);
            fit.block_ells.push_back(ell);
            fit.block_maxima.push_back(r);
            double bound_log = 2.0 * (delta_n / 2.0 - L1 + 54.0 * epsilon) *
                               static_cast<double>(std::labs(ell) * qn);
            fit.block_margins.push_back(bound_log - std::log(std::max(r, 1e-300)));
        }
    }

    // soft check of the decay theorem's bound with the 330-epsilon slack
    double rate = L1 - delta_n / 2.0 - 330.0 * epsilon;
    double worst = 1e300;
    for (long i = 0; i < dim; ++i) {
        long k = std::labs(i - pair.peak_index);
        if (k == 0) continue;
        double v = std::fabs(pair.vector[static_cast<size_t>(i)]) / peak;
        if (v <= 1e-12) continue;
        worst = std::min(worst, -rate * static_cast<double>(k) - std::log(v));
    }
    fit.theorem_margin = worst;
    return fit;
}

struct GordonQuantities {
    double g1 = 0.0;  // ||B_{2 q_n} u||
    double g2 = 0.0;  // ||B_{-2 q_n} u||
    double g3 = 0.0;  // ||B_{4 q_n} u||
    double cos_log_sum = 0.0;
    bool cosine_underflow = false;
    bool precision_capped = false;

    double max_norm() const { return std::max(g1, std::max(g2, g3)); }
};

namespace detail {

struct RMat {
    Real a, b, c, d;
    explicit RMat(mpfr_prec_t W) : a(1.0, W), b(0.0, W), c(0.0, W), d(1.0, W) {}
};

// left-multiply by the regularized A at the given angle
inline void rmat_push_A(RMat& M, double E, double lambda, const Real& ang, mpfr_prec_t W) {
    Real c = cos_pi_times(ang), s = sin_pi_times(ang);
    Real a11 = c * ((E * E) - 1.0) - s * (lambda * E);
    Real a12 = c * (-E);
    Real a21 = c * E - s * lambda;
    Real a22 = -c;
    Real na = a11 * M.a + a12 * M.c;
    Real nb = a11 * M.b + a12 * M.d;
    Real nc = a21 * M.a + a22 * M.c;
    Real nd = a21 * M.b + a22 * M.d;
    M.a = na; M.b = nb; M.c = nc; M.d = nd;
    (void)W;
}

} // namespace detail

// Gordon norms for u = (phi(0), phi(-1))/||.|| taken from the eigenpair.
// B_{2q} = A_q / prod cos; B_{-2q}(theta) = B_{2q}(theta - q alpha)^{-1}.
inline GordonQuantities gordon_quantities(const ModelParams& p, int n_index, const EigenPair& pair) {
    const long qn = detail::qn_as_long(p.cf, n_index, 100000L, "gordon_quantities");
    const long dim = static_cast<long>(pair.vector.size());
    const long N = (dim - 1) / 2;
    if (N < 1) throw ConfigError("gordon_quantities: eigenvector window too small");

    const double L2 = lyapunov_closed_form(p.E, p.lambda).L2;
    GordonQuantities out;
    mpfr_prec_t W = static_cast<mpfr_prec_t>(
        std::min(65536.0, 256.0 + 6.0 * std::max(L2, 0.2) * static_cast<double>(qn) / std::log(2.0)));
    if (W >= 65536) out.precision_capped = true;
    W = std::max<mpfr_prec_t>(W, working_prec(p.cf));

    Real u0(pair.vector[static_cast<size_t>(N)], W);
    Real u1(pair.vector[static_cast<size_t>(N - 1)], W);
    {
        Real nrm = u0 * u0 + u1 * u1;
        mpfr_sqrt(nrm.raw(), nrm.raw(), MPFR_RNDN);
        if (mpfr_zero_p(nrm.raw())) throw ConfigError("gordon_quantities: phi vanishes at sites 0,-1");
        u0 = u0 / nrm;
        u1 = u1 / nrm;
    }

    Real alpha(W);
    mpfr_set(alpha.raw(), p.cf.value.raw(), MPFR_RNDN);

    // product of A over j = 0..count-1 from base angle, plus signed log cos sum
    auto a_product = [&](const Real& base, long count, Real& cos_log) {
        detail::RMat M(W);
        Real ang(W);
        mpfr_set(ang.raw(), base.raw(), MPFR_RNDN);
        mpfr_set_zero(cos_log.raw(), 1);
        for (long j = 0; j < count; ++j) {
            detail::rmat_push_A(M, p.E, p.lambda, ang, W);
            Real c = abs(cos_pi_times(ang));
            cos_log = cos_log + log(c);
            mpfr_add(ang.raw(), ang.raw(), alpha.raw(), MPFR_RNDN);
        }
        return M;
    };

    auto norm_log = [&](const Real& x, const Real& y) {
        Real n2 = x * x + y * y;
        Real l(W);
        mpfr_log(l.raw(), n2.raw(), MPFR_RNDN);
        return 0.5 * l.to_double();
    };

    double total_cos = 0.0;
    {
        Real cl(W);
        detail::RMat M = a_product(p.theta, qn, cl);
        Real vx = M.a * u0 + M.b * u1, vy = M.c * u0 + M.d * u1;
        out.g1 = std::exp(norm_log(vx, vy) - cl.to_double());
        total_cos += cl.to_double();
    }
    {
        Real cl(W);
        detail::RMat M = a_product(p.theta, 2 * qn, cl);
        Real vx = M.a * u0 + M.b * u1, vy = M.c * u0 + M.d * u1;
        out.g3 = std::exp(norm_log(vx, vy) - cl.to_double());
        total_cos = std::min(total_cos, cl.to_double());
    }
    {
        Real base(W);
        mpfr_mul_si(base.raw(), alpha.raw(), -qn, MPFR_RNDN);
        mpfr_add(base.raw(), base.raw(), p.theta.raw(), MPFR_RNDN);
        Real cl(W);
        detail::RMat M = a_product(base, qn, cl);
        // inverse of B = A e^{-cl_signed}: B is SL(2), so B^{-1} = adj(B)
        Real vx = M.d * u0 - M.b * u1, vy = M.a * u1 - M.c * u0;
        out.g2 = std::exp(norm_log(vx, vy) - cl.to_double());
        total_cos = std::min(total_cos, cl.to_double());
    }
    out.cos_log_sum = total_cos;
    if (total_cos < -1e6) out.cosine_underflow = true;
    return out;
}

enum class SpectralKind { PurePoint, SingularContinuous, Boundary, ZeroEnergy };
enum class ThresholdConvention { TheoremHalfDelta, SectionTwoLDelta };

struct SpectralVerdict {
    SpectralKind kind = SpectralKind::Boundary;
    double L2 = 0.0;
    double threshold = 0.0;
    ThresholdConvention convention = ThresholdConvention::SectionTwoLDelta;
    double margin = 0.0;  // L2 - threshold
};

inline const char* to_string(SpectralKind k) {
    switch (k) {
        case SpectralKind::PurePoint: return "pp";
        case SpectralKind::SingularContinuous: return "sc";
        case SpectralKind::Boundary: return "boundary";
        case SpectralKind::ZeroEnergy: return "zero";
    }
    return "?";
}

inline const char* to_string(ThresholdConvention c) {
    return c == ThresholdConvention::TheoremHalfDelta ? "theorem" : "section4";
}

inline SpectralVerdict classify_energy(double E, double lambda, const ArithmeticProfile& profile,
                                       ThresholdConvention conv = ThresholdConvention::SectionTwoLDelta,
                                       double boundary_tol = 0.02) {
    SpectralVerdict v;
    v.convention = conv;
    v.L2 = lyapunov_closed_form(E, lambda).L2;
    v.threshold = conv == ThresholdConvention::TheoremHalfDelta ? profile.delta_hat / 2.0
                                                                : profile.delta_hat;
    v.margin = v.L2 - v.threshold;
    if (std::fabs(E) < 1e-12) {
        v.kind = SpectralKind::ZeroEnergy;
    } else if (std::fabs(v.margin) < boundary_tol) {
        v.kind = SpectralKind::Boundary;
    } else {
        v.kind = v.margin > 0 ? SpectralKind::PurePoint : SpectralKind::SingularContinuous;
    }
    return v;
}

struct PhaseCell {
    double E = 0.0;
    double lambda = 0.0;
    SpectralVerdict verdict;
};

inline std::vector<PhaseCell> phase_diagram(const std::vector<double>& energies,
                                            const std::vector<double>& lambdas,
                                            const ArithmeticProfile& profile,
                                            ThresholdConvention conv) {
    std::vector<PhaseCell> out;
    out.reserve(energies.size() * lambdas.size());
    for (double lam : lambdas)
        for (double E : energies)
            out.push_back({E, lam, classify_energy(E, lam, profile, conv)});
    return out;
}

} // namespace mosaic
