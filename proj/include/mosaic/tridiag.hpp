#pragma once

// Finite-box restriction of the operator and a symmetric tridiagonal
// eigensolver: Sturm-sequence bisection per index, eigenvectors by inverse
// iteration with a partial-pivoted tridiagonal LU.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "mosaic/errors.hpp"
#include "mosaic/model.hpp"

namespace mosaic {

struct FiniteBox {
    long N = 0;                    // window [-N, N], dimension 2N+1
    std::vector<double> diag;      // v_j at site j = index - N
    std::vector<long> pole_report; // even sites within guard of the tan pole (entries capped)
    double guard = kPoleGuard;

    long dim() const { return static_cast<long>(diag.size()); }
    long site_of(long index) const { return index - N; }
    long index_of(long site) const { return site + N; }
};

inline FiniteBox build_box(const ModelParams& p, long N, double guard = kPoleGuard) {
    if (N < 1) throw ConfigError("build_box: N >= 1");
    FiniteBox box;
    box.N = N;
    box.guard = guard;
    box.diag.resize(static_cast<size_t>(2 * N + 1), 0.0);
    std::vector<double> fr = site_angle_fracs(p, -N, N);
    for (long n = -N; n <= N; ++n) {
        if (n % 2 != 0) continue;
        double f = fr[static_cast<size_t>(n + N)];
        double v;
        if (pole_distance(f) < guard) {
            double raw = p.lambda * ((f < 0.5) ? 1.0 : -1.0);
            v = std::copysign(1.0 / guard, raw);
            box.pole_report.push_back(n);
        } else {
            v = p.lambda * std::tan(M_PI * f);
        }
        box.diag[static_cast<size_t>(n + N)] = v;
    }
    return box;
}

struct EigenPair {
    double energy = 0.0;
    std::vector<double> vector;  // sup-normalized, peak entry positive
    double residual = 0.0;       // ||(H-E)v|| / ||v||
    long peak_index = 0;         // index into vector (site = peak_index - N)
};

struct EigenSolveResult {
    std::vector<EigenPair> pairs;
    long convergence_failures = 0;
    long sturm_total = 0;  // eigenvalue count over (-inf, inf); must equal dim
};

namespace detail {

// number of eigenvalues of the box strictly below x
inline long sturm_count(const std::vector<double>& diag, double x) {
    long count = 0;
    double q = 0.0;
    bool first = true;
    const double tiny = 1e-300;
    for (double d : diag) {
        q = first ? (d - x) : (d - x - 1.0 / q);
        first = false;
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

// one inverse-iteration solve (T - sigma I) w = rhs, partial pivoting
inline void tridiag_solve_shifted(const std::vector<double>& diag, double sigma,
                                  std::vector<double>& w) {
    const size_t n = diag.size();
    std::vector<double> a(n), b(n, 0.0), c(n, 0.0);  // main, super, supersuper
    for (size_t i = 0; i < n; ++i) a[i] = diag[i] - sigma;
    for (size_t i = 0; i + 1 < n; ++i) b[i] = 1.0;
    std::vector<double> sub(n, 0.0);
    for (size_t i = 1; i < n; ++i) sub[i] = 1.0;

    for (size_t i = 0; i + 1 < n; ++i) {
        if (std::fabs(sub[i + 1]) > std::fabs(a[i])) {
            std::swap(a[i], sub[i + 1]);
            std::swap(b[i], a[i + 1]);
            std::swap(c[i], b[i + 1]);
            std::swap(w[i], w[i + 1]);
        }
        if (a[i] == 0.0) a[i] = 1e-300;
        double m = sub[i + 1] / a[i];
        a[i + 1] -= m * b[i];
        b[i + 1] -= m * c[i];
        w[i + 1] -= m * w[i];
    }
    if (a[n - 1] == 0.0) a[n - 1] = 1e-300;
    w[n - 1] /= a[n - 1];
    if (n >= 2) {
        if (a[n - 2] == 0.0) a[n - 2] = 1e-300;
        w[n - 2] = (w[n - 2] - b[n - 2] * w[n - 1]) / a[n - 2];
    }
    if (n >= 3) {
        for (size_t i = n - 2; i-- > 0;) {
            if (a[i] == 0.0) a[i] = 1e-300;
            w[i] = (w[i] - b[i] * w[i + 1] - c[i] * w[i + 2]) / a[i];
        }
    }
}

inline double apply_residual(const std::vector<double>& diag, double E, const std::vector<double>& v) {
    const size_t n = diag.size();
    double acc = 0.0, nv = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = (diag[i] - E) * v[i];
        if (i > 0) r += v[i - 1];
        if (i + 1 < n) r += v[i + 1];
        acc += r * r;
        nv += v[i] * v[i];
    }
    return std::sqrt(acc / nv);
}

} // namespace detail

inline EigenSolveResult eigensolve(const FiniteBox& box,
                                   std::optional<std::pair<double, double>> energy_window = std::nullopt,
                                   double residual_gate = 1e-10) {
    const long n = box.dim();
    if (n > 200000) throw IntervalTooLarge("eigensolve: box > 2e5");
    double lo = box.diag[0], hi = box.diag[0];
    for (double d : box.diag) { lo = std::min(lo, d); hi = std::max(hi, d); }
    lo -= 2.0 + 1e-6;
    hi += 2.0 + 1e-6;

    EigenSolveResult out;
    out.sturm_total = detail::sturm_count(box.diag, hi) - detail::sturm_count(box.diag, lo);

    double wlo = lo, whi = hi;
    if (energy_window) {
        wlo = std::max(lo, energy_window->first);
        whi = std::min(hi, energy_window->second);
        if (!(wlo < whi)) return out;
    }
    const long k_lo = detail::sturm_count(box.diag, wlo);
    const long k_hi = detail::sturm_count(box.diag, whi);

    std::vector<double> w(static_cast<size_t>(n));
    for (long k = k_lo; k < k_hi; ++k) {
        // lambda_k = inf{x : count(x) > k}
        double a = wlo, b = whi;
        for (int it = 0; it < 120 && (b - a) > 1e-14 * std::max(1.0, std::fabs(a) + std::fabs(b)); ++it) {
            double mid = 0.5 * (a + b);
            if (detail::sturm_count(box.diag, mid) > k) b = mid;
            else a = mid;
        }
        const double ev = 0.5 * (a + b);

        // inverse iteration from a deterministic pseudo-random start
        std::uint64_t rng = 0x9E3779B97F4A7C15ull ^ (static_cast<std::uint64_t>(k) * 0xBF58476D1CE4E5B9ull);
        for (size_t i = 0; i < w.size(); ++i) {
            rng ^= rng << 13; rng ^= rng >> 7; rng ^= rng << 17;
            w[i] = static_cast<double>(rng >> 11) * (1.0 / 9007199254740992.0) - 0.5;
        }
        double resid = 1e300;
        for (int iter = 0; iter < 5; ++iter) {
            detail::tridiag_solve_shifted(box.diag, ev, w);
            double nrm = 0.0;
            for (double x : w) nrm += x * x;
            nrm = std::sqrt(nrm);
            if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
            for (double& x : w) x /= nrm;
            resid = detail::apply_residual(box.diag, ev, w);
            if (resid <= residual_gate * 0.1) break;
        }
        if (!(resid <= residual_gate)) {
            ++out.convergence_failures;
            continue;
        }
        EigenPair pair;
        pair.energy = ev;
        pair.residual = resid;
        size_t peak = 0;
        for (size_t i = 1; i < w.size(); ++i)
            if (std::fabs(w[i]) > std::fabs(w[peak])) peak = i;
        double scale = w[peak];
        pair.vector.resize(w.size());
        for (size_t i = 0; i < w.size(); ++i) pair.vector[i] = w[i] / scale;
        pair.peak_index = static_cast<long>(peak);
        out.pairs.push_back(std::move(pair));
    }
    return out;
}

// the explicit E = 0 lattice mode: u = 1 at n = 4k+1, -1 at n = 4k+3, 0 else;
// returns max over interior sites of |(H - E) u|
inline double zero_energy_mode_residual(const ModelParams& p, long N) {
    if (N < 4) throw ConfigError("zero_energy_mode: N >= 4");
    FiniteBox box = build_box(p, N);
    auto u = [&](long n) -> double {
        long r = ((n % 4) + 4) % 4;
        if (r == 1) return 1.0;
        if (r == 3) return -1.0;
        return 0.0;
    };
    double worst = 0.0;
    for (long n = -N + 1; n <= N - 1; ++n) {
        double r = u(n + 1) + u(n - 1) + box.diag[static_cast<size_t>(n + N)] * u(n) - p.E * u(n);
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

} // namespace mosaic
