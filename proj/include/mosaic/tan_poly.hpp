#pragma once

// Coefficient extraction for the tan-polynomial structure of the regularized
// determinants: P~_{2k-1}(theta) = (cos pi theta)^{k-1} g_{k-1}(tan pi theta)
// and P~_{2k}(theta) = (cos pi theta)^k f_k(tan pi theta).  Samples at
// Chebyshev-spaced tangent nodes, Vandermonde solve in MPFR.

#include <cmath>
#include <vector>

#include "mosaic/determinant.hpp"
#include "mosaic/errors.hpp"

namespace mosaic {

enum class TanPolyKind { OddG, EvenF };

struct TanPolynomial {
    std::vector<double> coefficients;  // c_0..c_d in t = tan(pi theta)
    int degree = 0;
    TanPolyKind parity = TanPolyKind::OddG;
    double residual = 0.0;  // max abs error at held-out nodes

    double eval(double t) const {
        double acc = 0.0;
        for (size_t i = coefficients.size(); i-- > 0;) acc = acc * t + coefficients[i];
        return acc;
    }
};

namespace detail {

// partial-pivoted Gaussian elimination in MPFR
inline std::vector<Real> solve_dense(std::vector<std::vector<Real>>& A, std::vector<Real>& rhs,
                                     mpfr_prec_t W) {
    const size_t n = rhs.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (abs(A[r][col]) > abs(A[piv][col])) piv = r;
        if (mpfr_zero_p(A[piv][col].raw())) throw IllConditioned("singular Vandermonde");
        std::swap(A[piv], A[col]);
        std::swap(rhs[piv], rhs[col]);
        for (size_t r = col + 1; r < n; ++r) {
            Real f = A[r][col] / A[col][col];
            for (size_t c = col; c < n; ++c) A[r][c] = A[r][c] - f * A[col][c];
            rhs[r] = rhs[r] - f * rhs[col];
        }
    }
    std::vector<Real> x(n, Real(W));
    for (size_t i = n; i-- > 0;) {
        Real acc = rhs[i];
        for (size_t c = i + 1; c < n; ++c) acc = acc - A[i][c] * x[c];
        x[i] = acc / A[i][i];
    }
    return x;
}

// P~_index(theta)/(cos pi theta)^power at full precision
inline Real sample_reduced(const ModelParams& p, int index, int power, double theta_val,
                           mpfr_prec_t W) {
    Real th(theta_val, W);
    DetSequence seq = det_P_recurrence(p, index, th, false, W, true);
    Real val = seq.tilde_mp.at(static_cast<size_t>(index - 1));
    Real c = cos_pi_times(th);
    for (int i = 0; i < power; ++i) val = val / c;
    return val;
}

} // namespace detail

inline TanPolynomial tan_poly_extract(const ModelParams& p, int k, TanPolyKind kind) {
    if (k < 1 || k > 60) throw ConfigError("tan_poly_extract: 1 <= k <= 60");
    const int degree = (kind == TanPolyKind::OddG) ? k - 1 : k;
    const int index = (kind == TanPolyKind::OddG) ? 2 * k - 1 : 2 * k;
    const int power = (kind == TanPolyKind::OddG) ? k - 1 : k;
    const mpfr_prec_t W = 512;
    const int d1 = degree + 1;
    const double span = 2.0;

    std::vector<double> tnodes(static_cast<size_t>(d1));
    for (int i = 0; i < d1; ++i)
        tnodes[static_cast<size_t>(i)] = span * std::cos((2.0 * i + 1.0) * M_PI / (2.0 * d1));

    std::vector<std::vector<Real>> V(static_cast<size_t>(d1), std::vector<Real>(static_cast<size_t>(d1), Real(W)));
    std::vector<Real> rhs;
    rhs.reserve(static_cast<size_t>(d1));
    for (int i = 0; i < d1; ++i) {
        double t = tnodes[static_cast<size_t>(i)];
        double theta = std::atan(t) / M_PI;
        Real ti(t, W), pw(1.0, W);
        for (int j = 0; j < d1; ++j) {
            V[static_cast<size_t>(i)][static_cast<size_t>(j)] = pw;
            pw = pw * ti;
        }
        rhs.push_back(detail::sample_reduced(p, index, power, theta, W));
    }
    std::vector<Real> coef = detail::solve_dense(V, rhs, W);

    TanPolynomial poly;
    poly.degree = degree;
    poly.parity = kind;
    for (const Real& c : coef) poly.coefficients.push_back(c.to_double());

    // held-out residual on 2(d+1) fresh nodes
    double norm = 0.0;
    for (double c : poly.coefficients) norm = std::max(norm, std::fabs(c));
    double resid = 0.0;
    const int H = 2 * d1;
    for (int i = 0; i < H; ++i) {
        double t = span * std::cos((i + 0.37) * M_PI / H);
        double theta = std::atan(t) / M_PI;
        double want = detail::sample_reduced(p, index, power, theta, W).to_double();
        resid = std::max(resid, std::fabs(poly.eval(t) - want));
    }
    poly.residual = resid;
    if (resid > 1e-6 * std::max(norm, 1.0)) throw IllConditioned("tan_poly_extract residual " + std::to_string(resid));
    return poly;
}

} // namespace mosaic
