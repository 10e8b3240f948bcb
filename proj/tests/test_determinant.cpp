#include <catch_amalgamated.hpp>

#include "mosaic/determinant.hpp"
#include "mosaic/lagrange.hpp"
#include "mosaic/tan_poly.hpp"
#include "mosaic/tridiag.hpp"

#include <cmath>
#include <random>

using namespace mosaic;

namespace {

ContinuedFraction golden_cf() { return cf_from_coeffs(std::vector<long>(30, 1), 256); }

double cos_window(const ModelParams& p, const Real& th, int j0, int j1) {
    double c = 1.0;
    for (int j = j0; j <= j1; ++j) {
        Real a(256);
        mpfr_mul_si(a.raw(), p.cf.value.raw(), j, MPFR_RNDN);
        mpfr_add(a.raw(), a.raw(), th.raw(), MPFR_RNDN);
        c *= cos_pi_times(a).to_double();
    }
    return c;
}

} // namespace

TEST_CASE("det_direct: small windows by hand") {
    ModelParams p = make_params(1.3, 1.0, golden_cf(), Real(0.25, 256));
    CHECK(det_direct(p, 1, 1) == Catch::Approx(-1.3));
    CHECK(det_direct(p, 0, 0) == Catch::Approx(1.0 - 1.3).margin(1e-13));  // tan(pi/4) - E
    double a = p.alpha_d();
    double want = (-1.3) * (std::tan(M_PI * (0.25 + a)) - 1.3) - 1.0;
    CHECK(det_direct(p, 1, 2) == Catch::Approx(want).epsilon(1e-12));
    CHECK_THROWS_AS(det_direct(p, 0, 2200), IntervalTooLarge);
    ModelParams pole = make_params(1.3, 1.0, golden_cf(), Real(0.5, 256));
    CHECK_THROWS_AS(det_direct(pole, 0, 3), SingularityHit);
}

TEST_CASE("P~ and Q~ recurrences agree with cos-product times direct determinants") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    ContinuedFraction g = golden_cf();
    int tested = 0;
    while (tested < 60) {
        double E = -4.0 + 8.0 * U(rng), lam = -3.0 + 6.0 * U(rng), th = U(rng);
        int K = 2 + static_cast<int>(rng() % 99);
        Real theta(th, 256);
        ModelParams p = make_params(E, lam, g, theta);
        bool pole_free = true;
        for (int j = 0; j <= K / 2 + 1; ++j) {
            Real a(256);
            mpfr_mul_si(a.raw(), g.value.raw(), j, MPFR_RNDN);
            mpfr_add(a.raw(), a.raw(), theta.raw(), MPFR_RNDN);
            if (std::fabs(std::cos(M_PI * frac1(a).to_double())) <= 1e-3) pole_free = false;
        }
        if (!pole_free) continue;
        ++tested;
        DetSequence P = det_P_recurrence(p, K, theta);
        DetSequence Q = det_Q_recurrence(p, K, theta);
        for (int k : {K / 3, K / 2, K}) {
            if (k < 1) continue;
            double dp = det_direct(p, 1, k, &theta) * cos_window(p, theta, 1, k / 2);
            double dq = det_direct(p, 0, k - 1, &theta) * cos_window(p, theta, 0, (k + 1) / 2 - 1);
            double sp = std::max({std::fabs(dp), std::fabs(P.tilde(k)), 1e-30});
            double sq = std::max({std::fabs(dq), std::fabs(Q.tilde(k)), 1e-30});
            CHECK(std::fabs(P.tilde(k) - dp) / sp <= 1e-9);
            CHECK(std::fabs(Q.tilde(k) - dq) / sq <= 1e-9);
        }
    }
}

TEST_CASE("recurrence seeds and structure") {
    ContinuedFraction g = golden_cf();
    Real theta(0.31, 256);
    ModelParams p = make_params(1.1, 0.8, g, theta);
    DetSequence Q = det_Q_recurrence(p, 4, theta);
    double th = 0.31;
    CHECK(Q.tilde(1) == Catch::Approx(0.8 * std::sin(M_PI * th) - 1.1 * std::cos(M_PI * th)).epsilon(1e-12));

    // E = 0 decouples the odd P~ subsequence: P~_{2k-1} = -cos(pi(theta+(k-1)a)) P~_{2k-3}
    ModelParams pz = make_params(0.0, 0.8, g, theta);
    DetSequence Pz = det_P_recurrence(pz, 11, theta);
    for (int k = 2; 2 * k - 1 <= 11; ++k) {
        double c = cos_window(pz, theta, k - 1, k - 1);
        CHECK(Pz.tilde(2 * k - 1) == Catch::Approx(-c * Pz.tilde(2 * k - 3)).margin(1e-12));
    }
}

TEST_CASE("transfer identity: determinant assembly equals the A product") {
    ContinuedFraction g = golden_cf();
    Real theta(0.123, 256);
    ModelParams p = make_params(1.3, 0.9, g, theta);
    for (int k : {1, 2, 25, 60, 100}) {
        LogMat2d prod = product_lognorm([&](long j) { return regularized_step_A(p, j); }, k);
        Mat2d Ak = std::exp(prod.log_scale) * prod.unit;
        Mat2d D = transfer_from_dets(p, k, theta);
        double scale = std::max(Ak.max_abs(), 1e-30);
        CHECK(std::fabs(D.a - Ak.a) / scale <= 1e-9);
        CHECK(std::fabs(D.b - Ak.b) / scale <= 1e-9);
        CHECK(std::fabs(D.c - Ak.c) / scale <= 1e-9);
        CHECK(std::fabs(D.d - Ak.d) / scale <= 1e-9);
    }
}

TEST_CASE("tan_poly: g_0 is the constant -E") {
    ModelParams p = make_params(1.7, 0.8, golden_cf(), Real(0.1, 256));
    TanPolynomial g0 = tan_poly_extract(p, 1, TanPolyKind::OddG);
    REQUIRE(g0.degree == 0);
    CHECK(g0.coefficients[0] == Catch::Approx(-1.7).epsilon(1e-10));
}

TEST_CASE("tan_poly: degrees are exact for generic parameters") {
    ModelParams p = make_params(1.35, 0.75, golden_cf(), Real(0.1, 256));
    for (int k : {2, 5, 9}) {
        TanPolynomial f = tan_poly_extract(p, k, TanPolyKind::EvenF);
        REQUIRE(f.degree == k);
        double norm = 0.0;
        for (double c : f.coefficients) norm = std::max(norm, std::fabs(c));
        CHECK(std::fabs(f.coefficients.back()) > 1e-8 * norm);
        TanPolynomial gp = tan_poly_extract(p, k, TanPolyKind::OddG);
        REQUIRE(gp.degree == k - 1);
    }
}

TEST_CASE("tan_poly: lambda = 0 factorizes through the cosine-shift product") {
    // P~_{2k} = P_{2k}^{free} * prod_{j=1..k} (cos(pi j a) - t sin(pi j a))
    ContinuedFraction g = golden_cf();
    ModelParams p = make_params(1.35, 0.0, g, Real(0.1, 256));
    const int k = 6;
    TanPolynomial f = tan_poly_extract(p, k, TanPolyKind::EvenF);
    Real theta(0.1, 256);
    double pf = det_direct(p, 1, 2 * k, &theta);  // free determinant, theta-independent
    std::vector<double> want{pf};
    double alpha = g.value.to_double();
    for (int j = 1; j <= k; ++j) {
        double c = std::cos(M_PI * j * alpha), s = std::sin(M_PI * j * alpha);
        std::vector<double> next(want.size() + 1, 0.0);
        for (size_t i = 0; i < want.size(); ++i) {
            next[i] += c * want[i];
            next[i + 1] += -s * want[i];
        }
        want = std::move(next);
    }
    REQUIRE(want.size() == f.coefficients.size());
    double norm = 0.0;
    for (double c : want) norm = std::max(norm, std::fabs(c));
    for (size_t i = 0; i < want.size(); ++i)
        CHECK(std::fabs(f.coefficients[i] - want[i]) <= 1e-8 * norm);
}

TEST_CASE("lagrange: constants, orbit exactness, duplicates") {
    CHECK(lagrange_reconstruct({{0.3, 42.0}}, 0.9) == 42.0);

    ContinuedFraction g = golden_cf();
    Real theta(0.123, 256);
    ModelParams p = make_params(1.3, 0.9, g, theta);
    double alpha = g.value.to_double();
    for (int k : {10, 20, 40}) {
        // P~_{2k-1} is a degree-(k-1) form in cos^{k-1}, exactness with k nodes
        std::vector<std::pair<double, double>> samples;
        for (int j = 0; j < k; ++j) {
            double node = 0.123 + j * alpha;
            Real nodeR(256);
            mpfr_mul_si(nodeR.raw(), g.value.raw(), j, MPFR_RNDN);
            mpfr_add(nodeR.raw(), nodeR.raw(), theta.raw(), MPFR_RNDN);
            DetSequence seq = det_P_recurrence(p, 2 * k - 1, nodeR);
            samples.push_back({node, seq.tilde(2 * k - 1)});
        }
        double eval_at = 0.123 + 0.31;
        Real evalR = theta + 0.31;
        DetSequence want_seq = det_P_recurrence(p, 2 * k - 1, evalR);
        double got = lagrange_reconstruct(samples, eval_at);
        double want = want_seq.tilde(2 * k - 1);
        CHECK(std::fabs(got - want) / std::max(std::fabs(want), 1e-30) <= 1e-8);
    }

    CHECK_THROWS_AS(lagrange_reconstruct({{0.2, 1.0}, {0.2 + 1e-15, 2.0}}, 0.5), DuplicateNodes);
}

TEST_CASE("epsilon uniformity: antipodal pair, orbits, clusters") {
    UniformityReport two = epsilon_uniform_check({0.1, 0.6});
    CHECK(two.epsilon_star == Catch::Approx(0.0).margin(1e-9));

    ContinuedFraction g = golden_cf();
    double alpha = g.value.to_double();
    std::vector<double> orbit;
    for (int j = 0; j < 34; ++j) orbit.push_back(0.2137 + j * alpha);
    UniformityReport rep = epsilon_uniform_check(orbit);
    CHECK(rep.epsilon_star <= 0.01);
    CHECK(rep.is_uniform(0.05));

    UniformityReport bad = epsilon_uniform_check({0.0, 1e-6, 0.3});
    CHECK(bad.epsilon_star >= 5.0);
}

TEST_CASE("green: 1x1 box, expansion identity, resonant denominator") {
    ContinuedFraction g = golden_cf();
    ModelParams p = make_params(1.3, 0.9, g, Real(0.123, 256));
    GreenPair g11 = green_pair(p, 3, 3, 3);
    CHECK(g11.left == Catch::Approx(1.0 / (0.0 - 1.3)));
    CHECK(g11.right == Catch::Approx(1.0 / (0.0 - 1.3)));

    // full-box eigenvector restricted to an interior window satisfies
    // phi(y) = -G(x1,y) phi(x1-1) - G(x2,y) phi(x2+1)
    FiniteBox box = build_box(p, 40);
    EigenSolveResult eig = eigensolve(box);
    REQUIRE(eig.pairs.size() > 10);
    const EigenPair& pr = eig.pairs[eig.pairs.size() / 2];
    ModelParams pe = make_params(pr.energy, 0.9, g, Real(0.123, 256));
    long x1 = -12, x2 = -8;  // 5-site box
    for (long y = x1; y <= x2; ++y) {
        GreenPair gk = green_pair(pe, x1, x2, y);
        double phi_y = pr.vector[static_cast<size_t>(y + 40)];
        double want = -gk.left * pr.vector[static_cast<size_t>(x1 - 1 + 40)] -
                      gk.right * pr.vector[static_cast<size_t>(x2 + 1 + 40)];
        CHECK(std::fabs(phi_y - want) <= 1e-9 * std::max(1.0, std::fabs(phi_y)));
    }

    // 1-site resonance: E equal to the box eigenvalue v_y
    double v3 = 0.0;  // odd site -> eigenvalue of the 1-site box is 0
    ModelParams res = make_params(v3, 0.9, g, Real(0.123, 256));
    CHECK_THROWS_AS(green_pair(res, 3, 3, 3), BoxResonant);
}

TEST_CASE("herman: growth matches the characteristic root") {
    HermanResult h1 = herman_sequence(3.0, 0.0, 200);
    CHECK_FALSE(h1.degenerate);
    CHECK(std::fabs(h1.fitted_growth - h1.log_x2) <= 1e-3 * h1.log_x2);
    CHECK(h1.log_x2 == Catch::Approx(std::log((7.0 + 3.0 * std::sqrt(5.0)) / 2.0)).epsilon(1e-12));

    HermanResult h2 = herman_sequence(1.0, 1.0, 200);
    CHECK(std::fabs(h2.fitted_growth - h2.log_x2) <= 1e-3 * h2.log_x2);
    CHECK(h2.x2_abs == Catch::Approx(1.7000157758867898).epsilon(1e-10));

    HermanResult h3 = herman_sequence(0.0, 1.0, 60);
    CHECK(h3.degenerate);
    CHECK_THROWS_AS(herman_sequence(1.0, 1.0, 10), ConfigError);
}

TEST_CASE("herman: Monte-Carlo mean of (1/k) ln|P~_k| clears Ltilde - 0.1") {
    ContinuedFraction g = golden_cf();
    for (auto [E, lam] : std::vector<std::pair<double, double>>{{3.0, 0.0}, {1.0, 1.0}}) {
        ModelParams p = make_params(E, lam, g, Real(0.1, 256));
        double Lt = lyapunov_closed_form(E, lam).L1 - std::log(2.0) / 2.0;
        for (int k : {50, 100}) {
            double acc = 0.0;
            int used = 0;
            for (int i = 0; i < 150; ++i) {
                double th = 0.2137 + i * kGoldenFrac;
                th -= std::floor(th);
                Real thr(th, 128);
                DetSequence seq = det_P_recurrence(p, k, thr);
                acc += seq.tilde_log.back() / k;
                ++used;
            }
            CHECK(acc / used >= Lt - 0.1);
        }
    }
}
