#include <catch_amalgamated.hpp>

#include "mosaic/harness_suite.hpp"
#include "mosaic/spectral.hpp"
#include "mosaic/tridiag.hpp"

#include <cmath>
#include <random>

using namespace mosaic;

namespace {

ContinuedFraction golden_cf() { return cf_from_coeffs(std::vector<long>(30, 1), 256); }

} // namespace

TEST_CASE("build_box: diagonal values and pole capping") {
    ModelParams p = make_params(0.0, 1.0, golden_cf(), Real(0.25, 256));
    FiniteBox b = build_box(p, 1);
    CHECK(b.diag[0] == 0.0);
    CHECK(b.diag[1] == Catch::Approx(1.0).margin(1e-13));
    CHECK(b.diag[2] == 0.0);
    CHECK(b.pole_report.empty());

    ModelParams pf = make_params(0.0, 0.0, golden_cf(), Real(0.25, 256));
    FiniteBox bf = build_box(pf, 5);
    for (double d : bf.diag) CHECK(d == 0.0);

    // place the pole at site 2: theta = 1/2 - alpha + tiny
    Real theta = Real(0.5, 256) - golden_cf().value + Real(1e-15, 256);
    ModelParams pp = make_params(0.0, 1.0, golden_cf(), frac1(theta));
    FiniteBox bp = build_box(pp, 4);
    REQUIRE(bp.pole_report.size() == 1);
    CHECK(bp.pole_report[0] == 2);
    CHECK(std::fabs(bp.diag[static_cast<size_t>(2 + 4)]) == Catch::Approx(1.0 / bp.guard));
}

TEST_CASE("eigensolve: 3-site oracle {-1, 0, 2}") {
    ModelParams p = make_params(0.0, 1.0, golden_cf(), Real(0.25, 256));
    FiniteBox b = build_box(p, 1);
    EigenSolveResult eig = eigensolve(b);
    REQUIRE(eig.pairs.size() == 3);
    CHECK(eig.sturm_total == 3);
    CHECK(eig.pairs[0].energy == Catch::Approx(-1.0).margin(1e-12));
    CHECK(eig.pairs[1].energy == Catch::Approx(0.0).margin(1e-12));
    CHECK(eig.pairs[2].energy == Catch::Approx(2.0).margin(1e-12));
    for (auto& pr : eig.pairs) CHECK(pr.residual <= 1e-10);
}

TEST_CASE("eigensolve: free box fills the band") {
    ModelParams p = make_params(0.0, 0.0, golden_cf(), Real(0.25, 256));
    FiniteBox b = build_box(p, 150);
    EigenSolveResult eig = eigensolve(b);
    const long n = b.dim();
    REQUIRE(static_cast<long>(eig.pairs.size()) == n);
    CHECK(eig.sturm_total == n);
    // free eigenvalues are 2 cos(k pi / (n+1))
    for (size_t k : {size_t(0), size_t(10), size_t(150), size_t(300)}) {
        double want = 2.0 * std::cos(M_PI * static_cast<double>(n - static_cast<long>(k)) /
                                     static_cast<double>(n + 1));
        CHECK(eig.pairs[k].energy == Catch::Approx(want).margin(1e-10));
    }
    EigenSolveResult none = eigensolve(b, std::make_pair(10.0, 11.0));
    CHECK(none.pairs.empty());
}

TEST_CASE("zero energy mode: exact lattice witness") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        std::vector<long> coeffs;
        for (int i = 0; i < 12; ++i) coeffs.push_back(1 + static_cast<long>(rng() % 6));
        ModelParams p = make_params(0.0, -2.0 + 4.0 * U(rng), cf_from_coeffs(coeffs, 256),
                                    Real(U(rng), 256));
        CHECK(zero_energy_mode_residual(p, 100) <= 1e-12);
    }
    ModelParams shifted = make_params(0.1, 1.0, golden_cf(), Real(0.1, 256));
    CHECK(zero_energy_mode_residual(shifted, 100) == Catch::Approx(0.1));
    ModelParams edge = make_params(0.0, 1.0, golden_cf(), Real(0.1, 256));
    CHECK_NOTHROW(zero_energy_mode_residual(edge, 4));
}

TEST_CASE("decay_fit: planted exponential") {
    EigenPair pr;
    const long N = 400;
    pr.vector.resize(2 * N + 1);
    for (long i = 0; i <= 2 * N; ++i) pr.vector[static_cast<size_t>(i)] = std::exp(-0.3 * std::labs(i - N));
    pr.peak_index = N;
    pr.energy = 1.0;
    DecayFit fit = decay_fit(pr, golden_cf(), 5, 0.002, 0.3);
    CHECK(fit.slope == Catch::Approx(0.3).margin(1e-3));
    CHECK(fit.r_squared > 0.999);
}

TEST_CASE("decay_fit: extended state is rejected") {
    ModelParams p = make_params(0.0, 0.0, golden_cf(), Real(0.1, 256));
    FiniteBox b = build_box(p, 200);
    EigenSolveResult eig = eigensolve(b);
    const EigenPair* mid = nullptr;
    for (auto& pr : eig.pairs)
        if (pr.peak_index > 80 && pr.peak_index < 320) mid = &pr;
    REQUIRE(mid != nullptr);
    CHECK_THROWS_AS(decay_fit(*mid, golden_cf(), 5, 0.002, 0.1), FitRejected);
}

TEST_CASE("decay_fit: localized slopes track L1 at golden frequency") {
    ContinuedFraction g = golden_cf();
    ModelParams p = make_params(0.0, 1.5, g, Real(0.15, 256));
    FiniteBox box = build_box(p, 1000);
    EigenSolveResult eig = eigensolve(box);
    ArithmeticProfile prof = arithmetic_profile(g, Real(0.15, 256), 12);
    int n_scale = 6;
    long ok = 0, tot = 0;
    for (auto& pr : eig.pairs) {
        double aE = std::fabs(pr.energy);
        if (aE < 0.3 || aE > 2.5) continue;
        double L1 = lyapunov_closed_form(pr.energy, 1.5).L1;
        try {
            DecayFit fit = decay_fit(pr, g, n_scale, 0.002, L1, &prof);
            ++tot;
            if (std::fabs(fit.slope - L1) <= 0.2 * L1) ++ok;
        } catch (const Error&) {
        }
    }
    REQUIRE(tot > 100);
    CHECK(static_cast<double>(ok) >= 0.8 * static_cast<double>(tot));
}

TEST_CASE("gordon quantities: free cocycle is elliptic, norms stay order one") {
    ContinuedFraction g = golden_cf();
    ModelParams p0 = make_params(0.0, 0.0, g, Real(0.15, 256));
    FiniteBox box = build_box(p0, 300);
    EigenSolveResult eig = eigensolve(box, std::make_pair(0.8, 1.2));
    const EigenPair* pr = pick_pair_near(eig, 1.0, 300, 0.2);
    REQUIRE(pr != nullptr);
    ModelParams p = make_params(pr->energy, 0.0, g, Real(0.15, 256));
    GordonQuantities q = gordon_quantities(p, 6, *pr);
    for (double v : {q.g1, q.g2, q.g3}) {
        CHECK(v > 0.05);
        CHECK(v < 20.0);
    }
    CHECK_FALSE(q.cosine_underflow);
}

TEST_CASE("classify_energy: zero, pure point, singular continuous") {
    ContinuedFraction g = golden_cf();
    ArithmeticProfile prof = arithmetic_profile(g, Real(0.1, 256), 25, 13);
    CHECK(classify_energy(0.0, 1.0, prof).kind == SpectralKind::ZeroEnergy);

    SpectralVerdict pp = classify_energy(1.0, 1.0, prof);
    CHECK(pp.kind == SpectralKind::PurePoint);
    CHECK(pp.margin == Catch::Approx(0.5306).margin(0.03));

    ArithmeticProfile fake = prof;
    fake.delta_hat = 2.0;
    CHECK(classify_energy(1.0, 1.0, fake, ThresholdConvention::SectionTwoLDelta).kind ==
          SpectralKind::SingularContinuous);
    CHECK(classify_energy(1.0, 1.0, fake, ThresholdConvention::TheoremHalfDelta).kind ==
          SpectralKind::SingularContinuous);
}

TEST_CASE("phase_diagram: margins are monotone in |lambda| and grids assemble") {
    ContinuedFraction g = golden_cf();
    ArithmeticProfile prof = arithmetic_profile(g, Real(0.1, 256), 25, 13);
    std::vector<double> lams{0.25, 0.5, 1.0, 2.0, 3.0};
    for (double E : {0.7, 1.5, 2.5}) {
        double prev = -1e300;
        for (double lam : lams) {
            double m = classify_energy(E, lam, prof).margin;
            CHECK(m >= prev - 1e-12);
            prev = m;
        }
    }
    auto cells = phase_diagram({-2.0, 0.0, 2.0}, {0.0, 1.0}, prof, ThresholdConvention::SectionTwoLDelta);
    CHECK(cells.size() == 6);
    auto empty = phase_diagram({}, {1.0}, prof, ThresholdConvention::SectionTwoLDelta);
    CHECK(empty.empty());
}
