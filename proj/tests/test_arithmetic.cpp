#include <catch_amalgamated.hpp>

#include "mosaic/arithmetic_profile.hpp"
#include "mosaic/continued_fraction.hpp"
#include "mosaic/theta_minimal.hpp"

#include <cmath>
#include <random>

using namespace mosaic;

namespace {

Real golden_value(int prec = 256) {
    Real r(5.0, prec);
    mpfr_sqrt(r.raw(), r.raw(), MPFR_RNDN);
    return (r - 1.0) / 2.0;
}

ContinuedFraction golden_cf(int depth = 30) {
    return cf_from_coeffs(std::vector<long>(static_cast<size_t>(depth), 1), 256);
}

} // namespace

TEST_CASE("cf_expand: golden ratio is all ones") {
    ContinuedFraction cf = cf_expand(golden_value(), 10, 256);
    REQUIRE(cf.depth() == 10);
    for (auto& a : cf.coeffs) CHECK(a == 1);
    const long fib[] = {1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
    for (int k = 0; k <= 10; ++k) CHECK(cf.q[static_cast<size_t>(k)] == fib[k]);
}

TEST_CASE("cf_expand: sqrt2 - 1 is all twos") {
    Real r(2.0, 256);
    mpfr_sqrt(r.raw(), r.raw(), MPFR_RNDN);
    ContinuedFraction cf = cf_expand(r - 1.0, 5, 256);
    for (auto& a : cf.coeffs) CHECK(a == 2);
    const long qs[] = {1, 2, 5, 12, 29};
    for (int k = 0; k < 5; ++k) CHECK(cf.q[static_cast<size_t>(k)] == qs[k]);
}

TEST_CASE("cf_expand: near-rational exhausts precision") {
    Real third(1.0, 128);
    mpfr_div_ui(third.raw(), third.raw(), 3, MPFR_RNDN);
    Real bump(128);
    mpfr_set_ui_2exp(bump.raw(), 1, -200, MPFR_RNDN);
    CHECK_THROWS_AS(cf_expand(third + bump, 10, 128), PrecisionExhausted);
    Real bump100(128);
    mpfr_set_ui_2exp(bump100.raw(), 1, -100, MPFR_RNDN);
    ContinuedFraction partial = cf_expand(third + bump100, 40, 128, true);
    CHECK(partial.precision_exhausted);
    CHECK(partial.depth() < 40);
}

TEST_CASE("cf_expand: domain checks") {
    CHECK_THROWS_AS(cf_expand(Real(1.5, 128), 3, 128), NotInUnitInterval);
    CHECK_THROWS_AS(cf_expand(Real(-0.2, 128), 3, 128), NotInUnitInterval);
}

TEST_CASE("cf_from_coeffs: examples") {
    ContinuedFraction g = golden_cf();
    CHECK(g.q[30] == 1346269);
    CHECK(g.value.to_double() == Catch::Approx(0.6180339887).epsilon(1e-9));
    CHECK(g.value_is_convergent);

    ContinuedFraction half = cf_from_coeffs(std::vector<long>{2});
    CHECK(half.value.to_double() == 0.5);
    CHECK(half.value_is_convergent);

    ContinuedFraction big = cf_from_coeffs(std::vector<long>{1, 1000000});
    CHECK(big.q[0] == 1);
    CHECK(big.q[1] == 1);
    CHECK(big.q[2] == 1000001);

    CHECK_THROWS_AS(cf_from_coeffs(std::vector<long>{}), EmptyCoefficients);
    CHECK_THROWS_AS(cf_from_coeffs(std::vector<long>{1, 0, 2}), ConfigError);
}

TEST_CASE("torus_norm") {
    CHECK(torus_norm(0.75) == Catch::Approx(0.25));
    CHECK(torus_norm(-1.3) == Catch::Approx(0.3));
    CHECK(torus_norm(17.5) == Catch::Approx(0.5));
}

TEST_CASE("qn_alpha_norm: golden values and the eq. (2.2) bracket") {
    ContinuedFraction g = golden_cf();
    CHECK(qn_alpha_norm(g, 1).to_double() == Catch::Approx(0.3819660113).epsilon(1e-8));
    CHECK(qn_alpha_norm(g, 2).to_double() == Catch::Approx(0.2360679775).epsilon(1e-8));
    for (int n = 1; n <= 28; ++n) CHECK_NOTHROW(qn_alpha_norm_bracket(g, n));  // bracket certifies
    CHECK_THROWS_AS(qn_alpha_norm(g, 30), DepthExceeded);
}

TEST_CASE("eq. (2.3): ||q_{n-1} a|| = a_{n+1} ||q_n a|| + ||q_{n+1} a||") {
    // midpoints of the exact brackets satisfy the identity exactly
    ContinuedFraction g = golden_cf();
    for (int n = 2; n <= 27; ++n) {
        auto mid = [&](int m) {
            auto [lo, hi] = qn_alpha_norm_bracket(g, m);
            return mpq_class((lo + hi) / 2);
        };
        mpq_class defect = mid(n - 1) - g.coeffs[static_cast<size_t>(n)] * mid(n) - mid(n + 1);
        CHECK(defect == 0);
    }
}

TEST_CASE("best approximation property eq. (2.1)") {
    ContinuedFraction g = golden_cf();
    std::mt19937_64 rng(42);
    double alpha = g.value.to_double();
    for (int n = 3; n <= 12; ++n) {
        long qn = g.qn(n).get_si();
        double ref = qn_alpha_norm(g, n - 1).to_double();
        for (int trial = 0; trial < 20; ++trial) {
            long k = 1 + static_cast<long>(rng() % static_cast<unsigned long>(qn - 1));
            CHECK(torus_norm(static_cast<double>(k) * alpha) >= ref * (1.0 - 1e-9) - 1e-12);
        }
    }
}

TEST_CASE("cf_expand after cf_from_coeffs recovers the coefficients") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<long> coeffs;
        for (int i = 0; i < 20; ++i) coeffs.push_back(1 + static_cast<long>(rng() % 9));
        ContinuedFraction cf = cf_from_coeffs(coeffs, 512);
        ContinuedFraction back = cf_expand(cf.value, 15, 512, true);
        REQUIRE(back.depth() >= 15);
        for (int i = 0; i < 15; ++i) CHECK(back.coeffs[static_cast<size_t>(i)] == coeffs[static_cast<size_t>(i)]);
    }
}

TEST_CASE("arithmetic_profile: golden theta=0.1") {
    ContinuedFraction g = golden_cf();
    ArithmeticProfile prof = arithmetic_profile(g, Real(0.1, 256), 25, 13);
    CHECK(prof.beta_hat < 0.02);
    CHECK(prof.delta_hat <= prof.beta_hat + 0.01);
    ArithmeticProfile full = arithmetic_profile(g, Real(0.1, 256), 25, 1);
    CHECK(full.delta_hat <= full.beta_hat + 0.01);
    CHECK(full.delta_alt_seq.size() == full.delta_seq.size());
}

TEST_CASE("arithmetic_profile: forbidden phases") {
    ContinuedFraction g = golden_cf();
    CHECK_THROWS_AS(arithmetic_profile(g, Real(0.5, 256), 10), ForbiddenPhase);
    Real on_orbit = Real(0.5, 256) + g.value;  // 1/2 + alpha
    CHECK_THROWS_AS(arithmetic_profile(g, frac1(on_orbit), 10), ForbiddenPhase);
    CHECK_THROWS_AS(arithmetic_profile(g, Real(0.1, 256), 30), DepthExceeded);
}

TEST_CASE("build_liouville: beta targets and budget") {
    LiouvilleBuild b1 = build_liouville(1.0, 4);
    REQUIRE(b1.achieved_beta.size() >= 2);
    CHECK(b1.achieved_beta.back() == Catch::Approx(1.0).margin(0.1));

    LiouvilleBuild b2 = build_liouville(2.0, 3);
    CHECK(b2.cf.q[2] == 9);
    CHECK(b2.achieved_beta.back() == Catch::Approx(2.0).margin(0.01));

    CHECK_THROWS_AS(build_liouville(10.0, 50), OverflowBudget);
    CHECK_THROWS_AS(build_liouville(1.0, 6), OverflowBudget);

    LiouvilleBuild small = build_liouville(0.01, 14);
    for (auto& a : small.cf.coeffs) CHECK(a <= 2);
    for (size_t i = 10; i < small.achieved_beta.size(); ++i) CHECK(small.achieved_beta[i] <= 0.05);
}

TEST_CASE("build_resonant_phase: hits the target on the reported subsequence") {
    LiouvilleBuild b2 = build_liouville(2.0, 3);
    ResonantPhase rp = build_resonant_phase(b2.cf, 1.5, 2);
    REQUIRE_FALSE(rp.subsequence.empty());
    for (int n : rp.subsequence) CHECK(rp.measured.delta(n) == Catch::Approx(1.5).margin(0.1));

    LiouvilleBuild b1 = build_liouville(1.0, 4);
    ResonantPhase rp05 = build_resonant_phase(b1.cf, 0.5, 3);
    REQUIRE_FALSE(rp05.subsequence.empty());
    for (int n : rp05.subsequence) CHECK(rp05.measured.delta(n) == Catch::Approx(0.5).margin(0.1));
    CHECK(rp05.measured.delta_hat <= rp05.measured.beta_hat + 0.01);
}

TEST_CASE("build_resonant_phase: delta target zero gives a flat profile") {
    ContinuedFraction g = golden_cf();
    ResonantPhase rp = build_resonant_phase(g, 0.0, 20);
    for (int n = 3; n <= 20; ++n) CHECK(rp.measured.delta(n) <= 0.05);
}

TEST_CASE("build_resonant_phase: unreachable beyond beta") {
    ContinuedFraction g = golden_cf();
    CHECK_THROWS_AS(build_resonant_phase(g, 0.5, 20), TargetUnreachable);
}

TEST_CASE("find_theta_minimal: golden scale 5") {
    ContinuedFraction g = golden_cf();
    Real theta(0.1, 256);
    ThetaMinimalPoint pt = find_theta_minimal(g, theta, 5);
    double u = qn_alpha_norm(g, 5).to_double();
    CHECK(pt.witness_norm < (0.5 + 1.0 / 16.0) * u);
    CHECK(verify_theta_minimal(g, theta, pt, 2));
    CHECK(pt.m_n == -1);
    CHECK(pt.ell_n == 0);
}

TEST_CASE("find_theta_minimal: engineered phase picks (0,0)") {
    ContinuedFraction g = golden_cf();
    Real theta = Real(0.5, 256) + qn_alpha_norm(g, 5) / 4.0;
    ThetaMinimalPoint pt = find_theta_minimal(g, theta, 5);
    CHECK(pt.m_n == 0);
    CHECK(pt.ell_n == 0);
    CHECK(verify_theta_minimal(g, theta, pt, 2));
}

TEST_CASE("c_n_ell: definition, bound, range") {
    ContinuedFraction g = golden_cf();
    Real theta(0.1, 256);
    ThetaMinimalPoint pt = find_theta_minimal(g, theta, 7);
    double c0 = c_n_ell(g, theta, 7, 0, &pt);
    CHECK(c0 > 0.0);
    CHECK(c0 < 1.0);
    ArithmeticProfile prof = arithmetic_profile(g, theta, 7);
    double dn = std::max(0.0, prof.delta(7));
    double bn = prof.beta(7);
    double qn = g.qn(7).get_d();
    double bound = 8.0 * std::max(1.0, std::exp(dn * qn)) * std::exp(-bn * qn);
    CHECK(c_n_ell(g, theta, 7, 1, &pt) <= bound);
    CHECK_THROWS_AS(c_n_ell(g, theta, 7, 2, &pt), EllOutOfRange);
}

TEST_CASE("classify_site_resonance: labels match a brute-force distance table") {
    ContinuedFraction g = golden_cf();
    const int n = 10;
    long qn = g.qn(n).get_si();
    ResonanceLabel probe = classify_site_resonance(0, g, n, 0.05, 0.5);
    long bn = probe.b_n;
    CHECK(bn >= 1);
    for (long y = 0; y <= 4 * qn; y += 7) {
        ResonanceLabel lab = classify_site_resonance(y, g, n, 0.05, 0.5);
        long dq = std::min(((y % qn) + qn) % qn, qn - ((y % qn) + qn) % qn);
        long d2q = std::min(((y % (2 * qn)) + 2 * qn) % (2 * qn),
                            2 * qn - ((y % (2 * qn)) + 2 * qn) % (2 * qn));
        CHECK((lab.kind == ResonanceLabel::Kind::Resonant) == (dq <= bn));
        CHECK((lab.even_kind == ResonanceLabel::Kind::EvenResonant) == (d2q <= 2 * bn));
    }
    ResonanceLabel at = classify_site_resonance(2 * qn, g, n, 0.05, 0.5);
    CHECK(at.even_kind == ResonanceLabel::Kind::EvenResonant);
    ResonanceLabel off = classify_site_resonance(qn + bn + 1, g, n, 0.05, 0.5);
    CHECK(off.kind == ResonanceLabel::Kind::NonResonant);
}

TEST_CASE("classify_site_resonance: tau fallback when no multiple fits") {
    LiouvilleBuild b2 = build_liouville(2.0, 3);
    // q_2 = 9: (0.225, 0.45] contains no integer
    ResonanceLabel lab = classify_site_resonance(0, b2.cf, 2, 0.05, 1.0);
    CHECK(lab.tau_fallback);
    CHECK(lab.b_n == 1);
}
