#pragma once

// Thin RAII wrapper around MPFR with value semantics.  Precision is carried
// per value; binary operations round to the wider operand's precision
// (MPFR_RNDN unless a directed helper is used).

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mosaic/errors.hpp"

namespace mosaic {

class Real {
  public:
    explicit Real(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(const mpz_class& z, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
    Real(const mpq_class& q, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
    Real(const std::string& s, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw ConfigError("Real: cannot parse '" + s + "'");
    }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    int sgn() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_); }

    static Real pi(mpfr_prec_t prec) { Real r(prec); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }

    friend Real operator+(const Real& a, const Real& b) { Real r(wide(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, const Real& b) { Real r(wide(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, const Real& b) { Real r(wide(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, const Real& b) { Real r(wide(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a) { Real r(a.prec()); mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }

    friend Real operator*(const Real& a, double b) { Real r(a.prec()); mpfr_mul_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator+(const Real& a, double b) { Real r(a.prec()); mpfr_add_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, double b) { Real r(a.prec()); mpfr_sub_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, double b) { Real r(a.prec()); mpfr_div_d(r.v_, a.v_, b, MPFR_RNDN); return r; }

    friend Real operator*(const Real& a, const mpz_class& z) {
        Real r(a.prec()); mpfr_mul_z(r.v_, a.v_, z.get_mpz_t(), MPFR_RNDN); return r;
    }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
    friend bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
    friend bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

  private:
    static mpfr_prec_t wide(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }
    mpfr_t v_;
};

inline Real abs(const Real& a) { Real r(a.prec()); mpfr_abs(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real log(const Real& a) { Real r(a.prec()); mpfr_log(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real exp(const Real& a) { Real r(a.prec()); mpfr_exp(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real floor(const Real& a) { Real r(a.prec()); mpfr_floor(r.raw(), a.raw()); return r; }
inline Real round(const Real& a) { Real r(a.prec()); mpfr_round(r.raw(), a.raw()); return r; }
inline Real cos_pi_times(const Real& a) {
    Real r(a.prec() + 16);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    mpfr_mul(r.raw(), r.raw(), a.raw(), MPFR_RNDN);
    mpfr_cos(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}
inline Real sin_pi_times(const Real& a) {
    Real r(a.prec() + 16);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    mpfr_mul(r.raw(), r.raw(), a.raw(), MPFR_RNDN);
    mpfr_sin(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}

// x reduced into [0,1)
inline Real frac1(const Real& a) {
    Real r(a.prec());
    mpfr_frac(r.raw(), a.raw(), MPFR_RNDN);
    if (mpfr_sgn(r.raw()) < 0) mpfr_add_ui(r.raw(), r.raw(), 1, MPFR_RNDN);
    return r;
}

// dist(x, Z), in [0, 1/2]
inline Real torus_norm(const Real& a) {
    Real f = frac1(a);
    Real g(f.prec());
    mpfr_ui_sub(g.raw(), 1, f.raw(), MPFR_RNDN);
    if (mpfr_cmp(g.raw(), f.raw()) < 0) return g;
    return f;
}

inline double torus_norm(double x) {
    double f = x - std::floor(x);
    return f <= 0.5 ? f : 1.0 - f;
}

inline mpz_class to_mpz(const Real& a) {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), a.raw(), MPFR_RNDN);
    return z;
}

inline mpq_class to_mpq_exact(const Real& a) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), a.raw());
    return q;
}

} // namespace mosaic
