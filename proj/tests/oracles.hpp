#pragma once

// Independent reference implementations used only by the test suite.  These
// deliberately avoid the code paths of the library: the 1F1 oracle is a
// direct arbitrary-precision summation, the J0 oracle is the periodized
// integral representation, and the moment oracle is a closed-form recurrence.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>

namespace oracles {

inline constexpr double kPi = 3.141592653589793238462643383279503;

// 1F1(a;b;z) summed in arbitrary precision.  The working precision grows
// with |z| so the cancellation of the alternating series (up to ~e^{2|z|}
// between max term and result) never reaches the retained digits.
inline std::complex<double> kummer_1f1(double a, double b,
                                       std::complex<double> z) {
    const double r = std::abs(z);
    const mpfr_prec_t prec =
        static_cast<mpfr_prec_t>(160 + static_cast<long>(std::ceil(3.0 * r)));
    mpfr_t ar, br, zr, zi, tr, ti, sr, si, t1, t2, t3, mag, maxmag;
    mpfr_inits2(prec, ar, br, zr, zi, tr, ti, sr, si, t1, t2, t3, mag, maxmag,
                static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(ar, a, MPFR_RNDN);
    mpfr_set_d(br, b, MPFR_RNDN);
    mpfr_set_d(zr, z.real(), MPFR_RNDN);
    mpfr_set_d(zi, z.imag(), MPFR_RNDN);
    mpfr_set_d(tr, 1.0, MPFR_RNDN);
    mpfr_set_d(ti, 0.0, MPFR_RNDN);
    mpfr_set_d(sr, 1.0, MPFR_RNDN);
    mpfr_set_d(si, 0.0, MPFR_RNDN);
    mpfr_set_d(maxmag, 1.0, MPFR_RNDN);

    const long k_max = static_cast<long>(4.0 * r) + 2000;
    for (long k = 0; k < k_max; ++k) {
        mpfr_add_si(t1, ar, k, MPFR_RNDN);      // a + k
        mpfr_add_si(t2, br, k, MPFR_RNDN);      // b + k
        mpfr_mul_si(t2, t2, k + 1, MPFR_RNDN);  // (b + k)(k + 1)
        mpfr_div(t1, t1, t2, MPFR_RNDN);
        mpfr_mul(tr, tr, t1, MPFR_RNDN);
        mpfr_mul(ti, ti, t1, MPFR_RNDN);
        // term *= z (t1/t2/t3 hold products of the pre-update term)
        mpfr_mul(t1, tr, zr, MPFR_RNDN);
        mpfr_mul(t2, ti, zi, MPFR_RNDN);
        mpfr_mul(t3, tr, zi, MPFR_RNDN);
        mpfr_mul(ti, ti, zr, MPFR_RNDN);
        mpfr_add(ti, ti, t3, MPFR_RNDN);
        mpfr_sub(tr, t1, t2, MPFR_RNDN);
        mpfr_add(sr, sr, tr, MPFR_RNDN);
        mpfr_add(si, si, ti, MPFR_RNDN);
        mpfr_hypot(mag, tr, ti, MPFR_RNDN);
        if (mpfr_cmp(mag, maxmag) > 0) mpfr_set(maxmag, mag, MPFR_RNDN);
        if (mpfr_zero_p(mag)) break;  // terminating series
        mpfr_mul_2si(t1, maxmag, -(prec - 50), MPFR_RNDN);
        if (k > static_cast<long>(r) + 10 && mpfr_cmp(mag, t1) < 0) break;
    }
    std::complex<double> out(mpfr_get_d(sr, MPFR_RNDN),
                             mpfr_get_d(si, MPFR_RNDN));
    mpfr_clears(ar, br, zr, zi, tr, ti, sr, si, t1, t2, t3, mag, maxmag,
                static_cast<mpfr_ptr>(nullptr));
    return out;
}

// J0 via the integral representation (2pi)^-1 int_0^{2pi} cos(x sin t) dt.
// The trapezoid rule on a periodic entire function converges exponentially
// once the node count clears the Jacobi-Anger bandwidth (~x).
inline double j0_integral(double x) {
    const long m = 2 * (static_cast<long>(std::ceil(x)) + 60);
    double acc = 0.0;
    for (long j = 0; j < m; ++j)
        acc += std::cos(x * std::sin(2.0 * kPi * static_cast<double>(j) / m));
    return acc / static_cast<double>(m);
}

// int_0^inf x^n e^{-x^2} dx by the half-integer Gamma recurrence.
inline double gaussian_moment(int n) {
    if (n == 0) return 0.88622692545275801365;  // sqrt(pi)/2
    if (n == 1) return 0.5;
    return 0.5 * (n - 1) * gaussian_moment(n - 2);
}

}  // namespace oracles
