#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace sl3kuz {

using cplx = std::complex<double>;

inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double pi = std::numbers::pi;
inline const cplx I{0.0, 1.0};

inline cplx complex_infinity() { return {std::numeric_limits<double>::infinity(), 0.0}; }
inline bool is_infinite(cplx z) { return std::isinf(z.real()) || std::isinf(z.imag()); }

inline bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

namespace detail {

// zeta(2..40)
inline constexpr std::array<double, 39> zeta_values{
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915, 1.0369277551433699263,
    1.0173430619844491397, 1.0083492773819228268, 1.0040773561979443394, 1.0020083928260822144,
    1.0009945751278180853, 1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519, 1.0000076371976378998,
    1.0000038172932649998, 1.0000019082127165539, 1.0000009539620338728, 1.0000004769329867878,
    1.0000002384505027277, 1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
    1.0000000149015548284, 1.0000000074507117898, 1.0000000037253340248, 1.0000000018626597235,
    1.0000000009313274324, 1.0000000004656629065, 1.0000000002328311834, 1.0000000001164155017,
    1.0000000000582077209, 1.0000000000291038504, 1.0000000000145519219, 1.0000000000072759598,
    1.0000000000036379795, 1.0000000000018189897, 1.0000000000009094948};

// B_{2k} for k = 1..10
inline constexpr std::array<double, 10> bernoulli_even{
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};

inline cplx log1p(cplx w) {
    const double re = 0.5 * std::log1p(2 * w.real() + std::norm(w));
    return {re, std::atan2(w.imag(), 1 + w.real())};
}

// log Gamma(1+w) = -gamma w + sum_{k>=2} (-1)^k zeta(k) w^k / k, |w| small
inline cplx log_gamma_near_one(cplx w) {
    cplx s = -euler_gamma * w, p = -w;
    for (int k = 2; k <= 40; ++k) {
        p *= -w;
        cplx t = zeta_values[k - 2] * p / static_cast<double>(k);
        s += t;
        if (std::abs(t) < 1e-18 * std::abs(s)) break;
    }
    return s;
}

inline cplx stirling(cplx z) {
    const cplx zi = 1.0 / z, zi2 = zi * zi;
    cplx s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * pi);
    cplx p = zi;
    for (int k = 1; k <= 10; ++k) {
        s += bernoulli_even[k - 1] / (2.0 * k * (2 * k - 1)) * p;
        p *= zi2;
    }
    return s;
}

}  // namespace detail

// Principal branch: analytic off (-inf,0], with log Gamma(z+1) = log Gamma(z) + log z.
inline cplx log_gamma(cplx z) {
    if (is_nonpositive_integer(z)) return complex_infinity();
    if (z.imag() == 0.0 && z.real() > 0) return {std::lgamma(z.real()), 0.0};
    if (std::abs(z - 1.0) < 0.25) return detail::log_gamma_near_one(z - 1.0);
    if (std::abs(z - 2.0) < 0.25) return detail::log1p(z - 2.0) + detail::log_gamma_near_one(z - 2.0);
    cplx shift = 0;
    while (z.real() < 15.0 && !(z.real() > 0 && std::abs(z.imag()) > 18.0)) {
        shift += std::log(z);
        z += 1.0;
    }
    return detail::stirling(z) - shift;
}

inline cplx complex_gamma(cplx z) {
    if (is_nonpositive_integer(z)) return complex_infinity();
    return std::exp(log_gamma(z));
}

inline cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

inline cplx digamma(cplx z) {
    if (is_nonpositive_integer(z)) return complex_infinity();
    cplx shift = 0;
    while (z.real() < 15.0 && !(z.real() > 0 && std::abs(z.imag()) > 18.0)) {
        shift += 1.0 / z;
        z += 1.0;
    }
    const cplx zi = 1.0 / z, zi2 = zi * zi;
    cplx s = std::log(z) - 0.5 * zi;
    cplx p = zi2;
    for (int k = 1; k <= 10; ++k) {
        s -= detail::bernoulli_even[k - 1] / (2.0 * k) * p;
        p *= zi2;
    }
    return s - shift;
}

inline double harmonic(int n) {
    double h = 0;
    for (int k = 1; k <= n; ++k) h += 1.0 / k;
    return h;
}

inline double factorial(int n) {
    double f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace sl3kuz
