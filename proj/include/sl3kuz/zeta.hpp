#pragma once

#include <optional>
#include <sstream>

#include "kernels.hpp"
#include "kloosterman.hpp"

namespace sl3kuz {

struct ShiftedSpectralArg {
    std::array<cplx, 2> s, st;

    explicit ShiftedSpectralArg(std::array<cplx, 2> s_) : s(s_), st{2.0 * s_[0] + s_[1], s_[0] + 2.0 * s_[1]} {}
    static ShiftedSpectralArg from_tilde(std::array<cplx, 2> t) {
        return ShiftedSpectralArg({(2.0 * t[0] - t[1]) / 3.0, (2.0 * t[1] - t[0]) / 3.0});
    }
    bool consistent() const { return st[0] == 2.0 * s[0] + s[1] && st[1] == s[0] + 2.0 * s[1]; }
};

struct pole_error : std::domain_error {
    using std::domain_error::domain_error;
};

// F~0(u,mu) = (4/pi^4) cos0(mu) G0(2u,-2mu) = (4/pi^4) cos0 prod Gamma(u1+mu_i) Gamma(u2-mu_i) / Gamma(u1+u2)
inline cplx tilde_F0(std::array<cplx, 2> u, const SpectralPoint& m) {
    const cplx g = G0({2.0 * u[0], 2.0 * u[1]}, m.scaled(-2));
    if (is_infinite(g)) return complex_infinity();
    return 4 / std::pow(pi, 4) * cos0(m) * g;
}

inline cplx tilde_F1(std::array<cplx, 2> u, const SpectralPoint& m) {
    const cplx f = tilde_F0(u, m), t = f1_factor(m);
    if (is_infinite(f) || is_infinite(t)) return complex_infinity();
    return t * f;
}

namespace detail {

inline bool integer_gap(cplx d, double tol = 1e-12) { return std::abs(d - std::round(d.real())) < tol; }

inline double factorial_d(int n) { return std::exp(std::lgamma(n + 1.0)); }

inline cplx log_tilde_prefactor(const SpectralPoint& m) { return std::log(4 / std::pow(pi, 4) * cos0(m)); }

// mu = (it, it, -2it) up to order: returns t and the index of the distinct coordinate
inline std::optional<std::pair<double, int>> degenerate_form(const SpectralPoint& m, double tol = 1e-12) {
    for (int k = 0; k < 3; ++k) {
        const int a = (k + 1) % 3, b = (k + 2) % 3;
        if (std::abs(m[a] - m[b]) < tol && std::abs(m[a].real()) < tol && std::abs(m[k] + 2.0 * m[a]) < tol && std::abs(m[a]) > tol)
            return std::pair{m[a].imag(), k};
    }
    return std::nullopt;
}

}  // namespace detail

// Res_{u1 = -mu1 - l} F~0(u, mu); needs mu1 distinct from mu2, mu3 modulo Z
inline cplx residue_generic(cplx u2, const SpectralPoint& m, int l) {
    using detail::integer_gap;
    if (integer_gap(m[1] - m[0]) || integer_gap(m[2] - m[0]))
        throw std::domain_error("residue_generic: mu1 coincides with another coordinate mod Z; use residue_degenerate");
    cplx g = 1.0;
    for (int i = 0; i < 3; ++i) g *= complex_gamma(u2 - m[i]);
    return 4 / std::pow(pi, 4) * cos0(m) * ((l % 2) ? -1.0 : 1.0) / detail::factorial_d(l) * complex_gamma(m[1] - m[0] - double(l)) *
           complex_gamma(m[2] - m[0] - double(l)) * rgamma(u2 - m[0] - double(l)) * g;
}

// Res_{u1 = -mu1 - l1} Res_{u2 = mu3 - l2} F~0(u, mu)
inline cplx residue_double_generic(const SpectralPoint& m, int l1, int l2) {
    using detail::integer_gap;
    if (integer_gap(m[0] - m[1]) || integer_gap(m[0] - m[2]) || integer_gap(m[1] - m[2]))
        throw std::domain_error("residue_double_generic: coordinates of mu must be distinct mod Z");
    const cplx d31 = m[2] - m[0];
    cplx lg = log_gamma(d31 - double(l1)) + log_gamma(d31 - double(l2)) - log_gamma(d31 - double(l1 + l2)) + log_gamma(m[1] - m[0] - double(l1)) +
              log_gamma(m[2] - m[1] - double(l2)) - std::lgamma(l1 + 1.0) - std::lgamma(l2 + 1.0);
    return 4 / std::pow(pi, 4) * cos0(m) * (((l1 + l2) % 2) ? -1.0 : 1.0) * std::exp(lg);
}

// Res_{u1 = -it - l} F~0(u, (it, it, -2it)), the double pole
inline cplx residue_degenerate(cplx u2, double t, int l) {
    if (t == 0) throw std::domain_error("residue_degenerate: t = 0 is the triple pole at mu = 0, not covered");
    const SpectralPoint m{I * t, I * t, -2.0 * I * t};
    const cplx a = -3.0 * I * t - double(l), b = u2 - I * t - double(l);
    cplx g = 1.0;
    for (int i = 0; i < 3; ++i) g *= complex_gamma(u2 - m[i]);
    const double lf = detail::factorial_d(l);
    return 4 / std::pow(pi, 4) * cos0(m) * g / (lf * lf) * complex_gamma(a) * rgamma(b) *
           (2 * harmonic(l) - 2 * euler_gamma + digamma(a) - digamma(b));
}

// distance from s~ to the nearest line s~1 = -mu_j - l or s~2 = mu_j - l
inline double pole_distance(std::array<cplx, 2> st, const SpectralPoint& m) {
    double d = 1e300;
    for (int j = 0; j < 3; ++j) {
        for (cplx x : {st[0] + m[j], st[1] - m[j]}) {
            const double l = std::max(0.0, std::round(-x.real()));
            d = std::min(d, std::abs(x + l));
        }
    }
    return d;
}

inline void require_off_pole(std::array<cplx, 2> st, const SpectralPoint& m, const char* who, double tol = 1e-8) {
    if (const double d = pole_distance(st, m); d < tol) {
        std::ostringstream os;
        os << who << ": s~ = (" << st[0] << ", " << st[1] << ") is " << d << " from a pole";
        throw pole_error(os.str());
    }
}

struct SeriesValue {
    cplx value;
    double tail;  // size of the outermost shell of terms
};

// sum over W and j1, j2 < J of Gamma(j1 + s~1 + mu1^w) Gamma(j2 + s~2 - mu3^w) Res Res F~0(u, mu^w)
inline SeriesValue F0_series_distinct(std::array<cplx, 2> s, const SpectralPoint& m, int J = 30) {
    const ShiftedSpectralArg a(s);
    require_off_pole(a.st, m, "F0_series_distinct");
    SeriesValue r{0.0, 0.0};
    for (Weyl w : weyl_group) {
        const SpectralPoint mw = apply(w, m);
        for (int j1 = 0; j1 < J; ++j1)
            for (int j2 = 0; j2 < J; ++j2) {
                const cplx term = complex_gamma(double(j1) + a.st[0] + mw[0]) * complex_gamma(double(j2) + a.st[1] - mw[2]) * residue_double_generic(mw, j1, j2);
                r.value += term;
                if (j1 == J - 1 || j2 == J - 1) r.tail += std::abs(term);
            }
    }
    return r;
}

// mu = (it, it, -2it): (4/pi^4) cos0 (F01 + F02 + F03), F03(s,t) = F02((s2,s1),-t)
inline SeriesValue F0_series_degenerate(std::array<cplx, 2> s, double t, int J = 30) {
    if (t == 0) throw std::domain_error("F0_series_degenerate: t = 0 not covered");
    const SpectralPoint m{I * t, I * t, -2.0 * I * t};
    const ShiftedSpectralArg a(s);
    require_off_pole(a.st, m, "F0_series_degenerate");
    double tail = 0;
    auto f01 = [&](std::array<cplx, 2> st, double t) {
        cplx sum = 0;
        const cplx p = -3.0 * I * t, q = 3.0 * I * t;
        for (int j1 = 0; j1 < J; ++j1)
            for (int j2 = 0; j2 < J; ++j2) {
                const cplx x = st[0] + I * t + double(j1), y = st[1] - I * t + double(j2);
                const cplx lg = std::lgamma(j1 + j2 + 1.0) - 2 * (std::lgamma(j1 + 1.0) + std::lgamma(j2 + 1.0)) + log_gamma(p - double(j1)) +
                                log_gamma(q - double(j2)) + log_gamma(x) + log_gamma(y);
                const cplx br = 2 * harmonic(j2) - 2 * harmonic(j1 + j2) + 2.0 * digamma(j1 + 1.0) + digamma(p - double(j1)) + digamma(q - double(j2)) -
                                digamma(x) - digamma(y);
                const cplx term = (((j1 + j2) % 2) ? -1.0 : 1.0) * std::exp(lg) * br;
                sum += term;
                if (j1 == J - 1 || j2 == J - 1) tail += std::abs(term);
            }
        return sum;
    };
    auto f02 = [&](std::array<cplx, 2> st, double t) {
        cplx sum = 0;
        const cplx p = -3.0 * I * t;
        for (int j1 = 0; j1 < J; ++j1)
            for (int j2 = 0; j2 < J; ++j2) {
                const cplx x = st[0] + I * t + double(j1);
                const cplx lg = -2 * std::lgamma(j1 + 1.0) - std::lgamma(j2 + 1.0) + log_gamma(p - double(j1)) + 2.0 * log_gamma(p - double(j2)) -
                                log_gamma(p - double(j1 + j2)) + log_gamma(x) + log_gamma(st[1] + 2.0 * I * t + double(j2));
                const cplx br = 2.0 * digamma(j1 + 1.0) + digamma(p - double(j1)) - digamma(x) - digamma(p - double(j1 + j2));
                const cplx term = ((j2 % 2) ? -1.0 : 1.0) * std::exp(lg) * br;
                sum += term;
                if (j1 == J - 1 || j2 == J - 1) tail += std::abs(term);
            }
        return sum;
    };
    const cplx total = f01(a.st, t) + f02(a.st, t) + f02({a.st[1], a.st[0]}, -t);
    const cplx pref = 4 / std::pow(pi, 4) * cos0(m);
    return {pref * total, std::abs(pref) * tail};
}

// Lines Re u = const, sampled at step h over |Im u - centre| <= height
struct ContourGrid {
    double step = 0.1;
    double height = 40;
};

namespace detail {

struct Line {
    double re;
    double centre;
    std::vector<double> tau;
};

inline Line make_line(double re, double centre, const ContourGrid& g) {
    Line l{re, centre, {}};
    const int n = static_cast<int>(std::ceil(g.height / g.step));
    for (int k = -n; k <= n; ++k) l.tau.push_back(centre + k * g.step);
    return l;
}

inline double im_spread(const SpectralPoint& m) { return std::max({std::abs(m[0].imag()), std::abs(m[1].imag()), std::abs(m[2].imag())}); }

// refuse contours that pass within 0.02 of a Gamma pole in any numerator factor
inline void check_line(double re_arg, const char* who) {
    if (re_arg < 0.02 && std::abs(re_arg - std::round(re_arg)) < 0.02) {
        std::ostringstream os;
        os << who << ": contour passes within " << std::abs(re_arg - std::round(re_arg)) << " of a pole (Re = " << re_arg << ")";
        throw std::domain_error(os.str());
    }
}

// int Gamma(u) F~0 with u entering one argument as v = a - u, the other argument fixed at b
inline cplx single_integral(bool first, cplx a, cplx b, const SpectralPoint& m, double re, const ContourGrid& g) {
    check_line(re, "F0_shifted");
    for (int i = 0; i < 3; ++i) check_line((first ? a + m[i] : a - m[i]).real() - re, "F0_shifted");
    const Line l = make_line(re, 0.0, g);
    const cplx lp = log_tilde_prefactor(m);
    cplx s = 0;
    for (double tau : l.tau) {
        const cplx u(re, tau), v = a - u;
        const std::array<cplx, 2> arg = first ? std::array<cplx, 2>{v, b} : std::array<cplx, 2>{b, v};
        const cplx lg = log_G0({2.0 * arg[0], 2.0 * arg[1]}, m.scaled(-2));
        if (std::isinf(lg.real())) continue;
        s += std::exp(log_gamma(u) + lp + lg);
    }
    return s * g.step / (2 * pi);
}

}  // namespace detail

// int int Gamma(u1) Gamma(u2) F~0(s~ - u, mu) du/(2 pi i)^2 on Re u = c. Valid as a value of
// F0(s, mu) when the contours separate the poles of Gamma(u) from those of F~0(s~ - u).
inline cplx F0_contour(std::array<cplx, 2> s, const SpectralPoint& m, std::array<double, 2> c = {0.5, 0.5}, ContourGrid g = {}) {
    const ShiftedSpectralArg a(s);
    for (int k = 0; k < 2; ++k) detail::check_line(c[k], "F0_contour");
    for (int i = 0; i < 3; ++i) {
        detail::check_line((a.st[0] + m[i]).real() - c[0], "F0_contour");
        detail::check_line((a.st[1] - m[i]).real() - c[1], "F0_contour");
    }
    g.height += detail::im_spread(m) + std::max(std::abs(a.st[0].imag()), std::abs(a.st[1].imag()));
    const int n = static_cast<int>(std::ceil(g.height / g.step));
    const int N = 2 * n + 1;
    // Gamma(u1) prod Gamma(s~1 - u1 + mu_i), Gamma(u2) prod Gamma(s~2 - u2 - mu_i), 1/Gamma(s~1 + s~2 - u1 - u2)
    std::vector<cplx> A(N), B(N), D(2 * N - 1);
    for (int k = 0; k < N; ++k) {
        const double tau = (k - n) * g.step;
        const cplx u1(c[0], tau), u2(c[1], tau);
        cplx la = log_gamma(u1), lb = log_gamma(u2);
        for (int i = 0; i < 3; ++i) {
            la += log_gamma(a.st[0] - u1 + m[i]);
            lb += log_gamma(a.st[1] - u2 - m[i]);
        }
        A[k] = std::exp(la);
        B[k] = std::exp(lb);
    }
    for (int k = 0; k < 2 * N - 1; ++k) D[k] = rgamma(a.st[0] + a.st[1] - cplx(c[0] + c[1], (k - 2 * n) * g.step));
    cplx s2 = 0;
    for (int k1 = 0; k1 < N; ++k1) {
        cplx row = 0;
        for (int k2 = 0; k2 < N; ++k2) row += B[k2] * D[k1 + k2];
        s2 += A[k1] * row;
    }
    return 4 / std::pow(pi, 4) * cos0(m) * s2 * (g.step / (2 * pi)) * (g.step / (2 * pi));
}

// Shifted-contour representation: finite sum of F~0(s~ + j) plus three correction integrals
// on Re u = -T - 1/2. Valid for all s off the poles once -Re s~_i < T_i.
inline cplx F0_shifted(std::array<cplx, 2> s, const SpectralPoint& m, int T1, int T2, ContourGrid g = {}) {
    const ShiftedSpectralArg a(s);
    if (T1 < 0 || T2 < 0 || !(-a.st[0].real() < T1) || !(-a.st[1].real() < T2))
        throw std::invalid_argument("F0_shifted: need -Re s~_i < T_i");
    require_off_pole(a.st, m, "F0_shifted");
    const double c1 = -T1 - 0.5, c2 = -T2 - 0.5;
    auto sign = [](int k) { return (k % 2) ? -1.0 : 1.0; };
    cplx total = 0;
    for (int j1 = 0; j1 <= T1; ++j1)
        for (int j2 = 0; j2 <= T2; ++j2)
            total += sign(j1 + j2) / (detail::factorial_d(j1) * detail::factorial_d(j2)) * tilde_F0({a.st[0] + double(j1), a.st[1] + double(j2)}, m);
    ContourGrid g1 = g;
    g1.height += detail::im_spread(m) + std::max(std::abs(a.st[0].imag()), std::abs(a.st[1].imag()));
    for (int j2 = 0; j2 <= T2; ++j2)
        total += sign(j2) / detail::factorial_d(j2) * detail::single_integral(true, a.st[0], a.st[1] + double(j2), m, c1, g1);
    for (int j1 = 0; j1 <= T1; ++j1)
        total += sign(j1) / detail::factorial_d(j1) * detail::single_integral(false, a.st[1], a.st[0] + double(j1), m, c2, g1);
    total += F0_contour(s, m, {c1, c2}, g);
    return total;
}

inline cplx F0_shifted(std::array<cplx, 2> s, const SpectralPoint& m) {
    const ShiftedSpectralArg a(s);
    const int T1 = std::max(0, static_cast<int>(std::floor(-a.st[0].real())) + 1);
    const int T2 = std::max(0, static_cast<int>(std::floor(-a.st[1].real())) + 1);
    return F0_shifted(s, m, T1, T2);
}

enum class PoleSide { s1, s2 };

// the pole line s~1 = -mu_j - l (side s1) or s~2 = mu_j - l (side s2), j zero-based
struct PoleSpec {
    PoleSide side = PoleSide::s1;
    int j = 0;
    int l = 0;
};

// number of (k, l') with the same line as (j, l)
inline int pole_order(const SpectralPoint& m, PoleSide side, int j, int l) {
    const SpectralPoint v = side == PoleSide::s1 ? m : -m;
    const cplx loc = -v[j] - double(l);
    int order = 0;
    for (int k = 0; k < 3; ++k) {
        const cplx lk = -v[k] - loc;  // must be a nonnegative integer
        if (detail::integer_gap(lk, 1e-10) && std::round(lk.real()) >= 0) ++order;
    }
    return order;
}

// Residue of F0(s, mu) in s~1 (or s~2) at the given pole line, as a function of the other
// coordinate s~_other. Simple poles use the generic residue; a double pole at
// mu = (it,it,-2it) needs degenerate = true.
inline cplx F0_residue_at_pole(PoleSpec p, cplx other, const SpectralPoint& mu, int T2, bool degenerate = false, ContourGrid g = {}) {
    // the s2 side is the s1 side of F0((s~2, s~1), -mu)
    const SpectralPoint m = p.side == PoleSide::s1 ? mu : -mu;
    const int order = pole_order(mu, p.side, p.j, p.l);
    std::function<cplx(cplx, int)> R;
    if (order == 1 && !degenerate) {
        const int a = (p.j + 1) % 3, b = (p.j + 2) % 3;
        const SpectralPoint mj{m[p.j], m[a], m[b]};
        R = [mj](cplx v2, int l) { return residue_generic(v2, mj, l); };
    } else if (order == 2 && degenerate) {
        auto d = detail::degenerate_form(m);
        if (!d || d->second == p.j) throw std::domain_error("F0_residue_at_pole: double pole outside the (it,it,-2it) family");
        const double t = d->first;
        R = [t](cplx v2, int l) { return residue_degenerate(v2, t, l); };
    } else {
        std::ostringstream os;
        os << "F0_residue_at_pole: pole has order " << order << " but a " << (degenerate ? "double" : "simple") << "-pole residue was requested";
        throw std::domain_error(os.str());
    }
    if (T2 < 0 || !(-other.real() < T2)) throw std::invalid_argument("F0_residue_at_pole: need -Re s~_other < T2");
    auto sign = [](int k) { return (k % 2) ? -1.0 : 1.0; };
    cplx total = 0;
    for (int j1 = 0; j1 <= p.l; ++j1)
        for (int j2 = 0; j2 <= T2; ++j2)
            total += sign(j1 + j2) / (detail::factorial_d(j1) * detail::factorial_d(j2)) * R(other + double(j2), p.l - j1);
    const double c2 = -T2 - 0.5;
    g.height += detail::im_spread(m) + std::abs(other.imag());
    const int n = static_cast<int>(std::ceil(g.height / g.step));
    for (int j1 = 0; j1 <= p.l; ++j1) {
        cplx s = 0;
        for (int k = -n; k <= n; ++k) {
            const cplx u(c2, k * g.step);
            s += complex_gamma(u) * R(other - u, p.l - j1);
        }
        total += sign(j1) / detail::factorial_d(j1) * s * g.step / (2 * pi);
    }
    return total;
}

struct PoleRecord {
    cplx location;  // value of s~1 (side s1) or s~2 (side s2)
    PoleSide side;
    int order;
    std::vector<std::pair<int, int>> sources;  // (j, l) with zero-based j
    std::optional<cplx> residue;              // at the supplied other coordinate, order <= 2
};

// half-open window lo < Re(location) <= hi
struct PoleWindow {
    double lo = -2, hi = 0;
};

inline std::vector<PoleRecord> pole_scan(PoleWindow w, const std::vector<SpectralPoint>& mus, std::optional<PoleSide> only = std::nullopt,
                                         std::optional<cplx> other = std::nullopt) {
    std::vector<PoleRecord> out;
    for (const auto& mu : mus)
        for (PoleSide side : {PoleSide::s1, PoleSide::s2}) {
            if (only && *only != side) continue;
            const SpectralPoint v = side == PoleSide::s1 ? mu : -mu;
            std::vector<PoleRecord> found;
            for (int j = 0; j < 3; ++j) {
                const int lmin = std::max(0, static_cast<int>(std::ceil(-w.hi - v[j].real() - 1e-12)));
                for (int l = lmin;; ++l) {
                    const cplx loc = -v[j] - double(l);
                    if (!(loc.real() > w.lo)) break;
                    if (loc.real() > w.hi) continue;
                    auto it = std::find_if(found.begin(), found.end(), [&](const PoleRecord& r) { return std::abs(r.location - loc) < 1e-10; });
                    if (it == found.end()) found.push_back({loc, side, 0, {{j, l}}, std::nullopt});
                    else it->sources.push_back({j, l});
                }
            }
            for (auto& r : found) {
                r.order = static_cast<int>(r.sources.size());
                if (other && r.order <= 2) {
                    const int T2 = std::max(0, static_cast<int>(std::floor(-other->real())) + 1);
                    try {
                        r.residue = F0_residue_at_pole({side, r.sources[0].first, r.sources[0].second}, *other, mu, T2, r.order == 2);
                    } catch (const std::domain_error&) {
                    }
                }
            }
            out.insert(out.end(), found.begin(), found.end());
        }
    return out;
}

struct PartialSum {
    cplx value;
    double tail;  // bound on the next shells Cmax < max(c) <= 4 Cmax
};

namespace detail {

// Stevens-shaped bound 4 tau(c1) tau(c2) sqrt(gcd(c1,c2) c1 c2), capped by the term count c1 c2
inline double kloosterman_size_bound(i64 c1, i64 c2) {
    const double st = 4.0 * divisor_count(c1) * divisor_count(c2) * std::sqrt(double(gcd(c1, c2)) * c1 * c2);
    return std::min(st, double(c1) * c2);
}

}  // namespace detail

// sum_{c <= Cmax} S_wl(m,n,c)/(c1 c2) f_s(2 sqrt(m1 n2 c2)/c1, 2 sqrt(m2 n1 c1)/c2)
// the argument (X1 c2 / c1^2, X2 c1 / c2^2) of smooth Kloosterman averages
inline std::array<double, 2> smooth_argument(std::array<double, 2> X, i64 c1, i64 c2) {
    return {X[0] * double(c2) / (double(c1) * double(c1)), X[1] * double(c1) / (double(c2) * double(c2))};
}

inline PartialSum weighted_zeta_partial(std::array<i64, 2> m, std::array<i64, 2> n, std::array<cplx, 2> s, i64 Cmax, int threads = 1) {
    const LongElementInstance probe{m, n, {1, 1}};
    probe.validate();
    if (!probe.sign_condition()) throw std::invalid_argument("weighted_zeta_partial: need m1 n2 > 0 and m2 n1 > 0");
    const auto f = TestFunction::f_s(s);
    // y_i = sqrt(X_i c_j / c_i^2) with X = (4 m1 n2, 4 m2 n1)
    const std::array<double, 2> X{4.0 * double(m[0] * n[1]), 4.0 * double(m[1] * n[0])};
    auto arg = [&](i64 c1, i64 c2) {
        auto Y = smooth_argument(X, c1, c2);
        return std::array<double, 2>{std::sqrt(Y[0]), std::sqrt(Y[1])};
    };
    PartialSum r{0.0, 0.0};
    for (i64 c1 = 1; c1 <= Cmax; ++c1)
        for (i64 c2 = 1; c2 <= Cmax; ++c2) {
            const auto y = arg(c1, c2);
            const cplx w = f(y[0], y[1]);
            if (w == 0.0) continue;
            r.value += long_element_sum({m, n, {c1, c2}}, threads).value * w / double(c1 * c2);
        }
    for (i64 c1 = 1; c1 <= 4 * Cmax; ++c1)
        for (i64 c2 = 1; c2 <= 4 * Cmax; ++c2) {
            if (std::max(c1, c2) <= Cmax) continue;
            const auto y = arg(c1, c2);
            r.tail += detail::kloosterman_size_bound(c1, c2) * std::abs(f(y[0], y[1])) / double(c1 * c2);
        }
    return r;
}

// sum_eps sum_{c <= Cmax} S_wl(m, eps n, c) / (c1^{1+3 s1} c2^{1+3 s2})
inline PartialSum sign_independent_partial(std::array<i64, 2> m, std::array<i64, 2> n, std::array<cplx, 2> s, i64 Cmax, int threads = 1) {
    PartialSum r{0.0, 0.0};
    for (i64 c1 = 1; c1 <= Cmax; ++c1)
        for (i64 c2 = 1; c2 <= Cmax; ++c2) {
            const cplx w = std::exp(-(1.0 + 3.0 * s[0]) * std::log(double(c1)) - (1.0 + 3.0 * s[1]) * std::log(double(c2)));
            for (i64 e1 : {1, -1})
                for (i64 e2 : {1, -1}) r.value += long_element_sum({m, {e1 * n[0], e2 * n[1]}, {c1, c2}}, threads).value * w;
        }
    for (i64 c1 = 1; c1 <= 4 * Cmax; ++c1)
        for (i64 c2 = 1; c2 <= 4 * Cmax; ++c2) {
            if (std::max(c1, c2) <= Cmax) continue;
            r.tail += 4 * detail::kloosterman_size_bound(c1, c2) * std::pow(double(c1), -1 - 3 * s[0].real()) * std::pow(double(c2), -1 - 3 * s[1].real());
        }
    return r;
}

}  // namespace sl3kuz
