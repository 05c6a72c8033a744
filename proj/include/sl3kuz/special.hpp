#pragma once

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gamma.hpp"

namespace sl3kuz {

struct SpectralPoint {
    std::array<cplx, 3> mu{0.0, 0.0, 0.0};

    SpectralPoint() = default;
    SpectralPoint(cplx a, cplx b) : mu{a, b, -a - b} {}
    SpectralPoint(cplx a, cplx b, cplx c) : mu{a, b, c} {
        if (std::abs(a + b + c) > 1e-14) throw std::invalid_argument("spectral parameters must sum to zero");
        mu[2] = -a - b;
    }

    cplx operator[](int i) const { return mu[i]; }
    SpectralPoint operator-() const { return {-mu[0], -mu[1]}; }
    SpectralPoint scaled(double k) const { return {k * mu[0], k * mu[1]}; }
    double norm() const { return std::sqrt(std::norm(mu[0]) + std::norm(mu[1]) + std::norm(mu[2])); }
    double max_abs_real() const { return std::max({std::abs(mu[0].real()), std::abs(mu[1].real()), std::abs(mu[2].real())}); }

    // -conj(mu) is a permutation of mu
    bool unitary(double tol = 1e-12) const {
        std::array<int, 3> p{0, 1, 2};
        do {
            bool ok = true;
            for (int i = 0; i < 3; ++i) ok = ok && std::abs(-std::conj(mu[i]) - mu[p[i]]) <= tol;
            if (ok) return true;
        } while (std::next_permutation(p.begin(), p.end()));
        return false;
    }

    // some pair of coordinates within tol
    bool degenerate(double tol = 1e-6) const {
        return std::abs(mu[0] - mu[1]) < tol || std::abs(mu[0] - mu[2]) < tol || std::abs(mu[1] - mu[2]) < tol;
    }
};

enum class Weyl { I, w2, w3, w4, w5, wl };
inline constexpr std::array<Weyl, 6> weyl_group{Weyl::I, Weyl::w2, Weyl::w3, Weyl::w4, Weyl::w5, Weyl::wl};

inline const char* weyl_name(Weyl w) {
    constexpr const char* names[] = {"I", "w2", "w3", "w4", "w5", "wl"};
    return names[static_cast<int>(w)];
}

// mu^w by coordinate permutation
inline SpectralPoint apply(Weyl w, const SpectralPoint& s) {
    auto [a, b, c] = s.mu;
    switch (w) {
        case Weyl::I: return s;
        case Weyl::w2: return {b, a, c};
        case Weyl::w3: return {a, c, b};
        case Weyl::w4: return {c, a, b};
        case Weyl::w5: return {b, c, a};
        case Weyl::wl: return {c, b, a};
    }
    return s;
}

// log G0 with the convention that a numerator pole gives +inf real part and a
// denominator pole gives -inf real part (a zero)
inline cplx log_G0(std::array<cplx, 2> s, const SpectralPoint& m) {
    cplx num = 0;
    for (int i = 0; i < 3; ++i) {
        cplx a = (s[0] - m[i]) / 2.0, b = (s[1] + m[i]) / 2.0;
        if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return complex_infinity();
        num += log_gamma(a) + log_gamma(b);
    }
    cplx d = (s[0] + s[1]) / 2.0;
    if (is_nonpositive_integer(d)) return {-std::numeric_limits<double>::infinity(), 0.0};
    return num - log_gamma(d);
}

inline cplx G0(std::array<cplx, 2> s, const SpectralPoint& m) {
    cplx l = log_G0(s, m);
    if (std::isinf(l.real())) return l.real() > 0 ? complex_infinity() : cplx(0.0);
    return std::exp(l);
}

struct ContourSpec {
    std::array<double, 2> real_parts{1.0, 1.0};
    double height = 30.0;  // margin beyond the spectral window on each line
    double step = 0.1;

    void validate(const SpectralPoint& m) const {
        for (int i = 0; i < 3; ++i) {
            if (real_parts[0] <= m[i].real()) throw std::invalid_argument("contour sigma1 not right of the poles");
            if (real_parts[1] <= -m[i].real()) throw std::invalid_argument("contour sigma2 not right of the poles");
        }
        if (!(height > 0) || !(step > 0) || step > height / 50) throw std::invalid_argument("contour requires 0 < step <= height/50");
    }
};

namespace detail {

inline double default_height(double sigma) { return 26.0 + 8.0 * std::sqrt(std::max(sigma, 1.0)); }

// trapezoid step resolving the oscillation of (pi y)^{-i tau}
inline double default_step(double Lmax) { return std::min(0.15, 2 * pi / (40.0 + Lmax)); }

}  // namespace detail

inline ContourSpec default_contour(const SpectralPoint& m, double Lmax = 4.0) {
    const double s = m.max_abs_real() + 1.0;
    return {{s, s}, detail::default_height(s), detail::default_step(Lmax)};
}

// Real saddle of the integrand for a single y; moving there removes most of the
// cancellation when y is large.
inline ContourSpec saddle_contour(std::array<double, 2> y, const SpectralPoint& m) {
    const double lo = m.max_abs_real() + 1.0;
    const double L1 = std::log(pi * y[0]), L2 = std::log(pi * y[1]);
    auto d1 = [&](double s1, double s2) {
        double v = -L1 - 0.5 * digamma((s1 + s2) / 2.0).real();
        for (int i = 0; i < 3; ++i) v += 0.5 * digamma((s1 - m[i]) / 2.0).real();
        return v;
    };
    auto d2 = [&](double s1, double s2) {
        double v = -L2 - 0.5 * digamma((s1 + s2) / 2.0).real();
        for (int i = 0; i < 3; ++i) v += 0.5 * digamma((s2 + m[i]) / 2.0).real();
        return v;
    };
    auto solve = [&](auto&& f) {
        if (f(lo) >= 0) return lo;
        double a = lo, b = lo + 1;
        while (f(b) < 0 && b < 1e4) b *= 2;
        for (int it = 0; it < 60; ++it) {
            double c = 0.5 * (a + b);
            (f(c) < 0 ? a : b) = c;
        }
        return 0.5 * (a + b);
    };
    double s1 = lo, s2 = lo;
    for (int it = 0; it < 30; ++it) {
        double n1 = solve([&](double x) { return d1(x, s2); });
        double n2 = solve([&](double x) { return d2(n1, x); });
        bool done = std::abs(n1 - s1) < 1e-9 && std::abs(n2 - s2) < 1e-9;
        s1 = n1;
        s2 = n2;
        if (done) break;
    }
    const double Lmax = std::max(std::abs(L1), std::abs(L2));
    return {{s1, s2}, detail::default_height(std::max(s1, s2)), detail::default_step(Lmax)};
}

// Trapezoid discretization of the Mellin-Barnes integral. The integrand factors as
// A(s1) B(s2) C(s1+s2) and the nodes are equally spaced, so C only depends on j+k
// and one grid serves every y.
class MellinBarnesGrid {
public:
    MellinBarnesGrid(const SpectralPoint& m, const ContourSpec& c, bool adapt = true) : mu_(m), c_(c) {
        c_.validate(m);
        for (int attempt = 0;; ++attempt) {
            build();
            if (!adapt || tail_ratio_ < 1e-14 || attempt == 4) break;
            c_.height *= 1.3;
        }
    }

    const ContourSpec& contour() const { return c_; }
    const SpectralPoint& spectral_point() const { return mu_; }
    // largest integrand magnitude on the boundary of the truncated grid relative to its peak
    double tail_ratio() const { return tail_ratio_; }
    std::size_t nodes() const { return n1_ * n2_; }

    cplx operator()(double y1, double y2) const {
        std::vector<double> gr(n1_), gi(n1_);
        correlate(y2, gr.data(), gi.data());
        return finish(y1, y2, gr.data(), gi.data());
    }

    // out[i * y2s.size() + k] = W(y1s[i], y2s[k])
    std::vector<cplx> tensor(const std::vector<double>& y1s, const std::vector<double>& y2s, int threads = 1) const {
        std::vector<cplx> out(y1s.size() * y2s.size());
        auto rows = [&](std::size_t lo, std::size_t hi) {
            std::vector<double> gr(n1_), gi(n1_);
            for (std::size_t k = lo; k < hi; ++k) {
                correlate(y2s[k], gr.data(), gi.data());
                for (std::size_t i = 0; i < y1s.size(); ++i) out[i * y2s.size() + k] = finish(y1s[i], y2s[k], gr.data(), gi.data());
            }
        };
        if (threads <= 1 || y2s.size() < 2) {
            rows(0, y2s.size());
            return out;
        }
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back(rows, y2s.size() * w / threads, y2s.size() * (w + 1) / threads);
        for (auto& t : pool) t.join();
        return out;
    }

private:
    void build() {
        const double h = c_.step, H = c_.height;
        const double s1 = c_.real_parts[0], s2 = c_.real_parts[1];
        double lo1 = 1e300, hi1 = -1e300;
        for (int i = 0; i < 3; ++i) {
            lo1 = std::min(lo1, mu_[i].imag());
            hi1 = std::max(hi1, mu_[i].imag());
        }
        // the second line follows -mu
        const double lo2 = -hi1, hi2 = -lo1;
        t1_ = lo1 - H;
        t2_ = lo2 - H;
        n1_ = static_cast<std::size_t>(std::ceil((hi1 - lo1 + 2 * H) / h)) + 1;
        n2_ = static_cast<std::size_t>(std::ceil((hi2 - lo2 + 2 * H) / h)) + 1;

        std::vector<cplx> la(n1_), lb(n2_), lc(n1_ + n2_ - 1);
        for (std::size_t j = 0; j < n1_; ++j) {
            cplx s(s1, t1_ + j * h);
            cplx v = 0;
            for (int i = 0; i < 3; ++i) v += log_gamma((s - mu_[i]) / 2.0);
            la[j] = v;
        }
        for (std::size_t k = 0; k < n2_; ++k) {
            cplx s(s2, t2_ + k * h);
            cplx v = 0;
            for (int i = 0; i < 3; ++i) v += log_gamma((s + mu_[i]) / 2.0);
            lb[k] = v;
        }
        for (std::size_t m = 0; m < lc.size(); ++m) lc[m] = -log_gamma(cplx(s1 + s2, t1_ + t2_ + m * h) / 2.0);

        auto normalize = [](const std::vector<cplx>& l, double& r, std::vector<double>& re, std::vector<double>& im) {
            r = -1e300;
            for (auto& v : l) r = std::max(r, v.real());
            re.resize(l.size());
            im.resize(l.size());
            for (std::size_t i = 0; i < l.size(); ++i) {
                cplx e = std::exp(l[i] - r);
                re[i] = e.real();
                im[i] = e.imag();
            }
        };
        normalize(la, ra_, ar_, ai_);
        normalize(lb, rb_, br_, bi_);
        normalize(lc, rc_, cr_, ci_);

        double peak = -1e300, edge = -1e300;
        for (std::size_t j = 0; j < n1_; ++j)
            for (std::size_t k = 0; k < n2_; ++k) {
                double v = la[j].real() + lb[k].real() + lc[j + k].real();
                peak = std::max(peak, v);
                if (j == 0 || k == 0 || j + 1 == n1_ || k + 1 == n2_) edge = std::max(edge, v);
            }
        tail_ratio_ = std::exp(edge - peak);
    }

    // g_j = sum_k b_k (pi y2)^{-i tau2_k} c_{j+k}
    void correlate(double y2, double* gr, double* gi) const {
        const double L2 = std::log(pi * y2);
        std::vector<double> vr(n2_), vi(n2_);
        for (std::size_t k = 0; k < n2_; ++k) {
            const double ph = -(t2_ + k * c_.step) * L2;
            const double c = std::cos(ph), s = std::sin(ph);
            vr[k] = br_[k] * c - bi_[k] * s;
            vi[k] = br_[k] * s + bi_[k] * c;
        }
        const double* cr = cr_.data();
        const double* ci = ci_.data();
        for (std::size_t j = 0; j < n1_; ++j) {
            double r0 = 0, r1 = 0, i0 = 0, i1 = 0;
            const double* pr = cr + j;
            const double* pi_ = ci + j;
            std::size_t k = 0;
            for (; k + 1 < n2_; k += 2) {
                r0 += vr[k] * pr[k] - vi[k] * pi_[k];
                i0 += vr[k] * pi_[k] + vi[k] * pr[k];
                r1 += vr[k + 1] * pr[k + 1] - vi[k + 1] * pi_[k + 1];
                i1 += vr[k + 1] * pi_[k + 1] + vi[k + 1] * pr[k + 1];
            }
            for (; k < n2_; ++k) {
                r0 += vr[k] * pr[k] - vi[k] * pi_[k];
                i0 += vr[k] * pi_[k] + vi[k] * pr[k];
            }
            gr[j] = r0 + r1;
            gi[j] = i0 + i1;
        }
    }

    cplx finish(double y1, double y2, const double* gr, const double* gi) const {
        const double L1 = std::log(pi * y1), L2 = std::log(pi * y2);
        double sr = 0, si = 0;
        for (std::size_t j = 0; j < n1_; ++j) {
            const double ph = -(t1_ + j * c_.step) * L1;
            const double c = std::cos(ph), s = std::sin(ph);
            const double ur = ar_[j] * c - ai_[j] * s, ui = ar_[j] * s + ai_[j] * c;
            sr += ur * gr[j] - ui * gi[j];
            si += ur * gi[j] + ui * gr[j];
        }
        const double h = c_.step;
        const double logscale = ra_ + rb_ + rc_ + (1 - c_.real_parts[0]) * L1 + (1 - c_.real_parts[1]) * L2;
        return cplx(sr, si) * (std::exp(logscale) * h * h / (16 * pi * pi * pi * pi));
    }

    SpectralPoint mu_;
    ContourSpec c_;
    std::size_t n1_ = 0, n2_ = 0;
    double t1_ = 0, t2_ = 0;
    double ra_ = 0, rb_ = 0, rc_ = 0, tail_ratio_ = 1;
    std::vector<double> ar_, ai_, br_, bi_, cr_, ci_;
};

struct WhittakerValue {
    cplx value;
    double tail_estimate;
    bool accurate;
};

inline WhittakerValue whittaker_checked(std::array<double, 2> y, const SpectralPoint& m, const ContourSpec& c) {
    if (!(y[0] > 0) || !(y[1] > 0)) throw std::domain_error("whittaker: y must be positive");
    MellinBarnesGrid g(m, c);
    return {g(y[0], y[1]), g.tail_ratio(), g.tail_ratio() < 1e-12};
}

inline cplx whittaker(std::array<double, 2> y, const SpectralPoint& m, const ContourSpec& c) {
    return whittaker_checked(y, m, c).value;
}

inline cplx whittaker(std::array<double, 2> y, const SpectralPoint& m) {
    return whittaker(y, m, saddle_contour(y, m));
}

inline cplx stade_closed_form(const SpectralPoint& m, const SpectralPoint& mp, cplx t) {
    cplx l = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx a = (t + m[i] + mp[j]) / 2.0;
            if (is_nonpositive_integer(a)) return complex_infinity();
            l += log_gamma(a);
        }
    if (is_nonpositive_integer(1.5 * t)) return 0.0;
    return std::exp(l - log_gamma(1.5 * t) - 3.0 * t * std::log(pi)) / 4.0;
}

// Gauss-Legendre nodes and weights on [a,b] split into unit-length panels
inline void composite_gauss(double a, double b, double panel, std::vector<double>& x, std::vector<double>& w) {
    using GL = boost::math::quadrature::gauss<double, 8>;
    const auto& ab = GL::abscissa();
    const auto& wt = GL::weights();
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    const double len = (b - a) / panels;
    x.clear();
    w.clear();
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * len, half = 0.5 * len;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            x.push_back(mid - half * ab[i]);
            w.push_back(half * wt[i]);
            if (ab[i] != 0) {
                x.push_back(mid + half * ab[i]);
                w.push_back(half * wt[i]);
            }
        }
    }
}

struct StadeResult {
    cplx numeric, closed_form;
    double relative_error() const { return std::abs(numeric - closed_form) / std::abs(closed_form); }
};

// Integral over Y+ with dy = dy1 dy2/(y1 y2)^3, in coordinates y = e^u.
// W decays like y^{1+...} at 0 and like exp(-2 pi y) at infinity.
inline StadeResult stade_integral(const SpectralPoint& m, const SpectralPoint& mp, cplx t, int threads = 1) {
    if (t.real() < 1.0) throw std::domain_error("stade_integral: needs Re t >= 1");
    const double shift = m.max_abs_real() + mp.max_abs_real();
    const double r1 = 2 * t.real() - shift, r2 = t.real() - shift;
    if (r1 <= 0.5 || r2 <= 0.5) throw std::domain_error("stade_integral: integrand not integrable at 0");
    std::vector<double> u1, w1, u2, w2;
    composite_gauss(-36.0 / r1, 3.0, 1.0, u1, w1);
    composite_gauss(-36.0 / r2, 3.0, 1.0, u2, w2);
    std::vector<double> y1(u1.size()), y2(u2.size());
    for (std::size_t i = 0; i < u1.size(); ++i) y1[i] = std::exp(u1[i]);
    for (std::size_t k = 0; k < u2.size(); ++k) y2[k] = std::exp(u2[k]);

    const double Lmax = std::max(std::abs(std::log(pi * y1.front())), std::abs(std::log(pi * y2.front())));
    auto contour = [&](const SpectralPoint& p) {
        const double s = p.max_abs_real() + 1.0;
        return ContourSpec{{s, s}, detail::default_height(s), detail::default_step(Lmax)};
    };
    auto Wa = MellinBarnesGrid(m, contour(m)).tensor(y1, y2, threads);
    auto Wb = MellinBarnesGrid(mp, contour(mp)).tensor(y1, y2, threads);
    cplx sum = 0;
    for (std::size_t i = 0; i < y1.size(); ++i)
        for (std::size_t k = 0; k < y2.size(); ++k) {
            const std::size_t idx = i * y2.size() + k;
            sum += w1[i] * w2[k] * Wa[idx] * Wb[idx] * std::exp((2.0 * t - 2.0) * u1[i] + (t - 2.0) * u2[k]);
        }
    return {sum, stade_closed_form(m, mp, t)};
}

inline cplx small_y_asymptotic(std::array<double, 2> y, const SpectralPoint& m) {
    if (m.degenerate()) throw std::domain_error("small_y_asymptotic: coinciding spectral coordinates");
    cplx s = 0;
    for (Weyl w : weyl_group) {
        auto v = apply(w, m);
        cplx p = std::exp((1.0 - v[2]) * std::log(y[0]) + (1.0 + v[0]) * std::log(y[1]));
        s += std::exp((v[0] - v[2]) * std::log(pi)) * p * complex_gamma((v[2] - v[0]) / 2.0) * complex_gamma((v[2] - v[1]) / 2.0) * complex_gamma((v[1] - v[0]) / 2.0);
    }
    return s;
}

inline constexpr double kim_sarnak_theta = 5.0 / 14.0;

inline double blomer_ratio(std::array<double, 2> y, const SpectralPoint& m, double a1, double a2, double A, double eps = 0.01) {
    if (!(A > a1 && a1 > std::abs(a2) + kim_sarnak_theta)) throw std::invalid_argument("blomer bound requires A > a1 > |a2| + theta");
    const double denom = std::pow(y[0] * y[1], 1 - a1) * std::pow(y[0] / y[1], a2) * std::pow(1 + m.norm(), 2 * a1 - 0.5 + eps);
    return std::abs(whittaker(y, m)) / denom;
}

inline cplx laplacian_eigenvalue(const SpectralPoint& m) {
    return 1.0 - (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) / 2.0;
}

// |Delta W - lambda W| / |W| with the restricted Laplacian
//   -(d1^2 - d1) - (d2^2 - d2) + d1 d2 + 4 pi^2 (y1^2 + y2^2),   di = d/du_i, y = e^u,
// from 5-point central differences at steps d and d/2, Richardson-combined.
inline double eigenfunction_residual(std::array<double, 2> y, const SpectralPoint& m, double d = 0.01) {
    MellinBarnesGrid g(m, saddle_contour(y, m));
    const double u1 = std::log(y[0]), u2 = std::log(y[1]);
    auto apply_at = [&](double h) {
        std::vector<double> a(5), b(5);
        for (int i = 0; i < 5; ++i) {
            a[i] = std::exp(u1 + (i - 2) * h);
            b[i] = std::exp(u2 + (i - 2) * h);
        }
        auto W = g.tensor(a, b);
        auto at = [&](int i, int k) { return W[i * 5 + k]; };
        const double D1[5] = {1, -8, 0, 8, -1}, D2[5] = {-1, 16, -30, 16, -1};
        cplx f1 = 0, f2 = 0, f11 = 0, f22 = 0, f12 = 0;
        for (int i = 0; i < 5; ++i) {
            f1 += D1[i] * at(i, 2);
            f2 += D1[i] * at(2, i);
            f11 += D2[i] * at(i, 2);
            f22 += D2[i] * at(2, i);
            for (int k = 0; k < 5; ++k) f12 += D1[i] * D1[k] * at(i, k);
        }
        f1 /= 12 * h;
        f2 /= 12 * h;
        f11 /= 12 * h * h;
        f22 /= 12 * h * h;
        f12 /= 144 * h * h;
        return -(f11 - f1) - (f22 - f2) + f12 + 4 * pi * pi * (y[0] * y[0] + y[1] * y[1]) * at(2, 2);
    };
    const cplx coarse = apply_at(d), fine = apply_at(d / 2);
    const cplx lap = (16.0 * fine - coarse) / 15.0;
    const cplx w = g(y[0], y[1]);
    return std::abs(lap - laplacian_eigenvalue(m) * w) / std::abs(w);
}

}  // namespace sl3kuz
