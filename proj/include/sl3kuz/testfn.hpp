#pragma once

#include <array>
#include <optional>
#include <stdexcept>

#include "gamma.hpp"
#include "jet.hpp"

namespace sl3kuz {

inline cplx powc(cplx x, cplx e) { return std::exp(e * std::log(x)); }
inline Jet powc(const Jet& x, cplx e) { return pow(x, e); }

// Test functions on (R+)^2. All kinds share one generic formula so that values and
// Taylor jets (for exact differential operators) come from the same code.
class TestFunction {
public:
    enum class Kind { gaussian_bump, f_s, power_exp, power };

    // log-Gaussian of width w around c, times a smooth cutoff that is 1 within 8
    // widths and vanishes beyond 10 widths
    static TestFunction gaussian_bump(std::array<double, 2> center, double width) {
        if (!(center[0] > 0 && center[1] > 0 && width > 0)) throw std::invalid_argument("gaussian_bump: bad parameters");
        TestFunction f(Kind::gaussian_bump);
        f.center_ = center;
        f.width_ = width;
        return f;
    }
    // y1^{2 st1} y2^{2 st2} exp(-pi^2 (y1^2 + y2^2)) with st = (2 s1 + s2, s1 + 2 s2)
    static TestFunction f_s(std::array<cplx, 2> s) {
        TestFunction f(Kind::f_s);
        f.s_ = s;
        return f;
    }
    // (pi y1)^{2 s1} (pi y2)^{2 s2} exp(-(pi^9 y1^5 y2^4)^2 - (pi^9 y1^4 y2^5)^2)
    static TestFunction power_exp(std::array<cplx, 2> s) {
        TestFunction f(Kind::power_exp);
        f.s_ = s;
        return f;
    }
    // (pi y1)^{2 s1} (pi y2)^{2 s2}, no damping
    static TestFunction power(std::array<cplx, 2> s) {
        TestFunction f(Kind::power);
        f.s_ = s;
        return f;
    }

    Kind kind() const { return kind_; }
    std::array<cplx, 2> s() const { return s_; }
    std::array<cplx, 2> s_tilde() const { return {2.0 * s_[0] + s_[1], s_[0] + 2.0 * s_[1]}; }
    std::array<double, 2> center() const { return center_; }
    double width() const { return width_; }
    bool compactly_supported() const { return kind_ == Kind::gaussian_bump; }

    cplx operator()(double y1, double y2) const { return eval(cplx(y1), cplx(y2)); }

    Jet jet(double y1, double y2, int order) const {
        return eval(Jet::variable(order, y1, 0), Jet::variable(order, y2, 1));
    }

    // int f(y) y1^{z1} y2^{z2} dy1 dy2 / (y1 y2), where a closed form exists
    std::optional<cplx> mellin(std::array<cplx, 2> z) const {
        switch (kind_) {
            case Kind::f_s: {
                auto st = s_tilde();
                cplx r = 1.0;
                for (int i = 0; i < 2; ++i) r *= 0.5 * std::exp(-(2.0 * st[i] + z[i]) * std::log(pi)) * complex_gamma(st[i] + z[i] / 2.0);
                return r;
            }
            case Kind::power_exp: {
                const cplx p = 2.0 * s_[0] + z[0], q = 2.0 * s_[1] + z[1];
                return std::exp(-(z[0] + z[1]) * std::log(pi)) / 36.0 * complex_gamma((5.0 * p - 4.0 * q) / 18.0) *
                       complex_gamma((5.0 * q - 4.0 * p) / 18.0);
            }
            default: return std::nullopt;
        }
    }

    // box in log coordinates outside of which f is zero or below about e^-40 of its size
    std::array<double, 4> log_box() const {
        switch (kind_) {
            case Kind::gaussian_bump: {
                const double l1 = std::log(center_[0]), l2 = std::log(center_[1]), r = 10 * width_;
                return {l1 - r, l1 + r, l2 - r, l2 + r};
            }
            case Kind::f_s: {
                auto st = s_tilde();
                return {-40.0 / std::max(2 * st[0].real(), 0.5), 1.5, -40.0 / std::max(2 * st[1].real(), 0.5), 1.5};
            }
            case Kind::power_exp:
            {
                // f lives in the cone A, B <= 0 with A = 5u1 + 4u2, B = 4u1 + 5u2 (shifted
                // by log pi), decaying like e^{alpha A + beta B} into it
                const double p = 2 * s_[0].real(), q = 2 * s_[1].real();
                const double rate = std::max(std::min(5 * p - 4 * q, 5 * q - 4 * p) / 9, 1.0 / 3);
                const double L = std::min(45 / rate, 135.0), c = -std::log(pi);
                return {c - 5 * L / 9 - 0.5, c + 4 * L / 9 + 0.5, c - 5 * L / 9 - 0.5, c + 4 * L / 9 + 0.5};
            }
            default: return {-10, 10, -10, 10};
        }
    }

private:
    explicit TestFunction(Kind k) : kind_(k) {}

    template <class T>
    T eval(T y1, T y2) const {
        using std::exp;
        using std::log;
        switch (kind_) {
            case Kind::gaussian_bump: {
                T l1 = log(y1) - std::log(center_[0]);
                T l2 = log(y2) - std::log(center_[1]);
                T q = (l1 * l1 + l2 * l2) / (width_ * width_);
                const double q0 = value0(q).real();
                if (q0 >= 100) return y1 * 0.0;
                T g = exp(-q / 2.0);
                if (q0 <= 64) return g;
                // smooth step S(x) = psi(x)/(psi(x)+psi(1-x)), psi(x) = exp(-1/x)
                T x = (q - 64.0) / 36.0;
                T a = exp(-1.0 / x), b = exp(-1.0 / (1.0 - x));
                return g * (1.0 - a / (a + b));
            }
            case Kind::f_s: {
                auto st = s_tilde();
                return powc(y1, 2.0 * st[0]) * powc(y2, 2.0 * st[1]) * exp(-pi * pi * (y1 * y1 + y2 * y2));
            }
            case Kind::power_exp: {
                T A = 9 * std::log(pi) + 5.0 * log(y1) + 4.0 * log(y2);
                T B = 9 * std::log(pi) + 4.0 * log(y1) + 5.0 * log(y2);
                // exp(-e^700) is zero along with every derivative
                if (std::max(value0(A).real(), value0(B).real()) > 350) return y1 * 0.0;
                // one exponent, so huge powers never meet vanishing damping
                return exp(2.0 * s_[0] * log(pi * y1) + 2.0 * s_[1] * log(pi * y2) - exp(2.0 * A) - exp(2.0 * B));
            }
            case Kind::power: return powc(pi * y1, 2.0 * s_[0]) * powc(pi * y2, 2.0 * s_[1]);
        }
        return y1 * 0.0;
    }

    Kind kind_;
    std::array<double, 2> center_{1, 1};
    double width_ = 0.3;
    std::array<cplx, 2> s_{1.0, 1.0};
};

}  // namespace sl3kuz
