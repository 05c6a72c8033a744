#pragma once

#include <algorithm>
#include <complex>
#include <vector>

namespace sl3kuz {

using cplx = std::complex<double>;

// Truncated Taylor polynomial sum c_ij d1^i d2^j, i+j <= order, around a point.
// Derivatives lower the order, so results stay exact up to their own order.
class Jet {
public:
    Jet() = default;
    explicit Jet(int order, cplx value = 0.0) : order_(order), c_(size(order), 0.0) { c_[0] = value; }

    static Jet variable(int order, double at, int which) {
        Jet j(order, at);
        if (order >= 1) j.at(which == 0 ? 1 : 0, which == 0 ? 0 : 1) = 1.0;
        return j;
    }

    int order() const { return order_; }
    cplx value() const { return c_[0]; }
    cplx coeff(int i, int j) const { return i + j <= order_ ? c_[index(i, j)] : 0.0; }
    cplx& at(int i, int j) { return c_[index(i, j)]; }

    // d^{i+j} / d1^i d2^j at the expansion point
    cplx derivative(int i, int j) const { return coeff(i, j) * (fact(i) * fact(j)); }

    Jet& operator+=(const Jet& o) {
        shrink(o.order_);
        for (int i = 0; i <= order_; ++i)
            for (int j = 0; i + j <= order_; ++j) at(i, j) += o.coeff(i, j);
        return *this;
    }
    Jet& operator-=(const Jet& o) { return *this += -o; }
    Jet& operator*=(cplx k) {
        for (auto& v : c_) v *= k;
        return *this;
    }
    Jet& operator+=(cplx k) {
        c_[0] += k;
        return *this;
    }

    Jet operator-() const {
        Jet r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        const int K = std::min(a.order_, b.order_);
        Jet r(K);
        for (int i1 = 0; i1 <= K; ++i1)
            for (int j1 = 0; i1 + j1 <= K; ++j1) {
                const cplx x = a.coeff(i1, j1);
                if (x == 0.0) continue;
                for (int i2 = 0; i1 + i2 + j1 <= K; ++i2)
                    for (int j2 = 0; i1 + i2 + j1 + j2 <= K; ++j2) r.at(i1 + i2, j1 + j2) += x * b.coeff(i2, j2);
            }
        return r;
    }

    Jet d(int which) const {
        Jet r(std::max(order_ - 1, 0));
        if (order_ == 0) return r;
        for (int i = 0; i <= r.order_; ++i)
            for (int j = 0; i + j <= r.order_; ++j)
                r.at(i, j) = which == 0 ? coeff(i + 1, j) * double(i + 1) : coeff(i, j + 1) * double(j + 1);
        return r;
    }

    // g(this) from the Taylor coefficients g_k = g^(k)(value)/k!
    Jet compose(const std::vector<cplx>& g) const {
        Jet dx = *this;
        dx.c_[0] = 0.0;
        Jet r(order_, g[0]), p(order_, 1.0);
        for (int k = 1; k <= order_ && k < static_cast<int>(g.size()); ++k) {
            p = p * dx;
            Jet t = p;
            t *= g[k];
            r += t;
        }
        return r;
    }

private:
    static int size(int K) { return (K + 1) * (K + 2) / 2; }
    int index(int i, int j) const {
        const int n = i + j;
        return n * (n + 1) / 2 + j;
    }
    static double fact(int n) {
        double f = 1;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    }
    void shrink(int K) {
        if (K >= order_) return;
        Jet r(K);
        for (int i = 0; i <= K; ++i)
            for (int j = 0; i + j <= K; ++j) r.at(i, j) = coeff(i, j);
        *this = r;
    }

    int order_ = 0;
    std::vector<cplx> c_{0.0};
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator+(Jet a, cplx k) { return a += k; }
inline Jet operator+(cplx k, Jet a) { return a += k; }
inline Jet operator-(Jet a, cplx k) { return a += -k; }
inline Jet operator-(cplx k, const Jet& a) { return -a + k; }
inline Jet operator*(Jet a, cplx k) { return a *= k; }
inline Jet operator*(cplx k, Jet a) { return a *= k; }
inline Jet operator/(Jet a, cplx k) { return a *= 1.0 / k; }

inline Jet exp(const Jet& a) {
    // e^value underflows, and so does every derivative
    if (a.value().real() < -700) return Jet(a.order(), 0.0);
    std::vector<cplx> g(a.order() + 1);
    const cplx e = std::exp(a.value());
    double f = 1;
    for (int k = 0; k <= a.order(); ++k) {
        if (k) f *= k;
        g[k] = e / f;
    }
    return a.compose(g);
}

inline Jet log(const Jet& a) {
    std::vector<cplx> g(a.order() + 1);
    const cplx x = a.value();
    g[0] = std::log(x);
    cplx p = 1.0;
    for (int k = 1; k <= a.order(); ++k) {
        p *= x;
        g[k] = (k % 2 ? 1.0 : -1.0) / (double(k) * p);
    }
    return a.compose(g);
}

inline Jet pow(const Jet& a, cplx e) {
    std::vector<cplx> g(a.order() + 1);
    const cplx x = a.value();
    cplx binom = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        g[k] = binom * std::exp((e - double(k)) * std::log(x));
        binom *= (e - double(k)) / double(k + 1);
    }
    return a.compose(g);
}

inline Jet reciprocal(const Jet& a) { return pow(a, -1.0); }
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(cplx k, const Jet& a) { return reciprocal(a) * k; }

inline cplx value0(cplx z) { return z; }
inline cplx value0(const Jet& j) { return j.value(); }

}  // namespace sl3kuz
