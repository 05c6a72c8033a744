#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace sl3kuz {

using i64 = std::int64_t;
using i128 = __int128;
using cplx = std::complex<double>;

struct no_solution_error : std::domain_error {
    using std::domain_error::domain_error;
};

inline i64 mod(i64 a, i64 q) {
    i64 r = a % q;
    return r < 0 ? r + q : r;
}

inline i64 mulmod(i64 a, i64 b, i64 q) {
    return static_cast<i64>(mod(static_cast<i64>((static_cast<i128>(a) * b) % q), q));
}

inline i64 gcd(i64 a, i64 b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

struct Egcd {
    i64 g, x, y;
};

// ax + by = g with g = gcd(a,b) > 0
inline Egcd egcd(i64 a, i64 b) {
    if (a == 0 && b == 0) throw std::domain_error("egcd: both arguments zero");
    i64 r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (r0 < 0) return {-r0, -x0, -y0};
    return {r0, x0, y0};
}

// inverse of a modulo q, requires gcd(a,q)=1; modulo 1 everything is 0
inline i64 invmod(i64 a, i64 q) {
    if (q == 1) return 0;
    auto e = egcd(mod(a, q), q);
    if (e.g != 1) throw no_solution_error("invmod: not invertible");
    return mod(e.x, q);
}

struct Unimodular {
    i64 Y, Z;
};

// Y*B + Z*C = 1 (mod D). With g = gcd(B,D) we take Z = C^{-1} (mod g) in (-g,0]
// and then Y from the reduced congruence (B/g) Y = (1 - ZC)/g (mod D/g).
inline Unimodular solve_unimodular(i64 B, i64 C, i64 D) {
    if (D < 1) throw std::domain_error("solve_unimodular: modulus must be positive");
    i64 b = mod(B, D), c = mod(C, D);
    i64 g = gcd(b, D);
    if (gcd(g, c) != 1) throw no_solution_error("solve_unimodular: gcd(B,C,D) > 1");
    i64 Z = g == 1 ? 0 : invmod(c, g);
    if (Z > 0) Z -= g;
    i64 Dg = D / g;
    i64 rhs = 1 - static_cast<i64>((static_cast<i128>(Z) * c) % D);
    // rhs divisible by g by construction
    i64 Y = Dg == 1 ? 0 : mulmod(invmod(b / g, Dg), mod(rhs / g, Dg), Dg);
    return {Y, Z};
}

// e(k/q) for all k < q, built from two short tables so that only about
// 2*sqrt(q) trig calls are made
inline std::vector<cplx> unit_roots(i64 q) {
    i64 B = 1;
    while (B * B < q) ++B;
    std::vector<cplx> lo(B), hi(q / B + 1);
    const long double tau = 2.0L * std::numbers::pi_v<long double>;
    for (i64 j = 0; j < B; ++j) {
        long double a = tau * j / q;
        lo[j] = {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
    }
    for (i64 i = 0; i <= q / B; ++i) {
        long double a = tau * static_cast<long double>(i * B) / q;
        hi[i] = {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
    }
    std::vector<cplx> out(q);
    for (i64 k = 0; k < q; ++k) out[k] = hi[k / B] * lo[k % B];
    return out;
}

inline cplx unit_root(i64 k, i64 q) {
    const long double a = 2.0L * std::numbers::pi_v<long double> * mod(k, q) / q;
    return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

// Neumaier summation
struct CompensatedSum {
    double s = 0, c = 0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
        else c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

// Exact multiset of phases e(k/q). Dense storage for small q, ordered map above.
class RootOfUnityAccumulator {
public:
    static constexpr i64 dense_limit = i64(1) << 22;

    explicit RootOfUnityAccumulator(i64 q = 1) : q_(q) {
        if (q < 1) throw std::domain_error("accumulator modulus must be positive");
        if (q <= dense_limit) dense_.assign(q, 0);
    }

    i64 modulus() const { return q_; }

    void add(i64 k, i64 mult = 1) {
        k = mod(k, q_);
        if (!dense_.empty()) dense_[k] += mult;
        else sparse_[k] += mult;
    }

    i64 count(i64 k) const {
        k = mod(k, q_);
        if (!dense_.empty()) return dense_[k];
        auto it = sparse_.find(k);
        return it == sparse_.end() ? 0 : it->second;
    }

    i64 total() const {
        i64 t = 0;
        if (!dense_.empty())
            for (auto c : dense_) t += c;
        else
            for (auto& [k, c] : sparse_) t += c;
        return t;
    }

    void merge(const RootOfUnityAccumulator& o) {
        if (o.q_ != q_) throw std::invalid_argument("merge: modulus mismatch");
        if (!dense_.empty())
            for (i64 k = 0; k < q_; ++k) dense_[k] += o.dense_[k];
        else
            for (auto& [k, c] : o.sparse_) sparse_[k] += c;
    }

    cplx evaluate() const {
        CompensatedSum re, im;
        auto put = [&](i64 c, cplx e) {
            re.add(static_cast<double>(c) * e.real());
            im.add(static_cast<double>(c) * e.imag());
        };
        if (!dense_.empty()) {
            // the table is only worth building when most classes are hit
            i64 nz = 0;
            for (auto c : dense_) nz += c != 0;
            if (nz * 4 > q_) {
                auto e = unit_roots(q_);
                for (i64 k = 0; k < q_; ++k)
                    if (dense_[k]) put(dense_[k], e[k]);
            } else {
                for (i64 k = 0; k < q_; ++k)
                    if (dense_[k]) put(dense_[k], unit_root(k, q_));
            }
        } else {
            for (auto& [k, c] : sparse_)
                if (c) put(c, unit_root(k, q_));
        }
        return {re.value(), im.value()};
    }

    bool operator==(const RootOfUnityAccumulator& o) const {
        if (q_ != o.q_) return false;
        if (!dense_.empty()) return dense_ == o.dense_;
        for (auto& [k, c] : sparse_)
            if (c != o.count(k)) return false;
        for (auto& [k, c] : o.sparse_)
            if (c != count(k)) return false;
        return true;
    }

private:
    i64 q_;
    std::vector<i64> dense_;
    std::map<i64, i64> sparse_;
};

// smallest prime factor sieve; factor() returns (p, exponent) pairs
class PrimeSieve {
public:
    explicit PrimeSieve(i64 n) : spf_(n + 1, 0) {
        for (i64 i = 2; i <= n; ++i) {
            if (spf_[i]) continue;
            for (i64 j = i; j <= n; j += i)
                if (!spf_[j]) spf_[j] = static_cast<std::int32_t>(i);
        }
    }
    i64 limit() const { return static_cast<i64>(spf_.size()) - 1; }
    std::vector<std::pair<i64, int>> factor(i64 n) const {
        std::vector<std::pair<i64, int>> f;
        while (n > 1) {
            i64 p = spf_[n];
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.push_back({p, e});
        }
        return f;
    }

private:
    std::vector<std::int32_t> spf_;
};

inline std::vector<std::pair<i64, int>> factorize(i64 n) {
    std::vector<std::pair<i64, int>> f;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.push_back({p, e});
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

inline i64 divisor_count(i64 n) {
    i64 t = 1;
    for (auto [p, e] : factorize(n)) t *= e + 1;
    return t;
}

}  // namespace sl3kuz
