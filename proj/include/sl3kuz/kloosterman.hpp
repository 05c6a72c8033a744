#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "exactmod.hpp"

namespace sl3kuz {

struct LongElementInstance {
    std::array<i64, 2> m{1, 1}, n{1, 1}, c{1, 1};

    void validate() const {
        if (m[0] == 0 || m[1] == 0 || n[0] == 0 || n[1] == 0)
            throw std::invalid_argument("indices must be nonzero");
        if (c[0] < 1 || c[1] < 1) throw std::invalid_argument("moduli must be positive");
        if (static_cast<i128>(c[0]) * c[1] > (i64(1) << 31))
            throw std::invalid_argument("moduli too large: c1*c2 > 2^31");
    }
    // the arithmetic Kuznetsov experiments need m1 n2 > 0 and m2 n1 > 0
    bool sign_condition() const { return m[0] * n[1] > 0 && m[1] * n[0] > 0; }
};

struct KloostermanValue {
    cplx value{0, 0};
    i64 q = 1;
    i64 term_count = 0;
};

// S(a1,a2,b1,b2;D1,D2) in the Bump-Friedberg-Goldfeld normalization
struct Sl3Sum {
    i64 a1, a2, b1, b2, D1, D2;
};

inline Sl3Sum long_element_args(const LongElementInstance& inst) {
    return {-inst.n[1], -inst.n[0], inst.m[0], inst.m[1], inst.c[0], inst.c[1]};
}

using UnimodularSolver = std::function<Unimodular(i64, i64, i64)>;

namespace detail {

inline i64 phase_index(const Sl3Sum& s, i64 B1, i64 B2, Unimodular u1, Unimodular u2) {
    const i64 D1 = s.D1, D2 = s.D2;
    i128 x1 = static_cast<i128>(s.a1) * B1 + static_cast<i128>(s.b1) * (static_cast<i128>(u1.Y) * D2 - static_cast<i128>(u1.Z) * B2);
    i128 x2 = static_cast<i128>(s.a2) * B2 + static_cast<i128>(s.b2) * (static_cast<i128>(u2.Y) * D1 - static_cast<i128>(u2.Z) * B1);
    i64 r1 = static_cast<i64>(x1 % D1);
    if (r1 < 0) r1 += D1;
    i64 r2 = static_cast<i64>(x2 % D2);
    if (r2 < 0) r2 += D2;
    return (r1 * D2 + r2 * D1) % (D1 * D2);
}

// (Y,Z) for every admissible (B,C) mod D, cached for moderate D
class UnimodularTable {
public:
    explicit UnimodularTable(i64 D) : D_(D), t_(D * D, {0, 0}), ok_(D * D, 0) {
        for (i64 B = 0; B < D; ++B)
            for (i64 C = 0; C < D; ++C) {
                if (gcd(gcd(B, C), D) != 1) continue;
                t_[B * D + C] = solve_unimodular(B, C, D);
                ok_[B * D + C] = 1;
            }
    }
    const Unimodular& at(i64 B, i64 C) const { return t_[B * D_ + C]; }
    bool admissible(i64 B, i64 C) const { return ok_[B * D_ + C]; }

private:
    i64 D_;
    std::vector<Unimodular> t_;
    std::vector<char> ok_;
};

inline std::shared_ptr<const UnimodularTable> unimodular_table(i64 D) {
    static std::mutex mtx;
    static std::unordered_map<i64, std::shared_ptr<const UnimodularTable>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(D);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<const UnimodularTable>(D);
    cache.emplace(D, t);
    return t;
}

constexpr i64 table_limit = 400;

}  // namespace detail

// Oracle: all (B1,C1,B2,C2) are enumerated directly.
inline RootOfUnityAccumulator sl3_accumulate_bruteforce(const Sl3Sum& s, const UnimodularSolver& solver = solve_unimodular) {
    if (s.D1 < 1 || s.D2 < 1) throw std::domain_error("moduli must be positive");
    if (s.D1 * s.D2 > 10000) throw std::domain_error("bruteforce refused: D1*D2 > 1e4");
    const i64 D1 = s.D1, D2 = s.D2, q = D1 * D2;
    RootOfUnityAccumulator acc(q);
    for (i64 B1 = 0; B1 < D1; ++B1)
        for (i64 C1 = 0; C1 < D1; ++C1) {
            if (gcd(gcd(B1, C1), D1) != 1) continue;
            for (i64 B2 = 0; B2 < D2; ++B2)
                for (i64 C2 = 0; C2 < D2; ++C2) {
                    if (gcd(gcd(B2, C2), D2) != 1) continue;
                    if ((D1 * C2 + B1 * B2 + D2 * C1) % q != 0) continue;
                    acc.add(detail::phase_index(s, B1, B2, solver(B1, C1, D1), solver(B2, C2, D2)));
                }
        }
    return acc;
}

// Loop over B1, B2 and solve the congruence for C1; C2 is then forced.
inline RootOfUnityAccumulator sl3_accumulate(const Sl3Sum& s, int threads = 1, const UnimodularSolver* solver = nullptr) {
    if (s.D1 < 1 || s.D2 < 1) throw std::domain_error("moduli must be positive");
    const i64 D1 = s.D1, D2 = s.D2, q = D1 * D2;
    if (static_cast<i128>(D1) * D2 > (i64(1) << 31)) throw std::domain_error("D1*D2 exceeds 2^31");
    const i64 g = gcd(D1, D2), D1g = D1 / g;
    const i64 D2inv = invmod(D2 / g, D1g);

    std::shared_ptr<const detail::UnimodularTable> t1, t2;
    if (!solver && D1 <= detail::table_limit) t1 = detail::unimodular_table(D1);
    if (!solver && D2 <= detail::table_limit) t2 = detail::unimodular_table(D2);

    auto work = [&](i64 b1lo, i64 b1hi, RootOfUnityAccumulator& acc) {
        for (i64 B1 = b1lo; B1 < b1hi; ++B1)
            for (i64 B2 = 0; B2 < D2; ++B2) {
                const i64 r = (B1 * B2) % D1;
                if (r % g) continue;
                const i64 c0 = mulmod(D2inv, mod(-r / g, D1g), D1g);
                for (i64 t = 0; t < g; ++t) {
                    const i64 C1 = c0 + t * D1g;
                    if (gcd(gcd(B1, C1), D1) != 1) continue;
                    const i64 C2 = mod(-((B1 * B2 + D2 * C1) / D1), D2);
                    if (gcd(gcd(B2, C2), D2) != 1) continue;
                    Unimodular u1 = t1 ? t1->at(B1, C1) : (solver ? (*solver)(B1, C1, D1) : solve_unimodular(B1, C1, D1));
                    Unimodular u2 = t2 ? t2->at(B2, C2) : (solver ? (*solver)(B2, C2, D2) : solve_unimodular(B2, C2, D2));
                    acc.add(detail::phase_index(s, B1, B2, u1, u2));
                }
            }
    };

    RootOfUnityAccumulator acc(q);
    if (threads <= 1 || D1 < 2 * threads) {
        work(0, D1, acc);
        return acc;
    }
    std::vector<RootOfUnityAccumulator> parts(threads, RootOfUnityAccumulator(q));
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        i64 lo = D1 * w / threads, hi = D1 * (w + 1) / threads;
        pool.emplace_back([&, lo, hi, w] { work(lo, hi, parts[w]); });
    }
    for (auto& th : pool) th.join();
    for (auto& p : parts) acc.merge(p);
    return acc;
}

inline KloostermanValue to_value(const RootOfUnityAccumulator& acc) {
    return {acc.evaluate(), acc.modulus(), acc.total()};
}

inline KloostermanValue long_element_bruteforce(const LongElementInstance& inst, const UnimodularSolver& solver = solve_unimodular) {
    inst.validate();
    return to_value(sl3_accumulate_bruteforce(long_element_args(inst), solver));
}

inline KloostermanValue long_element_sum(const LongElementInstance& inst, int threads = 1) {
    inst.validate();
    return to_value(sl3_accumulate(long_element_args(inst), threads));
}

inline RootOfUnityAccumulator classical_accumulate(i64 m, i64 n, i64 c) {
    if (c < 1) throw std::domain_error("classical Kloosterman sum: modulus must be positive");
    RootOfUnityAccumulator acc(c);
    const i64 mm = mod(m, c), nn = mod(n, c);
    for (i64 x = 0; x < c; ++x) {
        if (gcd(x, c) != 1) continue;
        const i64 xb = invmod(x, c);
        acc.add(static_cast<i64>((static_cast<i128>(mm) * x + static_cast<i128>(nn) * xb) % c));
    }
    return acc;
}

inline KloostermanValue classical_kloosterman(i64 m, i64 n, i64 c) {
    return to_value(classical_accumulate(m, n, c));
}

inline KloostermanValue factorization_fastpath(const LongElementInstance& inst) {
    inst.validate();
    const i64 c1 = inst.c[0], c2 = inst.c[1];
    if (gcd(c1, c2) != 1) throw std::invalid_argument("factorization_fastpath: gcd(c1,c2) > 1");
    auto k1 = classical_kloosterman(inst.m[0], -inst.n[1] * c2, c1);
    auto k2 = classical_kloosterman(inst.m[1] * c1, -inst.n[0], c2);
    return {k1.value * k2.value, c1 * c2, k1.term_count * k2.term_count};
}

// |S(m,n;c)| <= tau(c) sqrt(gcd(m,n,c)) sqrt(c)
inline bool weil_bound_holds(i64 m, i64 n, i64 c, double slack = 1e-9) {
    const double s = std::abs(classical_kloosterman(m, n, c).value);
    return s <= divisor_count(c) * std::sqrt(static_cast<double>(gcd(gcd(m, n), c))) * std::sqrt(static_cast<double>(c)) + slack;
}

struct StevensRow {
    i64 c1, c2;
    KloostermanValue k;
    double ratio;
    bool flagged;
};

struct StevensReport {
    std::vector<StevensRow> rows;
    double max_ratio = 0;
    int flagged = 0;
};

inline StevensReport stevens_report(std::array<i64, 2> m, std::array<i64, 2> n, i64 Cmax, double eps = 0.0, double alert = 10.0, int threads = 1) {
    StevensReport rep;
    for (i64 c1 = 1; c1 <= Cmax; ++c1)
        for (i64 c2 = 1; c2 <= Cmax; ++c2) {
            LongElementInstance inst{m, n, {c1, c2}};
            auto k = long_element_sum(inst, threads);
            const double denom = std::sqrt(static_cast<double>(gcd(c1, c2))) * std::pow(static_cast<double>(c1 * c2), 0.5 + eps);
            const double r = std::abs(k.value) / denom;
            const bool f = r > alert;
            rep.rows.push_back({c1, c2, k, r, f});
            rep.max_ratio = std::max(rep.max_ratio, r);
            rep.flagged += f;
        }
    return rep;
}

inline void write_stevens_csv(std::ostream& os, const StevensReport& rep) {
    os << "c1,c2,re,im,terms,ratio\n";
    os.precision(17);
    for (auto& r : rep.rows)
        os << r.c1 << ',' << r.c2 << ',' << r.k.value.real() << ',' << r.k.value.imag() << ',' << r.k.term_count << ',' << r.ratio << '\n';
}

}  // namespace sl3kuz
