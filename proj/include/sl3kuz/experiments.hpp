#pragma once

#include <fftw3.h>

#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>

#include "kernels.hpp"
#include "kloosterman.hpp"
#include "zeta.hpp"

namespace sl3kuz {

// ---------------------------------------------------------------------------
// Classical Kloosterman sums modulo prime powers

namespace detail {

inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// The long-element sum in floating point for moduli (p^a, p^b): same enumeration
// as sl3_accumulate, but coprimality is a test for p, (Y,Z) is (B^{-1},0) or
// (0,C^{-1}) from inverse tables (the sum does not depend on the choice) and
// e(k/q) comes from a two-level table.
inline cplx local_sum(const Sl3Sum& s, i64 p) {
    const i64 D1 = s.D1, D2 = s.D2, q = D1 * D2, g = gcd(D1, D2), D1g = D1 / g;
    const i64 D2inv = invmod(D2 / g, D1g);
    const i64 a1 = mod(s.a1, D1), b1 = mod(s.b1, D1), a2 = mod(s.a2, D2), b2 = mod(s.b2, D2);
    auto inverses = [p](i64 D) {
        std::vector<i64> v(D, 0);
        for (i64 b = 1; b < D; ++b)
            if (b % p) v[b] = invmod(b, D);
        return v;
    };
    const auto inv1 = inverses(D1), inv2 = inverses(D2);
    i64 W = 1;
    while (W * W < q) ++W;
    std::vector<cplx> lo(W), hi(q / W + 1);
    for (i64 j = 0; j < W; ++j) lo[j] = unit_root(j, q);
    for (i64 i = 0; i <= q / W; ++i) hi[i] = unit_root(i * W, q);
    cplx acc = 0.0;
    for (i64 B1 = 0; B1 < D1; ++B1) {
        const bool u1 = D1 == 1 || B1 % p;
        for (i64 B2 = 0; B2 < D2; ++B2) {
            const i64 r = (B1 * B2) % D1;
            if (r % g) continue;
            const bool u2 = D2 == 1 || B2 % p;
            const i64 c0 = mulmod(D2inv, mod(-r / g, D1g), D1g);
            for (i64 t = 0; t < g; ++t) {
                const i64 C1 = c0 + t * D1g;
                if (!u1 && C1 % p == 0) continue;
                const i64 C2 = mod(-((B1 * B2 + D2 * C1) / D1), D2);
                if (!u2 && C2 % p == 0) continue;
                // Y D2 - Z B2 mod D1 and Y D1 - Z B1 mod D2
                const i64 w1 = D1 == 1 ? 0 : u1 ? inv1[B1] * D2 % D1 : mod(-inv1[C1] * B2, D1);
                const i64 w2 = D2 == 1 ? 0 : u2 ? inv2[B2] * D1 % D2 : mod(-inv2[C2] * B1, D2);
                const i64 r1 = (a1 * B1 + b1 * w1) % D1;
                const i64 r2 = (a2 * B2 + b2 * w2) % D2;
                const i64 k = (r1 * D2 + r2 * D1) % q;
                acc += hi[k / W] * lo[k % W];
            }
        }
    }
    return acc;
}

}  // namespace detail

// S(1,k;q) for every k mod q. With v(y) = e(ybar/q) on units this is the
// DFT sum_y v(y) e(ky/q).
inline std::vector<double> classical_table(i64 q) {
    if (q < 1) throw std::domain_error("classical_table: modulus must be positive");
    if (q == 1) return {1.0};
    const auto roots = unit_roots(q);
    fftw_complex* buf = fftw_alloc_complex(q);
    for (i64 y = 0; y < q; ++y) {
        buf[y][0] = buf[y][1] = 0;
        if (gcd(y, q) != 1) continue;
        const cplx v = roots[invmod(y, q)];
        buf[y][0] = v.real();
        buf[y][1] = v.imag();
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_mutex());
        plan = fftw_plan_dft_1d(int(q), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::vector<double> t(q);
    for (i64 k = 0; k < q; ++k) t[k] = buf[k][0];
    {
        std::lock_guard<std::mutex> lock(detail::fftw_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return t;
}

// Kloosterman sums evaluated through twisted multiplicativity. Every (c1,c2)
// splits into prime-power pieces (p^a, p^b); one-sided pieces are classical
// sums read from FFT tables, (p,p) pieces have a closed form, the rest are
// enumerated once and cached.
class MultiplicativeKloosterman {
public:
    explicit MultiplicativeKloosterman(i64 sieve_limit = 1 << 16) : sieve_(std::max<i64>(sieve_limit, 2)) {}

    // S(m,n;q) for q a prime power
    double classical_prime_power(i64 m, i64 n, i64 q) {
        if (q == 1) return 1.0;
        i64 k;
        if (gcd(m, q) == 1) k = mulmod(mod(m, q), mod(n, q), q);
        else if (gcd(n, q) == 1) k = mulmod(mod(m, q), mod(n, q), q);
        else return classical_kloosterman(m, n, q).value.real();
        return table(q)[k];
    }

    // S(m,n;c) = prod over p^a || c of S(m rbar^2, n; p^a), r = c / p^a
    double classical(i64 m, i64 n, i64 c) {
        if (c < 1) throw std::domain_error("classical Kloosterman sum: modulus must be positive");
        double v = 1.0;
        for (auto [p, e] : factor(c)) {
            i64 q = 1;
            for (int k = 0; k < e; ++k) q *= p;
            const i64 r = c / q, rb = invmod(r, q);
            v *= classical_prime_power(mulmod(mod(m, q), mulmod(rb, rb, q), q), n, q);
        }
        return v;
    }

    cplx long_element(const LongElementInstance& inst) {
        inst.validate();
        const i64 c1 = inst.c[0], c2 = inst.c[1];
        auto f1 = factor(c1), f2 = factor(c2);
        std::map<i64, std::array<int, 2>> pieces;
        for (auto [p, e] : f1) pieces[p][0] = e;
        for (auto [p, e] : f2) pieces[p][1] = e;
        cplx v = 1.0;
        for (auto [p, ab] : pieces) {
            i64 Q1 = 1, Q2 = 1;
            for (int k = 0; k < ab[0]; ++k) Q1 *= p;
            for (int k = 0; k < ab[1]; ++k) Q2 *= p;
            const i64 Q = Q1 * Q2;
            // n1 -> n1 B1 B2bar^2, n2 -> n2 B1bar^2 B2 for the cofactors B
            const i64 B1 = mod(c1 / Q1, Q), B2 = mod(c2 / Q2, Q);
            const i64 i1 = invmod(B1, Q), i2 = invmod(B2, Q);
            const i64 n1 = mulmod(mod(inst.n[0], Q), mulmod(B1, mulmod(i2, i2, Q), Q), Q);
            const i64 n2 = mulmod(mod(inst.n[1], Q), mulmod(B2, mulmod(i1, i1, Q), Q), Q);
            v *= local(p, Q1, Q2, mod(inst.m[0], Q), mod(inst.m[1], Q), n1, n2);
        }
        return v;
    }

private:
    std::vector<std::pair<i64, int>> factor(i64 c) const { return c <= sieve_.limit() ? sieve_.factor(c) : factorize(c); }

    const std::vector<double>& table(i64 q) {
        std::lock_guard<std::mutex> lock(mtx_);
        auto it = tables_.find(q);
        if (it == tables_.end()) it = tables_.emplace(q, classical_table(q)).first;
        return it->second;
    }

    cplx local(i64 p, i64 Q1, i64 Q2, i64 m1, i64 m2, i64 n1, i64 n2) {
        if (Q2 == 1) return classical_prime_power(m1, -n2, Q1);
        if (Q1 == 1) return classical_prime_power(m2, -n1, Q2);
        if (Q1 == p && Q2 == p) {
            // B1 = 0 or B2 = 0 mod p; each branch counts the C with b C^{-1} = a
            auto N = [p](i64 b, i64 a) -> i64 {
                if (b % p) return a % p ? 1 : 0;
                return a % p ? 0 : p - 1;
            };
            return double(p * (N(m1, n1) + N(m2, n2)) - p + 1);
        }
        // the phases only see m1, n2 mod Q1 and m2, n1 mod Q2
        m1 %= Q1, n2 %= Q1, m2 %= Q2, n1 %= Q2;
        const auto key = std::make_tuple(Q1, Q2, m1, m2, n1, n2);
        {
            std::lock_guard<std::mutex> lock(mtx_);
            auto it = local_.find(key);
            if (it != local_.end()) return it->second;
        }
        const cplx v = detail::local_sum({-n2, -n1, m1, m2, Q1, Q2}, p);
        std::lock_guard<std::mutex> lock(mtx_);
        local_.emplace(key, v);
        return v;
    }

    PrimeSieve sieve_;
    std::mutex mtx_;
    std::map<i64, std::vector<double>> tables_;
    std::map<std::tuple<i64, i64, i64, i64, i64, i64>, cplx> local_;
};

// ---------------------------------------------------------------------------
// Smooth sums of long-element Kloosterman sums

struct coverage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SmoothWeight {
    std::function<cplx(double, double)> f;
    // {lo1, hi1, lo2, hi2}: f vanishes outside; absent means the sum is
    // truncated at the caller's Cmax
    std::optional<std::array<double, 4>> support;

    static SmoothWeight from(const TestFunction& t) {
        SmoothWeight w{[t](double y1, double y2) { return t(y1, y2); }, std::nullopt};
        if (t.compactly_supported()) {
            auto b = t.log_box();
            w.support = std::array<double, 4>{std::exp(b[0]), std::exp(b[1]), std::exp(b[2]), std::exp(b[3])};
        }
        return w;
    }
};

enum class KlMethod { direct, multiplicative };

// largest c1, c2 with (X1 c2/c1^2, X2 c1/c2^2) inside the support box
inline std::array<i64, 2> support_bounds(const std::array<double, 4>& box, std::array<double, 2> X) {
    const double l1 = box[0], l2 = box[2];
    if (!(l1 > 0 && l2 > 0)) throw std::invalid_argument("support must lie in the open quadrant");
    const double c1 = std::cbrt(X[0] * X[0] * X[1] / (l1 * l1 * l2));
    const double c2 = std::cbrt(X[1] * X[1] * X[0] / (l2 * l2 * l1));
    return {i64(std::floor(c1 * (1 + 1e-12))) + 1, i64(std::floor(c2 * (1 + 1e-12))) + 1};
}

namespace detail {

inline void check_smooth_args(std::array<i64, 2> m, std::array<i64, 2> n, std::array<double, 2> X) {
    const LongElementInstance probe{m, n, {1, 1}};
    probe.validate();
    if (!probe.sign_condition()) throw std::invalid_argument("smooth sum: need m1 n2 > 0 and m2 n1 > 0");
    if (!(X[0] > 0 && X[1] > 0)) throw std::invalid_argument("smooth sum: X must be positive");
}

struct TermSink {
    KlMethod method;
    MultiplicativeKloosterman* mk;
    std::array<i64, 2> m, n;
    cplx value{0.0, 0.0};
    i64 terms = 0;

    // same expression as weighted_zeta_partial so both agree to the bit
    void add(i64 c1, i64 c2, cplx w) {
        if (w == 0.0) return;
        const LongElementInstance inst{m, n, {c1, c2}};
        const cplx S = method == KlMethod::direct ? long_element_sum(inst).value : mk->long_element(inst);
        value += S * w / double(c1 * c2);
        ++terms;
    }
};

inline MultiplicativeKloosterman& shared_multiplicative() {
    static MultiplicativeKloosterman mk(1 << 17);
    return mk;
}

}  // namespace detail

struct SmoothSum {
    cplx value;
    i64 terms;
    std::array<i64, 2> cmax;  // index box that was searched
};

// sum over c of S_wl(m,n,c)/(c1 c2) f(X1 c2/c1^2, X2 c1/c2^2). With a support box the
// index set is solved from it (Cmax = 0 means automatic); without one the sum
// is truncated at max(c1,c2) <= Cmax.
inline SmoothSum smooth_sum_KL(const SmoothWeight& w, std::array<i64, 2> m, std::array<i64, 2> n, std::array<double, 2> X, i64 Cmax = 0,
                               KlMethod method = KlMethod::multiplicative) {
    detail::check_smooth_args(m, n, X);
    std::array<i64, 2> cm;
    if (w.support) {
        cm = support_bounds(*w.support, X);
        if (Cmax > 0 && Cmax < std::max(cm[0], cm[1]))
            throw coverage_error("smooth_sum_KL: Cmax = " + std::to_string(Cmax) + " does not cover the support (needs " +
                                 std::to_string(std::max(cm[0], cm[1])) + ")");
    } else {
        if (Cmax < 1) throw coverage_error("smooth_sum_KL: f has no compact support, Cmax is required");
        cm = {Cmax, Cmax};
    }
    auto* mk = method == KlMethod::multiplicative ? &detail::shared_multiplicative() : nullptr;
    detail::TermSink sink{method, mk, m, n};
    for (i64 c1 = 1; c1 <= cm[0]; ++c1) {
        i64 lo = 1, hi = cm[1];
        if (w.support) {
            const auto& b = *w.support;
            const double q = double(c1) * double(c1);
            const double a = std::max(b[0] * q / X[0], std::sqrt(X[1] * c1 / b[3]));
            const double z = std::min(b[1] * q / X[0], std::sqrt(X[1] * c1 / b[2]));
            if (a > z + 1) continue;
            lo = std::max<i64>(lo, i64(std::floor(a)) - 1);
            hi = std::min<i64>(hi, i64(std::ceil(z)) + 1);
        }
        for (i64 c2 = lo; c2 <= hi; ++c2) {
            auto y = smooth_argument(X, c1, c2);
            sink.add(c1, c2, w.f(y[0], y[1]));
        }
    }
    return {sink.value, sink.terms, cm};
}

// the same sum by scanning the full box c1, c2 <= Cmax
inline SmoothSum smooth_sum_KL_scan(const SmoothWeight& w, std::array<i64, 2> m, std::array<i64, 2> n, std::array<double, 2> X, i64 Cmax,
                                    KlMethod method = KlMethod::multiplicative) {
    detail::check_smooth_args(m, n, X);
    auto* mk = method == KlMethod::multiplicative ? &detail::shared_multiplicative() : nullptr;
    detail::TermSink sink{method, mk, m, n};
    for (i64 c1 = 1; c1 <= Cmax; ++c1)
        for (i64 c2 = 1; c2 <= Cmax; ++c2) {
            auto y = smooth_argument(X, c1, c2);
            sink.add(c1, c2, w.f(y[0], y[1]));
        }
    return {sink.value, sink.terms, {Cmax, Cmax}};
}

// ---------------------------------------------------------------------------
// Fits and experiment grids

struct ExponentFit {
    double exponent, stderr_;
};

// least-squares slope of log|value| against log X
inline ExponentFit exponent_fit(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 3) throw std::invalid_argument("exponent_fit: need at least 3 points");
    double sx = 0, sy = 0;
    std::vector<double> xs, ys;
    for (auto [X, v] : pts) {
        if (!(X > 0) || !(std::abs(v) > 0)) throw std::invalid_argument("exponent_fit: X and |value| must be positive");
        xs.push_back(std::log(X));
        ys.push_back(std::log(std::abs(v)));
        sx += xs.back();
        sy += ys.back();
    }
    const double k = double(xs.size()), mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx < 1e-12 * k) throw std::domain_error("exponent_fit: X values have no spread");
    const double b = sxy / sxx;
    double ssr = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - my - b * (xs[i] - mx);
        ssr += r * r;
    }
    return {b, k > 2 ? std::sqrt(ssr / (k - 2) / sxx) : 0.0};
}

// lo, ..., hi with `per_decade` log-uniform points per factor of 10
inline std::vector<double> log_grid(double lo, double hi, int per_decade = 5) {
    if (!(lo > 0 && hi >= lo && per_decade > 0)) throw std::invalid_argument("log_grid: bad range");
    const int k = int(std::round(std::log10(hi / lo) * per_decade));
    std::vector<double> out;
    for (int i = 0; i <= k; ++i) out.push_back(k == 0 ? lo : lo * std::pow(hi / lo, double(i) / k));
    return out;
}

struct ExperimentRow {
    double X1, X2;
    cplx value;
    double sqrt_ratio;  // |value| / (X1 X2)^{1/2}
    i64 terms;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    std::optional<ExponentFit> fit;  // slope of log|value| in log sqrt(X1 X2)
};

// grid points run concurrently; each sum is sequential so results do not depend on threads
inline ExperimentResult smooth3_experiment(const SmoothWeight& w, std::array<i64, 2> m, std::array<i64, 2> n,
                                           const std::vector<std::array<double, 2>>& grid, int threads = 1,
                                           KlMethod method = KlMethod::multiplicative) {
    ExperimentResult r;
    r.rows.resize(grid.size());
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next++) < grid.size();) {
            auto s = smooth_sum_KL(w, m, n, grid[i], 0, method);
            r.rows[i] = {grid[i][0], grid[i][1], s.value, std::abs(s.value) / std::sqrt(grid[i][0] * grid[i][1]), s.terms};
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::max(threads, 1); ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    std::vector<std::pair<double, double>> pts;
    for (auto& row : r.rows) pts.push_back({std::sqrt(row.X1 * row.X2), std::abs(row.value)});
    try {
        r.fit = exponent_fit(pts);
    } catch (const std::exception&) {
    }
    return r;
}

inline void write_experiment_csv(std::ostream& os, const ExperimentResult& r) {
    os << "X1,X2,re,im,sqrt_ratio\n";
    os.precision(17);
    for (auto& row : r.rows) os << row.X1 << ',' << row.X2 << ',' << row.value.real() << ',' << row.value.imag() << ',' << row.sqrt_ratio << '\n';
}

// ---------------------------------------------------------------------------
// SL(2) baseline: sum_{c <= X} S(m,n;c)/c

struct LinnikResult {
    std::vector<double> partial;  // partial[c-1] = sum_{c' <= c} S(m,n;c')/c'
    double statistic(i64 X) const;
};

// |sum_{c<=X}| / (X^{1/6} (log X)^{1/3}); undefined (NaN) for X < 2
inline double linnik_statistic(double sum, i64 X) {
    if (X < 2) return std::nan("");
    return std::abs(sum) / (std::pow(double(X), 1.0 / 6) * std::cbrt(std::log(double(X))));
}

inline double LinnikResult::statistic(i64 X) const {
    if (X < 1 || X > i64(partial.size())) throw std::out_of_range("linnik statistic: X outside computed range");
    return linnik_statistic(partial[X - 1], X);
}

// S(m,n;c) for every c <= X is assembled one prime power q at a time: the
// factor S(m rbar^2, n; q) for each cofactor r. A full FFT table is built when q
// has many multiples, otherwise each needed value is summed directly.
inline LinnikResult linnik_sl2(i64 m, i64 n, i64 X) {
    if (m == 0 || n == 0 || (m > 0) != (n > 0)) throw std::invalid_argument("linnik_sl2: need m n > 0");
    if (X < 1) throw std::invalid_argument("linnik_sl2: X must be positive");
    std::vector<double> S(X + 1, 1.0);
    PrimeSieve sieve(std::max<i64>(X, 2));
    for (i64 p = 2; p <= X; ++p) {
        if (auto f = sieve.factor(p); f.size() != 1 || f[0].second != 1) continue;
        for (i64 q = p; q <= X; q *= p) {
            std::vector<i64> cs;
            for (i64 c = q; c <= X; c += q)
                if ((c / q) % p) cs.push_back(c);
            if (cs.empty()) continue;
            const bool unit = gcd(m, q) == 1 || gcd(n, q) == 1;
            const double lg = std::log2(double(q)) + 1;
            std::vector<double> tab;
            std::vector<i64> inv;
            std::vector<cplx> roots;
            if (unit && double(cs.size()) > 4 * lg) {
                tab = classical_table(q);
            } else if (unit) {
                inv.assign(q, 0);
                if (q == p) {
                    inv[1] = 1;
                    for (i64 y = 2; y < q; ++y) inv[y] = q - (q / y) * inv[q % y] % q;
                } else {
                    for (i64 y = 1; y < q; ++y)
                        if (y % p) inv[y] = invmod(y, q);
                }
                roots = unit_roots(q);
            }
            for (i64 c : cs) {
                const i64 r = c / q, rb = invmod(mod(r, q), q);
                const i64 a = mulmod(mod(m, q), mulmod(rb, rb, q), q);
                double v;
                if (!unit) v = classical_kloosterman(a, n, q).value.real();
                else {
                    const i64 k = mulmod(a, mod(n, q), q);
                    if (!tab.empty()) v = tab[k];
                    else {
                        double acc = 0;
                        for (i64 y = 1; y < q; ++y)
                            if (y % p) acc += roots[(y + k * inv[y]) % q].real();
                        v = acc;
                    }
                }
                S[c] *= v;
            }
        }
    }
    LinnikResult res;
    res.partial.resize(X);
    double run = 0;
    for (i64 c = 1; c <= X; ++c) {
        run += S[c] / double(c);
        res.partial[c - 1] = run;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Spectral side from external Maass-form data

inline constexpr double ramanujan_theta = 5.0 / 14;

struct MaassFormRecord {
    int d = 0;
    SpectralPoint mu;
    cplx hecke_m, hecke_n;
    double adjoint_L = 1;
};

struct ingest_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void validate_record(const MaassFormRecord& r) {
    if (r.d != 0 && r.d != 1) throw std::invalid_argument("weight d must be 0 or 1");
    if (!r.mu.unitary(1e-9)) throw std::invalid_argument("mu is not unitary");
    if (r.mu.max_abs_real() > ramanujan_theta + 1e-12) throw std::invalid_argument("|Re mu| exceeds 5/14");
    if (!(r.adjoint_L > 0) || !std::isfinite(r.adjoint_L)) throw std::invalid_argument("L(Ad^2,1) must be positive");
}

inline constexpr const char* forms_header = "d,re_mu1,im_mu1,re_mu2,im_mu2,re_lambda_m,im_lambda_m,re_lambda_n,im_lambda_n,L_adj";

namespace detail {

inline std::string shortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline std::vector<MaassFormRecord> parse_forms(std::istream& in) {
    std::vector<MaassFormRecord> out;
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fail = [&](const std::string& why) { throw ingest_error("line " + std::to_string(lineno) + ": " + why); };
        if (!header) {
            if (line != forms_header) fail(std::string("expected header '") + forms_header + "'");
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string t; std::getline(ss, t, ',');) f.push_back(t);
        if (f.size() != 10) fail("expected 10 fields, got " + std::to_string(f.size()));
        double v[10];
        for (int i = 0; i < 10; ++i) {
            auto res = std::from_chars(f[i].data(), f[i].data() + f[i].size(), v[i]);
            if (res.ec != std::errc() || res.ptr != f[i].data() + f[i].size()) fail("field " + std::to_string(i + 1) + " is not a number");
        }
        MaassFormRecord r;
        if (v[0] != 0 && v[0] != 1) fail("weight d must be 0 or 1");
        r.d = int(v[0]);
        r.mu = SpectralPoint(cplx(v[1], v[2]), cplx(v[3], v[4]));
        r.hecke_m = {v[5], v[6]};
        r.hecke_n = {v[7], v[8]};
        r.adjoint_L = v[9];
        try {
            validate_record(r);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        out.push_back(r);
    }
    return out;
}

inline std::vector<MaassFormRecord> ingest_forms(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ingest_error("cannot open " + path);
    return parse_forms(in);
}

inline void write_forms(std::ostream& os, const std::vector<MaassFormRecord>& forms) {
    using detail::shortest;
    os << forms_header << '\n';
    for (auto& r : forms)
        os << r.d << ',' << shortest(r.mu[0].real()) << ',' << shortest(r.mu[0].imag()) << ',' << shortest(r.mu[1].real()) << ','
           << shortest(r.mu[1].imag()) << ',' << shortest(r.hecke_m.real()) << ',' << shortest(r.hecke_m.imag()) << ','
           << shortest(r.hecke_n.real()) << ',' << shortest(r.hecke_n.imag()) << ',' << shortest(r.adjoint_L) << '\n';
}

// (2 pi / 3) sum F_d(mu) conj(lambda(m)) lambda(n) / L(Ad^2, 1). Only the cuspidal
// part; Eisenstein contributions are not included.
inline cplx spectral_side_cuspidal(const std::vector<MaassFormRecord>& forms, const TestFunction& f) {
    cplx s = 0.0;
    for (auto& r : forms) {
        validate_record(r);
        const cplx F = r.d == 0 ? F0_transform(f, r.mu) : F1_transform(f, r.mu);
        s += F * std::conj(r.hecke_m) * r.hecke_n / r.adjoint_L;
    }
    return 2 * pi / 3 * s;
}

}  // namespace sl3kuz
