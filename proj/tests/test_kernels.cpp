#include <gtest/gtest.h>

#include <random>

#include "sl3kuz/kernels.hpp"

using namespace sl3kuz;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

SpectralPoint random_mu(std::mt19937& rng, double re = 0.3, double im = 2.0) {
    std::uniform_real_distribution<double> u(-1, 1);
    return SpectralPoint(cplx(re * u(rng), im * u(rng)), cplx(re * u(rng), im * u(rng)));
}

}  // namespace

TEST(Jet, DerivativesMatchFiniteDifferences) {
    auto g = [](auto a, auto b) { return exp(a * b) * pow(a + b * 2.0, cplx(0.7, 0.2)) / log(a + 3.0); };
    const double y1 = 0.8, y2 = 1.3, h = 1e-4;
    Jet j = g(Jet::variable(3, y1, 0), Jet::variable(3, y2, 1));
    auto v = [&](double a, double b) { return g(Jet(0, a), Jet(0, b)).value(); };
    EXPECT_LE(rel(j.value(), v(y1, y2)), 1e-14);
    EXPECT_LE(rel(j.derivative(1, 0), (v(y1 + h, y2) - v(y1 - h, y2)) / (2 * h)), 1e-7);
    EXPECT_LE(rel(j.derivative(0, 2), (v(y1, y2 + h) - 2.0 * v(y1, y2) + v(y1, y2 - h)) / (h * h)), 1e-5);
    EXPECT_LE(rel(j.derivative(1, 1), (v(y1 + h, y2 + h) - v(y1 + h, y2 - h) - v(y1 - h, y2 + h) + v(y1 - h, y2 - h)) / (4 * h * h)), 1e-5);
    EXPECT_EQ(j.d(0).order(), 2);
}

TEST(TestFunction, JetValueMatchesEvaluation) {
    for (auto f : {TestFunction::gaussian_bump({1.0, 0.7}, 0.3), TestFunction::f_s({cplx(1, 0.5), 1.0}),
                   TestFunction::power_exp({15.0, 15.0}), TestFunction::power({1.0, 2.0})})
        EXPECT_LE(rel(f.jet(0.25, 0.3, 2).value(), f(0.25, 0.3)), 1e-13);
}

TEST(TestFunction, BumpCutoff) {
    auto f = TestFunction::gaussian_bump({1.0, 1.0}, 0.2);
    const double r8 = std::exp(0.2 * 7.9), r10 = std::exp(0.2 * 10.01);
    EXPECT_LE(rel(f(r8, 1.0), std::exp(-7.9 * 7.9 / 2)), 1e-13);
    EXPECT_EQ(f(r10, 1.0), cplx(0.0));
    EXPECT_EQ(f(1.0, 1 / r10), cplx(0.0));
    // the cutoff is smooth: its derivatives vanish at the outer edge
    EXPECT_LE(std::abs(f.jet(std::exp(0.2 * 9.99), 1.0, 2).derivative(1, 0)), 1e-30);
    EXPECT_TRUE(f.compactly_supported());
}

TEST(TestFunction, MellinClosedForms) {
    const std::array<cplx, 2> z{cplx(0.3, 0.5), cplx(-0.2, 1.0)};
    for (auto f : {TestFunction::f_s({1.0, 1.0}), TestFunction::f_s({cplx(0.6, 0.3), 0.8}), TestFunction::power_exp({15.0, 15.0}),
                   TestFunction::power_exp({5.0, 5.0})}) {
        auto g = gauss_grid(f.log_box(), 0.25);
        cplx s = 0;
        for (std::size_t i = 0; i < g.u1.size(); ++i)
            for (std::size_t k = 0; k < g.u2.size(); ++k) {
                const double y1 = std::exp(g.u1[i]), y2 = std::exp(g.u2[k]);
                s += g.w1[i] * g.w2[k] * f(y1, y2) * powc(y1, z[0]) * powc(y2, z[1]);
            }
        EXPECT_LE(rel(s, *f.mellin(z)), 1e-6);
    }
    EXPECT_FALSE(TestFunction::power({1.0, 1.0}).mellin(z));
}

TEST(Spectral, Identities) {
    std::mt19937 rng(7);
    for (int t = 0; t < 50; ++t) {
        auto m = random_mu(rng);
        EXPECT_LE(identity_residual(Identity::double_angle, m), 1e-12);
        EXPECT_LE(identity_residual(Identity::triple_tangent, m), 1e-12);
        EXPECT_LE(rel(sin0_gamma_form(m), sin0(m)), 1e-11);
    }
    for (int e1 : {-1, 1})
        for (int e2 : {-1, 1}) EXPECT_EQ(identity_residual(Identity::sign_combination, {}, {e1, e2}), 0.0);
    EXPECT_EQ(sign_combination({1, 1}), 4);
    EXPECT_EQ(sign_combination({1, -1}), 0);
}

TEST(Spectral, SignsAndPoles) {
    std::mt19937 rng(3);
    for (int t = 0; t < 20; ++t) {
        auto m = random_mu(rng, 0.0, 3.0);
        EXPECT_LE(sin0(m).real(), 0.0);
        EXPECT_LE(std::abs(sin0(m).imag()), 1e-12 * std::abs(sin0(m)));
    }
    SpectralPoint pole{1.0, 0.0, -1.0};  // mu1 - mu2 = 1: tan13 and tan12 blow up
    EXPECT_TRUE(is_infinite(spec0(pole)));
    EXPECT_TRUE(is_infinite(f1_factor(SpectralPoint{0.5, 0.0, -0.5})));
    EXPECT_NEAR(lambda1({}).real(), 1.0, 1e-15);
}

TEST(Transforms, F0WeylInvariant) {
    auto f = TestFunction::gaussian_bump({0.8, 0.6}, 0.3);
    SpectralPoint m{0.4 * I, 0.5 * I, -0.9 * I};
    const cplx base = F0_transform(f, m);
    for (Weyl w : weyl_group) EXPECT_LE(rel(F0_transform(f, apply(w, m)), base), 1e-9) << weyl_name(w);
}

TEST(Transforms, F1NearTangentPole) {
    auto f = TestFunction::gaussian_bump({0.8, 0.6}, 0.3);
    SpectralPoint on{cplx(0.5, 0.2), cplx(0.0, -0.4), cplx(-0.5, 0.2)};  // mu1 - mu3 = 1
    ASSERT_TRUE(is_infinite(f1_factor(on)));
    EXPECT_TRUE(is_infinite(F1_from_F0(F0_transform(f, on), on)));
    const cplx at = F1_transform(f, on);
    EXPECT_TRUE(std::isfinite(std::abs(at)));
    EXPECT_GT(std::abs(at), 0.0);
    SpectralPoint near{cplx(0.5 + 1e-5, 0.2), cplx(0.0, -0.4), cplx(-0.5 - 1e-5, 0.2)};
    EXPECT_LE(rel(F1_from_F0(F0_transform(f, near), near), at), 1e-3);
}

TEST(KL, HexagonGrid) {
    auto g = hexagon_grid(0.5, 6);
    double area = 0;
    for (std::size_t p = 0; p < g.points.size(); ++p) {
        EXPECT_TRUE(g.points[p].unitary());
        area += g.weights[p];
    }
    // the truncation region |tau_i| <= T has area 3 T^2; the walls carry no weight
    EXPECT_NEAR(area, 3 * 36, 0.12 * 3 * 36);
}

TEST(KL, ForwardWeylInvariant) {
    auto f = TestFunction::gaussian_bump({0.5, 0.5}, 0.3);
    auto tg = default_grid(f);
    SpectralPoint m{1.5 * I, -0.5 * I, -1.0 * I};
    const cplx base = kl_forward_at(f, tg, m);
    for (Weyl w : weyl_group) EXPECT_LE(rel(kl_forward_at(f, tg, apply(w, m)), base), 1e-9) << weyl_name(w);
    // the fused conjugation shortcut agrees with the direct evaluation
    SpectralGrid one{0.5, 1, {m}, {1.0}, {0}};
    EXPECT_LE(rel(kl_forward(f, tg, one)[0], base), 1e-12);
}

TEST(KL, RoundTrip) {
    auto f = TestFunction::gaussian_bump({0.4, 0.4}, 0.45);
    auto r = kl_roundtrip(f, default_grid(f), hexagon_grid(0.5, 12), {{0.4, 0.4}, {0.48, 0.36}});
    EXPECT_LE(rel(r.values[0], f(0.4, 0.4)), 1e-3);
    EXPECT_LE(rel(r.values[1], f(0.48, 0.36)), 1e-3);
    EXPECT_LE(r.tail_ratio, 1e-2);
}

TEST(Laplacian, JetsAgreeWithFiniteDifferences) {
    for (auto f : {TestFunction::f_s({1.0, 1.0}), TestFunction::gaussian_bump({0.7, 0.9}, 0.4)})
        for (int N : {1, 2}) {
            auto a = apply_restricted_laplacian(f, {0.8, 0.6}, N);
            auto b = apply_restricted_laplacian(std::function<cplx(double, double)>([&](double x, double y) { return f(x, y); }), {0.8, 0.6}, N,
                                                0.04);
            EXPECT_TRUE(a.analytic);
            EXPECT_FALSE(b.analytic);
            EXPECT_LE(rel(b.value, a.value), 1e-5) << N;
        }
}

TEST(Laplacian, WhittakerEigenvalue) {
    // W is an eigenfunction, so W/(y1 y2) is one for the restricted operator
    SpectralPoint m{0.5 * I, 0.3 * I, -0.8 * I};
    auto w = [&](double a, double b) { return whittaker({a, b}, m) / (a * b); };
    auto r = apply_restricted_laplacian(std::function<cplx(double, double)>(w), {0.9, 1.2}, 1, 0.04);
    EXPECT_LE(rel(r.value, lambda1(m) * w(0.9, 1.2)), 1e-5);
}

TEST(Conditions, Report) {
    auto a = convergence_conditions_check(TestFunction::f_s({1.0, 1.0}), 0.36, 0.01, 3);
    EXPECT_EQ(a.N_required, 3);
    EXPECT_TRUE(a.admissible());
    auto b = convergence_conditions_check(TestFunction::power({1.0, 1.0}), 0.36, 0.01, 3);
    EXPECT_TRUE(b.pass[0]);
    EXPECT_FALSE(b.pass[3]);
    EXPECT_FALSE(b.admissible());
    EXPECT_TRUE(convergence_conditions_check(TestFunction::power_exp({15.0, 15.0}), 0.36, 0.01, 3).admissible());
    EXPECT_FALSE(convergence_conditions_check(TestFunction::f_s({1.0, 1.0}), 0.36, 0.01, 2).admissible());
    EXPECT_TRUE(convergence_conditions_check(TestFunction::gaussian_bump({1.0, 1.0}, 0.3), 0.36, 0.01, 3).admissible());
}

TEST(Kernels, PermutationAlgebra) {
    SpectralPoint m{1.0, 2.0, -3.0};
    for (Weyl a : weyl_group) {
        const Perm p = perm_of(a);
        EXPECT_EQ(weyl_of(p), a);
        auto pm = permute(p, m), am = apply(a, m);
        for (int i = 0; i < 3; ++i) EXPECT_EQ(pm[i], am[i]);
        auto back = permute(inverse(p), pm);
        for (int i = 0; i < 3; ++i) EXPECT_EQ(back[i], m[i]);
        for (Weyl b : weyl_group) {
            auto lhs = permute(compose(p, perm_of(b)), m), rhs = apply(b, apply(a, m));
            for (int i = 0; i < 3; ++i) EXPECT_EQ(lhs[i], rhs[i]);
        }
    }
}

TEST(Kernels, CancellationAtCoefficientLevel) {
    std::mt19937 rng(11);
    for (int t = 0; t < 100; ++t) {
        auto m = random_mu(rng);
        for (int e1 : {-1, 1})
            for (int e2 : {-1, 1}) {
                for (Weyl w : {Weyl::I, Weyl::w4, Weyl::w5}) {
                    auto r = kernel_cancellation(w, m, {e1, e2});
                    EXPECT_LE(r.residual, 1e-12) << weyl_name(w) << ' ' << e1 << e2;
                    EXPECT_GT(r.scale, 0.0);
                }
                auto r = kernel_cancellation(Weyl::wl, m, {e1, e2});
                EXPECT_LE(r.residual, 1e-12);
                const double expect = (e1 == 1 && e2 == 1) ? 4 : 0;
                EXPECT_LE(std::abs(r.canonical - expect * r.canonical_h0), 1e-12 * std::abs(r.canonical_h0));
            }
    }
}

TEST(Kernels, RawCoefficientsDoNotCancelPointwise) {
    // cancellation needs the Weyl substitutions; the raw coefficients are nonzero
    SpectralPoint m{cplx(0.1, 0.7), cplx(-0.2, 0.3), cplx(0.1, -1.0)};
    auto r = kernel_cancellation(Weyl::w4, m, {1, -1});
    EXPECT_EQ(r.raw.size(), 3u);
    EXPECT_GT(std::abs(r.raw[Weyl::I]), 1e-3 * r.scale);
}

TEST(Kernels, RefusesPoles) {
    EXPECT_THROW(kernel_cancellation(Weyl::wl, {1.0, 0.0, -1.0}, {1, 1}), std::domain_error);
    EXPECT_THROW(kernel_cancellation(Weyl::w4, {cplx(0.5 + 1e-8, 0.2), cplx(-0.5, 0.2), cplx(-1e-8, -0.4)}, {1, 1}), std::domain_error);
    EXPECT_THROW(kernel_cancellation(Weyl::w2, {cplx(0.1, 0.3), cplx(0.0, 0.2)}, {1, 1}), std::invalid_argument);
}
