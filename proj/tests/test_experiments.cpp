#include <gtest/gtest.h>

#include <sl3kuz/experiments.hpp>

using namespace sl3kuz;

namespace {

// supported on [1,2]^2 and nonzero on its boundary
SmoothWeight box_weight() {
    return {[](double y1, double y2) -> cplx {
                if (y1 < 1 || y1 > 2 || y2 < 1 || y2 > 2) return 0.0;
                return y1 + 2 * y2;
            },
            std::array<double, 4>{1, 2, 1, 2}};
}

// log-Gaussian bump whose support is [1,2]^2
TestFunction unit_bump() { return TestFunction::gaussian_bump({std::sqrt(2.0), std::sqrt(2.0)}, std::log(2.0) / 20); }

}  // namespace

TEST(Classical, FftTableMatchesEnumeration) {
    for (i64 q : {1, 2, 7, 8, 9, 25, 27, 49, 97, 128, 243}) {
        auto t = classical_table(q);
        ASSERT_EQ(i64(t.size()), q);
        for (i64 k = 0; k < q; ++k) EXPECT_NEAR(t[k], classical_kloosterman(1, k, q).value.real(), 1e-9) << q << ' ' << k;
    }
}

TEST(Classical, TwistedMultiplicativity) {
    MultiplicativeKloosterman mk(1000);
    for (i64 c = 1; c <= 300; ++c)
        for (auto [m, n] : std::vector<std::pair<i64, i64>>{{1, 1}, {2, 3}, {-1, 6}, {4, 4}, {9, -12}})
            EXPECT_NEAR(mk.classical(m, n, c), classical_kloosterman(m, n, c).value.real(), 1e-9) << m << ' ' << n << ' ' << c;
}

TEST(LongElement, MultiplicativeMatchesDirect) {
    MultiplicativeKloosterman mk(1000);
    const std::vector<std::pair<std::array<i64, 2>, std::array<i64, 2>>> mn{{{1, 1}, {1, 1}}, {{1, 2}, {3, 1}}, {{2, -1}, {-1, 2}}, {{3, 6}, {2, 9}}};
    double worst = 0;
    for (auto [m, n] : mn)
        for (i64 c1 = 1; c1 <= 30; ++c1)
            for (i64 c2 = 1; c2 <= 30; ++c2) {
                const LongElementInstance inst{m, n, {c1, c2}};
                worst = std::max(worst, std::abs(mk.long_element(inst) - long_element_sum(inst).value));
            }
    EXPECT_LT(worst, 1e-9);
}

TEST(LongElement, PrimeSquareModuli) {
    MultiplicativeKloosterman mk(1000);
    for (std::array<i64, 2> c : std::vector<std::array<i64, 2>>{{49, 7}, {7, 49}, {25, 50}, {121, 11}, {97, 97}, {8, 16}, {27, 9}}) {
        const LongElementInstance inst{{1, 1}, {1, 1}, c};
        EXPECT_NEAR(std::abs(mk.long_element(inst) - long_element_sum(inst).value), 0.0, 1e-8) << c[0] << ',' << c[1];
    }
}

TEST(SmoothSum, SupportForcesOneTerm) {
    auto r = smooth_sum_KL(box_weight(), {1, 1}, {1, 1}, {1, 1});
    EXPECT_EQ(r.terms, 1);
    EXPECT_NEAR(std::abs(r.value - 3.0), 0.0, 1e-14);
}

TEST(SmoothSum, SolvedIndexSetMatchesScan) {
    const auto w = SmoothWeight::from(unit_bump());
    const std::array<double, 2> X{100, 100};
    auto solved = smooth_sum_KL(w, {1, 1}, {1, 1}, X);
    auto scan = smooth_sum_KL_scan(w, {1, 1}, {1, 1}, X, std::max(solved.cmax[0], solved.cmax[1]) + 20);
    EXPECT_GT(solved.terms, 100);
    EXPECT_EQ(solved.terms, scan.terms);
    EXPECT_EQ(solved.value, scan.value);
    auto direct = smooth_sum_KL(w, {1, 1}, {1, 1}, X, 0, KlMethod::direct);
    EXPECT_LT(std::abs(direct.value - solved.value), 1e-9 * std::max(1.0, std::abs(direct.value)));
}

TEST(SmoothSum, CoverageAndEnlargement) {
    const auto w = SmoothWeight::from(unit_bump());
    const std::array<double, 2> X{50, 80};
    auto a = smooth_sum_KL(w, {1, 2}, {2, 1}, X);
    const i64 need = std::max(a.cmax[0], a.cmax[1]);
    EXPECT_THROW(smooth_sum_KL(w, {1, 2}, {2, 1}, X, need - 1), coverage_error);
    auto b = smooth_sum_KL(w, {1, 2}, {2, 1}, X, need);
    auto c = smooth_sum_KL(w, {1, 2}, {2, 1}, X, 3 * need);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.value, c.value);
    EXPECT_THROW(smooth_sum_KL(SmoothWeight{[](double, double) { return cplx(1); }, std::nullopt}, {1, 1}, {1, 1}, X), coverage_error);
    EXPECT_THROW(smooth_sum_KL(w, {1, 1}, {-1, 1}, X), std::invalid_argument);
}

TEST(SmoothSum, AgreesWithWeightedZetaPartial) {
    const std::array<cplx, 2> s{cplx(0.3, 0.2), cplx(0.25, -0.1)};
    const auto fs = TestFunction::f_s(s);
    // f_s in the variable y_i = sqrt(Y_i)
    SmoothWeight g{[fs](double Y1, double Y2) { return fs(std::sqrt(Y1), std::sqrt(Y2)); }, std::nullopt};
    for (auto [m, n] : std::vector<std::pair<std::array<i64, 2>, std::array<i64, 2>>>{{{1, 1}, {1, 1}}, {{1, 2}, {3, 1}}}) {
        const i64 Cmax = 12;
        auto z = weighted_zeta_partial(m, n, s, Cmax);
        const std::array<double, 2> X{4.0 * double(m[0] * n[1]), 4.0 * double(m[1] * n[0])};
        auto k = smooth_sum_KL(g, m, n, X, Cmax, KlMethod::direct);
        EXPECT_EQ(z.value, k.value);
        auto km = smooth_sum_KL(g, m, n, X, Cmax);
        EXPECT_LT(std::abs(km.value - z.value), 1e-10 * std::abs(z.value));
    }
}

TEST(SmoothSum, RatioDecreasesWithX) {
    const auto w = SmoothWeight::from(unit_bump());
    auto r = smooth3_experiment(w, {1, 1}, {1, 1}, {{10, 10}, {100, 100}, {1000, 1000}});
    ASSERT_EQ(r.rows.size(), 3u);
    for (auto& row : r.rows) EXPECT_GT(row.terms, 0);
    EXPECT_GT(r.rows[0].sqrt_ratio, r.rows[1].sqrt_ratio);
    EXPECT_GT(r.rows[1].sqrt_ratio, r.rows[2].sqrt_ratio);
    ASSERT_TRUE(r.fit.has_value());
    std::ostringstream os;
    write_experiment_csv(os, r);
    EXPECT_EQ(os.str().substr(0, 24), "X1,X2,re,im,sqrt_ratio\n1");
}

TEST(SmoothSum, GridIsThreadIndependent) {
    const auto w = SmoothWeight::from(unit_bump());
    const std::vector<std::array<double, 2>> grid{{20, 30}, {40, 40}, {60, 25}, {80, 90}};
    auto a = smooth3_experiment(w, {1, 1}, {1, 1}, grid, 1);
    auto b = smooth3_experiment(w, {1, 1}, {1, 1}, grid, 3);
    std::ostringstream sa, sb;
    write_experiment_csv(sa, a);
    write_experiment_csv(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(Linnik, SmallCases) {
    EXPECT_DOUBLE_EQ(linnik_sl2(1, 1, 1).partial[0], 1.0);
    auto r = linnik_sl2(1, 1, 3);
    EXPECT_NEAR(r.partial[2], 7.0 / 6, 1e-14);
    EXPECT_TRUE(std::isnan(r.statistic(1)));
    EXPECT_THROW(linnik_sl2(1, -1, 10), std::invalid_argument);
}

TEST(Linnik, OracleValues) {
    // plain enumeration in Python
    EXPECT_NEAR(linnik_sl2(1, 1, 1000).partial.back(), 2.0120883856476395, 1e-9);
    EXPECT_NEAR(linnik_sl2(2, 3, 500).partial.back(), 2.824026300084824, 1e-9);
    auto r = linnik_sl2(1, 1, 10000);
    EXPECT_NEAR(r.partial.back(), 2.0245439254095006, 1e-9);
    EXPECT_NEAR(r.partial[999], 2.0120883856476395, 1e-9);
    EXPECT_NEAR(r.statistic(10000), 2.0245439254095006 / (std::pow(1e4, 1.0 / 6) * std::cbrt(std::log(1e4))), 1e-12);
}

TEST(ExponentFit, SyntheticLaws) {
    std::vector<std::pair<double, double>> pts;
    for (double X : {10.0, 100.0, 1000.0, 1e4}) pts.push_back({X, 3 * std::sqrt(X)});
    auto f = exponent_fit(pts);
    EXPECT_NEAR(f.exponent, 0.5, 1e-12);
    EXPECT_NEAR(f.stderr_, 0.0, 1e-12);
    for (auto& p : pts) p.second = 2.5;
    EXPECT_NEAR(exponent_fit(pts).exponent, 0.0, 1e-15);
    EXPECT_THROW(exponent_fit({{1, 1}, {2, 2}}), std::invalid_argument);
    EXPECT_THROW(exponent_fit({{5, 1}, {5, 2}, {5, 3}}), std::domain_error);
    EXPECT_THROW(exponent_fit({{1, 1}, {2, 0}, {3, 3}}), std::invalid_argument);
    auto g = log_grid(10, 1000);
    ASSERT_EQ(g.size(), 11u);
    EXPECT_NEAR(g[5], 100, 1e-9);
}

TEST(Forms, IngestionAndRoundTrip) {
    std::istringstream empty("");
    EXPECT_TRUE(parse_forms(empty).empty());

    const std::string sample = std::string(forms_header) +
                               "\n"
                               "0,0,9.53369526135355,0,-4.71231,0.125,-2.5,1.5,0.25,0.84\n"
                               "1,0.1,3.25,-0.1,3.25,-1,0,0.5,0.5,1.75\n"
                               "0,0,12.1,0,0,2,0,2,0,3\n";
    std::istringstream in(sample);
    auto forms = parse_forms(in);
    ASSERT_EQ(forms.size(), 3u);
    EXPECT_EQ(forms[1].d, 1);
    std::ostringstream out;
    write_forms(out, forms);
    EXPECT_EQ(out.str(), sample);

    std::istringstream bad(std::string(forms_header) + "\n0,0.4,0,-0.4,0,1,0,1,0,1\n");
    try {
        parse_forms(bad);
        FAIL() << "Re mu = 0.4 accepted";
    } catch (const ingest_error& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("5/14"), std::string::npos);
    }
    std::istringstream notunitary(std::string(forms_header) + "\n0,0.1,1,0.1,2,1,0,1,0,1\n");
    EXPECT_THROW(parse_forms(notunitary), ingest_error);
    std::istringstream shortrow(std::string(forms_header) + "\n0,0,1\n");
    EXPECT_THROW(parse_forms(shortrow), ingest_error);
    std::istringstream noheader("0,0,1,0,-1,1,0,1,0,1\n");
    EXPECT_THROW(parse_forms(noheader), ingest_error);
    EXPECT_THROW(ingest_forms("/nonexistent/forms.csv"), ingest_error);
}

TEST(Forms, SpectralSide) {
    const auto f = TestFunction::gaussian_bump({0.5, 0.5}, 0.3);
    EXPECT_EQ(spectral_side_cuspidal({}, f), cplx(0.0));
    const SpectralPoint mu(I, -I, 0.0);
    std::vector<MaassFormRecord> forms{{0, mu, 1.0, 1.0, 1.0}, {1, mu, 1.0, 1.0, 1.0}};
    const cplx expect = 2 * pi / 3 * (F0_transform(f, mu) + F1_transform(f, mu));
    EXPECT_LT(std::abs(spectral_side_cuspidal(forms, f) - expect), 1e-14 * std::abs(expect));
    forms[0].hecke_m = cplx(0, 2);
    forms[0].adjoint_L = 4;
    const cplx e2 = 2 * pi / 3 * (F0_transform(f, mu) * cplx(0, -2) / 4.0 + F1_transform(f, mu));
    EXPECT_LT(std::abs(spectral_side_cuspidal(forms, f) - e2), 1e-14 * std::abs(e2));
}
