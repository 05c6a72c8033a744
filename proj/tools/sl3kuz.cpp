// Command-line front end: exact Kloosterman sums, verification suites and
// the desk-scale experiments. CSV by default, --json for machine output.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include <sl3kuz/experiments.hpp>

using namespace sl3kuz;
using nlohmann::json;

namespace {

struct Check {
    std::string name;
    double value, tol;
    bool pass;
};

struct Suite {
    std::string name;
    std::vector<Check> checks;
    void add(std::string n, double v, double tol) { checks.push_back({std::move(n), v, tol, v <= tol}); }
    bool pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

SpectralPoint random_unitary(std::mt19937_64& rng, double spread) {
    std::uniform_real_distribution<double> u(-spread, spread);
    for (;;) {
        SpectralPoint m(u(rng) * I, u(rng) * I);
        if (pole_distance(m) > 1e-3) return m;
    }
}

Suite suite_identities() {
    Suite s{"identities", {}};
    std::mt19937_64 rng(1);
    double da = 0, tt = 0, dual = 0;
    for (int t = 0; t < 1000; ++t) {
        auto m = random_unitary(rng, 3);
        da = std::max(da, identity_residual(Identity::double_angle, m));
        tt = std::max(tt, identity_residual(Identity::triple_tangent, m));
        dual = std::max(dual, rel(sin0_gamma_form(m), sin0(m)));
    }
    double sc = 0;
    for (int e1 : {-1, 1})
        for (int e2 : {-1, 1}) sc = std::max(sc, identity_residual(Identity::sign_combination, {}, {e1, e2}));
    s.add("double_angle", da, 1e-12);
    s.add("triple_tangent", tt, 1e-12);
    s.add("sin0_dual_forms", dual, 1e-12);
    s.add("sign_combination", sc, 1e-12);
    return s;
}

Suite suite_whittaker() {
    Suite s{"whittaker", {}};
    const SpectralPoint m(0.6 * I, 0.25 * I, -0.85 * I);
    double e = 0;
    for (std::array<double, 2> y : {std::array<double, 2>{0.9, 1.2}, {0.5, 0.6}, {1.3, 0.7}}) e = std::max(e, eigenfunction_residual(y, m));
    s.add("eigenfunction", e, 1e-5);
    auto r = stade_integral(m, -m, 1.0);
    s.add("stade_t1", r.relative_error(), 1e-6);
    s.add("stade_vs_1/cos0", rel(r.numeric, 1.0 / cos0(m)), 1e-6);
    return s;
}

Suite suite_kernels() {
    Suite s{"kernels", {}};
    std::mt19937_64 rng(2);
    double worst = 0, wl = 0;
    for (int t = 0; t < 20; ++t) {
        auto m = random_unitary(rng, 3);
        for (int e1 : {-1, 1})
            for (int e2 : {-1, 1}) {
                for (Weyl c : {Weyl::I, Weyl::w4, Weyl::w5}) worst = std::max(worst, kernel_cancellation(c, m, {e1, e2}).residual);
                wl = std::max(wl, kernel_cancellation(Weyl::wl, m, {e1, e2}).residual);
            }
    }
    s.add("cancellation_I_w4_w5", worst, 1e-10);
    s.add("long_element_4delta", wl, 1e-10);
    return s;
}

Suite suite_zeta(const ContourGrid& g) {
    Suite s{"zeta", {}};
    const SpectralPoint m(0.6 * I, 0.25 * I, -0.85 * I);
    double d = 0;
    for (std::array<cplx, 2> st : {std::array<cplx, 2>{1.0, 1.0}, {cplx(0.7, 0.3), 1.2}, {cplx(-0.4, 0.1), cplx(0.9, -0.2)}}) {
        const cplx a = F0_series_distinct(st, m).value, b = F0_shifted(st, m);
        d = std::max(d, rel(b, a));
        if (st[0].real() > 0 && st[1].real() > 0) d = std::max(d, rel(F0_contour(st, m, {0.5, 0.5}, g), a));
    }
    s.add("representations_agree", d, 1e-6);
    const std::array<cplx, 2> st{cplx(-0.4, 0.1), cplx(0.9, -0.2)};
    s.add("shift_drift", rel(F0_shifted(st, m, 3, 1, g), F0_shifted(st, m, 2, 1, g)), 1e-8);
    return s;
}

Suite suite_oracle() {
    Suite s{"oracle", {}};
    int bad = 0, total = 0;
    for (i64 c1 = 1; c1 <= 6; ++c1)
        for (i64 c2 = 1; c2 <= 6; ++c2)
            for (i64 m1 : {1, -2})
                for (i64 n2 : {1, 2}) {
                    const Sl3Sum a = long_element_args({{m1, 1}, {2, n2}, {c1, c2}});
                    bad += !(sl3_accumulate(a) == sl3_accumulate_bruteforce(a));
                    ++total;
                }
    s.add("mismatches_of_" + std::to_string(total), bad, 0);
    return s;
}

void print_suite(const Suite& s, bool as_json) {
    if (as_json) {
        json j{{"suite", s.name}, {"pass", s.pass()}, {"checks", json::array()}};
        for (auto& c : s.checks) j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"tol", c.tol}, {"pass", c.pass}});
        std::cout << j.dump(2) << '\n';
        return;
    }
    for (auto& c : s.checks) std::cout << (c.pass ? "PASS " : "FAIL ") << s.name << '.' << c.name << " value=" << c.value << " tol=" << c.tol << '\n';
    std::cout << s.name << ": " << (s.pass() ? "all passed" : "FAILED") << '\n';
}

// --mu re1 im1 re2 im2 (mu3 = -mu1 - mu2)
SpectralPoint parse_mu(const std::vector<double>& v) {
    if (v.size() != 4) throw CLI::ValidationError("--mu", "expects 4 numbers: re1 im1 re2 im2");
    return SpectralPoint(cplx(v[0], v[1]), cplx(v[2], v[3]));
}

std::ostream& output(const std::string& path, std::ofstream& f) {
    if (path.empty()) return std::cout;
    f.open(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact SL(3) Kloosterman sums, Kuznetsov kernels and Kloosterman zeta experiments"};
    app.require_subcommand(1);

    std::vector<i64> m{1, 1}, n{1, 1}, c{1, 1};
    int threads = 1;
    bool as_json = false;
    std::string out;
    double height = 40, step = 0.1;

    auto* kl = app.add_subcommand("kloosterman", "exact long-element Kloosterman sum S(m, n, c)");
    kl->add_option("--m", m, "m1 m2")->expected(2);
    kl->add_option("--n", n, "n1 n2")->expected(2);
    kl->add_option("--c", c, "c1 c2")->expected(2)->required();
    kl->add_option("--threads", threads)->check(CLI::PositiveNumber);
    kl->add_flag("--json", as_json);

    std::string suite;
    auto* ver = app.add_subcommand("verify", "run an invariant suite");
    ver->add_option("suite", suite, "identities, whittaker, kernels, zeta or oracle")->required()
        ->check(CLI::IsMember({"identities", "whittaker", "kernels", "zeta", "oracle"}));
    ver->add_option("--contour-height", height)->check(CLI::PositiveNumber);
    ver->add_option("--contour-step", step)->check(CLI::PositiveNumber);
    ver->add_flag("--json", as_json);

    auto* exp = app.add_subcommand("experiment", "desk-scale experiments");
    exp->require_subcommand(1);
    std::vector<double> X, grid, window{-2, 0}, mu{0, 0.6, 0, 0.25}, s_other;
    std::vector<double> center{std::sqrt(2.0), std::sqrt(2.0)};
    double width = std::log(2.0) / 20;
    i64 cmax = 0;
    std::string forms;

    auto* sm = exp->add_subcommand("smooth3", "smooth sums of long-element Kloosterman sums against a bump");
    sm->add_option("--m", m)->expected(2);
    sm->add_option("--n", n)->expected(2);
    sm->add_option("--X", X, "X1 X2 for one point")->expected(2);
    sm->add_option("--grid", grid, "lo hi: X1 = X2 on a log grid, 5 points per decade")->expected(2);
    sm->add_option("--center", center, "bump centre")->expected(2);
    sm->add_option("--width", width, "bump log-width")->check(CLI::PositiveNumber);
    sm->add_option("--cmax", cmax, "index bound, must cover the support");
    sm->add_option("--forms", forms, "Maass-form data file for the cuspidal spectral side");
    sm->add_option("--threads", threads)->check(CLI::PositiveNumber);
    sm->add_option("--out", out);
    sm->add_flag("--json", as_json);

    i64 linX = 1000;
    auto* ln = exp->add_subcommand("linnik2", "partial sums of S(m,n;c)/c");
    ln->add_option("--X", linX)->check(CLI::PositiveNumber);
    std::vector<i64> mn2{1, 1};
    ln->add_option("--m", mn2[0]);
    ln->add_option("--n", mn2[1]);
    ln->add_option("--out", out);
    ln->add_flag("--json", as_json);

    auto* zs = exp->add_subcommand("zeta_scan", "pole catalog of F0(s, mu) in a window of Re s~");
    zs->add_option("--window", window, "lo hi")->expected(2);
    zs->add_option("--mu", mu, "re1 im1 re2 im2")->expected(4);
    zs->add_option("--s", s_other, "re im of the other s~ coordinate (adds residues)")->expected(2);
    zs->add_option("--out", out);
    zs->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*kl) {
            const LongElementInstance inst{{m[0], m[1]}, {n[0], n[1]}, {c[0], c[1]}};
            try {
                inst.validate();
            } catch (const std::invalid_argument& e) {
                std::cerr << "usage error: " << e.what() << '\n';
                return 2;
            }
            const auto v = long_element_sum(inst, threads);
            std::optional<KloostermanValue> fp;
            if (gcd(c[0], c[1]) == 1) fp = factorization_fastpath(inst);
            if (as_json) {
                json j{{"m", m}, {"n", n}, {"c", c}, {"re", v.value.real()}, {"im", v.value.imag()}, {"terms", v.term_count}};
                if (fp) j["factorization"] = {{"re", fp->value.real()}, {"im", fp->value.imag()}, {"diff", std::abs(fp->value - v.value)}};
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout.precision(17);
                std::cout << "value " << v.value.real() << ' ' << v.value.imag() << "\nterms " << v.term_count << '\n';
                if (fp) std::cout << "factorization " << fp->value.real() << ' ' << fp->value.imag() << " diff " << std::abs(fp->value - v.value) << '\n';
            }
            return 0;
        }

        if (*ver) {
            Suite s;
            const ContourGrid g{step, height};
            if (suite == "identities") s = suite_identities();
            else if (suite == "whittaker") s = suite_whittaker();
            else if (suite == "kernels") s = suite_kernels();
            else if (suite == "zeta") s = suite_zeta(g);
            else s = suite_oracle();
            print_suite(s, as_json);
            return s.pass() ? 0 : 1;
        }

        std::ofstream file;
        if (*sm) {
            auto bump = TestFunction::gaussian_bump({center[0], center[1]}, width);
            const auto w = SmoothWeight::from(bump);
            std::vector<std::array<double, 2>> pts;
            if (!X.empty()) pts.push_back({X[0], X[1]});
            if (!grid.empty())
                for (double x : log_grid(grid[0], grid[1])) pts.push_back({x, x});
            if (pts.empty()) throw CLI::ValidationError("smooth3", "give --X or --grid");
            ExperimentResult r;
            if (cmax > 0) {
                for (auto x : pts) {
                    auto v = smooth_sum_KL(w, {m[0], m[1]}, {n[0], n[1]}, x, cmax);
                    r.rows.push_back({x[0], x[1], v.value, std::abs(v.value) / std::sqrt(x[0] * x[1]), v.terms});
                }
            } else {
                r = smooth3_experiment(w, {m[0], m[1]}, {n[0], n[1]}, pts, threads);
            }
            auto& os = output(out, file);
            if (as_json) {
                json j{{"rows", json::array()}};
                for (auto& row : r.rows)
                    j["rows"].push_back({{"X1", row.X1}, {"X2", row.X2}, {"re", row.value.real()}, {"im", row.value.imag()}, {"sqrt_ratio", row.sqrt_ratio}, {"terms", row.terms}});
                if (r.fit) j["fit"] = {{"exponent", r.fit->exponent}, {"stderr", r.fit->stderr_}};
                os << j.dump(2) << '\n';
            } else {
                write_experiment_csv(os, r);
            }
            if (r.fit) std::cerr << "fitted exponent " << r.fit->exponent << " +- " << r.fit->stderr_ << " (log|value| against log sqrt(X1 X2))\n";
            else std::cerr << r.rows.size() << " point(s), no exponent fit\n";
            if (!forms.empty()) {
                const auto recs = ingest_forms(forms);
                const cplx spec = spectral_side_cuspidal(recs, bump);
                std::cerr << "cuspidal spectral side over " << recs.size() << " forms: " << spec.real() << ' ' << spec.imag()
                          << "\n  partial: Eisenstein contributions and the other Kuznetsov terms are not included\n";
            }
            return 0;
        }
        if (*ln) {
            auto r = linnik_sl2(mn2[0], mn2[1], linX);
            auto& os = output(out, file);
            os.precision(17);
            if (as_json) {
                json j{{"X", linX}, {"sum", r.partial.back()}, {"statistic", linX >= 2 ? json(r.statistic(linX)) : json(nullptr)}};
                os << j.dump(2) << '\n';
            } else {
                os << "c,partial,statistic\n";
                for (i64 k = 1; k <= linX; ++k) {
                    os << k << ',' << r.partial[k - 1] << ',';
                    if (k >= 2) os << r.statistic(k);
                    os << '\n';
                }
            }
            std::cerr << "sum " << r.partial.back() << ", statistic " << (linX >= 2 ? r.statistic(linX) : std::nan("")) << '\n';
            return 0;
        }
        if (*zs) {
            const SpectralPoint mpt = parse_mu(mu);
            std::optional<cplx> other;
            if (!s_other.empty()) other = cplx(s_other[0], s_other[1]);
            auto poles = pole_scan({window[0], window[1]}, {mpt}, std::nullopt, other);
            auto& os = output(out, file);
            os.precision(17);
            if (as_json) {
                json j = json::array();
                for (auto& p : poles) {
                    json e{{"side", p.side == PoleSide::s1 ? "s1" : "s2"}, {"re", p.location.real() + 0.0}, {"im", p.location.imag() + 0.0}, {"order", p.order}};
                    if (p.residue) e["residue"] = {p.residue->real(), p.residue->imag()};
                    j.push_back(e);
                }
                os << j.dump(2) << '\n';
            } else {
                os << "side,re,im,order,sources,residue_re,residue_im\n";
                for (auto& p : poles) {
                    os << (p.side == PoleSide::s1 ? "s1" : "s2") << ',' << p.location.real() + 0.0 << ',' << p.location.imag() + 0.0 << ',' << p.order << ',';
                    for (size_t k = 0; k < p.sources.size(); ++k) os << (k ? ";" : "") << 'j' << p.sources[k].first + 1 << "l" << p.sources[k].second;
                    os << ',';
                    if (p.residue) os << p.residue->real() << ',' << p.residue->imag();
                    else os << ',';
                    os << '\n';
                }
            }
            std::cerr << poles.size() << " pole lines in " << window[0] << " < Re <= " << window[1] << '\n';
            return 0;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
