// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// its measured values; tolerances are fixed in code. Criterion 9 documents a
// known limitation of nearest-range cross-validation and is expected to
// report FAIL (see the line it prints for the measured context).

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "leadlag/bandwidth.hpp"
#include "leadlag/core.hpp"
#include "leadlag/cpcf.hpp"
#include "leadlag/ds.hpp"
#include "leadlag/gamma_mixture.hpp"
#include "leadlag/harness.hpp"
#include "leadlag/io.hpp"
#include "leadlag/models.hpp"

using namespace leadlag;
using clock_type = std::chrono::steady_clock;

namespace {

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[CRITERION %2d] %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

BivariateSample random_sample(std::mt19937_64& rng, int n1, int n2, double T) {
    std::uniform_real_distribution<double> u(1e-9, T);
    std::vector<double> a(static_cast<std::size_t>(n1)), b(static_cast<std::size_t>(n2));
    for (double& t : a) t = u(rng);
    for (double& t : b) t = u(rng);
    return BivariateSample(EventSeries(std::move(a), T), EventSeries(std::move(b), T));
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

constexpr Kernel kTri{KernelKind::triangular};

} // namespace

// fast grid evaluation equals the naive per-point path to 1e-10 relative
TEST(Acceptance, Criterion01_OracleEquivalence) {
    const auto t0 = clock_type::now();
    std::mt19937_64 rng(4242);
    const double hs[4] = {1e-1, 1e-2, 1e-3, 1e-4};
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::uniform_int_distribution<int> nd(50, 2000);
        const BivariateSample s = random_sample(rng, nd(rng), nd(rng), 100.0);
        const double h = hs[rep % 4];
        std::vector<double> grid;
        for (int i = 0; i <= 100; ++i) grid.push_back(-1.0 + 0.02 * i);
        const CpcfCurve curve = ghat_on_grid(s, kTri, h, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double naive = ghat_at(s, kTri, h, grid[i]);
            worst = std::max(worst,
                             std::abs(curve.values[i] - naive) / std::max(1.0, std::abs(naive)));
        }
    }
    const double secs = seconds_since(t0);
    const bool pass = worst <= 1e-10 && secs < 60.0;
    report(1, pass, fmt("fast-vs-naive worst rel dev %.2e (tol 1e-10), runtime %.1fs (< 60s)", worst, secs));
    EXPECT_LE(worst, 1e-10);
    EXPECT_LT(secs, 60.0);
}

// kink-set maximization attains the dense-grid maximum exactly
TEST(Acceptance, Criterion02_ExactMaximization) {
    std::mt19937_64 rng(3333);
    const double hs[3] = {0.1, 0.02, 0.004};
    double worst_gap = -1e300;
    for (int rep = 0; rep < 100; ++rep) {
        std::uniform_int_distribution<int> nd(2, 800);
        const BivariateSample s = random_sample(rng, nd(rng), nd(rng), 100.0);
        const double h = hs[rep % 3];
        const ThetaHat est = theta_hat(s, kTri, h, 1.0);
        std::vector<double> dense(10001);
        for (std::size_t i = 0; i < dense.size(); ++i)
            dense[i] = -1.0 + 2.0 * static_cast<double>(i) / (dense.size() - 1);
        const CpcfCurve curve = ghat_on_grid(s, kTri, h, dense);
        double dense_max = 0.0;
        for (double v : curve.values) dense_max = std::max(dense_max, v);
        worst_gap = std::max(worst_gap, dense_max - est.maximizers.value);
    }
    const bool pass = worst_gap <= 1e-10;
    report(2, pass, fmt("dense-grid max minus kink max, worst %.2e (must be <= 1e-10)", worst_gap));
    EXPECT_LE(worst_gap, 1e-10);
}

// trapezoid integral of ghat over its full support equals T
TEST(Acceptance, Criterion03_MassConservation) {
    std::mt19937_64 rng(555);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        std::uniform_int_distribution<int> nd(20, 300);
        const BivariateSample s = random_sample(rng, nd(rng), nd(rng), 50.0);
        const double h = rep % 2 == 0 ? 0.05 : 0.011;
        const double T = s.window_end();
        const DifferenceMultiset diffs = pair_differences(s, -T - 1.0, T + 1.0);
        std::vector<double> grid;
        grid.reserve(3 * diffs.size() + 2);
        grid.push_back(diffs.diffs.front() - 2.0 * h);
        for (double d : diffs.diffs)
            for (double v : {d - h, d, d + h}) grid.push_back(v);
        grid.push_back(diffs.diffs.back() + 2.0 * h);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        const CpcfCurve curve = ghat_on_grid(s, kTri, h, grid);
        long double trap = 0.0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            trap += 0.5L * (curve.values[i] + curve.values[i - 1]) * (grid[i] - grid[i - 1]);
        worst = std::max(worst, std::abs(static_cast<double>(trap) / T - 1.0));
    }
    const bool pass = worst <= 1e-9;
    report(3, pass, fmt("integral/T worst rel dev %.2e (tol 1e-9)", worst));
    EXPECT_LE(worst, 1e-9);
}

// scatter path at small bandwidth beats the naive loop by >= 5x
TEST(Acceptance, Criterion04_ComplexityFastPath) {
    const Scenario& sc = find_scenario("ns_gamma_3");
    const BivariateSample s = simulate(with_theta(sc.spec, 0.05), 4000.0, 777);
    double speedup_small = 0.0, speedup_large = 0.0;
    for (const double h : {1e-4, 1e-1}) {
        const std::vector<double> cand = kink_candidates(s, h, 1.0);
        const auto t0 = clock_type::now();
        const CpcfCurve fast = ghat_on_grid(s, kTri, h, cand);
        const double fast_s = seconds_since(t0);
        const auto t1 = clock_type::now();
        double checksum = 0.0;
        for (double u : cand) checksum += ghat_at(s, kTri, h, u);
        const double naive_s = seconds_since(t1);
        (h == 1e-4 ? speedup_small : speedup_large) = naive_s / fast_s;
        double fast_sum = 0.0;
        for (double v : fast.values) fast_sum += v;
        ASSERT_NEAR(fast_sum, checksum, 1e-9 * checksum);
    }
    const bool pass = speedup_small >= 5.0;
    report(4, pass,
           fmt("speedup %.0fx at h=1e-4 (>= 5 required), %.1fx at h=1e-1 (recorded, no threshold)",
               speedup_small, speedup_large));
    EXPECT_GE(speedup_small, 5.0);
}

// log-log RMSE slope of the Lepski estimator within +-0.12 of -1/beta_alpha
TEST(Acceptance, Criterion05_RateReproduction) {
    const std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    bool all_pass = true;
    std::string detail;
    for (const char* scen : {"ns_gamma_3", "hawkes_exp"}) {
        ExperimentConfig cfg;
        cfg.scenario = scen;
        cfg.T_list = {1000, 2000, 4000, 8000};
        cfg.replicates = 200;
        cfg.estimators = {LepskiEstimatorSpec{grid, 1.0, 1.0}};
        cfg.theta_law = ThetaLaw::uniform(-0.1, 0.1);
        cfg.master_seed = 101;
        const RmseTable table = run_rmse_experiment(cfg);
        const SlopeFit fit = fit_loglog_slope(table, scen, "lepski");
        const double ref = -1.0 / find_scenario(scen).beta_alpha;
        const double dev = fit.slope - ref;
        all_pass = all_pass && std::abs(dev) <= 0.12;
        detail += fmt("%s slope %.3f vs %.3f (dev %+.3f, tol 0.12); ", scen, fit.slope, ref, dev);
    }
    report(5, all_pass, detail);
    EXPECT_TRUE(all_pass) << detail;
}

// DS estimator: RMSE <= 2h at bucket scale, and a 10x smaller bucket at
// T=1000 is strictly worse (small-bucket instability)
TEST(Acceptance, Criterion06_DsRate) {
    const int R = 200;
    const auto run = [&](double T, double h) {
        double sq = 0.0;
        int fail_count = 0;
        for (int rep = 0; rep < R; ++rep) {
            const auto spec = DisplacedPoissonSpec::triangular(0.05, 0.05);
            const BivariateSample s = simulate_displaced_poisson(spec, T, derive_seed(606, rep));
            try {
                const double theta = ds_estimate(s, DsConfig{h, 0.1}).theta;
                sq += (theta - 0.05) * (theta - 0.05);
            } catch (const error&) {
                ++fail_count;
            }
        }
        return std::sqrt(sq / (R - fail_count));
    };
    const double rmse_large_T = run(8000.0, 0.005);
    const double rmse_small_T = run(1000.0, 0.005);
    const double rmse_small_h = run(1000.0, 0.0005);
    const bool pass = rmse_large_T <= 0.01 && rmse_small_h > rmse_small_T;
    report(6, pass,
           fmt("rmse(T=8000,h=0.005)=%.5f (<= 2h=0.01); at T=1000: h=0.0005 gives %.5f vs "
               "h=0.005 gives %.5f (strictly worse required)",
               rmse_large_T, rmse_small_h, rmse_small_T));
    EXPECT_LE(rmse_large_T, 0.01);
    EXPECT_GT(rmse_small_h, rmse_small_T);
}

// slopes under the three A_T schedules agree pairwise within +-0.15
TEST(Acceptance, Criterion07_LepskiThresholdRobustness) {
    const BandwidthGrid grid = BandwidthGrid::from_values({1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
    const Scenario& sc = find_scenario("ns_gamma_1");
    const std::vector<double> T_list{1000, 2000, 4000, 8000};
    const std::vector<double> factors{0.5, 1.0, 2.0};
    const int R = 250;
    std::vector<std::vector<double>> sq(factors.size(), std::vector<double>(T_list.size(), 0.0));
    for (std::size_t ti = 0; ti < T_list.size(); ++ti) {
        for (int rep = 0; rep < R; ++rep) {
            std::mt19937_64 rng(derive_seed(707, ti * R + rep));
            std::uniform_real_distribution<double> theta_law(-0.1, 0.1);
            const double theta_star = theta_law(rng);
            const BivariateSample s = simulate(with_theta(sc.spec, theta_star), T_list[ti], rng());
            const std::vector<MaximizerSet> sets = maximizers_per_bandwidth(s, kTri, grid, 1.0);
            for (std::size_t f = 0; f < factors.size(); ++f) {
                const double at = factors[f] * default_lepski_threshold(T_list[ti]);
                const double err = lepski_choose(grid.values, sets, at).theta - theta_star;
                sq[f][ti] += err * err;
            }
        }
    }
    std::vector<double> slopes;
    std::string detail;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        RmseTable table;
        for (std::size_t ti = 0; ti < T_list.size(); ++ti) {
            RmseRow row;
            row.scenario = "ns_gamma_1";
            row.estimator = "lepski";
            row.T = T_list[ti];
            row.rmse = std::sqrt(sq[f][ti] / R);
            table.rows.push_back(row);
        }
        slopes.push_back(fit_loglog_slope(table, "ns_gamma_1", "lepski").slope);
        detail += fmt("at=%.1f*loglogT slope %.3f; ", factors[f], slopes.back());
    }
    double worst_gap = 0.0;
    for (std::size_t i = 0; i < slopes.size(); ++i)
        for (std::size_t j = i + 1; j < slopes.size(); ++j)
            worst_gap = std::max(worst_gap, std::abs(slopes[i] - slopes[j]));
    const bool pass = worst_gap <= 0.15;
    report(7, pass, detail + fmt("worst pairwise gap %.3f (tol 0.15)", worst_gap));
    EXPECT_LE(worst_gap, 0.15);
}

// the selected bandwidth is non-increasing in A_T on every tested sample
TEST(Acceptance, Criterion08_LepskiMonotonicity) {
    const BandwidthGrid grid = BandwidthGrid::from_values({1e-1, 1e-2, 1e-3, 1e-4});
    int violations = 0, checks = 0;
    for (const char* scen : {"ns_gamma_2", "ns_gamma_3", "hawkes_exp"}) {
        const Scenario& sc = find_scenario(scen);
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const BivariateSample s = simulate(with_theta(sc.spec, 0.03), 500.0, derive_seed(88, seed));
            const std::vector<MaximizerSet> sets = maximizers_per_bandwidth(s, kTri, grid, 0.5);
            double prev = std::numeric_limits<double>::infinity();
            for (const double at : {0.1, 0.3, 0.7, 1.5, 3.0, 8.0, 20.0}) {
                const double h = lepski_choose(grid.values, sets, at).h_hat;
                ++checks;
                if (h > prev) ++violations;
                prev = h;
            }
        }
    }
    const bool pass = violations == 0;
    report(8, pass, fmt("%d monotonicity violations over %d threshold steps", violations, checks));
    EXPECT_EQ(violations, 0);
}

// nearest-range CV vs the best fixed bandwidth. The 2x bound fails by
// construction of the loss (its response to the selection error is second
// order inside the CPCF peak width), so this criterion is expected red; the
// same run shows CV beating the Lepski selector, the paper's actual claim.
TEST(Acceptance, Criterion09_CvBehavior) {
    const std::vector<double> gridv{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const BandwidthGrid grid = BandwidthGrid::from_values(gridv);
    const Scenario& sc = find_scenario("ns_gamma_3");
    const int R = 150;
    const double T = 2000.0;
    CvConfig cv;
    cv.loss = CvLoss::nearest;
    cv.tau = 0.05;
    cv.n_min = 5;
    cv.folds = 5;
    cv.r = 1.0;
    double sq_cv = 0.0, sq_lepski = 0.0;
    int fail_cv = 0;
    std::vector<double> sq_fixed(gridv.size(), 0.0);
    for (int rep = 0; rep < R; ++rep) {
        std::mt19937_64 rng(derive_seed(909, rep));
        std::uniform_real_distribution<double> theta_law(-0.1, 0.1);
        const double theta_star = theta_law(rng);
        const BivariateSample s = simulate(with_theta(sc.spec, theta_star), T, rng());
        try {
            const double theta = cv_select(s, kTri, grid, cv).theta;
            sq_cv += (theta - theta_star) * (theta - theta_star);
        } catch (const error&) {
            ++fail_cv;
        }
        const std::vector<MaximizerSet> sets = maximizers_per_bandwidth(s, kTri, grid, 1.0);
        const double lep =
            lepski_choose(gridv, sets, default_lepski_threshold(T)).theta - theta_star;
        sq_lepski += lep * lep;
        for (std::size_t i = 0; i < gridv.size(); ++i) {
            const double err = sets[i].min() - theta_star;
            sq_fixed[i] += err * err;
        }
    }
    const double rmse_cv = std::sqrt(sq_cv / (R - fail_cv));
    const double rmse_lepski = std::sqrt(sq_lepski / R);
    double best_fixed = std::numeric_limits<double>::infinity();
    for (double sq : sq_fixed) best_fixed = std::min(best_fixed, std::sqrt(sq / R));
    const double ratio = rmse_cv / best_fixed;
    const bool pass = ratio <= 2.0;
    report(9, pass,
           fmt("nearest-CV rmse %.5f vs best fixed %.5f: ratio %.2f (bound 2.0); context: Lepski "
               "rmse %.5f is %.2fx the same oracle benchmark, CV/Lepski = %.2f",
               rmse_cv, best_fixed, ratio, rmse_lepski, rmse_lepski / best_fixed,
               rmse_cv / rmse_lepski));
    EXPECT_LE(ratio, 2.0) << "known-red criterion: the oracle-relative bound is unattainable for "
                             "the epsilon-quantile loss; see the printed context";
}

// analytic CPCF oracles: closed form vs quadrature, and vs long-run ghat
TEST(Acceptance, Criterion10_CpcfOracleAgreement) {
    // (a) closed form vs quadrature on 1000 points away from the pole
    double worst_rel = 0.0;
    int points = 0;
    for (const char* name : {"ns_gamma_1", "ns_gamma_2", "ns_gamma_3"}) {
        const LbnspgSpec spec = std::get<LbnspgSpec>(with_theta(find_scenario(name).spec, 0.02));
        GammaMixture f1(spec.rates[0]), f2(spec.rates[1]);
        f1.add(1.0, spec.shapes[0]);
        f2.add(1.0, spec.shapes[1]);
        for (int i = 0; i < 334; ++i) {
            const double v = -1.0 + 2.0 * (i + 0.5) / 334.0;
            if (std::abs(v) < 0.005) continue;
            const double closed = cpcf_lbnspg(spec, spec.theta + v);
            const double quad = 1.0 + gamma_mixture_cross_density(f1, f2, v) / spec.lambda;
            worst_rel = std::max(worst_rel, std::abs(closed - quad) / closed);
            ++points;
        }
    }
    const bool pass_a = worst_rel <= 1e-6;

    // (b) Hawkes oracle within 3 Monte Carlo standard errors of the
    // long-run empirical estimate on a coarse grid
    int outside = 0, grid_points = 0;
    double worst_dev = 0.0;
    for (const char* name : {"hawkes_exp", "hawkes_gamma_sym"}) {
        const Scenario& sc = find_scenario(name);
        const HawkesCpcfOracle oracle(std::get<LbhpgSpec>(sc.spec));
        const double h = 0.02, T = 20000.0;
        const std::vector<double> grid{-0.5, -0.3, -0.2, -0.12, -0.06, 0.06, 0.12, 0.2, 0.3, 0.5};
        const int R = 10;
        std::vector<std::vector<double>> vals(grid.size());
        for (int rep = 0; rep < R; ++rep) {
            const BivariateSample s = simulate(sc.spec, T, derive_seed(1010, rep));
            const CpcfCurve curve = ghat_on_grid(s, kTri, h, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) vals[i].push_back(curve.values[i]);
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double mean = 0.0;
            for (double v : vals[i]) mean += v;
            mean /= R;
            double var = 0.0;
            for (double v : vals[i]) var += (v - mean) * (v - mean);
            const double se = std::sqrt(var / (R - 1) / R);
            const double dev = std::abs(mean - oracle(grid[i])) / se;
            worst_dev = std::max(worst_dev, dev);
            ++grid_points;
            if (dev > 3.0) ++outside;
        }
    }
    const bool pass = pass_a && outside == 0;
    report(10, pass,
           fmt("closed-vs-quadrature worst rel %.2e over %d points (tol 1e-6); empirical ghat: "
               "%d/%d grid points outside 3 SE (worst %.1f SE)",
               worst_rel, points, outside, grid_points, worst_dev));
    EXPECT_LE(worst_rel, 1e-6);
    EXPECT_EQ(outside, 0);
}

// bucket-measure / smoothed-CPCF correspondence tightens as T doubles
TEST(Acceptance, Criterion11_DsKernelCorrespondence) {
    const auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    const auto spec = DisplacedPoissonSpec::triangular(1.0, 0.05);
    std::vector<double> d1, d2;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const double h1 = 0.05, h2 = 0.05 * std::pow(2.0, -0.3);
        const BivariateSample s1 = simulate_displaced_poisson(spec, 10000.0, derive_seed(1111, seed));
        const BivariateSample s2 = simulate_displaced_poisson(spec, 20000.0, derive_seed(2222, seed));
        d1.push_back(ds_kernel_correspondence(s1, h1, spec, 1.0).max_discrepancy);
        d2.push_back(ds_kernel_correspondence(s2, h2, spec, 1.0).max_discrepancy);
    }
    const double m1 = median(d1), m2 = median(d2);
    // 0.15 * (lam1 v lam2) * max g with max g = 1 + max density = 2
    const bool pass = m2 < m1 && m1 < 0.3 && m2 < 0.3;
    report(11, pass,
           fmt("median max-discrepancy %.4f at T=10000 -> %.4f at T=20000 with h ~ T^-0.3 "
               "(must decrease; both < 0.30)",
               m1, m2));
    EXPECT_LT(m2, m1);
    EXPECT_LT(m1, 0.3);
}

// CLI runs are byte-identical given identical arguments
TEST(Acceptance, Criterion12_Determinism) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "leadlag_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cli = LEADLAG_CLI_PATH;
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const auto shell = [&](const std::string& cmd) {
        const int rc = std::system(cmd.c_str());
        ASSERT_EQ(rc, 0) << cmd;
    };

    bool pass = true;
    std::string detail;

    // simulate twice
    const std::string sim_base = " simulate --scenario ns_gamma_1 --T 500 --seed 7 --theta 0.05";
    shell(cli + sim_base + " --out-prefix " + (dir / "a_").string() + " > /dev/null");
    shell(cli + sim_base + " --out-prefix " + (dir / "b_").string() + " > /dev/null");
    for (const char* suffix : {"1.txt", "2.txt", ".meta"}) {
        if (slurp(dir / ("a_" + std::string(suffix))) != slurp(dir / ("b_" + std::string(suffix)))) {
            pass = false;
            detail += fmt("simulate outputs differ on %s; ", suffix);
        }
    }

    // estimate twice on the same files (stdout comparison), geometric grid
    const std::string est_cmd = cli + " estimate --file1 " + (dir / "a_1.txt").string() +
                                " --file2 " + (dir / "a_2.txt").string() +
                                " --T 500 --method lepski --grid 10,1,1.5 --At loglogT --r 0.5";
    shell(est_cmd + " > " + (dir / "est1.out").string());
    shell(est_cmd + " > " + (dir / "est2.out").string());
    if (slurp(dir / "est1.out") != slurp(dir / "est2.out")) {
        pass = false;
        detail += "estimate stdout differs; ";
    }
    if (slurp(dir / "est1.out").find("h_hat = ") == std::string::npos) {
        pass = false;
        detail += "estimate output lacks the selected bandwidth; ";
    }

    // exit-code contract: 2 usage, 3 validation, 5 budget exceeded
    const auto exit_code = [&](const std::string& cmd) {
        const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    const int usage = exit_code(cli + " estimate --method ds");
    const int validation = exit_code(cli + " simulate --scenario bogus --T 10 --seed 1 --out-prefix " +
                                     (dir / "x_").string());
    const int budget = exit_code(cli + " simulate --scenario ns_gamma_1 --T 10000 --seed 1 --budget 10" +
                                 " --out-prefix " + (dir / "y_").string());
    if (usage != 2 || validation != 3 || budget != 5) {
        pass = false;
        detail += fmt("exit codes usage=%d validation=%d budget=%d (want 2/3/5); ", usage,
                      validation, budget);
    }

    // experiment twice
    {
        std::ofstream cfg(dir / "exp.cfg");
        cfg << "scenario = ns_gamma_3\n"
            << "T = 300, 600\n"
            << "replicates = 10\n"
            << "theta = uniform(-0.1, 0.1)\n"
            << "seed = 5\n"
            << "estimator = ds h=0.01 r=0.3\n"
            << "estimator = lepski grid=1e-1:1e-2:1e-3 at=1 r=0.3\n";
    }
    const std::string exp_base = cli + " experiment --config " + (dir / "exp.cfg").string();
    shell(exp_base + " --out " + (dir / "t1.csv").string() + " --slopes " + (dir / "s1.csv").string() +
          " > /dev/null");
    shell(exp_base + " --out " + (dir / "t2.csv").string() + " --slopes " + (dir / "s2.csv").string() +
          " > /dev/null");
    if (slurp(dir / "t1.csv") != slurp(dir / "t2.csv")) {
        pass = false;
        detail += "experiment tables differ; ";
    }
    if (slurp(dir / "s1.csv") != slurp(dir / "s2.csv")) {
        pass = false;
        detail += "slope summaries differ; ";
    }

    // the simulate -> ingest round trip reproduces the in-memory sample
    const BivariateSample mem = simulate(with_theta(find_scenario("ns_gamma_1").spec, 0.05), 500.0, 7);
    IngestSpec ingest;
    ingest.path1 = (dir / "a_1.txt").string();
    ingest.path2 = (dir / "a_2.txt").string();
    ingest.window_end = 500.0;
    const BivariateSample disk = ingest_timestamps(ingest);
    if (disk.s1.times() != mem.s1.times() || disk.s2.times() != mem.s2.times()) {
        pass = false;
        detail += "file round trip not exact; ";
    }

    if (detail.empty()) detail = "simulate/estimate/experiment re-runs byte-identical; file round trip exact";
    report(12, pass, detail);
    EXPECT_TRUE(pass) << detail;
    fs::remove_all(dir);
}
