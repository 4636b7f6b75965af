// Command-line frontend: synthetic data generation, lead-lag estimation on
// timestamp files, and Monte Carlo experiment sweeps.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leadlag/bandwidth.hpp"
#include "leadlag/core.hpp"
#include "leadlag/cpcf.hpp"
#include "leadlag/ds.hpp"
#include "leadlag/harness.hpp"
#include "leadlag/io.hpp"
#include "leadlag/models.hpp"

namespace {

using namespace leadlag;

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitBudget = 5;

int exit_code_for(const error& e) {
    if (e.code() == errc::budget_exceeded) return kExitBudget;
    return e.is_validation() ? kExitValidation : kExitNumerical;
}

int env_threads() {
    if (const char* env = std::getenv("LEADLAG_THREADS")) {
        try {
            return std::max(0, std::stoi(env));
        } catch (...) {
            std::cerr << "warning: ignoring unparsable LEADLAG_THREADS='" << env << "'\n";
        }
    }
    return 0;
}

// A_T expressions: "loglogT", "<c>*loglogT", or a plain positive number.
struct AtExpr {
    bool scaled = true;     // multiply by log log T
    double factor = 1.0;
    double resolve(double T) const { return scaled ? factor * default_lepski_threshold(T) : factor; }
};

AtExpr parse_at_expr(const std::string& text) {
    AtExpr at;
    if (text == "loglogT") return at;
    const std::size_t star = text.find('*');
    if (star != std::string::npos && text.substr(star + 1) == "loglogT") {
        at.factor = std::stod(text.substr(0, star));
        return at;
    }
    at.scaled = false;
    at.factor = std::stod(text);
    if (!(at.factor > 0.0)) throw CLI::ValidationError("--At must be positive");
    return at;
}

std::vector<double> parse_list(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, sep))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

struct SimulateArgs {
    std::string scenario;
    std::string model;
    std::vector<double> mu{0.2, 0.2};
    std::vector<double> branching{0.1, 0.1, 0.1, 0.1};
    std::vector<double> rates{10, 10, 10, 10};
    std::vector<double> shapes{1, 1, 1, 1};
    double lambda = 0.1;
    std::vector<double> sigma{4, 4};
    std::vector<double> ns_shapes{2, 2};
    std::vector<double> ns_rates{100, 100};
    std::string density = "triangular:1";
    double T = 1000;
    std::uint64_t seed = 1;
    double theta = 0.0;
    bool theta_set = false;
    std::uint64_t budget = kDefaultEventBudget;
    std::string out_prefix;
};

ModelSpec build_model(const SimulateArgs& args) {
    if (!args.scenario.empty()) {
        ModelSpec spec = find_scenario(args.scenario).spec;
        return args.theta_set ? with_theta(spec, args.theta) : spec;
    }
    if (args.model == "lbhpg") {
        LbhpgSpec s;
        s.mu = {args.mu.at(0), args.mu.at(1)};
        s.branching = {{{args.branching.at(0), args.branching.at(1)},
                        {args.branching.at(2), args.branching.at(3)}}};
        s.rates = {{{args.rates.at(0), args.rates.at(1)}, {args.rates.at(2), args.rates.at(3)}}};
        s.shapes = {{{args.shapes.at(0), args.shapes.at(1)}, {args.shapes.at(2), args.shapes.at(3)}}};
        s.theta = args.theta;
        return s;
    }
    if (args.model == "lbnspg") {
        LbnspgSpec s;
        s.lambda = args.lambda;
        s.sigma = {args.sigma.at(0), args.sigma.at(1)};
        s.shapes = {args.ns_shapes.at(0), args.ns_shapes.at(1)};
        s.rates = {args.ns_rates.at(0), args.ns_rates.at(1)};
        s.theta = args.theta;
        return s;
    }
    if (args.model == "displaced") {
        const std::size_t colon = args.density.find(':');
        const std::string kind = args.density.substr(0, colon);
        const double width = colon == std::string::npos ? 1.0 : std::stod(args.density.substr(colon + 1));
        if (kind == "triangular") return DisplacedPoissonSpec::triangular(width, args.theta);
        if (kind == "uniform") return DisplacedPoissonSpec::uniform(width, args.theta);
        if (kind == "point") return DisplacedPoissonSpec::point_mass(args.theta);
        fail(errc::parse_error, "unknown density '" + args.density +
                                    "' (expected triangular:<w>, uniform:<w> or point)");
    }
    fail(errc::invalid_parameter, "need --scenario or --model {lbhpg,lbnspg,displaced}");
}

std::string model_meta(const ModelSpec& spec) {
    std::ostringstream os;
    std::visit(
        [&os](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LbhpgSpec>) {
                os << "model = lbhpg\n";
                os << "mu = " << s.mu[0] << ", " << s.mu[1] << "\n";
                os << "branching = " << s.branching[0][0] << ", " << s.branching[0][1] << ", "
                   << s.branching[1][0] << ", " << s.branching[1][1] << "\n";
                os << "rates = " << s.rates[0][0] << ", " << s.rates[0][1] << ", " << s.rates[1][0]
                   << ", " << s.rates[1][1] << "\n";
                os << "shapes = " << s.shapes[0][0] << ", " << s.shapes[0][1] << ", " << s.shapes[1][0]
                   << ", " << s.shapes[1][1] << "\n";
            } else if constexpr (std::is_same_v<S, LbnspgSpec>) {
                os << "model = lbnspg\n";
                os << "lambda = " << s.lambda << "\n";
                os << "sigma = " << s.sigma[0] << ", " << s.sigma[1] << "\n";
                os << "shapes = " << s.shapes[0] << ", " << s.shapes[1] << "\n";
                os << "rates = " << s.rates[0] << ", " << s.rates[1] << "\n";
            } else {
                os << "model = displaced\n";
                os << "density = " << s.label << "\n";
            }
        },
        spec);
    return os.str();
}

int run_simulate(const SimulateArgs& args) {
    const ModelSpec spec = build_model(args);
    const BivariateSample sample = simulate(spec, args.T, args.seed, args.budget);
    write_timestamps(args.out_prefix + "1.txt", sample.s1.times());
    write_timestamps(args.out_prefix + "2.txt", sample.s2.times());

    const auto [lam1, lam2] = intensities(spec);
    std::ostringstream meta;
    if (!args.scenario.empty()) meta << "scenario = " << args.scenario << "\n";
    meta << model_meta(spec);
    meta << "theta = " << format_double(model_theta(spec)) << "\n";
    meta << "T = " << format_double(args.T) << "\n";
    meta << "seed = " << args.seed << "\n";
    meta << "intensity1 = " << format_double(lam1) << "\n";
    meta << "intensity2 = " << format_double(lam2) << "\n";
    meta << "n1 = " << sample.s1.size() << "\n";
    meta << "n2 = " << sample.s2.size() << "\n";
    write_file_atomic(args.out_prefix + ".meta", meta.str());
    std::cout << "wrote " << args.out_prefix << "1.txt (" << sample.s1.size() << " events), "
              << args.out_prefix << "2.txt (" << sample.s2.size() << " events)\n";
    return 0;
}

struct EstimateArgs {
    std::string file1, file2;
    std::string unit = "seconds";
    std::vector<double> window;
    std::optional<double> T;
    std::string method = "lepski";
    std::optional<double> h;
    double r = 1.0;
    std::string kernel = "tri";
    std::vector<double> grid_spec;  // a, j_min, gamma_max
    std::vector<double> bandwidths; // explicit grid
    std::string at_expr = "loglogT";
    std::string cv_loss = "nearest";
    double cv_tau = 0.05;
    int cv_nmin = 5;
    int cv_folds = 5;
    std::string out;
};

int run_estimate(const EstimateArgs& args) {
    IngestSpec ingest;
    ingest.path1 = args.file1;
    ingest.path2 = args.file2;
    ingest.unit = parse_unit(args.unit);
    if (!args.window.empty()) {
        if (args.window.size() != 2) throw CLI::ValidationError("--window needs start,end");
        ingest.window = {args.window[0], args.window[1]};
    }
    if (args.T) ingest.window_end = *args.T;
    const BivariateSample sample = ingest_timestamps(ingest);
    if (sample.s1.short_window())
        std::cerr << "warning: window length T = " << sample.window_end()
                  << " is below 1; estimators assume a long window\n";
    const double T = sample.window_end();
    const Kernel kernel{args.kernel == "uniform" ? KernelKind::uniform : KernelKind::triangular};

    const auto make_grid = [&]() -> BandwidthGrid {
        if (!args.bandwidths.empty()) return BandwidthGrid::from_values(args.bandwidths);
        LepskiConfig cfg;
        if (!args.grid_spec.empty()) {
            if (args.grid_spec.size() != 3) throw CLI::ValidationError("--grid needs a,jmin,gmax");
            cfg.a = args.grid_spec[0];
            cfg.j_min = static_cast<int>(args.grid_spec[1]);
            cfg.gamma_max = args.grid_spec[2];
        }
        return BandwidthGrid::geometric(cfg, T);
    };

    std::cout << "n1 = " << sample.s1.size() << "\nn2 = " << sample.s2.size()
              << "\nT = " << format_double(T) << "\nmethod = " << args.method << "\n";

    std::string curve_out;
    if (args.method == "ds") {
        if (!args.h) throw CLI::ValidationError("--method ds requires --h");
        const DsConfig ds_cfg{*args.h, args.r};
        if (ds_cfg.degenerate_grid())
            std::cerr << "warning: r < h collapses the offset grid to {0}\n";
        const DsEstimate est = ds_estimate(sample, ds_cfg);
        std::cout << "h = " << format_double(ds_cfg.h) << "\n";
        std::cout << "theta = " << format_double(est.theta) << "\n";
        std::cout << "offset = " << est.offset << "\n";
        if (!args.out.empty()) {
            std::vector<double> xs;
            for (auto ell : est.curve.offsets) xs.push_back(static_cast<double>(ell) * est.curve.h);
            curve_out = curve_csv("lag", "x_rel", xs, est.curve.rel);
        }
    } else if (args.method == "kernel") {
        if (!args.h) throw CLI::ValidationError("--method kernel requires --h");
        const ThetaHat est = theta_hat(sample, kernel, *args.h, args.r);
        std::cout << "h = " << format_double(*args.h) << "\n";
        std::cout << "theta = " << format_double(est.theta) << "\n";
        std::cout << "maximizers =";
        for (double p : est.maximizers.points) std::cout << ' ' << format_double(p);
        std::cout << "\n";
        if (!args.out.empty()) {
            const CpcfCurve curve =
                ghat_on_grid(sample, kernel, *args.h, kink_candidates(sample, *args.h, args.r));
            curve_out = curve_csv("u", "ghat", curve.grid, curve.values);
        }
    } else if (args.method == "lepski") {
        const BandwidthGrid grid = make_grid();
        const double at = parse_at_expr(args.at_expr).resolve(T);
        const LepskiResult res = lepski_select(sample, kernel, grid, at, args.r);
        if (res.fallback)
            std::cerr << "warning: no admissible bandwidth; returning the largest grid value\n";
        std::cout << "A_T = " << format_double(at) << "\n";
        std::cout << "h_hat = " << format_double(res.h_hat) << "\n";
        std::cout << "theta = " << format_double(res.theta) << "\n";
        const std::size_t chosen =
            static_cast<std::size_t>(std::find(res.grid.begin(), res.grid.end(), res.h_hat) -
                                     res.grid.begin());
        std::cout << "maximizers =";
        for (double p : res.maximizers[chosen].points) std::cout << ' ' << format_double(p);
        std::cout << "\n";
        if (!args.out.empty()) {
            const CpcfCurve curve =
                ghat_on_grid(sample, kernel, res.h_hat, kink_candidates(sample, res.h_hat, args.r));
            curve_out = curve_csv("u", "ghat", curve.grid, curve.values);
        }
    } else if (args.method == "cv") {
        const BandwidthGrid grid = make_grid();
        CvConfig cfg;
        cfg.folds = args.cv_folds;
        cfg.loss = args.cv_loss == "mse" ? CvLoss::mse : CvLoss::nearest;
        cfg.tau = args.cv_tau;
        cfg.n_min = args.cv_nmin;
        cfg.r = args.r;
        if (T / cfg.folds <= cfg.r)
            std::cerr << "warning: fold length " << T / cfg.folds
                      << " is not large relative to r = " << cfg.r << "\n";
        const CvResult res = cv_select(sample, kernel, grid, cfg);
        std::cout << "h_hat = " << format_double(res.h_hat) << "\n";
        std::cout << "theta = " << format_double(res.theta) << "\n";
        std::cout << "maximizers =";
        for (double p : res.maximizers.points) std::cout << ' ' << format_double(p);
        std::cout << "\n";
        std::cout << "cv_scores =";
        for (double s : res.scores) std::cout << ' ' << format_double(s);
        std::cout << "\n";
        if (!args.out.empty()) curve_out = curve_csv("h", "cv_score", grid.values, res.scores);
    } else {
        throw CLI::ValidationError("unknown --method '" + args.method + "'");
    }
    if (!args.out.empty() && !curve_out.empty()) {
        write_file_atomic(args.out, curve_out);
        std::cout << "curve written to " << args.out << "\n";
    }
    return 0;
}

struct ExperimentArgs {
    std::string config_path;
    std::string out = "rmse.csv";
    std::string slopes;
    int threads = -1; // -1: take LEADLAG_THREADS / auto
};

int run_experiment(const ExperimentArgs& args) {
    ExperimentConfig cfg = load_experiment_config(args.config_path);
    cfg.threads = args.threads >= 0 ? args.threads : env_threads();
    const RmseTable table = run_rmse_experiment(cfg);
    write_file_atomic(args.out, rmse_table_csv(table));
    std::cout << "rmse table written to " << args.out << " (" << table.rows.size() << " rows)\n";

    if (!args.slopes.empty()) {
        const Scenario& scenario = find_scenario(cfg.scenario);
        std::string csv = "scenario,estimator,params,slope,stderr,reference_slope\n";
        for (const EstimatorSpec& est : cfg.estimators) {
            const std::string name = estimator_name(est);
            const std::string params = estimator_params(est);
            std::string slope = "nan", se = "nan";
            try {
                const SlopeFit fit = fit_loglog_slope(table, cfg.scenario, name, params);
                slope = format_double(fit.slope);
                se = format_double(fit.stderr_slope);
            } catch (const error&) {
                // fewer than 3 usable points; leave nan
            }
            csv += cfg.scenario + "," + name + "," + params + "," + slope + "," + se + "," +
                   format_double(-1.0 / scenario.beta_alpha) + "\n";
        }
        write_file_atomic(args.slopes, csv);
        std::cout << "slope summary written to " << args.slopes << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lead-lag estimation between event-timestamp series"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print help and exit");

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic timestamp file pair");
    simulate->add_option("--scenario", sim.scenario, "Built-in scenario name");
    simulate->add_option("--model", sim.model, "Explicit model family: lbhpg, lbnspg, displaced");
    simulate->add_option("--mu", sim.mu, "LBHPG baseline intensities (2 values)")->expected(2);
    simulate->add_option("--branching", sim.branching, "LBHPG branching matrix, row-major (4 values)")
        ->expected(4);
    simulate->add_option("--rates", sim.rates, "LBHPG gamma rates, row-major (4 values)")->expected(4);
    simulate->add_option("--shapes", sim.shapes, "LBHPG gamma shapes, row-major (4 values)")->expected(4);
    simulate->add_option("--lambda", sim.lambda, "LBNSPG parent intensity");
    simulate->add_option("--sigma", sim.sigma, "LBNSPG offspring means (2 values)")->expected(2);
    simulate->add_option("--ns-shapes", sim.ns_shapes, "LBNSPG dispersal shapes (2 values)")->expected(2);
    simulate->add_option("--ns-rates", sim.ns_rates, "LBNSPG dispersal rates (2 values)")->expected(2);
    simulate->add_option("--density", sim.density,
                         "Displacement law: triangular:<w>, uniform:<w>, point");
    simulate->add_option("--T", sim.T, "Window length in seconds")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed")->required();
    simulate->add_option("--theta", sim.theta, "Lead-lag shift of component 2")
        ->each([&sim](const std::string&) { sim.theta_set = true; });
    simulate->add_option("--budget", sim.budget, "Event budget per replicate");
    simulate->add_option("--out-prefix", sim.out_prefix, "Output path prefix")->required();

    EstimateArgs est;
    CLI::App* estimate = app.add_subcommand("estimate", "Estimate the lead-lag time from two files");
    estimate->set_help_flag("--help", "Print help and exit");
    estimate->add_option("--file1", est.file1, "Timestamps of the leading candidate")->required();
    estimate->add_option("--file2", est.file2, "Timestamps of the lagging candidate")->required();
    estimate->add_option("--unit", est.unit, "Input unit: seconds, milliseconds, microseconds");
    estimate->add_option("--window", est.window, "Clip window start,end in input units")
        ->delimiter(',')
        ->expected(0, 2);
    estimate->add_option_function<double>(
        "--T", [&est](double v) { est.T = v; }, "Window length in input units (when no --window)");
    estimate->add_option("--method", est.method, "ds, kernel, lepski or cv");
    estimate->add_option_function<double>(
        "--h", [&est](double v) { est.h = v; }, "Bucket width / bandwidth in seconds");
    estimate->add_option("--r", est.r, "Search half-range in seconds");
    estimate->add_option("--kernel", est.kernel, "tri or uniform");
    estimate->add_option("--grid", est.grid_spec, "Geometric bandwidth grid: a,jmin,gmax")
        ->delimiter(',')
        ->expected(0, 3);
    estimate->add_option("--bandwidths", est.bandwidths, "Explicit descending bandwidth list")
        ->delimiter(',');
    estimate->add_option("--At", est.at_expr, "Lepski threshold: loglogT, c*loglogT or a number");
    estimate->add_option("--cv-loss", est.cv_loss, "CV loss: nearest or mse");
    estimate->add_option("--cv-tau", est.cv_tau, "CV trimming fraction");
    estimate->add_option("--cv-nmin", est.cv_nmin, "CV minimum covered count");
    estimate->add_option("--cv-folds", est.cv_folds, "CV fold count");
    estimate->add_option("--out", est.out, "Write the contrast curve as CSV");

    ExperimentArgs exp;
    CLI::App* experiment = app.add_subcommand("experiment", "Run a Monte Carlo RMSE sweep");
    experiment->add_option("--config", exp.config_path, "key = value config file")->required();
    experiment->add_option("--out", exp.out, "RMSE table CSV path");
    experiment->add_option("--slopes", exp.slopes, "Slope summary CSV path");
    experiment->add_option("--threads", exp.threads, "Worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return run_simulate(sim);
        if (estimate->parsed()) return run_estimate(est);
        if (experiment->parsed()) return run_experiment(exp);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    } catch (const leadlag::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
