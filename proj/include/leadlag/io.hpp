#pragma once

// File formats: one-timestamp-per-line text files, `key = value` experiment
// configs, and the CSV emitted by the experiment runner. Output files are
// written atomically (temp file + rename).

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "leadlag/core.hpp"
#include "leadlag/errors.hpp"
#include "leadlag/harness.hpp"

namespace leadlag {

enum class TimeUnit { seconds, milliseconds, microseconds };

inline double unit_scale(TimeUnit u) {
    switch (u) {
    case TimeUnit::milliseconds: return 1e-3;
    case TimeUnit::microseconds: return 1e-6;
    default: return 1.0;
    }
}

inline TimeUnit parse_unit(std::string_view s) {
    if (s == "seconds" || s == "s") return TimeUnit::seconds;
    if (s == "milliseconds" || s == "ms") return TimeUnit::milliseconds;
    if (s == "microseconds" || s == "us") return TimeUnit::microseconds;
    fail(errc::parse_error, "unknown time unit '" + std::string(s) + "'");
}

struct IngestSpec {
    std::string path1;
    std::string path2;
    TimeUnit unit = TimeUnit::seconds;
    std::optional<std::pair<double, double>> window; // (t_start, t_end] in input units
    std::optional<double> window_end;                // T in input units when no window given
};

namespace detail {

inline double parse_double_strict(std::string_view token, const std::string& where, int line) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        fail(errc::parse_error, where + ":" + std::to_string(line) + ": cannot parse '" +
                                    std::string(token) + "' as a number");
    return value;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace detail

// Reads one decimal timestamp per line; blank lines are rejected so silent
// truncation cannot hide malformed files.
inline std::vector<double> read_timestamps(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::parse_error, "cannot open '" + path + "'");
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view token = detail::trim(line);
        if (token.empty())
            fail(errc::parse_error, path + ":" + std::to_string(lineno) + ": blank line");
        out.push_back(detail::parse_double_strict(token, path, lineno));
    }
    return out;
}

inline void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(errc::parse_error, "cannot open '" + tmp + "' for writing");
        out << contents;
        if (!out) fail(errc::parse_error, "write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

// 17 significant digits: round-trips any double exactly.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_timestamps(const std::string& path, const std::vector<double>& times) {
    std::string body;
    body.reserve(times.size() * 20);
    for (double t : times) {
        body += format_double(t);
        body += '\n';
    }
    write_file_atomic(path, body);
}

// Parses both files, applies the window clip (re-basing t_start to 0) and
// the exact decimal unit scaling, and validates the resulting series.
inline BivariateSample ingest_timestamps(const IngestSpec& spec) {
    const double scale = unit_scale(spec.unit);
    const auto load = [&](const std::string& path) {
        std::vector<double> raw = read_timestamps(path);
        std::vector<double> out;
        out.reserve(raw.size());
        if (spec.window) {
            const auto [t_start, t_end] = *spec.window;
            if (!(t_start < t_end)) fail(errc::invalid_parameter, "window requires t_start < t_end");
            for (double t : raw)
                if (t > t_start && t <= t_end) out.push_back((t - t_start) * scale);
        } else {
            for (double t : raw) out.push_back(t * scale);
        }
        return out;
    };
    std::vector<double> t1 = load(spec.path1);
    std::vector<double> t2 = load(spec.path2);

    double T;
    if (spec.window) {
        T = (spec.window->second - spec.window->first) * scale;
    } else if (spec.window_end) {
        T = *spec.window_end * scale;
    } else {
        T = 0.0;
        for (double t : t1) T = std::max(T, t);
        for (double t : t2) T = std::max(T, t);
        if (T <= 0.0) fail(errc::empty_series, "cannot infer T from empty inputs");
    }
    return BivariateSample(EventSeries(std::move(t1), T), EventSeries(std::move(t2), T));
}

// --- experiment config ----------------------------------------------------
//
// Line-oriented `key = value` text with '#' comments. Repeated `estimator`
// lines accumulate. Example:
//
//   scenario   = ns_gamma_3
//   T          = 1000, 2000, 4000
//   replicates = 200
//   theta      = uniform(-0.1, 0.1)
//   seed       = 7
//   estimator  = lepski grid=1e-1:1e-2:1e-3:1e-4:1e-5:1e-6 at=1 r=1
//   estimator  = ds h=0.01 r=1

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) pos = s.size();
        out.emplace_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

inline std::vector<double> parse_double_list(std::string_view s, char sep, const std::string& where,
                                             int line) {
    std::vector<double> out;
    for (const std::string& tok : split(s, sep)) out.push_back(parse_double_strict(tok, where, line));
    return out;
}

// key=value tokens after the estimator kind word
inline std::vector<std::pair<std::string, std::string>> parse_kv_tokens(std::string_view rest) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream is{std::string(rest)};
    std::string tok;
    while (is >> tok) {
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos)
            out.emplace_back(tok, "");
        else
            out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
    return out;
}

} // namespace detail

inline EstimatorSpec parse_estimator_spec(std::string_view text, const std::string& where = "<arg>",
                                          int line = 0) {
    const std::string_view body = detail::trim(text);
    const std::size_t space = body.find_first_of(" \t");
    const std::string kind{body.substr(0, space)};
    const auto kv = detail::parse_kv_tokens(space == std::string_view::npos ? "" : body.substr(space));

    const auto get = [&](const char* key) -> std::optional<std::string> {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        return std::nullopt;
    };
    const auto get_num = [&](const char* key) -> std::optional<double> {
        if (auto v = get(key)) return detail::parse_double_strict(*v, where, line);
        return std::nullopt;
    };
    const auto get_kernel = [&]() {
        if (auto v = get("kernel")) {
            if (*v == "tri" || *v == "triangular") return KernelKind::triangular;
            if (*v == "uniform") return KernelKind::uniform;
            fail(errc::parse_error, where + ":" + std::to_string(line) + ": unknown kernel '" + *v + "'");
        }
        return KernelKind::triangular;
    };
    const auto get_grid = [&]() -> std::vector<double> {
        if (auto v = get("grid")) return detail::parse_double_list(*v, ':', where, line);
        fail(errc::parse_error, where + ":" + std::to_string(line) + ": estimator needs grid=h1:h2:...");
    };

    if (kind == "ds") {
        DsEstimatorSpec s;
        if (auto v = get_num("h")) s.h = *v;
        else fail(errc::parse_error, where + ":" + std::to_string(line) + ": ds estimator needs h=");
        if (auto v = get_num("r")) s.r = *v;
        return s;
    }
    if (kind == "kernel") {
        KernelEstimatorSpec s;
        if (auto v = get_num("h")) s.h = *v;
        else fail(errc::parse_error, where + ":" + std::to_string(line) + ": kernel estimator needs h=");
        if (auto v = get_num("r")) s.r = *v;
        s.kernel = get_kernel();
        return s;
    }
    if (kind == "lepski") {
        LepskiEstimatorSpec s;
        s.grid = get_grid();
        if (auto v = get_num("at")) s.at_factor = *v;
        if (auto v = get_num("r")) s.r = *v;
        s.kernel = get_kernel();
        return s;
    }
    if (kind == "cv") {
        CvEstimatorSpec s;
        s.grid = get_grid();
        if (auto v = get("loss")) {
            if (*v == "mse") s.cfg.loss = CvLoss::mse;
            else if (*v == "nearest") s.cfg.loss = CvLoss::nearest;
            else fail(errc::parse_error, where + ":" + std::to_string(line) + ": unknown loss '" + *v + "'");
        }
        if (auto v = get_num("tau")) s.cfg.tau = *v;
        if (auto v = get_num("nmin")) s.cfg.n_min = static_cast<int>(*v);
        if (auto v = get_num("folds")) s.cfg.folds = static_cast<int>(*v);
        if (auto v = get_num("r")) s.cfg.r = *v;
        s.kernel = get_kernel();
        return s;
    }
    fail(errc::parse_error,
         where + ":" + std::to_string(line) + ": unknown estimator kind '" + kind + "'");
}

inline ThetaLaw parse_theta_law(std::string_view text, const std::string& where, int line) {
    const std::string_view body = detail::trim(text);
    if (body.starts_with("uniform(") && body.ends_with(")")) {
        const auto parts =
            detail::parse_double_list(body.substr(8, body.size() - 9), ',', where, line);
        if (parts.size() != 2 || !(parts[0] < parts[1]))
            fail(errc::parse_error, where + ":" + std::to_string(line) + ": expected uniform(lo, hi)");
        return ThetaLaw::uniform(parts[0], parts[1]);
    }
    return ThetaLaw::fixed(detail::parse_double_strict(body, where, line));
}

inline ExperimentConfig parse_experiment_config(std::istream& in, const std::string& where) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (const std::size_t hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        const std::size_t eq = view.find('=');
        if (eq == std::string_view::npos)
            fail(errc::parse_error, where + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key{detail::trim(view.substr(0, eq))};
        const std::string_view value = detail::trim(view.substr(eq + 1));

        if (key == "scenario") cfg.scenario = std::string(value);
        else if (key == "T") cfg.T_list = detail::parse_double_list(value, ',', where, lineno);
        else if (key == "replicates")
            cfg.replicates = static_cast<int>(detail::parse_double_strict(value, where, lineno));
        else if (key == "theta") cfg.theta_law = parse_theta_law(value, where, lineno);
        else if (key == "seed")
            cfg.master_seed = static_cast<std::uint64_t>(detail::parse_double_strict(value, where, lineno));
        else if (key == "threads")
            cfg.threads = static_cast<int>(detail::parse_double_strict(value, where, lineno));
        else if (key == "estimator") cfg.estimators.push_back(parse_estimator_spec(value, where, lineno));
        else
            fail(errc::parse_error, where + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::parse_error, "cannot open '" + path + "'");
    return parse_experiment_config(in, path);
}

inline std::string rmse_table_csv(const RmseTable& table) {
    std::string out = "scenario,estimator,params,T,replicates,rmse,mean_abs_error,failures\n";
    for (const RmseRow& row : table.rows) {
        out += row.scenario;
        out += ',';
        out += row.estimator;
        out += ',';
        out += row.params;
        out += ',';
        out += format_double(row.T);
        out += ',';
        out += std::to_string(row.replicates);
        out += ',';
        out += format_double(row.rmse);
        out += ',';
        out += format_double(row.mean_abs_error);
        out += ',';
        out += std::to_string(row.failures);
        out += '\n';
    }
    return out;
}

// two-column CSV for curve data (DS curves, CPCF curves, CV scores)
inline std::string curve_csv(std::string_view x_name, std::string_view y_name,
                             const std::vector<double>& xs, const std::vector<double>& ys) {
    std::string out;
    out += x_name;
    out += ',';
    out += y_name;
    out += '\n';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += format_double(xs[i]);
        out += ',';
        out += format_double(ys[i]);
        out += '\n';
    }
    return out;
}

} // namespace leadlag
