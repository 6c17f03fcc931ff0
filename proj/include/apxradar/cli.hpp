#pragma once

// Command-line front-end: a key=value run-configuration file, six
// subcommands orchestrating the other modules, and CSV/JSON artifacts
// written to stdout or to --out (relative paths resolve against the
// configured output directory, falling back to $APXRADAR_OUTDIR).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "apxradar/common.hpp"
#include "apxradar/dse.hpp"
#include "apxradar/errstat.hpp"
#include "apxradar/fxp.hpp"
#include "apxradar/radar.hpp"

namespace apxradar::cli {

inline constexpr const char* kOutDirEnvVar = "APXRADAR_OUTDIR";

namespace detail {

[[nodiscard]] inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[nodiscard]] inline double config_double(const std::string& v, const std::string& key,
                                          int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParameterError("config line " + std::to_string(line) + ": key '" + key +
                             "': bad number '" + v + "'");
    }
}

[[nodiscard]] inline long long config_int(const std::string& v, const std::string& key,
                                          int line) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParameterError("config line " + std::to_string(line) + ": key '" + key +
                             "': bad integer '" + v + "'");
    }
}

[[nodiscard]] inline radar::EstimatorMode parse_estimator_mode(const std::string& s) {
    if (s == "zeropad_average") return radar::EstimatorMode::zeropad_average;
    if (s == "flattened") return radar::EstimatorMode::flattened;
    throw ParameterError("estimator mode must be zeropad_average or flattened, got '" + s + "'");
}

[[nodiscard]] inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

}  // namespace detail

struct RunConfig {
    radar::RadarConfig radar;
    radar::TargetModel target;
    std::vector<std::string> pair_specs{"acc+acc"};
    dse::SnrGrid snr_grid;
    int runs = 100;
    std::uint64_t seed = 1;
    std::string cost_table_path;
    std::string output_dir;

    [[nodiscard]] std::vector<fxp::OperatorPair> pairs() const {
        std::vector<fxp::OperatorPair> out;
        out.reserve(pair_specs.size());
        for (const auto& s : pair_specs) out.push_back(fxp::parse_operator_pair(s));
        return out;
    }

    void validate() const {
        radar.validate();
        snr_grid.validate();
        if (runs < 1) throw ParameterError("runs must be >= 1");
        if (pair_specs.empty()) throw ParameterError("at least one operator pair is required");
        (void)pairs();
    }
};

namespace detail {

inline void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value,
                             int line) {
    if (key == "carrier_hz") cfg.radar.carrier_hz = config_double(value, key, line);
    else if (key == "n_subcarriers")
        cfg.radar.n_subcarriers = static_cast<int>(config_int(value, key, line));
    else if (key == "n_symbols")
        cfg.radar.n_symbols = static_cast<int>(config_int(value, key, line));
    else if (key == "subcarrier_spacing_hz")
        cfg.radar.subcarrier_spacing_hz = config_double(value, key, line);
    else if (key == "cp_s") cfg.radar.cp_s = config_double(value, key, line);
    else if (key == "total_symbol_s") cfg.radar.total_symbol_s = config_double(value, key, line);
    else if (key == "zc_root") cfg.radar.zc_root = static_cast<int>(config_int(value, key, line));
    else if (key == "n_ifft") cfg.radar.n_ifft = static_cast<int>(config_int(value, key, line));
    else if (key == "estimator_mode") {
        try {
            cfg.radar.estimator_mode = parse_estimator_mode(value);
        } catch (const Error& e) {
            throw ParameterError("config line " + std::to_string(line) + ": key '" + key +
                                 "': " + e.what());
        }
    } else if (key == "twiddle_sign")
        cfg.radar.twiddle_sign = static_cast<int>(config_int(value, key, line));
    else if (key == "target_range_m") cfg.target.range_m = config_double(value, key, line);
    else if (key == "target_velocity_mps")
        cfg.target.velocity_mps = config_double(value, key, line);
    else if (key == "target_amplitude") cfg.target.amplitude = config_double(value, key, line);
    else if (key == "pairs") {
        const auto specs = split_list(value);
        if (specs.empty())
            throw ParameterError("config line " + std::to_string(line) +
                                 ": key 'pairs': empty list");
        for (const auto& s : specs) {
            try {
                (void)fxp::parse_operator_pair(s);
            } catch (const Error& e) {
                throw ParameterError("config line " + std::to_string(line) + ": key 'pairs': " +
                                     e.what());
            }
        }
        cfg.pair_specs = specs;
    } else if (key == "snr_grid") {
        std::string v = trim(value);
        if (v.size() < 2 || v.front() != '{' || v.back() != '}')
            throw ParameterError("config line " + std::to_string(line) +
                                 ": key 'snr_grid': expected {start, stop, step}");
        const auto parts = split_list(v.substr(1, v.size() - 2));
        if (parts.size() != 3)
            throw ParameterError("config line " + std::to_string(line) +
                                 ": key 'snr_grid': expected 3 values");
        cfg.snr_grid.start_db = config_double(parts[0], key, line);
        cfg.snr_grid.stop_db = config_double(parts[1], key, line);
        cfg.snr_grid.step_db = config_double(parts[2], key, line);
    } else if (key == "runs") cfg.runs = static_cast<int>(config_int(value, key, line));
    else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(config_int(value, key, line));
    else if (key == "cost_table") cfg.cost_table_path = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else
        throw ParameterError("config line " + std::to_string(line) + ": unknown key '" + key +
                             "'");
}

}  // namespace detail

/// Parse the key=value run configuration. Blank lines and lines starting
/// with '#' are ignored; unknown keys are rejected; missing keys keep the
/// built-in defaults.
[[nodiscard]] inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config line " + std::to_string(line_no) +
                                 ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ParameterError("config line " + std::to_string(line_no) + ": empty key");
        detail::apply_config_key(cfg, key, value, line_no);
    }
    cfg.validate();
    return cfg;
}

[[nodiscard]] inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace detail {

struct CliState {
    std::string config_path;
    std::string out_path;
    std::string pair_spec;
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 1;
    std::string mode;
    int twiddle_sign = 1;
    std::string pairs_csv;
    int runs = 100;
    double snr_start = -5.0, snr_stop = 10.0, snr_step = 1.0;
    std::string model_spec;
    std::string kind;
    int width = 16;
    std::string eval_mode;
    std::uint64_t samples = errstat::kDefaultSamples;
    std::string cost_path;
    std::string accuracy_path;
    double max_power = 0.0, max_area = 0.0, max_dev = 0.0;
    double snr_lo = 0.0, snr_hi = 0.0;
    std::string block = "estimator_input";
    std::vector<double> sigmas;
};

/// One CLI::App wired to a CliState; built identically for dispatch and for
/// reflection over the flag table.
struct AppModel {
    CliState st;
    CLI::App app{"Approximate-arithmetic OFDM radar range estimation artifact", "apxradar"};
    CLI::App* simulate = nullptr;
    CLI::App* profile = nullptr;
    CLI::App* sweep = nullptr;
    CLI::App* metrics = nullptr;
    CLI::App* pareto = nullptr;
    CLI::App* probe = nullptr;

    AppModel() {
        app.require_subcommand(1);

        auto add_config = [&](CLI::App* sub) {
            sub->add_option("--config", st.config_path, "run configuration file (key = value)");
        };
        auto add_out = [&](CLI::App* sub) {
            sub->add_option("--out", st.out_path,
                            "artifact file; omitted = stdout, relative paths resolve "
                            "against the output directory");
        };

        simulate = app.add_subcommand("simulate", "run one frame and report the range estimate "
                                                  "as JSON");
        add_config(simulate);
        simulate->add_option("--pair", st.pair_spec, "operator pair spec, e.g. acc+acc");
        simulate->add_option("--snr", st.snr_db, "channel SNR in dB ('inf' for noiseless)");
        simulate->add_option("--seed", st.seed, "base RNG seed");
        simulate->add_option("--mode", st.mode, "estimator mode: zeropad_average | flattened");
        simulate->add_option("--twiddle-sign", st.twiddle_sign, "twiddle imaginary sign: 1 | -1");
        add_out(simulate);

        profile = app.add_subcommand("profile", "emit the normalized range profile as CSV");
        add_config(profile);
        profile->add_option("--pair", st.pair_spec, "operator pair spec, e.g. acc+acc");
        profile->add_option("--snr", st.snr_db, "channel SNR in dB ('inf' for noiseless)");
        profile->add_option("--seed", st.seed, "base RNG seed");
        profile->add_option("--mode", st.mode, "estimator mode: zeropad_average | flattened");
        profile->add_option("--twiddle-sign", st.twiddle_sign, "twiddle imaginary sign: 1 | -1");
        add_out(profile);

        sweep = app.add_subcommand("sweep", "Monte Carlo accuracy sweep over pairs and SNR, "
                                            "CSV output");
        add_config(sweep);
        sweep->add_option("--pairs", st.pairs_csv, "comma-separated operator pair specs");
        sweep->add_option("--runs", st.runs, "Monte Carlo repetitions per (pair, SNR) cell");
        sweep->add_option("--seed", st.seed, "base RNG seed");
        sweep->add_option("--snr-start", st.snr_start, "grid start in dB");
        sweep->add_option("--snr-stop", st.snr_stop, "grid stop in dB");
        sweep->add_option("--snr-step", st.snr_step, "grid step in dB");
        add_out(sweep);

        metrics = app.add_subcommand("metrics", "error metrics of one operator model vs the "
                                                "exact one, CSV output");
        metrics->add_option("--model", st.model_spec,
                            "model spec, e.g. tra1, tmul6, fixture:add16se_3BD")
            ->required();
        metrics->add_option("--kind", st.kind, "adder | mult (required for ambiguous specs)");
        metrics->add_option("--width", st.width, "operand width: 4 | 8 | 16");
        metrics->add_option("--mode", st.eval_mode,
                            "exhaustive | sampled (default: exhaustive up to width 8)");
        metrics->add_option("--samples", st.samples, "sample count for sampled mode");
        metrics->add_option("--seed", st.seed, "RNG seed for sampled mode");
        add_out(metrics);

        pareto = app.add_subcommand("pareto", "join accuracy and cost tables, filter by "
                                              "constraints, flag the Pareto front, JSON output");
        pareto->add_option("--cost", st.cost_path, "cost table CSV")->required();
        pareto->add_option("--accuracy", st.accuracy_path,
                           "accuracy CSV in sweep format (default: cost path with 'costs' "
                           "replaced by 'accuracy')");
        pareto->add_option("--max-power", st.max_power, "keep points with power_mw strictly "
                                                        "below this");
        pareto->add_option("--max-area", st.max_area, "keep points with area_mm2 strictly "
                                                      "below this");
        pareto->add_option("--max-dev", st.max_dev, "keep points with mean deviation strictly "
                                                    "below this (m)");
        pareto->add_option("--snr-lo", st.snr_lo, "restrict deviation averaging to SNR >= this");
        pareto->add_option("--snr-hi", st.snr_hi, "restrict deviation averaging to SNR <= this");
        add_out(pareto);

        probe = app.add_subcommand("probe", "numerical resilience probe of the accurate "
                                            "pipeline, CSV output");
        add_config(probe);
        probe->add_option("--block", st.block,
                          "injection point: division_input | estimator_input");
        probe->add_option("--sigma", st.sigmas,
                          "disturbance std per component (repeatable; default 0 0.05 0.2 0.5)");
        probe->add_option("--runs", st.runs, "Monte Carlo repetitions per sigma");
        probe->add_option("--seed", st.seed, "base RNG seed");
        add_out(probe);
    }
};

[[nodiscard]] inline std::filesystem::path resolve_out_path(const std::string& out,
                                                            const std::string& output_dir) {
    std::filesystem::path p(out);
    if (p.is_absolute()) return p;
    std::string dir = output_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv(kOutDirEnvVar)) dir = env;
    }
    if (dir.empty()) return p;
    return std::filesystem::path(dir) / p;
}

inline void emit_artifact(const CliState& st, const std::string& output_dir,
                          const std::string& content, std::ostream& out) {
    if (st.out_path.empty()) {
        out << content;
        return;
    }
    const std::filesystem::path p = resolve_out_path(st.out_path, output_dir);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ParameterError("cannot write artifact: " + p.string());
    f << content;
}

[[nodiscard]] inline RunConfig load_config(const CliState& st) {
    return st.config_path.empty() ? RunConfig{} : parse_config(st.config_path);
}

[[nodiscard]] inline fxp::OperatorPair require_functional(const fxp::OperatorPair& pair) {
    if (!pair.functional())
        throw UnsupportedModelError("pair " + pair.name +
                                    " has no functional model; fixture entries carry "
                                    "published metrics only");
    return pair;
}

inline void run_simulate_or_profile(const CLI::App* sub, CliState& st, bool as_profile,
                                    std::ostream& out) {
    RunConfig cfg = load_config(st);
    if (sub->count("--mode")) cfg.radar.estimator_mode = parse_estimator_mode(st.mode);
    if (sub->count("--twiddle-sign")) cfg.radar.twiddle_sign = st.twiddle_sign;
    const std::string spec = sub->count("--pair") ? st.pair_spec : cfg.pair_specs.front();
    const fxp::OperatorPair pair = require_functional(fxp::parse_operator_pair(spec));
    const std::uint64_t seed = sub->count("--seed") ? st.seed : cfg.seed;
    const radar::PipelineResult res =
        radar::run_pipeline(pair, cfg.radar, cfg.target, st.snr_db, seed);
    if (as_profile) {
        std::string csv = "bin,range_m,power_norm,power_db\n";
        for (std::size_t b = 0; b < res.profile.power.size(); ++b) {
            const double pn = res.profile.power[b];
            const double db = pn > 0 ? std::max(10.0 * std::log10(pn), -120.0) : -120.0;
            csv += std::to_string(b);
            csv += ',';
            csv += format_double(static_cast<double>(b) * res.profile.bin_to_m);
            csv += ',';
            csv += format_double(pn);
            csv += ',';
            csv += format_double(db);
            csv += '\n';
        }
        emit_artifact(st, cfg.output_dir, csv, out);
        return;
    }
    nlohmann::ordered_json j;
    j["pair"] = pair.name;
    if (std::isfinite(st.snr_db)) j["snr_db"] = st.snr_db;
    else j["snr_db"] = "inf";
    j["seed"] = seed;
    j["estimator_mode"] = std::string(radar::estimator_mode_name(cfg.radar.estimator_mode));
    j["twiddle_sign"] = cfg.radar.twiddle_sign;
    j["range_m"] = res.estimate.range_m;
    j["peak_bin"] = res.estimate.peak_bin;
    j["peak_power_db"] = res.estimate.peak_power_db;
    j["bin_to_m"] = res.profile.bin_to_m;
    j["cp_exceeded"] = res.cp_exceeded;
    emit_artifact(st, cfg.output_dir, j.dump(2) + "\n", out);
}

inline void run_sweep(const CLI::App* sub, CliState& st, std::ostream& out) {
    RunConfig cfg = load_config(st);
    if (sub->count("--runs")) cfg.runs = st.runs;
    if (sub->count("--seed")) cfg.seed = st.seed;
    if (sub->count("--snr-start")) cfg.snr_grid.start_db = st.snr_start;
    if (sub->count("--snr-stop")) cfg.snr_grid.stop_db = st.snr_stop;
    if (sub->count("--snr-step")) cfg.snr_grid.step_db = st.snr_step;
    std::vector<fxp::OperatorPair> pairs;
    if (sub->count("--pairs")) {
        for (const auto& s : split_list(st.pairs_csv))
            pairs.push_back(fxp::parse_operator_pair(s));
        if (pairs.empty()) throw ParameterError("--pairs lists no pair specs");
    } else {
        pairs = cfg.pairs();
    }
    const auto rows = dse::sweep(cfg.radar, cfg.target, pairs, cfg.snr_grid, cfg.runs, cfg.seed);
    emit_artifact(st, cfg.output_dir, dse::sweep_rows_to_csv(rows), out);
}

enum class ModelKind { adder, mult };

[[nodiscard]] inline ModelKind infer_model_kind(const std::string& spec,
                                                const std::string& kind_flag) {
    if (!kind_flag.empty()) {
        if (kind_flag == "adder") return ModelKind::adder;
        if (kind_flag == "mult") return ModelKind::mult;
        throw ParameterError("--kind must be adder or mult, got '" + kind_flag + "'");
    }
    bool as_adder = true, as_mult = true;
    try {
        (void)fxp::parse_adder_model(spec);
    } catch (const Error&) {
        as_adder = false;
    }
    try {
        (void)fxp::parse_mult_model(spec);
    } catch (const Error&) {
        as_mult = false;
    }
    if (as_adder && !as_mult) return ModelKind::adder;
    if (as_mult && !as_adder) return ModelKind::mult;
    if (!as_adder) throw ParameterError("unknown model spec '" + spec + "'");
    if (spec.starts_with("fixture:")) {
        const std::string name = spec.substr(8);
        const bool pub_add = errstat::published_adder_metrics(name).has_value();
        const bool pub_mul = errstat::published_mult_metrics(name).has_value();
        if (pub_add && !pub_mul) return ModelKind::adder;
        if (pub_mul && !pub_add) return ModelKind::mult;
    }
    throw ParameterError("model '" + spec + "' is ambiguous; pass --kind adder|mult");
}

inline void run_metrics(const CLI::App* sub, CliState& st, std::ostream& out) {
    const ModelKind kind = infer_model_kind(st.model_spec, st.kind);
    errstat::EvalMode mode;
    if (sub->count("--mode")) {
        if (st.eval_mode == "exhaustive") mode = errstat::EvalMode::exhaustive;
        else if (st.eval_mode == "sampled") mode = errstat::EvalMode::sampled;
        else
            throw ParameterError("--mode must be exhaustive or sampled, got '" + st.eval_mode +
                                 "'");
    } else {
        mode = st.width <= 8 ? errstat::EvalMode::exhaustive : errstat::EvalMode::sampled;
    }
    const std::optional<std::uint64_t> seed =
        mode == errstat::EvalMode::sampled ? std::optional<std::uint64_t>(st.seed) : std::nullopt;
    errstat::ErrorMetrics m;
    std::string name;
    if (kind == ModelKind::adder) {
        const fxp::AdderModel model = fxp::parse_adder_model(st.model_spec);
        m = errstat::eval_adder_metrics(model, st.width, mode, seed, st.samples);
        name = model.spec_string();
    } else {
        const fxp::MultModel model = fxp::parse_mult_model(st.model_spec);
        m = errstat::eval_mult_metrics(model, st.width, mode, seed, st.samples);
        name = model.spec_string();
    }
    std::string csv = "name,width,mode,ep_pct,mae_pct,wce_pct,mre_pct,pairs\n";
    csv += name;
    csv += ',';
    csv += std::to_string(st.width);
    csv += ',';
    csv += std::string(errstat::mode_name(m.mode));
    csv += ',';
    csv += format_double(m.ep_pct);
    csv += ',';
    csv += format_double(m.mae_pct);
    csv += ',';
    csv += format_double(m.wce_pct);
    csv += ',';
    csv += format_double(m.mre_pct);
    csv += ',';
    csv += std::to_string(m.pairs_evaluated);
    csv += '\n';
    emit_artifact(st, "", csv, out);
}

inline void run_pareto(const CLI::App* sub, CliState& st, std::ostream& out, std::ostream& err) {
    const dse::CostTable costs = dse::load_cost_csv(st.cost_path);
    std::string acc_path = st.accuracy_path;
    if (acc_path.empty()) {
        acc_path = st.cost_path;
        const auto pos = acc_path.rfind("costs");
        if (pos == std::string::npos)
            throw ParameterError("cannot derive an accuracy table path from '" + st.cost_path +
                                 "'; pass --accuracy");
        acc_path.replace(pos, 5, "accuracy");
    }
    const std::vector<dse::AccuracyRow> rows = dse::load_sweep_csv(acc_path);
    std::optional<std::pair<double, double>> window;
    const bool lo_set = sub->count("--snr-lo") > 0;
    const bool hi_set = sub->count("--snr-hi") > 0;
    if (lo_set || hi_set)
        window = {{lo_set ? st.snr_lo : -std::numeric_limits<double>::infinity(),
                   hi_set ? st.snr_hi : std::numeric_limits<double>::infinity()}};
    const dse::JoinResult join = dse::join_costs(rows, costs, window);
    for (const auto& s : join.skipped)
        err << "note: pair " << s << " has no counterpart row; skipped\n";
    if (join.points.empty())
        throw DegenerateInputError("no design points after joining accuracy and cost tables");
    std::set<std::string> front_names;
    for (const auto& p : dse::pareto_front(join.points)) front_names.insert(p.pair_name);
    dse::Constraints c;
    if (sub->count("--max-power")) c.max_power_mw = st.max_power;
    if (sub->count("--max-area")) c.max_area_mm2 = st.max_area;
    if (sub->count("--max-dev")) c.max_dev_m = st.max_dev;
    const std::vector<dse::DesignPoint> selected =
        c.any_bound() ? dse::filter_constraints(join.points, c) : join.points;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : selected) {
        nlohmann::ordered_json pt;
        pt["pair"] = p.pair_name;
        pt["dev_m"] = p.mean_abs_dev_m;
        pt["area_mm2"] = p.area_mm2;
        pt["power_mw"] = p.power_mw;
        pt["pareto"] = front_names.contains(p.pair_name);
        pt["passes_constraints"] = true;
        arr.push_back(std::move(pt));
    }
    emit_artifact(st, "", arr.dump(2) + "\n", out);
}

inline void run_probe(const CLI::App* sub, CliState& st, std::ostream& out) {
    RunConfig cfg = load_config(st);
    if (sub->count("--runs")) cfg.runs = st.runs;
    if (sub->count("--seed")) cfg.seed = st.seed;
    const radar::ProbeBlock block = radar::parse_probe_block(st.block);
    const std::vector<double> sigmas =
        st.sigmas.empty() ? std::vector<double>{0.0, 0.05, 0.2, 0.5} : st.sigmas;
    std::string csv = "block,sigma,runs,mean_abs_error_m,max_abs_error_m\n";
    for (const double sigma : sigmas) {
        const radar::ProbeResult r =
            radar::resilience_probe(cfg.radar, cfg.target, block, sigma, cfg.runs, cfg.seed);
        csv += std::string(radar::probe_block_name(r.block));
        csv += ',';
        csv += format_double(r.sigma);
        csv += ',';
        csv += std::to_string(r.runs);
        csv += ',';
        csv += format_double(r.mean_abs_error_m);
        csv += ',';
        csv += format_double(r.max_abs_error_m);
        csv += '\n';
    }
    emit_artifact(st, cfg.output_dir, csv, out);
}

}  // namespace detail

/// Run one subcommand. `args` excludes the program name. Returns the process
/// exit code; failures print one machine-readable `error: <kind>: <message>`
/// line on `err`.
inline int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    detail::AppModel m;
    try {
        std::reverse(args.begin(), args.end());
        m.app.parse(args);
        if (m.simulate->parsed()) detail::run_simulate_or_profile(m.simulate, m.st, false, out);
        else if (m.profile->parsed()) detail::run_simulate_or_profile(m.profile, m.st, true, out);
        else if (m.sweep->parsed()) detail::run_sweep(m.sweep, m.st, out);
        else if (m.metrics->parsed()) detail::run_metrics(m.metrics, m.st, out);
        else if (m.pareto->parsed()) detail::run_pareto(m.pareto, m.st, out, err);
        else if (m.probe->parsed()) detail::run_probe(m.probe, m.st, out);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return m.app.exit(e, out, err);
        err << "error: cli: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << "\n";
        return 3;
    }
}

[[nodiscard]] inline std::vector<std::string> subcommand_names() {
    detail::AppModel m;
    std::vector<std::string> names;
    for (const CLI::App* sub : m.app.get_subcommands({})) names.push_back(sub->get_name());
    return names;
}

/// Long-form flag names of one subcommand, for help-coverage reflection.
[[nodiscard]] inline std::vector<std::string> subcommand_flags(const std::string& name) {
    detail::AppModel m;
    const CLI::App* sub = m.app.get_subcommand(name);
    std::vector<std::string> flags;
    for (const CLI::Option* opt : sub->get_options()) {
        for (const std::string& lname : opt->get_lnames()) flags.push_back("--" + lname);
    }
    return flags;
}

}  // namespace apxradar::cli
