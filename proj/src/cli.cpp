#include "kennedy/cli.hpp"

#include "kennedy/optimize.hpp"
#include "kennedy/receiver.hpp"
#include "kennedy/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace kennedy::cli {

namespace {

using nlohmann::ordered_json;

template <typename T, typename Parser>
T parse_or_throw(std::string_view text, Parser parse, std::string_view what)
{
    const auto v = parse(text);
    if (!v) {
        throw ConfigError("unknown " + std::string(what) + " '" + std::string(text) + "'");
    }
    return *v;
}

std::vector<std::string> string_list(const nlohmann::json& j, std::string_view key)
{
    std::vector<std::string> out;
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        std::size_t start = 0;
        while (start <= s.size()) {
            const std::size_t pos = s.find(',', start);
            const std::string item = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
            if (!item.empty()) {
                out.push_back(item);
            }
            if (pos == std::string::npos) {
                break;
            }
            start = pos + 1;
        }
    } else if (j.is_array()) {
        for (const auto& item : j) {
            out.push_back(item.get<std::string>());
        }
    } else {
        throw ConfigError("config key '" + std::string(key) + "' must be a string or array");
    }
    return out;
}

struct SweepFlags {
    double n_min = 0.0;
    double n_max = 0.0;
    int points = 0;
    std::string spacing;
    std::vector<std::string> receivers;
    std::vector<std::string> objectives;
    std::string format;
    std::string out;
    std::string config;
    unsigned jobs = 0;
};

unsigned default_jobs()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

void apply_config_file(const std::string& path, SweepSpec& spec, std::vector<std::string>& receivers,
                       std::vector<std::string>& objectives, bool& have_out)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed config file " + path + ": " + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config file must hold a JSON object");
    }
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "n_min") {
                spec.n_min = value.get<double>();
            } else if (key == "n_max") {
                spec.n_max = value.get<double>();
            } else if (key == "points") {
                spec.points = value.get<int>();
            } else if (key == "spacing") {
                spec.spacing = parse_or_throw<Spacing>(value.get<std::string>(), parse_spacing, "spacing");
            } else if (key == "n_values") {
                spec.n_values = value.get<std::vector<double>>();
            } else if (key == "receivers") {
                receivers = string_list(value, key);
            } else if (key == "objectives") {
                objectives = string_list(value, key);
            } else if (key == "format") {
                spec.format = parse_or_throw<OutputFormat>(value.get<std::string>(), parse_format, "format");
            } else if (key == "out") {
                spec.output_path = value.get<std::string>();
                have_out = true;
            } else if (key == "jobs") {
                spec.jobs = value.get<unsigned>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad value in config file: " + std::string(e.what()));
    }
}

int run_sweep_command(const SweepFlags& flags, const CLI::App& cmd, std::ostream& out)
{
    SweepSpec spec;
    spec.jobs = default_jobs();
    std::vector<std::string> receivers;
    std::vector<std::string> objectives;
    bool have_out = false;

    if (!flags.config.empty()) {
        apply_config_file(flags.config, spec, receivers, objectives, have_out);
    }
    // Flags override the file.
    if (cmd.count("--n-min") > 0) {
        spec.n_min = flags.n_min;
        spec.n_values.clear();
    }
    if (cmd.count("--n-max") > 0) {
        spec.n_max = flags.n_max;
        spec.n_values.clear();
    }
    if (cmd.count("--points") > 0) {
        spec.points = flags.points;
        spec.n_values.clear();
    }
    if (cmd.count("--spacing") > 0) {
        spec.spacing = parse_or_throw<Spacing>(flags.spacing, parse_spacing, "spacing");
    }
    if (cmd.count("--receivers") > 0) {
        receivers = flags.receivers;
    }
    if (cmd.count("--objectives") > 0) {
        objectives = flags.objectives;
    }
    if (cmd.count("--format") > 0) {
        spec.format = parse_or_throw<OutputFormat>(flags.format, parse_format, "format");
    }
    if (cmd.count("--out") > 0) {
        spec.output_path = flags.out;
        have_out = true;
    }
    if (cmd.count("--jobs") > 0) {
        spec.jobs = flags.jobs;
    }

    for (const auto& r : receivers) {
        spec.receivers.push_back(parse_or_throw<ReceiverId>(r, parse_receiver, "receiver"));
    }
    for (const auto& o : objectives) {
        spec.objectives.push_back(parse_or_throw<Objective>(o, parse_objective, "objective"));
    }
    if (!have_out || spec.output_path.empty()) {
        throw ConfigError("an output path is required (--out or \"out\" in the config file)");
    }
    spec.validate();

    const std::vector<SweepRow> rows = run_sweep(spec);
    emit(rows, spec.format, spec.output_path);

    std::size_t failed = 0;
    for (const auto& r : rows) {
        failed += r.converged ? 0 : 1;
    }
    out << "wrote " << rows.size() << " rows to " << spec.output_path.string() << "\n";
    return failed > 0 ? exit_not_converged : exit_ok;
}

int run_optimize_command(double n, const std::string& objective_name, const CLI::App& cmd,
                         double p, std::ostream& out)
{
    const Objective objective = parse_or_throw<Objective>(objective_name, parse_objective, "objective");
    if (!std::isfinite(n) || n < 0.0) {
        throw ConfigError("--n must be finite and non-negative");
    }
    const ModeEnergy energy(n);

    SweepRow row;
    row.n_bar = n;
    row.receiver = std::string(to_string(ReceiverId::gk_opt));
    row.objective = std::string(to_string(objective));
    OptimResult result;
    if (objective == Objective::capacity) {
        if (cmd.count("--p") > 0) {
            throw ConfigError("--p applies only to --objective perror");
        }
        result = capacity_gk(energy);
    } else {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("--p must lie in [0, 1]");
        }
        result = min_error_beta(energy, Prior(p));
    }
    row.beta_opt = result.arg_beta;
    row.p_opt = result.arg_p;
    row.value = result.value;
    row.converged = result.converged;
    out << row_to_json(row);
    return row.converged ? exit_ok : exit_not_converged;
}

int run_validate_command(double n, double beta, double p, std::uint64_t trials,
                         std::uint64_t seed, std::ostream& out)
{
    if (!std::isfinite(n) || n < 0.0) {
        throw ConfigError("--n must be finite and non-negative");
    }
    if (!std::isfinite(beta)) {
        throw ConfigError("--beta must be finite");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("--p must lie in [0, 1]");
    }
    if (trials == 0) {
        throw ConfigError("--trials must be positive");
    }
    const ModeEnergy energy(n);
    const Displacement disp(beta);
    const Prior prior(p);
    const BinaryChannel analytic = gk_transition(energy, disp);
    const ClickCounts counts = simulate_clicks(energy, disp, prior, trials, seed);

    ordered_json analytic_j = ordered_json::array();
    ordered_json empirical_j = ordered_json::array();
    ordered_json counts_j = ordered_json::array();
    ordered_json z_j = ordered_json::array();
    double max_z = 0.0;
    for (int x = 0; x < 2; ++x) {
        const auto sym = static_cast<Symbol>(x);
        const double sent = static_cast<double>(counts.symbol_total(sym));
        ordered_json a_row = ordered_json::array();
        ordered_json e_row = ordered_json::array();
        ordered_json c_row = ordered_json::array();
        ordered_json z_row = ordered_json::array();
        for (int y = 0; y < 2; ++y) {
            const double w = analytic.at(x, y);
            const double rate = counts.rate(sym, static_cast<Outcome>(y));
            const double sigma = sent > 0 ? std::sqrt(w * (1.0 - w) / sent) : 0.0;
            a_row.push_back(w);
            c_row.push_back(counts.counts[x][y]);
            if (sent > 0) {
                e_row.push_back(rate);
                double z = 0.0;
                if (sigma > 0.0) {
                    z = (rate - w) / sigma;
                } else if (rate != w) {
                    z = std::numeric_limits<double>::infinity();
                }
                max_z = std::max(max_z, std::abs(z));
                z_row.push_back(std::isfinite(z) ? ordered_json(z) : ordered_json("inf"));
            } else {
                e_row.push_back(nullptr);
                z_row.push_back(nullptr);
            }
        }
        analytic_j.push_back(a_row);
        empirical_j.push_back(e_row);
        counts_j.push_back(c_row);
        z_j.push_back(z_row);
    }

    ordered_json report;
    report["n_bar"] = n;
    report["beta"] = beta;
    report["p"] = p;
    report["trials"] = trials;
    report["seed"] = seed;
    report["inputs"] = {"+", "-"};
    report["outcomes"] = {"click", "no-click"};
    report["counts"] = counts_j;
    report["empirical"] = empirical_j;
    report["analytic"] = analytic_j;
    report["z_scores"] = z_j;
    report["max_abs_z"] = std::isfinite(max_z) ? ordered_json(max_z) : ordered_json("inf");
    report["within_5_sigma"] = max_z <= 5.0;
    out << report.dump(2) << "\n";
    return exit_ok;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Generalized Kennedy receiver: capacity vs. one-shot error optimization"};
    app.require_subcommand(1);

    SweepFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "Sweep photon numbers and write a dataset");
    sweep->add_option("--n-min", sweep_flags.n_min, "Smallest mean photon number");
    sweep->add_option("--n-max", sweep_flags.n_max, "Largest mean photon number");
    sweep->add_option("--points", sweep_flags.points, "Grid points (>= 2)");
    sweep->add_option("--spacing", sweep_flags.spacing, "lin or log");
    sweep->add_option("--receivers", sweep_flags.receivers,
                      "Comma list of gk-opt,kennedy-exact,homodyne,dolinar,holevo")
        ->delimiter(',');
    sweep->add_option("--objectives", sweep_flags.objectives, "Comma list of capacity,perror")
        ->delimiter(',');
    sweep->add_option("--format", sweep_flags.format, "csv or json");
    sweep->add_option("--out", sweep_flags.out, "Output path");
    sweep->add_option("--config", sweep_flags.config, "JSON config file; flags override it");
    sweep->add_option("--jobs", sweep_flags.jobs, "Worker threads");

    double opt_n = 0.0;
    std::string opt_objective;
    double opt_p = 0.5;
    auto* optimize = app.add_subcommand("optimize", "Optimize the GK receiver at one photon number");
    optimize->add_option("--n", opt_n, "Mean photon number")->required();
    optimize->add_option("--objective", opt_objective, "capacity or perror")->required();
    optimize->add_option("--p", opt_p, "Prior of |alpha> for perror (default 0.5)");

    std::string fig_name;
    std::string fig_out;
    std::string fig_format = "csv";
    unsigned fig_jobs = default_jobs();
    auto* figure = app.add_subcommand("figure", "Regenerate a preset figure dataset");
    figure->add_option("name", fig_name, "fig-capacity, fig-perror or fig-beta")->required();
    figure->add_option("--out", fig_out, "Output path")->required();
    figure->add_option("--format", fig_format, "csv or json");
    figure->add_option("--jobs", fig_jobs, "Worker threads");

    double val_n = 0.0;
    double val_beta = 0.0;
    double val_p = 0.5;
    std::uint64_t val_trials = 0;
    std::uint64_t val_seed = 0;
    auto* validate = app.add_subcommand("validate", "Monte Carlo check of the analytic channel");
    validate->add_option("--n", val_n, "Mean photon number")->required();
    validate->add_option("--beta", val_beta, "Displacement")->required();
    validate->add_option("--p", val_p, "Prior of |alpha>")->required();
    validate->add_option("--trials", val_trials, "Number of symbols")->required();
    validate->add_option("--seed", val_seed, "RNG seed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*sweep) {
            return run_sweep_command(sweep_flags, *sweep, out);
        }
        if (*optimize) {
            return run_optimize_command(opt_n, opt_objective, *optimize, opt_p, out);
        }
        if (*figure) {
            const FigureName name = parse_or_throw<FigureName>(fig_name, parse_figure, "figure");
            const OutputFormat format = parse_or_throw<OutputFormat>(fig_format, parse_format, "format");
            if (fig_jobs == 0) {
                throw ConfigError("--jobs must be at least 1");
            }
            const auto rows = figure_command(name, fig_out, format, fig_jobs);
            out << "wrote " << rows.size() << " rows to " << fig_out << "\n";
            for (const auto& r : rows) {
                if (!r.converged) {
                    return exit_not_converged;
                }
            }
            return exit_ok;
        }
        if (*validate) {
            return run_validate_command(val_n, val_beta, val_p, val_trials, val_seed, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }
    return exit_config;
}

} // namespace kennedy::cli
