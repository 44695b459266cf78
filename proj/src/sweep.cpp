#include "kennedy/sweep.hpp"

#include "kennedy/receiver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

namespace kennedy {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::pair<Enum, std::string_view> (&table)[N])
{
    for (const auto& [value, name] : table) {
        if (name == s) {
            return value;
        }
    }
    return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view name_of(Enum e, const std::pair<Enum, std::string_view> (&table)[N])
{
    for (const auto& [value, name] : table) {
        if (value == e) {
            return name;
        }
    }
    return "?";
}

constexpr std::pair<Spacing, std::string_view> spacing_names[] = {
    {Spacing::linear, "lin"},
    {Spacing::logarithmic, "log"},
};

constexpr std::pair<ReceiverId, std::string_view> receiver_names[] = {
    {ReceiverId::gk_opt, "gk-opt"},
    {ReceiverId::kennedy_exact, "kennedy-exact"},
    {ReceiverId::homodyne, "homodyne"},
    {ReceiverId::dolinar, "dolinar"},
    {ReceiverId::holevo, "holevo"},
};

constexpr std::pair<Objective, std::string_view> objective_names[] = {
    {Objective::capacity, "capacity"},
    {Objective::perror, "perror"},
};

constexpr std::pair<OutputFormat, std::string_view> format_names[] = {
    {OutputFormat::csv, "csv"},
    {OutputFormat::json, "json"},
};

constexpr std::pair<FigureName, std::string_view> figure_names[] = {
    {FigureName::capacity, "fig-capacity"},
    {FigureName::perror, "fig-perror"},
    {FigureName::beta, "fig-beta"},
};

SweepRow base_row(double n_bar, ReceiverId receiver, Objective objective)
{
    SweepRow row;
    row.n_bar = n_bar;
    row.receiver = std::string(to_string(receiver));
    row.objective = std::string(to_string(objective));
    return row;
}

void fill_from(SweepRow& row, const OptimResult& r)
{
    row.beta_opt = r.arg_beta;
    row.p_opt = r.arg_p;
    row.value = r.value;
    row.converged = r.converged;
}

} // namespace

std::string_view to_string(Spacing s) { return name_of(s, spacing_names); }
std::string_view to_string(ReceiverId r) { return name_of(r, receiver_names); }
std::string_view to_string(Objective o) { return name_of(o, objective_names); }
std::string_view to_string(OutputFormat f) { return name_of(f, format_names); }

std::optional<Spacing> parse_spacing(std::string_view s) { return lookup(s, spacing_names); }
std::optional<ReceiverId> parse_receiver(std::string_view s) { return lookup(s, receiver_names); }
std::optional<Objective> parse_objective(std::string_view s) { return lookup(s, objective_names); }
std::optional<OutputFormat> parse_format(std::string_view s) { return lookup(s, format_names); }
std::optional<FigureName> parse_figure(std::string_view s) { return lookup(s, figure_names); }

void SweepSpec::validate() const
{
    if (n_values.empty()) {
        if (!std::isfinite(n_min) || !std::isfinite(n_max) || n_min < 0.0) {
            throw ConfigError("n-min and n-max must be finite and non-negative");
        }
        if (!(n_min < n_max)) {
            throw ConfigError("n-min must be smaller than n-max");
        }
        if (points < 2) {
            throw ConfigError("points must be at least 2");
        }
        if (spacing == Spacing::logarithmic && !(n_min > 0.0)) {
            throw ConfigError("logarithmic spacing needs n-min > 0");
        }
    } else {
        for (double n : n_values) {
            if (!std::isfinite(n) || n < 0.0) {
                throw ConfigError("photon numbers must be finite and non-negative");
            }
        }
    }
    if (receivers.empty()) {
        throw ConfigError("at least one receiver is required");
    }
    if (objectives.empty()) {
        throw ConfigError("at least one objective is required");
    }
    if (jobs == 0) {
        throw ConfigError("jobs must be at least 1");
    }
}

std::vector<double> SweepSpec::grid() const
{
    if (!n_values.empty()) {
        return n_values;
    }
    std::vector<double> out(static_cast<std::size_t>(points));
    const double last = points - 1;
    for (int i = 0; i < points; ++i) {
        if (i == 0) {
            out[i] = n_min;
        } else if (i == points - 1) {
            out[i] = n_max;
        } else if (spacing == Spacing::linear) {
            out[i] = n_min + (n_max - n_min) * (i / last);
        } else {
            const double lo = std::log(n_min);
            const double hi = std::log(n_max);
            out[i] = std::exp(lo + (hi - lo) * (i / last));
        }
    }
    return out;
}

bool row_less(const SweepRow& a, const SweepRow& b)
{
    return std::tie(a.n_bar, a.receiver, a.objective) < std::tie(b.n_bar, b.receiver, b.objective);
}

std::optional<SweepRow> evaluate_cell(double n_bar, ReceiverId receiver, Objective objective,
                                      const OptimizerConfig& config)
{
    const ModeEnergy energy(n_bar);
    const Prior equal = Prior::uniform();
    SweepRow row = base_row(n_bar, receiver, objective);

    if (objective == Objective::capacity) {
        switch (receiver) {
        case ReceiverId::gk_opt:
            fill_from(row, capacity_gk(energy, config));
            break;
        case ReceiverId::kennedy_exact:
            fill_from(row, capacity_fixed_beta(energy, Displacement(0.0), config));
            break;
        case ReceiverId::homodyne:
            row.p_opt = 0.5;
            row.value = homodyne_capacity(energy);
            break;
        case ReceiverId::dolinar:
            row.p_opt = 0.5;
            row.value = c1_capacity(energy);
            break;
        case ReceiverId::holevo:
            row.p_opt = 0.5;
            row.value = holevo_capacity(energy);
            break;
        }
        return row;
    }

    switch (receiver) {
    case ReceiverId::gk_opt:
        fill_from(row, min_error_beta(energy, equal, config));
        break;
    case ReceiverId::kennedy_exact:
        row.beta_opt = 0.0;
        row.p_opt = 0.5;
        row.value = gk_error(energy, Displacement(0.0), equal);
        break;
    case ReceiverId::homodyne:
        row.p_opt = 0.5;
        row.value = homodyne_error(energy);
        break;
    case ReceiverId::dolinar:
        row.p_opt = 0.5;
        row.value = helstrom_error(energy, equal);
        break;
    case ReceiverId::holevo:
        return std::nullopt;
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const OptimizerConfig& config)
{
    spec.validate();

    struct Cell {
        double n_bar;
        ReceiverId receiver;
        Objective objective;
    };
    std::vector<Cell> cells;
    for (double n : spec.grid()) {
        for (ReceiverId r : spec.receivers) {
            for (Objective o : spec.objectives) {
                cells.push_back({n, r, o});
            }
        }
    }

    // Each worker writes only its own slots, so no locking is needed.
    std::vector<std::optional<SweepRow>> results(cells.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& c = cells[i];
            try {
                results[i] = evaluate_cell(c.n_bar, c.receiver, c.objective, config);
            } catch (const std::exception&) {
                SweepRow failed = base_row(c.n_bar, c.receiver, c.objective);
                failed.value = std::numeric_limits<double>::quiet_NaN();
                failed.converged = false;
                results[i] = failed;
            }
        }
    };

    const unsigned workers = std::min<std::size_t>(spec.jobs, std::max<std::size_t>(cells.size(), 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    std::vector<SweepRow> rows;
    rows.reserve(results.size());
    for (auto& r : results) {
        if (r) {
            rows.push_back(std::move(*r));
        }
    }
    std::stable_sort(rows.begin(), rows.end(), row_less);
    // Duplicate grid points would otherwise produce duplicate rows.
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

SweepSpec figure_spec(FigureName name, const std::filesystem::path& out, OutputFormat format,
                      unsigned jobs)
{
    SweepSpec spec;
    spec.n_min = 1e-3;
    spec.n_max = 10.0;
    spec.points = 50;
    spec.spacing = Spacing::logarithmic;
    spec.format = format;
    spec.output_path = out;
    spec.jobs = jobs;
    switch (name) {
    case FigureName::capacity:
        spec.receivers = {ReceiverId::gk_opt, ReceiverId::kennedy_exact, ReceiverId::homodyne,
                          ReceiverId::dolinar, ReceiverId::holevo};
        spec.objectives = {Objective::capacity};
        break;
    case FigureName::perror:
        spec.receivers = {ReceiverId::dolinar, ReceiverId::gk_opt, ReceiverId::kennedy_exact,
                          ReceiverId::homodyne};
        spec.objectives = {Objective::perror};
        break;
    case FigureName::beta:
        spec.receivers = {ReceiverId::gk_opt};
        spec.objectives = {Objective::capacity, Objective::perror};
        break;
    }
    return spec;
}

std::vector<SweepRow> figure_command(FigureName name, const std::filesystem::path& out,
                                     OutputFormat format, unsigned jobs)
{
    const SweepSpec spec = figure_spec(name, out, format, jobs);
    std::vector<SweepRow> rows = run_sweep(spec);
    emit(rows, spec.format, spec.output_path);
    return rows;
}

} // namespace kennedy
