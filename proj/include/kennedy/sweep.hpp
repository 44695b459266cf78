#pragma once

#include "kennedy/optimize.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Photon-number sweeps over receivers and objectives, and the flat-file
// datasets they produce.

namespace kennedy {

/// Invalid run configuration (CLI exit status 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure to read or write a dataset (CLI exit status 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Spacing { linear, logarithmic };

/// `holevo` is a capacity bound rather than a receiver; it only produces
/// capacity rows. `dolinar` reports C1 for capacity and the Helstrom error for
/// perror.
enum class ReceiverId { gk_opt, kennedy_exact, homodyne, dolinar, holevo };

enum class Objective { capacity, perror };

enum class OutputFormat { csv, json };

std::string_view to_string(Spacing s);
std::string_view to_string(ReceiverId r);
std::string_view to_string(Objective o);
std::string_view to_string(OutputFormat f);

std::optional<Spacing> parse_spacing(std::string_view s);
std::optional<ReceiverId> parse_receiver(std::string_view s);
std::optional<Objective> parse_objective(std::string_view s);
std::optional<OutputFormat> parse_format(std::string_view s);

struct SweepSpec {
    double n_min = 0.0;
    double n_max = 0.0;
    int points = 0;
    Spacing spacing = Spacing::logarithmic;
    /// When non-empty, used verbatim instead of n_min/n_max/points/spacing.
    std::vector<double> n_values;
    std::vector<ReceiverId> receivers;
    std::vector<Objective> objectives;
    OutputFormat format = OutputFormat::csv;
    std::filesystem::path output_path;
    unsigned jobs = 1;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
    std::vector<double> grid() const;
};

struct SweepRow {
    double n_bar = 0.0;
    std::string receiver;
    std::string objective;
    std::optional<double> beta_opt;
    std::optional<double> p_opt;
    double value = 0.0;
    bool converged = true;

    bool operator==(const SweepRow&) const = default;
};

/// Ordering used for every emitted dataset: (n_bar, receiver, objective).
bool row_less(const SweepRow& a, const SweepRow& b);

/// Evaluates one (N, receiver, objective) cell. Returns nothing for cells
/// that have no meaning (the Holevo bound has no error probability).
std::optional<SweepRow> evaluate_cell(double n_bar, ReceiverId receiver, Objective objective,
                                      const OptimizerConfig& config = {});

/// Evaluates every cell of the spec on `spec.jobs` worker threads and returns
/// the rows sorted by row_less. Output does not depend on the worker count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const OptimizerConfig& config = {});

std::string to_csv(const std::vector<SweepRow>& rows);
std::string to_json(const std::vector<SweepRow>& rows);
std::string row_to_json(const SweepRow& row);

/// Parses a dataset produced by to_csv. Throws IoError on malformed input.
std::vector<SweepRow> parse_csv(std::string_view text);
std::vector<SweepRow> parse_json(std::string_view text);

/// Sorts the rows and writes them atomically: either the complete file
/// appears at `path` or nothing does. Throws IoError.
void emit(std::vector<SweepRow> rows, OutputFormat format, const std::filesystem::path& path);

enum class FigureName { capacity, perror, beta };

std::optional<FigureName> parse_figure(std::string_view s);

/// Preset sweep for one of the published figures.
SweepSpec figure_spec(FigureName name, const std::filesystem::path& out,
                      OutputFormat format = OutputFormat::csv, unsigned jobs = 1);

/// Runs the preset and emits it; returns the rows written.
std::vector<SweepRow> figure_command(FigureName name, const std::filesystem::path& out,
                                     OutputFormat format = OutputFormat::csv,
                                     unsigned jobs = 1);

} // namespace kennedy
