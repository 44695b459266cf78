#include "kennedy/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <system_error>

namespace kennedy {

namespace {

constexpr std::string_view csv_header = "n_bar,receiver,objective,beta_opt,p_opt,value,converged";

// Shortest representation that round-trips (never more than 17 significant
// digits).
std::string format_double(double v)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        throw IoError("cannot format floating-point value");
    }
    return std::string(buf, end);
}

double parse_double(std::string_view field, std::size_t line)
{
    double v = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || end != field.data() + field.size()) {
        throw IoError("line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
    }
    return v;
}

std::optional<double> parse_optional(std::string_view field, std::size_t line)
{
    if (field.empty()) {
        return std::nullopt;
    }
    return parse_double(field, line);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

nlohmann::ordered_json row_object(const SweepRow& row)
{
    nlohmann::ordered_json obj;
    obj["n_bar"] = row.n_bar;
    obj["receiver"] = row.receiver;
    obj["objective"] = row.objective;
    obj["beta_opt"] = row.beta_opt ? nlohmann::ordered_json(*row.beta_opt) : nullptr;
    obj["p_opt"] = row.p_opt ? nlohmann::ordered_json(*row.p_opt) : nullptr;
    obj["value"] = row.value;
    obj["converged"] = row.converged;
    return obj;
}

std::optional<double> optional_number(const nlohmann::json& j)
{
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<double>();
}

} // namespace

std::string to_csv(const std::vector<SweepRow>& rows)
{
    std::string out(csv_header);
    out += '\n';
    for (const SweepRow& r : rows) {
        out += format_double(r.n_bar);
        out += ',';
        out += r.receiver;
        out += ',';
        out += r.objective;
        out += ',';
        if (r.beta_opt) {
            out += format_double(*r.beta_opt);
        }
        out += ',';
        if (r.p_opt) {
            out += format_double(*r.p_opt);
        }
        out += ',';
        out += format_double(r.value);
        out += ',';
        out += r.converged ? "true" : "false";
        out += '\n';
    }
    return out;
}

std::vector<SweepRow> parse_csv(std::string_view text)
{
    std::vector<std::string_view> lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    if (lines.empty() || lines.front() != csv_header) {
        throw IoError("missing or unexpected CSV header");
    }
    std::vector<SweepRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(lines[i], ',');
        if (fields.size() != 7) {
            throw IoError("line " + std::to_string(i + 1) + ": expected 7 fields");
        }
        SweepRow row;
        row.n_bar = parse_double(fields[0], i + 1);
        row.receiver = std::string(fields[1]);
        row.objective = std::string(fields[2]);
        row.beta_opt = parse_optional(fields[3], i + 1);
        row.p_opt = parse_optional(fields[4], i + 1);
        row.value = parse_double(fields[5], i + 1);
        if (fields[6] == "true") {
            row.converged = true;
        } else if (fields[6] == "false") {
            row.converged = false;
        } else {
            throw IoError("line " + std::to_string(i + 1) + ": converged must be true or false");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string row_to_json(const SweepRow& row)
{
    return row_object(row).dump(2) + "\n";
}

std::string to_json(const std::vector<SweepRow>& rows)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const SweepRow& r : rows) {
        arr.push_back(row_object(r));
    }
    return arr.dump(2) + "\n";
}

std::vector<SweepRow> parse_json(std::string_view text)
{
    std::vector<SweepRow> rows;
    try {
        const auto arr = nlohmann::json::parse(text);
        for (const auto& obj : arr) {
            SweepRow row;
            row.n_bar = obj.at("n_bar").get<double>();
            row.receiver = obj.at("receiver").get<std::string>();
            row.objective = obj.at("objective").get<std::string>();
            row.beta_opt = optional_number(obj.at("beta_opt"));
            row.p_opt = optional_number(obj.at("p_opt"));
            row.value = obj.at("value").get<double>();
            row.converged = obj.at("converged").get<bool>();
            rows.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed JSON dataset: ") + e.what());
    }
    return rows;
}

void emit(std::vector<SweepRow> rows, OutputFormat format, const std::filesystem::path& path)
{
    std::stable_sort(rows.begin(), rows.end(), row_less);
    const std::string body = format == OutputFormat::csv ? to_csv(rows) : to_json(rows);

    std::filesystem::path partial = path;
    partial += ".partial";
    {
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + partial.string() + " for writing");
        }
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(partial, ignored);
            throw IoError("write to " + partial.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(partial, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(partial, ignored);
        throw IoError("cannot move dataset into place at " + path.string() + ": " + ec.message());
    }
}

} // namespace kennedy
