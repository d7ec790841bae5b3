#include "critical_hawkes/csv_io.hpp"

#include <array>
#include <charconv>
#include <fstream>

namespace critical_hawkes {

namespace {

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw CsvWriteError(path.string() + ": cannot open for writing");
    }
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) {
        throw CsvWriteError(path.string() + ": write failed");
    }
}

void append_row(std::string& body, double t, const char* stat, double value, double stderr_) {
    body += format_numeric(t);
    body += ',';
    body += stat;
    body += ',';
    body += format_numeric(value);
    body += ',';
    body += format_numeric(stderr_);
    body += '\n';
}

void append_series(std::string& body, const std::vector<double>& grid, const char* stat,
                   const std::vector<double>& values, const std::vector<double>* errors) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
        append_row(body, grid[k], stat, values[k], errors ? (*errors)[k] : 0.0);
    }
}

void append_coordinate(std::string& body, const std::vector<double>& grid, const char* name,
                       const SeriesStats& series) {
    const std::string prefix{name};
    append_series(body, grid, (prefix + "_mean").c_str(), series.mean, &series.stderr_);
    append_series(body, grid, (prefix + "_variance").c_str(), series.variance, nullptr);
    append_series(body, grid, (prefix + "_q05").c_str(), series.q05, nullptr);
    append_series(body, grid, (prefix + "_q25").c_str(), series.q25, nullptr);
    append_series(body, grid, (prefix + "_q50").c_str(), series.q50, nullptr);
    append_series(body, grid, (prefix + "_q75").c_str(), series.q75, nullptr);
    append_series(body, grid, (prefix + "_q95").c_str(), series.q95, nullptr);
}

}  // namespace

std::string format_numeric(double x) {
    std::array<char, 64> buffer{};
    const auto [ptr, ec] =
        std::to_chars(buffer.data(), buffer.data() + buffer.size(), x,
                      std::chars_format::general, 17);
    if (ec != std::errc{}) {
        throw CsvWriteError("numeric formatting failed");
    }
    return std::string(buffer.data(), ptr);
}

void write_path_csv(const std::filesystem::path& path, const MacroPath& macro) {
    std::string body = "t,pi,y,z\n";
    for (std::size_t k = 0; k < macro.grid.size(); ++k) {
        body += format_numeric(macro.grid[k]);
        body += ',';
        body += format_numeric(macro.pi[k]);
        body += ',';
        body += format_numeric(macro.y[k]);
        body += ',';
        body += format_numeric(macro.z[k]);
        body += '\n';
    }
    write_text(path, body);
}

void write_ensemble_csv(const std::filesystem::path& path, const EnsembleStats& stats) {
    std::string body = "t,stat,value,stderr\n";
    append_coordinate(body, stats.grid, "pi", stats.pi);
    append_coordinate(body, stats.grid, "y", stats.y);
    append_coordinate(body, stats.grid, "z", stats.z);
    for (std::size_t k = 0; k + 1 < stats.grid.size(); ++k) {
        append_row(body, stats.grid[k + 1], "increment_correlation",
                   stats.increment_correlation[k], 0.0);
    }
    write_text(path, body);
}

}  // namespace critical_hawkes
