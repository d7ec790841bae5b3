#include "critical_hawkes/csv_io.hpp"

#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ch = critical_hawkes;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

class TempDir {
public:
    TempDir()
        : path_(std::filesystem::temp_directory_path() /
                ("critical_hawkes_csv_test_" + std::to_string(getpid()))) {
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    [[nodiscard]] std::filesystem::path operator/(const char* name) const {
        return path_ / name;
    }

private:
    std::filesystem::path path_;
};

TEST(FormatNumeric, RoundTripsDoublesExactly) {
    for (const double x : {0.0, 1.0, -1.0, 1.0 / 3.0, 0.1, 2.0 / 512.0, -0.4472135954999579,
                           1e-300, 1e300, 123456.789}) {
        const std::string text = ch::format_numeric(x);
        EXPECT_EQ(std::strtod(text.c_str(), nullptr), x) << text;
    }
    EXPECT_EQ(ch::format_numeric(0.0), "0");
    EXPECT_EQ(ch::format_numeric(1.0), "1");
    EXPECT_EQ(ch::format_numeric(0.5), "0.5");
}

TEST(WritePathCsv, EmitsTheExactHeaderAndOneRowPerGridTime) {
    ch::MacroPath macro;
    macro.grid = {0.0, 0.5, 1.0};
    macro.pi = {0.0, -0.25, 1.0 / 3.0};
    macro.y = {2.0, 1.5, 1.25};
    macro.z = {0.0, 0.125, -0.0625};
    TempDir dir;
    const auto file = dir / "path.csv";
    ch::write_path_csv(file, macro);
    EXPECT_EQ(slurp(file),
              "t,pi,y,z\n"
              "0,0,2,0\n"
              "0.5,-0.25,1.5,0.125\n"
              "1,0.33333333333333331,1.25,-0.0625\n");
}

TEST(WriteEnsembleCsv, EmitsTheLongFormatSchema) {
    ch::EnsembleStats stats;
    stats.grid = {0.0, 1.0};
    const std::vector<double> zeros(2, 0.0);
    const std::vector<double> ones(2, 1.0);
    for (ch::SeriesStats* series : {&stats.pi, &stats.y, &stats.z}) {
        series->mean = ones;
        series->variance = zeros;
        series->stderr_ = zeros;
        series->q05 = ones;
        series->q25 = ones;
        series->q50 = ones;
        series->q75 = ones;
        series->q95 = ones;
    }
    stats.increment_correlation = {-0.5};
    stats.n_replicas = 3;

    TempDir dir;
    const auto file = dir / "ensemble.csv";
    ch::write_ensemble_csv(file, stats);
    const std::string body = slurp(file);

    std::istringstream lines(body);
    std::string line;
    ASSERT_TRUE(std::getline(lines, line));
    EXPECT_EQ(line, "t,stat,value,stderr");
    std::set<std::string> stat_names;
    std::size_t n_rows = 0;
    while (std::getline(lines, line)) {
        ++n_rows;
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        ASSERT_NE(second, std::string::npos) << line;
        stat_names.insert(line.substr(first + 1, second - first - 1));
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 3) << line;
    }
    // 3 coordinates x 7 stats x 2 grid times, plus one correlation interval.
    EXPECT_EQ(n_rows, 3u * 7u * 2u + 1u);
    const std::set<std::string> expected{
        "pi_mean", "pi_variance", "pi_q05", "pi_q25", "pi_q50", "pi_q75", "pi_q95",
        "y_mean",  "y_variance",  "y_q05",  "y_q25",  "y_q50",  "y_q75",  "y_q95",
        "z_mean",  "z_variance",  "z_q05",  "z_q25",  "z_q50",  "z_q75",  "z_q95",
        "increment_correlation"};
    EXPECT_EQ(stat_names, expected);
    EXPECT_NE(body.find("1,increment_correlation,-0.5,0\n"), std::string::npos);
}

TEST(WriteEnsembleCsv, IsByteStableAcrossRewrites) {
    ch::EnsembleStats stats;
    stats.grid = {0.0, 0.25, 0.5};
    const std::vector<double> v{1.0 / 3.0, -2.0 / 7.0, 0.1};
    for (ch::SeriesStats* series : {&stats.pi, &stats.y, &stats.z}) {
        series->mean = v;
        series->variance = v;
        series->stderr_ = v;
        series->q05 = v;
        series->q25 = v;
        series->q50 = v;
        series->q75 = v;
        series->q95 = v;
    }
    stats.increment_correlation = {0.25, -0.125};

    TempDir dir;
    ch::write_ensemble_csv(dir / "a.csv", stats);
    ch::write_ensemble_csv(dir / "b.csv", stats);
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
}

TEST(WritePathCsv, ReportsUnreachablePaths) {
    ch::MacroPath macro;
    macro.grid = {0.0};
    macro.pi = {0.0};
    macro.y = {0.0};
    macro.z = {0.0};
    EXPECT_THROW(ch::write_path_csv("/nonexistent-dir/path.csv", macro), ch::CsvWriteError);
}

}  // namespace
