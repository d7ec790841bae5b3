#include "critical_hawkes/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ch = critical_hawkes;

namespace {

/// Cheap battery: large enough for the scale-free criteria to pass, small
/// enough to keep this suite out of the long acceptance run.
ch::VerifyOptions smoke_options() {
    ch::VerifyOptions options;
    options.replicas = 100;
    options.n_ladder = {50, 100, 200};
    options.seed = 7;
    return options;
}

const std::vector<ch::CriterionResult>& smoke_results() {
    static const std::vector<ch::CriterionResult> results = ch::run_verification(smoke_options());
    return results;
}

TEST(RunVerification, ReportsEveryCriterionInBatteryOrder) {
    const auto& results = smoke_results();
    const std::vector<std::string> expected{
        "coefficient-consistency", "reference-model-agreement", "compensator-identity",
        "difference-collapse",     "marginal-convergence",      "quadratic-mean-reversion",
        "leverage-correlation",    "boundary-classification",   "determinism",
    };
    ASSERT_EQ(results.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(results[i].name, expected[i]);
        EXPECT_FALSE(results[i].detail.empty()) << expected[i];
        EXPECT_FALSE(std::isnan(results[i].value)) << expected[i];
        EXPECT_FALSE(std::isnan(results[i].target)) << expected[i];
        EXPECT_FALSE(std::isnan(results[i].band)) << expected[i];
    }
}

TEST(RunVerification, ScaleFreeCriteriaPassEvenOnTheSmokeBattery) {
    for (const auto& result : smoke_results()) {
        if (result.name == "coefficient-consistency" || result.name == "boundary-classification" ||
            result.name == "determinism" || result.name == "compensator-identity") {
            EXPECT_TRUE(result.pass) << ch::format_criterion_line(result);
        }
    }
}

TEST(RunVerification, RejectsUnderpoweredOptions) {
    auto options = smoke_options();
    options.replicas = 10;
    EXPECT_THROW(static_cast<void>(ch::run_verification(options)), std::invalid_argument);

    options = smoke_options();
    options.n_ladder = {100, 100, 200};
    EXPECT_THROW(static_cast<void>(ch::run_verification(options)), std::invalid_argument);

    options = smoke_options();
    options.n_ladder = {200, 100};
    EXPECT_THROW(static_cast<void>(ch::run_verification(options)), std::invalid_argument);
}

TEST(FormatCriterionLine, PrefixesTheVerdict) {
    ch::CriterionResult pass{"determinism", true, "4 replicas byte-identical"};
    EXPECT_EQ(ch::format_criterion_line(pass), "PASS determinism: 4 replicas byte-identical");
    ch::CriterionResult fail{"leverage-correlation", false, "rho off by 5.1 se"};
    EXPECT_EQ(ch::format_criterion_line(fail), "FAIL leverage-correlation: rho off by 5.1 se");
}

TEST(WriteVerificationSummary, EmitsQuotedCsvRows) {
    const std::vector<ch::CriterionResult> results{
        {"determinism", true, "plain detail", 0.0, 0.0, 0.0},
        {"leverage-correlation", false, "detail with, comma and \"quote\""},
        {"compensator-identity", true, "within band", 2.5, 0.0, 4.0},
    };
    const auto file = std::filesystem::temp_directory_path() / "critical_hawkes_verify_test.csv";
    ch::write_verification_summary(file, results);
    std::ifstream in(file);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::filesystem::remove(file);
    EXPECT_EQ(buffer.str(),
              "criterion,status,value,target,band,detail\n"
              "determinism,PASS,0,0,0,\"plain detail\"\n"
              "leverage-correlation,FAIL,,,,\"detail with, comma and \"\"quote\"\"\"\n"
              "compensator-identity,PASS,2.5,0,4,\"within band\"\n");
}

}  // namespace
