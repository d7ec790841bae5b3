#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "critical_hawkes/analysis.hpp"
#include "critical_hawkes/rescale.hpp"

namespace critical_hawkes {

/// I/O error while writing an artifact file.
struct CsvWriteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Decimal form of x with 17 significant digits, the round-trip precision of
/// an IEEE double. Produced with std::to_chars, so the bytes are independent
/// of locale and platform and artifacts can be compared byte for byte.
[[nodiscard]] std::string format_numeric(double x);

/// Write one macroscopic path as CSV with the exact header `t,pi,y,z` and
/// one row per grid time.
void write_path_csv(const std::filesystem::path& path, const MacroPath& macro);

/// Write ensemble summaries as long-format CSV with the exact header
/// `t,stat,value,stderr`.
///
/// Emitted stats, per grid time: {pi,y,z} x {mean, variance, q05, q25, q50,
/// q75, q95}, plus increment_correlation anchored at each interval's right
/// endpoint. The stderr column is 0 for stats without an error estimate.
void write_ensemble_csv(const std::filesystem::path& path, const EnsembleStats& stats);

}  // namespace critical_hawkes
