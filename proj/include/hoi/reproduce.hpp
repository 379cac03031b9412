#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hoi {

/// Configuration of the full reproduction run (tables 1-10 plus the
/// sign/significance matrix).
struct ReproduceConfig {
    std::string outdir;
    std::uint64_t seed = 0;
    std::size_t m = 100000;   // samples per DAG
    int n_boot = 1000;        // bootstrap resamples
    double gate_p = 0.23;     // gate truth-table state probability
    double gate_eps = 0.02;   // gate off-state probability
    double root_p = 0.5;
    double sigma = 0.4;
    double dytri_eps = 1e-4;
    int threads = 1;

    /// Sampled-MFI tolerance, widened as 0.2 * sqrt(100000 / m) when fewer
    /// samples are requested.
    double mfi_tolerance() const;
    /// Significance patterns are only enforced at >= 50k samples.
    bool enforce_significance() const { return m >= 50000; }
};

struct ReproduceResult {
    bool ok = true;
    int checks_total = 0;
    int checks_failed = 0;
    std::vector<std::string> failures;
    std::vector<std::string> files;  // paths written, outdir-relative
};

/// Regenerates every table of the study into table1.json .. table10.json,
/// fig4_signs.{json,txt} and summary.{json,txt}, diffing each entry against
/// the expected value at its tolerance. Files are only written after the
/// whole run has completed.
ReproduceResult reproduce_study(const ReproduceConfig& config);

}  // namespace hoi
