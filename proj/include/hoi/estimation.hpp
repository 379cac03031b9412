#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hoi/joint_table.hpp"

namespace hoi {

/// M x N matrix of observed discrete states (row = observation).
struct SampleMatrix {
    std::vector<std::string> names;
    std::vector<int> arities;
    std::vector<std::int32_t> values;  // row-major
    std::size_t rows = 0;

    int cols() const { return static_cast<int>(names.size()); }
    std::int32_t at(std::size_t row, int col) const {
        return values[row * names.size() + static_cast<std::size_t>(col)];
    }

    /// Parse a headered CSV/TSV of integers. Arities are inferred as
    /// max value + 1 (at least 2) unless supplied.
    static SampleMatrix from_csv(std::istream& in, char delimiter);
    static SampleMatrix load(const std::string& path);
    void save_csv(std::ostream& out, char delimiter = ',') const;

    /// Empirical (plug-in) joint table of observed frequencies.
    JointTable empirical_table() const;
};

/// Additive per-cell pseudocount; 0 means no smoothing and unestimable
/// cells raise Unestimable.
struct SmoothingPolicy {
    double pseudocount = 0.0;
};

struct CellCount {
    std::vector<int> state;  // target-state of the probed cell, target order
    long long count = 0;
};

struct EstimatedInteraction {
    std::vector<int> target;
    std::vector<int> conditioning;
    double value = 0.0;  // nats
    std::vector<CellCount> cells;
    std::optional<double> sign_flip_fraction;  // bootstrap F
    int n_boot = 0;
    int n_skipped = 0;
    bool theorem_zero = false;  // annotated by callers after pruning

    nlohmann::ordered_json to_json(const std::vector<std::string>& names) const;
};

/// Expectation-form estimate of the MFI of `target` with `conditioning`
/// variables held at 0 (everything else ignored): the alternating sum of
/// ln(count(state) + pseudocount) over the 2^|target| probed cells, which
/// is the sample-mean conditional-expectation estimator in log-odds form.
EstimatedInteraction estimate_mfi(const SampleMatrix& samples, std::span<const int> target,
                                  std::span<const int> conditioning,
                                  const SmoothingPolicy& policy = {});

struct BootstrapResult {
    double fraction = 0.0;  // F: share of resamples whose sign differs
    int n_boot = 0;
    int n_skipped = 0;      // unestimable resamples (excluded from F)
    int n_flips = 0;
};

/// Row-wise bootstrap with per-replicate seeds derived from `seed`;
/// identical results for a fixed seed at any thread count. A resampled
/// estimate of exactly 0 counts as sign-differing.
BootstrapResult bootstrap_sign_fraction(const SampleMatrix& samples, std::span<const int> target,
                                        std::span<const int> conditioning,
                                        const SmoothingPolicy& policy, int n_boot,
                                        std::uint64_t seed, int threads = 1);

/// blankets[i] = set of neighbours of variable i; symmetric by construction.
using MarkovBlanketMap = std::vector<std::set<int>>;

/// Pairwise conditional-independence screening: tests A indep B | rest with
/// a stratified G-test against chi-squared (samples) at level alpha.
/// Strata with no usable degrees of freedom make the pair conservatively
/// dependent and add a warning.
MarkovBlanketMap discover_markov_blankets(const SampleMatrix& samples, double alpha = 0.01,
                                          std::vector<std::string>* warnings = nullptr,
                                          int max_vars = 12);

/// Exact variant: conditional independence read directly off a joint table.
MarkovBlanketMap discover_markov_blankets(const JointTable& table, double tol = 1e-12);

/// All variable subsets of the given order whose members are pairwise
/// Markov-connected; every other subset has interaction zero by the
/// Markov-connectedness theorem.
std::vector<std::vector<int>> prune_targets(const MarkovBlanketMap& blankets, int order);

/// Exact bias of omitting `omitted` from the conditioning set:
/// I_{X|YZ} - I_{X|Z} as the iterated finite difference over the target
/// variables of pmi(X = x, Y = 0 | Z = 0). Nats.
double underconditioning_bias(const JointTable& table, std::span<const int> target,
                              std::span<const int> omitted, std::span<const int> kept);

}  // namespace hoi
