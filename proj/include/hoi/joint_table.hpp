#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hoi/errors.hpp"

namespace hoi {

/// Couplings of a generalised Ising (Boltzmann) model on binary variables.
/// Keys are nonempty variable subsets encoded as bitmasks (bit i <-> x_i).
struct IsingParams {
    std::map<std::uint32_t, double> couplings;
};

/// Floor substituted for zero probabilities when a caller opts in.
inline constexpr double kDefaultZeroFloor = 1e-12;

/// Exact joint probability table over discrete variables (binary or
/// small-arity categorical). Dense, immutable, at most 2^20 states.
/// State tuple <-> linear index uses the last variable as the
/// fastest-varying digit.
class JointTable {
public:
    /// Validating constructor: probabilities must be >= 0 and sum to 1
    /// within 1e-9.
    JointTable(std::vector<std::string> names, std::vector<int> arities,
               std::vector<double> probs);

    /// Normalise raw nonnegative weights into a table. This is the
    /// `normalize` operation; an all-zero weight vector is a
    /// DegenerateDistribution error.
    static JointTable from_weights(std::vector<std::string> names, std::vector<int> arities,
                                   std::vector<double> weights);

    /// Boltzmann table p(s) proportional to exp(sum_T J_T prod_{i in T} s_i).
    static JointTable from_ising(const IsingParams& params, int nvars);

    /// JSON distribution format:
    ///   {"vars": [names], "arities": [ints], "probs": [reals]}
    /// probs in the documented index order; values round-trip exactly.
    static JointTable from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    int var_count() const { return static_cast<int>(arities_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& arities() const { return arities_; }
    int arity(int var) const { return arities_.at(static_cast<std::size_t>(var)); }
    std::size_t state_count() const { return probs_.size(); }
    const std::vector<double>& probs() const { return probs_; }

    std::size_t index_of(std::span<const int> state) const;
    std::vector<int> state_of(std::size_t index) const;
    double prob(std::span<const int> state) const { return probs_[index_of(state)]; }
    double prob_at(std::size_t index) const { return probs_.at(index); }

    /// Index of a named variable; IndexError-style InvalidArgument if absent.
    int find_var(const std::string& name) const;

    /// Rescale so probabilities sum to exactly 1.
    JointTable normalized() const;

    /// Sum out every variable not in `keep`; the order of `keep` is the
    /// variable order of the result. Empty `keep` yields the trivial
    /// zero-variable table with a single probability-1 entry.
    JointTable marginalize(std::span<const int> keep) const;

    /// Condition on `fixed` (var index -> value) and renormalise over the
    /// remaining variables. A probability-zero conditioning event raises
    /// ZeroProbability.
    JointTable condition(const std::vector<std::pair<int, int>>& fixed) const;

    /// -ln p(state) in nats. p = 0 raises ZeroProbability unless a floor
    /// is supplied, in which case -ln(floor) is returned.
    double surprisal(std::span<const int> state,
                     std::optional<double> zero_floor = std::nullopt) const;

private:
    void validate_state(std::span<const int> state) const;

    std::vector<std::string> names_;
    std::vector<int> arities_;
    std::vector<std::size_t> strides_;
    std::vector<double> probs_;
};

}  // namespace hoi
