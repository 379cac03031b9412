#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hoi/joint_table.hpp"

namespace hoi {

enum class LatticeSide { Primal, Dual };

/// A request for one interaction value. `target` is the interacting set tau,
/// `universe` the conditioning scope T (variables outside it are summed out
/// first), `background` the values the variables of T \ tau are held at
/// (all zeros when empty). The dual side computes the outeraction.
struct InteractionQuery {
    std::vector<int> target;
    std::vector<int> universe;
    std::vector<int> background;  // aligned with universe \ target, ascending by index
    LatticeSide side = LatticeSide::Primal;
};

struct InteractionTerm {
    std::vector<int> state;  // state of the universe variables, universe order
    int sign = 1;
    double log_p = 0.0;
};

struct InteractionReport {
    InteractionQuery query;
    double value = 0.0;  // nats
    std::optional<std::vector<InteractionTerm>> terms;

    nlohmann::ordered_json to_json(const std::vector<std::string>& names) const;
};

/// Model-free interaction of query.target within query.universe:
///   I(tau;T) = sum over s in {0,1}^|tau| of (-1)^(#zeros in s)
///              ln p(tau = s, T \ tau = background).
/// A zero probed state raises ZeroProbability naming the state.
InteractionReport mfi(const JointTable& table, const InteractionQuery& query,
                      bool with_terms = false);

/// Every interaction of the given order inside `universe`, subsets
/// enumerated in ascending bitmask order.
std::vector<InteractionReport> mfi_all(const JointTable& table, int order,
                                       std::span<const int> universe);

/// Dual-lattice interaction (outeraction):
///   I*(tau;T) = sum over eta with tau <= eta <= T of (-1)^(|eta|-|tau|)
///               ln p(eta = 1, T \ eta = 0).
InteractionReport outeraction(const JointTable& table, const InteractionQuery& query,
                              bool with_terms = false);

/// J*_X = I(T;T) - I(T\{X};T) on a 3-variable universe; the outeraction
/// sign convention borrowed from differential mutual information. Nats.
double j_quantity(const JointTable& table, int variable, std::span<const int> universe);

/// The symmetric product J*_A * J*_B * J*_C over a 3-variable universe.
double j_bar(const JointTable& table, std::span<const int> universe);

struct DicePair {
    int context_var = -1;   // variable held at 1 / 0
    double at_one = 0.0;    // 2-point interaction of the other two, context = 1
    double at_zero = 0.0;   // same with context = 0
};

/// The three decompositions of a 3-point interaction into differences of
/// 2-point interactions: for every choice of context variable,
/// at_one - at_zero equals the 3-point MFI.
std::array<DicePair, 3> dice_decomposition(const JointTable& table,
                                           std::span<const int> triple);

/// sum_{eta <= subset} I(eta;universe); equals ln p(subset=1, rest=0).
/// The identity is verified internally to 1e-6 as a sanity check.
double surprisal_from_interactions(const JointTable& table, std::span<const int> subset,
                                   std::span<const int> universe);

/// A categorical transition: per target variable a (from, to) level pair
/// with to > from.
struct CategoricalTransition {
    std::vector<int> vars;
    std::vector<std::pair<int, int>> steps;
};

/// Interaction of categorical variables along `transition`, probing only
/// the 2^k corner states spanned by the from/to levels; other universe
/// variables are held at level 0. States of probability zero raise
/// ZeroProbability unless `zero_prob` substitutes an explicit epsilon.
/// For binary variables with transitions 0 -> 1 this is exactly mfi.
double categorical_interaction(const JointTable& table, const CategoricalTransition& transition,
                               std::span<const int> universe,
                               std::optional<double> zero_prob = std::nullopt);

struct SweepEntry {
    std::array<std::pair<int, int>, 3> steps;
    double value = 0.0;
};

struct CategoricalSweep {
    double total = 0.0;            // nats, sum over all increasing transitions
    bool two_valued = false;       // table takes exactly two values {p, eps}
    long long p_exponent = 0;      // net exponent of the larger value
    long long eps_exponent = 0;    // net exponent of the smaller value
    std::vector<SweepEntry> breakdown;
};

/// Sum of the 6^3 = 216 increasing 3-point transitions on an arity-4
/// triple. When the table is two-valued, also reports the symbolic net
/// exponents of p and eps.
CategoricalSweep categorical_sweep(const JointTable& table, std::span<const int> triple,
                                   std::optional<double> zero_prob = std::nullopt,
                                   bool with_breakdown = false);

}  // namespace hoi
