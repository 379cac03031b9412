#include "hoi/info_measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "hoi/lattice.hpp"

namespace hoi {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_subset(const JointTable& table, std::span<const int> subset, const char* what) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] < 0 || subset[i] >= table.var_count())
            throw InvalidArgument(std::string(what) + ": variable index out of range");
        for (std::size_t k = 0; k < i; ++k)
            if (subset[k] == subset[i])
                throw InvalidArgument(std::string(what) + ": duplicate variable in subset");
    }
}

std::vector<int> mask_to_vars(std::uint32_t mask, std::span<const int> universe) {
    std::vector<int> vars;
    for (std::size_t i = 0; i < universe.size(); ++i)
        if ((mask >> i) & 1u) vars.push_back(universe[i]);
    return vars;
}

}  // namespace

double entropy(const JointTable& table, std::span<const int> subset) {
    check_subset(table, subset, "entropy");
    const JointTable marginal = table.marginalize(subset);
    double h = 0.0;
    for (double p : marginal.probs())
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double mutual_information(const JointTable& table, std::span<const int> subset) {
    check_subset(table, subset, "mutual_information");
    if (subset.empty()) return 0.0;
    // MI(tau) = sum_{eta <= tau} (-1)^(|eta|+1) H(eta)
    double acc = 0.0;
    const std::uint32_t full = (1u << subset.size()) - 1u;
    for (std::uint32_t eta = 1; eta <= full; ++eta) {
        const double h = entropy(table, mask_to_vars(eta, subset));
        acc += (std::popcount(eta) % 2 == 1) ? h : -h;
    }
    return acc;
}

double total_correlation(const JointTable& table, std::span<const int> subset) {
    check_subset(table, subset, "total_correlation");
    double acc = 0.0;
    for (int v : subset) acc += entropy(table, std::vector<int>{v});
    return acc - entropy(table, subset);
}

double dual_mutual_information(const JointTable& table, std::span<const int> subset,
                               std::span<const int> universe) {
    check_subset(table, universe, "dual_mutual_information");
    check_subset(table, subset, "dual_mutual_information");
    std::uint32_t subset_mask = 0;
    for (int v : subset) {
        const auto it = std::find(universe.begin(), universe.end(), v);
        if (it == universe.end())
            throw InvalidArgument("dual_mutual_information: subset not inside universe");
        subset_mask |= 1u << (it - universe.begin());
    }
    const std::uint32_t full = (1u << universe.size()) - 1u;
    const std::uint32_t free_bits = full & ~subset_mask;
    double acc = 0.0;
    std::uint32_t s = free_bits;
    while (true) {
        const std::uint32_t eta = subset_mask | s;
        if (eta != 0) {
            const double h = entropy(table, mask_to_vars(eta, universe));
            acc += (std::popcount(eta) % 2 == 1) ? h : -h;
        }
        if (s == 0) break;
        s = (s - 1) & free_bits;
    }
    return acc;
}

double entropy_from_mi(const JointTable& table, std::span<const int> subset) {
    check_subset(table, subset, "entropy_from_mi");
    double acc = 0.0;
    const std::uint32_t full = subset.empty() ? 0u : (1u << subset.size()) - 1u;
    for (std::uint32_t eta = 1; eta != 0 && eta <= full; ++eta) {
        const double mi = mutual_information(table, mask_to_vars(eta, subset));
        acc += (std::popcount(eta) % 2 == 1) ? mi : -mi;
    }
    return acc;
}

double pointwise_mi(const JointTable& table, std::span<const int> state,
                    std::span<const int> subset) {
    check_subset(table, subset, "pointwise_mi");
    if (state.size() != static_cast<std::size_t>(table.var_count()))
        throw InvalidArgument("pointwise_mi: state must assign every variable");
    const Lattice lat = Lattice::boolean_algebra(static_cast<int>(subset.size()));
    const double inv = lat.mobius_invert(
        [&](Elem eta) {
            const auto vars = mask_to_vars(eta, subset);
            const JointTable marginal = table.marginalize(vars);
            std::vector<int> restricted(vars.size());
            for (std::size_t i = 0; i < vars.size(); ++i)
                restricted[i] = state[static_cast<std::size_t>(vars[i])];
            const double p = marginal.prob(restricted);
            if (p <= 0.0)
                throw ZeroProbability("pointwise_mi: zero marginal probability on a required subset");
            return std::log(p);
        },
        lat.top());
    return (subset.size() % 2 == 0) ? inv : -inv;
}

MiBounds check_mi_bounds(const JointTable& table, std::span<const int> triple) {
    check_subset(table, triple, "check_mi_bounds");
    if (triple.size() != 3)
        throw InvalidArgument("check_mi_bounds: exactly three variables required");
    MiBounds out;
    out.mi3 = mutual_information(table, triple);
    const int x = triple[0], y = triple[1], z = triple[2];
    const std::array<std::array<int, 2>, 3> pairs{{{x, y}, {x, z}, {y, z}}};
    for (std::size_t i = 0; i < 3; ++i) {
        out.pairwise[i] = mutual_information(table, pairs[i]);
        out.conditional[i] = out.pairwise[i] - out.mi3;
    }
    out.upper = *std::min_element(out.pairwise.begin(), out.pairwise.end());
    out.lower = -*std::min_element(out.conditional.begin(), out.conditional.end());
    // Tiny slack for accumulated floating error in the entropy sums.
    constexpr double kSlack = 1e-9;
    out.holds = (out.mi3 >= out.lower - kSlack) && (out.mi3 <= out.upper + kSlack);
    return out;
}

nlohmann::ordered_json InfoReport::to_json() const {
    nlohmann::ordered_json j;
    j["target"] = target;
    j["quantity"] = quantity;
    j["value"] = value;
    j["unit"] = unit;
    if (!context.is_null()) j["context"] = context;
    return j;
}

}  // namespace hoi
