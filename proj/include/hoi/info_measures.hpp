#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hoi/joint_table.hpp"

namespace hoi {

/// Shannon entropy (bits) of the marginal on `subset`. H(empty) = 0 and
/// 0*log 0 = 0.
double entropy(const JointTable& table, std::span<const int> subset);

/// Co-information of `subset` (bits): the Mobius inversion of marginal
/// entropy over the subset lattice, sign (-1)^(|tau|-1). Equals classical
/// MI for two variables and marginal entropy for one.
double mutual_information(const JointTable& table, std::span<const int> subset);

/// Total correlation (bits): sum of singleton entropies minus the joint
/// marginal entropy of `subset`.
double total_correlation(const JointTable& table, std::span<const int> subset);

/// Dual-lattice mutual information MI*(subset) within `universe` (bits):
/// sum over supersets eta of subset inside universe of (-1)^(|eta|+1) H(eta).
/// MI*(empty) is the mutual information of the whole universe; a singleton
/// gives the differential mutual information.
double dual_mutual_information(const JointTable& table, std::span<const int> subset,
                               std::span<const int> universe);

/// Joint entropy reassembled from co-informations of all sub-subsets:
/// H(tau) = sum_{eta <= tau} (-1)^(|eta|-1) MI(eta). Inverse of
/// mutual_information by Mobius inversion; returns bits.
double entropy_from_mi(const JointTable& table, std::span<const int> subset);

/// Generalised pointwise mutual information (nats) of `state` restricted to
/// `subset`: (-1)^|tau| sum_{eta<=tau} mu(eta,tau) ln p(state on eta).
/// A zero marginal raises ZeroProbability.
double pointwise_mi(const JointTable& table, std::span<const int> state,
                    std::span<const int> subset);

struct MiBounds {
    bool holds = false;
    double mi3 = 0.0;                    // co-information of the triple (bits)
    std::array<double, 3> pairwise{};    // MI(X,Y), MI(X,Z), MI(Y,Z)
    std::array<double, 3> conditional{}; // MI(X,Y|Z), MI(X,Z|Y), MI(Y,Z|X)
    double lower = 0.0;
    double upper = 0.0;
};

/// Checks -min(conditional MIs) <= MI(X,Y,Z) <= min(pairwise MIs), the
/// pairwise bound on 3-variable co-information. Conditional MI is derived
/// as MI(pair) - MI(triple).
MiBounds check_mi_bounds(const JointTable& table, std::span<const int> triple);

/// One emitted measurement, serialised as a JSON line
/// {target, quantity, value, unit, context}.
struct InfoReport {
    std::vector<std::string> target;
    std::string quantity;
    double value = 0.0;
    std::string unit;
    nlohmann::json context;  // optional fixed assignment / state

    nlohmann::ordered_json to_json() const;
};

}  // namespace hoi
