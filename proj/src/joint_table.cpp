#include "hoi/joint_table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hoi/lattice.hpp"

namespace hoi {

namespace {

constexpr double kSumTolerance = 1e-9;

std::string state_string(std::span<const int> state) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (i) os << ',';
        os << state[i];
    }
    os << ')';
    return os.str();
}

std::vector<std::size_t> make_strides(const std::vector<int>& arities) {
    std::vector<std::size_t> strides(arities.size(), 1);
    std::size_t n = 1;
    for (int i = static_cast<int>(arities.size()) - 1; i >= 0; --i) {
        strides[static_cast<std::size_t>(i)] = n;
        n *= static_cast<std::size_t>(arities[static_cast<std::size_t>(i)]);
    }
    return strides;
}

std::size_t checked_state_count(const std::vector<int>& arities) {
    std::size_t n = 1;
    for (int a : arities) {
        if (a < 2) throw InvalidArgument("JointTable: variable arity must be >= 2");
        n *= static_cast<std::size_t>(a);
        if (n > (std::size_t{1} << kMaxBooleanVars))
            throw InvalidArgument("JointTable: state space exceeds 2^20 entries");
    }
    return n;
}

}  // namespace

JointTable::JointTable(std::vector<std::string> names, std::vector<int> arities,
                       std::vector<double> probs)
    : names_(std::move(names)), arities_(std::move(arities)), probs_(std::move(probs)) {
    if (names_.size() != arities_.size())
        throw InvalidArgument("JointTable: names and arities length mismatch");
    const std::size_t want = checked_state_count(arities_);
    if (probs_.size() != want)
        throw InvalidArgument("JointTable: expected " + std::to_string(want) +
                              " probabilities, got " + std::to_string(probs_.size()));
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw InvalidArgument("JointTable: negative or NaN probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw InvalidArgument("JointTable: probabilities sum to " + std::to_string(sum) +
                              ", expected 1 within 1e-9");
    strides_ = make_strides(arities_);
}

JointTable JointTable::from_weights(std::vector<std::string> names, std::vector<int> arities,
                                    std::vector<double> weights) {
    const std::size_t want = checked_state_count(arities);
    if (weights.size() != want)
        throw InvalidArgument("from_weights: expected " + std::to_string(want) +
                              " weights, got " + std::to_string(weights.size()));
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidArgument("from_weights: negative or NaN weight");
        sum += w;
    }
    if (sum <= 0.0) throw DegenerateDistribution("from_weights: all weights are zero");
    for (double& w : weights) w /= sum;
    // Nudge the largest entry so the total is exactly representable as 1.
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    auto it = std::max_element(weights.begin(), weights.end());
    *it += 1.0 - total;
    return JointTable(std::move(names), std::move(arities), std::move(weights));
}

JointTable JointTable::from_ising(const IsingParams& params, int nvars) {
    if (nvars < 1 || nvars > kMaxBooleanVars)
        throw InvalidArgument("from_ising: variable count outside [1, 20]");
    const std::uint32_t full = (nvars == 32) ? ~0u : ((1u << nvars) - 1u);
    for (const auto& [mask, j] : params.couplings) {
        if (mask == 0) throw InvalidArgument("from_ising: empty coupling subset");
        if (mask & ~full)
            throw InvalidArgument("from_ising: coupling subset " + std::to_string(mask) +
                                  " has variables outside 0.." + std::to_string(nvars - 1));
        (void)j;
    }
    const std::size_t n_states = std::size_t{1} << nvars;
    std::vector<double> weights(n_states);
    for (std::size_t s = 0; s < n_states; ++s) {
        // State bit convention: variable i is digit i of the state tuple;
        // table index uses the last variable as fastest digit.
        double energy = 0.0;
        for (const auto& [mask, j] : params.couplings) {
            bool all_on = true;
            for (int i = 0; i < nvars; ++i) {
                if ((mask >> i) & 1u) {
                    const std::size_t digit = (s >> (nvars - 1 - i)) & 1u;
                    if (digit == 0) {
                        all_on = false;
                        break;
                    }
                }
            }
            if (all_on) energy += j;
        }
        weights[s] = std::exp(energy);
    }
    std::vector<std::string> names(static_cast<std::size_t>(nvars));
    for (int i = 0; i < nvars; ++i) names[static_cast<std::size_t>(i)] = "x" + std::to_string(i);
    return from_weights(std::move(names), std::vector<int>(static_cast<std::size_t>(nvars), 2),
                        std::move(weights));
}

JointTable JointTable::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vars") || !j.contains("arities") || !j.contains("probs"))
        throw InvalidArgument("distribution JSON must have vars, arities and probs fields");
    auto names = j.at("vars").get<std::vector<std::string>>();
    auto arities = j.at("arities").get<std::vector<int>>();
    auto probs = j.at("probs").get<std::vector<double>>();
    return JointTable(std::move(names), std::move(arities), std::move(probs));
}

nlohmann::json JointTable::to_json() const {
    nlohmann::json j;
    j["vars"] = names_;
    j["arities"] = arities_;
    j["probs"] = probs_;
    return j;
}

std::size_t JointTable::index_of(std::span<const int> state) const {
    validate_state(state);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < state.size(); ++i)
        idx += static_cast<std::size_t>(state[i]) * strides_[i];
    return idx;
}

std::vector<int> JointTable::state_of(std::size_t index) const {
    if (index >= probs_.size()) throw InvalidArgument("state_of: index out of range");
    std::vector<int> state(arities_.size());
    for (std::size_t i = 0; i < arities_.size(); ++i)
        state[i] = static_cast<int>((index / strides_[i]) %
                                    static_cast<std::size_t>(arities_[i]));
    return state;
}

void JointTable::validate_state(std::span<const int> state) const {
    if (state.size() != arities_.size())
        throw InvalidArgument("state has " + std::to_string(state.size()) +
                              " entries, table has " + std::to_string(arities_.size()) +
                              " variables");
    for (std::size_t i = 0; i < state.size(); ++i)
        if (state[i] < 0 || state[i] >= arities_[i])
            throw InvalidArgument("state value " + std::to_string(state[i]) +
                                  " outside arity of variable " + std::to_string(i));
}

int JointTable::find_var(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    throw InvalidArgument("unknown variable '" + name + "'");
}

JointTable JointTable::normalized() const {
    return from_weights(names_, arities_, probs_);
}

JointTable JointTable::marginalize(std::span<const int> keep) const {
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 0 || keep[i] >= var_count())
            throw InvalidArgument("marginalize: variable index out of range");
        for (std::size_t k = 0; k < i; ++k)
            if (keep[k] == keep[i]) throw InvalidArgument("marginalize: duplicate variable");
    }
    std::vector<std::string> names;
    std::vector<int> arities;
    for (int v : keep) {
        names.push_back(names_[static_cast<std::size_t>(v)]);
        arities.push_back(arities_[static_cast<std::size_t>(v)]);
    }
    std::vector<std::size_t> out_strides = make_strides(arities);
    std::size_t out_count = 1;
    for (int a : arities) out_count *= static_cast<std::size_t>(a);
    std::vector<double> out(out_count, 0.0);
    for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
        std::size_t oidx = 0;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            const auto v = static_cast<std::size_t>(keep[i]);
            const auto digit = (idx / strides_[v]) % static_cast<std::size_t>(arities_[v]);
            oidx += digit * out_strides[i];
        }
        out[oidx] += probs_[idx];
    }
    // Bypass the sum check: marginal sums inherit the parent's normalisation.
    std::vector<double> dummy(out_count, 0.0);
    dummy[0] = 1.0;
    JointTable result(std::move(names), std::move(arities), std::move(dummy));
    result.probs_ = std::move(out);
    return result;
}

JointTable JointTable::condition(const std::vector<std::pair<int, int>>& fixed) const {
    std::vector<int> fixed_value(arities_.size(), -1);
    for (const auto& [var, value] : fixed) {
        if (var < 0 || var >= var_count())
            throw InvalidArgument("condition: variable index out of range");
        if (value < 0 || value >= arities_[static_cast<std::size_t>(var)])
            throw InvalidArgument("condition: value outside arity of variable " +
                                  std::to_string(var));
        if (fixed_value[static_cast<std::size_t>(var)] != -1)
            throw InvalidArgument("condition: variable fixed twice");
        fixed_value[static_cast<std::size_t>(var)] = value;
    }
    std::vector<int> keep;
    for (int v = 0; v < var_count(); ++v)
        if (fixed_value[static_cast<std::size_t>(v)] == -1) keep.push_back(v);

    std::vector<std::string> names;
    std::vector<int> arities;
    for (int v : keep) {
        names.push_back(names_[static_cast<std::size_t>(v)]);
        arities.push_back(arities_[static_cast<std::size_t>(v)]);
    }
    std::vector<std::size_t> out_strides = make_strides(arities);
    std::size_t out_count = 1;
    for (int a : arities) out_count *= static_cast<std::size_t>(a);
    std::vector<double> out(out_count, 0.0);
    double mass = 0.0;
    for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
        bool match = true;
        for (std::size_t v = 0; v < arities_.size(); ++v) {
            if (fixed_value[v] == -1) continue;
            const auto digit = (idx / strides_[v]) % static_cast<std::size_t>(arities_[v]);
            if (static_cast<int>(digit) != fixed_value[v]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        std::size_t oidx = 0;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            const auto v = static_cast<std::size_t>(keep[i]);
            const auto digit = (idx / strides_[v]) % static_cast<std::size_t>(arities_[v]);
            oidx += digit * out_strides[i];
        }
        out[oidx] += probs_[idx];
        mass += probs_[idx];
    }
    if (mass <= 0.0) {
        std::ostringstream os;
        os << "condition: conditioning event { ";
        for (const auto& [var, value] : fixed)
            os << names_[static_cast<std::size_t>(var)] << "=" << value << " ";
        os << "} has probability zero";
        throw ZeroProbability(os.str());
    }
    for (double& p : out) p /= mass;
    std::vector<double> dummy(out_count, 0.0);
    dummy[0] = 1.0;
    JointTable result(std::move(names), std::move(arities), std::move(dummy));
    result.probs_ = std::move(out);
    return result;
}

double JointTable::surprisal(std::span<const int> state,
                             std::optional<double> zero_floor) const {
    const double p = prob(state);
    if (p <= 0.0) {
        if (zero_floor) return -std::log(*zero_floor);
        throw ZeroProbability("surprisal: state " + state_string(state) +
                              " has probability zero");
    }
    return -std::log(p);
}

}  // namespace hoi
