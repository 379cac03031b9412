#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hoi/estimation.hpp"
#include "hoi/joint_table.hpp"

namespace hoi {

// ---------------------------------------------------------------------------
// Noisy logic gates
// ---------------------------------------------------------------------------

enum class Gate { Xnor, Xor, And, Or, Nand, Nor, Xor3, And3, Or3 };

const char* gate_name(Gate g);
Gate gate_from_name(const std::string& name);
int gate_inputs(Gate g);

/// Every truth-table state of the gate carries probability p, every other
/// state eps, with (#table)*p + (#off)*eps = 1 and p > eps > 0.
struct GateSpec {
    Gate gate = Gate::Xnor;
    double p = 0.0;
    double eps = 0.0;
};

/// Joint table over inputs + output (A,B,C for 2-input, A,B,C,D for
/// 3-input gates).
JointTable gate_table(const GateSpec& spec);

/// The eps -> 0 limit: uniform distribution over the gate's truth table.
/// Entropy and MI are computed on this table; interactions need eps > 0.
JointTable gate_truth_uniform(Gate g);

struct GateRow {
    Gate gate;
    double h_a, h_c, h_ab, h_ac, h_abc;  // bits, eps -> 0 limit
    double mi_abc;                        // bits, eps -> 0 limit
    double i_abc;                         // nats, finite (p, eps)
    double i_star_a;                      // outeraction of input A
    double j_a, j_c, j_bar;               // J quantities
};

/// Reproduces the logic-gate tables for the 2-input gates at a common
/// noise level.
std::vector<GateRow> gate_report(const std::vector<Gate>& gates, double p, double eps);

// ---------------------------------------------------------------------------
// Causal DAG simulation
// ---------------------------------------------------------------------------

enum class Dynamics { Additive, Multiplicative };

/// DAG with node dynamics: roots are Bernoulli(root_p); every other node is
/// the mean (additive) or product (multiplicative) of its parents plus
/// N(0, sigma^2) noise, thresholded at 0.5.
struct CausalDag {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;  // from -> to
    Dynamics dynamics = Dynamics::Additive;
    double root_p = 0.5;
    double sigma = 0.4;
};

/// Topological node order; raises InvalidArgument on cycles.
std::vector<int> topological_order(const CausalDag& dag);

SampleMatrix simulate_dag(const CausalDag& dag, std::size_t m, std::uint64_t seed);

/// Exact stationary table of the simulation: threshold crossing turns each
/// node into a Bernoulli with p = Phi((f(parents) - 0.5) / sigma).
JointTable exact_dag_table(const CausalDag& dag);

struct DagReportRow {
    std::vector<int> target;
    double interaction = 0.0;
    double f = 1.0;
    std::optional<double> pearson, pearson_p;
    std::optional<double> partial, partial_p;
    double mi = 0.0;  // bits: pairwise MI, or co-information for the triple
};

struct DagReport {
    std::string name;
    std::vector<DagReportRow> rows;
    nlohmann::ordered_json to_json() const;
};

/// Estimates, for the pairs and the triple of a 3-node DAG: the MFI with
/// bootstrap F, Pearson and partial correlation with p-values, and the
/// plug-in MI / co-information.
DagReport dag_report(const CausalDag& dag, const std::string& name, std::size_t m, int n_boot,
                     std::uint64_t seed, int threads = 1);

/// The six dynamics studied on 3-node graphs: chain, fork, additive and
/// multiplicative collider, additive and multiplicative collider + chain.
std::vector<std::pair<std::string, CausalDag>> dag_dynamics_suite(double root_p = 0.5,
                                                               double sigma = 0.4);

// ---------------------------------------------------------------------------
// Dyadic / triadic distributions
// ---------------------------------------------------------------------------

enum class DyTri { Dyadic, Triadic };

/// 4x4x4 distribution with 8 support states at p = (1 - 56 eps) / 8 and the
/// 56 remaining states at eps.
struct DyTriSpec {
    DyTri which = DyTri::Dyadic;
    double eps = 0.0;
    double p() const { return (1.0 - 56.0 * eps) / 8.0; }
};

/// The 8 support states (X,Y,Z) of each distribution.
std::array<std::array<int, 3>, 8> dytri_support(DyTri which);

/// Support re-derived from the bit-level construction rules (pairwise links
/// for the dyadic, parity + shared bit for the triadic); must match
/// dytri_support exactly.
std::array<std::array<int, 3>, 8> dytri_support_from_bits(DyTri which);

JointTable dytri_table(const DyTriSpec& spec);

struct DyTriReport {
    double eps = 0.0;
    double p = 0.0;
    double single_dyadic = 0.0;   // I(0->3; 0->3; 0->3), nats
    double single_triadic = 0.0;
    double sweep_dyadic = 0.0;    // sum over all 216 increasing transitions
    double sweep_triadic = 0.0;
    long long dy_p_exp = 0, dy_eps_exp = 0;    // symbolic net exponents
    long long tri_p_exp = 0, tri_eps_exp = 0;
    double max_shannon_gap = 0.0;  // largest |dyadic - triadic| over the
                                   // implemented Shannon measures
    nlohmann::ordered_json to_json() const;
};

DyTriReport dytri_report(double eps);

}  // namespace hoi
