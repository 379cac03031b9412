#include "hoi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "hoi/info_measures.hpp"
#include "hoi/interactions.hpp"
#include "hoi/lattice.hpp"
#include "hoi/rng.hpp"
#include "hoi/stats.hpp"

namespace hoi {

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

const char* gate_name(Gate g) {
    switch (g) {
        case Gate::Xnor: return "XNOR";
        case Gate::Xor: return "XOR";
        case Gate::And: return "AND";
        case Gate::Or: return "OR";
        case Gate::Nand: return "NAND";
        case Gate::Nor: return "NOR";
        case Gate::Xor3: return "XOR3";
        case Gate::And3: return "AND3";
        case Gate::Or3: return "OR3";
    }
    return "?";
}

Gate gate_from_name(const std::string& name) {
    std::string up = name;
    std::transform(up.begin(), up.end(), up.begin(), ::toupper);
    if (up == "XNOR") return Gate::Xnor;
    if (up == "XOR") return Gate::Xor;
    if (up == "AND") return Gate::And;
    if (up == "OR") return Gate::Or;
    if (up == "NAND") return Gate::Nand;
    if (up == "NOR") return Gate::Nor;
    if (up == "XOR3") return Gate::Xor3;
    if (up == "AND3") return Gate::And3;
    if (up == "OR3") return Gate::Or3;
    throw InvalidArgument("unknown gate '" + name + "'");
}

int gate_inputs(Gate g) {
    switch (g) {
        case Gate::Xor3:
        case Gate::And3:
        case Gate::Or3: return 3;
        default: return 2;
    }
}

namespace {

int gate_output(Gate g, int a, int b, int c = 0) {
    switch (g) {
        case Gate::Xnor: return 1 - ((a + b) % 2);
        case Gate::Xor: return (a + b) % 2;
        case Gate::And: return a & b;
        case Gate::Or: return a | b;
        case Gate::Nand: return 1 - (a & b);
        case Gate::Nor: return 1 - (a | b);
        case Gate::Xor3: return (a + b + c) % 2;
        case Gate::And3: return a & b & c;
        case Gate::Or3: return a | b | c;
    }
    return 0;
}

std::vector<double> gate_weights(Gate g, double p, double eps) {
    const int nin = gate_inputs(g);
    const int nvars = nin + 1;
    std::vector<double> w(std::size_t{1} << nvars);
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
        // Last variable (the output) is the fastest digit.
        const int out = static_cast<int>(idx & 1u);
        const int a = static_cast<int>((idx >> (nvars - 1)) & 1u);
        const int b = static_cast<int>((idx >> (nvars - 2)) & 1u);
        const int c = nin == 3 ? static_cast<int>((idx >> 1) & 1u) : 0;
        const bool on_table = gate_output(g, a, b, c) == out;
        w[idx] = on_table ? p : eps;
    }
    return w;
}

std::vector<std::string> gate_var_names(Gate g) {
    if (gate_inputs(g) == 3) return {"A", "B", "C", "D"};
    return {"A", "B", "C"};
}

}  // namespace

JointTable gate_table(const GateSpec& spec) {
    const int nin = gate_inputs(spec.gate);
    const int n_on = 1 << nin;   // truth-table states
    const int n_off = n_on;      // complement states
    if (!(spec.p > spec.eps) || !(spec.eps > 0.0))
        throw InvalidArgument("gate_table: need p > eps > 0");
    if (std::abs(n_on * spec.p + n_off * spec.eps - 1.0) > 1e-12)
        throw InvalidArgument("gate_table: probabilities must satisfy " +
                              std::to_string(n_on) + "*(p + eps) = 1");
    return JointTable(gate_var_names(spec.gate), std::vector<int>(static_cast<std::size_t>(nin + 1), 2),
                      gate_weights(spec.gate, spec.p, spec.eps));
}

JointTable gate_truth_uniform(Gate g) {
    const int nin = gate_inputs(g);
    const double p = 1.0 / static_cast<double>(1 << nin);
    return JointTable(gate_var_names(g), std::vector<int>(static_cast<std::size_t>(nin + 1), 2),
                      gate_weights(g, p, 0.0));
}

std::vector<GateRow> gate_report(const std::vector<Gate>& gates, double p, double eps) {
    std::vector<GateRow> rows;
    for (Gate g : gates) {
        if (gate_inputs(g) != 2)
            throw InvalidArgument("gate_report covers the 2-input gates");
        const JointTable noisy = gate_table({g, p, eps});
        const JointTable limit = gate_truth_uniform(g);
        GateRow row{};
        row.gate = g;
        row.h_a = entropy(limit, std::vector<int>{0});
        row.h_c = entropy(limit, std::vector<int>{2});
        row.h_ab = entropy(limit, std::vector<int>{0, 1});
        row.h_ac = entropy(limit, std::vector<int>{0, 2});
        row.h_abc = entropy(limit, std::vector<int>{0, 1, 2});
        row.mi_abc = mutual_information(limit, std::vector<int>{0, 1, 2});
        const std::vector<int> uni{0, 1, 2};
        InteractionQuery q;
        q.target = uni;
        q.universe = uni;
        row.i_abc = mfi(noisy, q).value;
        InteractionQuery qa;
        qa.target = {0};
        qa.universe = uni;
        row.i_star_a = outeraction(noisy, qa).value;
        row.j_a = j_quantity(noisy, 0, uni);
        row.j_c = j_quantity(noisy, 2, uni);
        row.j_bar = j_bar(noisy, uni);
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// DAG simulation
// ---------------------------------------------------------------------------

std::vector<int> topological_order(const CausalDag& dag) {
    if (dag.nodes < 1) throw InvalidArgument("dag: need at least one node");
    std::vector<std::vector<int>> children(static_cast<std::size_t>(dag.nodes));
    std::vector<int> indegree(static_cast<std::size_t>(dag.nodes), 0);
    for (const auto& [from, to] : dag.edges) {
        if (from < 0 || from >= dag.nodes || to < 0 || to >= dag.nodes)
            throw InvalidArgument("dag: edge endpoint out of range");
        if (from == to) throw InvalidArgument("dag: self-loop");
        children[static_cast<std::size_t>(from)].push_back(to);
        ++indegree[static_cast<std::size_t>(to)];
    }
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < dag.nodes; ++v)
        if (indegree[static_cast<std::size_t>(v)] == 0) ready.push(v);
    std::vector<int> order;
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : children[static_cast<std::size_t>(v)])
            if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != dag.nodes)
        throw InvalidArgument("dag: graph contains a cycle");
    return order;
}

namespace {

std::vector<std::vector<int>> parent_lists(const CausalDag& dag) {
    std::vector<std::vector<int>> parents(static_cast<std::size_t>(dag.nodes));
    for (const auto& [from, to] : dag.edges)
        parents[static_cast<std::size_t>(to)].push_back(from);
    for (auto& p : parents) std::sort(p.begin(), p.end());
    return parents;
}

double combine_parents(Dynamics dynamics, const std::vector<int>& parents,
                       const std::vector<int>& value) {
    if (dynamics == Dynamics::Additive) {
        double s = 0.0;
        for (int p : parents) s += value[static_cast<std::size_t>(p)];
        return s / static_cast<double>(parents.size());
    }
    double prod = 1.0;
    for (int p : parents) prod *= value[static_cast<std::size_t>(p)];
    return prod;
}

std::vector<std::string> node_names(int n) {
    std::vector<std::string> names(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) names[static_cast<std::size_t>(i)] = "n" + std::to_string(i);
    return names;
}

}  // namespace

SampleMatrix simulate_dag(const CausalDag& dag, std::size_t m, std::uint64_t seed) {
    if (m < 1) throw InvalidArgument("simulate_dag: need m >= 1");
    if (!(dag.sigma >= 0.0)) throw InvalidArgument("simulate_dag: sigma must be >= 0");
    if (!(dag.root_p >= 0.0 && dag.root_p <= 1.0))
        throw InvalidArgument("simulate_dag: root_p outside [0, 1]");
    const auto order = topological_order(dag);
    const auto parents = parent_lists(dag);

    SampleMatrix out;
    out.names = node_names(dag.nodes);
    out.arities.assign(static_cast<std::size_t>(dag.nodes), 2);
    out.rows = m;
    out.values.resize(m * static_cast<std::size_t>(dag.nodes));
    Rng rng(seed);
    std::vector<int> value(static_cast<std::size_t>(dag.nodes), 0);
    for (std::size_t r = 0; r < m; ++r) {
        for (int v : order) {
            const auto& par = parents[static_cast<std::size_t>(v)];
            if (par.empty()) {
                value[static_cast<std::size_t>(v)] = rng.bernoulli(dag.root_p) ? 1 : 0;
            } else {
                const double raw =
                    combine_parents(dag.dynamics, par, value) + dag.sigma * rng.normal();
                value[static_cast<std::size_t>(v)] = raw >= 0.5 ? 1 : 0;
            }
        }
        for (int v = 0; v < dag.nodes; ++v)
            out.values[r * static_cast<std::size_t>(dag.nodes) + static_cast<std::size_t>(v)] =
                value[static_cast<std::size_t>(v)];
    }
    return out;
}

JointTable exact_dag_table(const CausalDag& dag) {
    const auto order = topological_order(dag);
    const auto parents = parent_lists(dag);
    const std::size_t n_states = std::size_t{1} << dag.nodes;
    if (dag.nodes > kMaxBooleanVars) throw InvalidArgument("exact_dag_table: too many nodes");
    std::vector<double> probs(n_states, 0.0);
    std::vector<int> state(static_cast<std::size_t>(dag.nodes), 0);
    for (std::size_t idx = 0; idx < n_states; ++idx) {
        for (int v = 0; v < dag.nodes; ++v)
            state[static_cast<std::size_t>(v)] =
                static_cast<int>((idx >> (dag.nodes - 1 - v)) & 1u);
        double p = 1.0;
        for (int v : order) {
            const auto& par = parents[static_cast<std::size_t>(v)];
            double p1;
            if (par.empty()) {
                p1 = dag.root_p;
            } else {
                const double f = combine_parents(dag.dynamics, par, state);
                if (dag.sigma == 0.0)
                    p1 = f >= 0.5 ? 1.0 : 0.0;
                else
                    p1 = normal_cdf((f - 0.5) / dag.sigma);
            }
            p *= state[static_cast<std::size_t>(v)] == 1 ? p1 : 1.0 - p1;
        }
        probs[idx] = p;
    }
    return JointTable::from_weights(node_names(dag.nodes),
                                    std::vector<int>(static_cast<std::size_t>(dag.nodes), 2),
                                    std::move(probs));
}

DagReport dag_report(const CausalDag& dag, const std::string& name, std::size_t m, int n_boot,
                     std::uint64_t seed, int threads) {
    if (dag.nodes != 3) throw InvalidArgument("dag_report: three-node graphs only");
    const SampleMatrix samples = simulate_dag(dag, m, seed);
    std::vector<std::vector<int>> columns(3);
    for (int c = 0; c < 3; ++c) {
        columns[static_cast<std::size_t>(c)].resize(m);
        for (std::size_t r = 0; r < m; ++r)
            columns[static_cast<std::size_t>(c)][r] = samples.at(r, c);
    }
    const JointTable empirical = samples.empirical_table();

    DagReport report;
    report.name = name;
    const std::vector<std::vector<int>> targets{{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const auto& target = targets[ti];
        DagReportRow row;
        row.target = target;
        std::vector<int> conditioning;
        for (int v = 0; v < 3; ++v)
            if (std::find(target.begin(), target.end(), v) == target.end())
                conditioning.push_back(v);
        const auto est = estimate_mfi(samples, target, conditioning, {});
        row.interaction = est.value;
        const auto boot = bootstrap_sign_fraction(samples, target, conditioning, {}, n_boot,
                                                  splitmix64(seed + 0xB007u + ti), threads);
        row.f = boot.fraction;
        if (target.size() == 2) {
            const auto& x = columns[static_cast<std::size_t>(target[0])];
            const auto& y = columns[static_cast<std::size_t>(target[1])];
            const auto& z = columns[static_cast<std::size_t>(conditioning[0])];
            const auto pc = pearson(x, y);
            row.pearson = pc.r;
            row.pearson_p = pc.p;
            const auto pr = partial_correlation(x, y, z);
            row.partial = pr.r;
            row.partial_p = pr.p;
        }
        row.mi = mutual_information(empirical, target);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<std::pair<std::string, CausalDag>> dag_dynamics_suite(double root_p, double sigma) {
    auto make = [&](std::vector<std::pair<int, int>> edges, Dynamics dyn) {
        CausalDag d;
        d.nodes = 3;
        d.edges = std::move(edges);
        d.dynamics = dyn;
        d.root_p = root_p;
        d.sigma = sigma;
        return d;
    };
    return {
        {"chain", make({{0, 1}, {1, 2}}, Dynamics::Additive)},
        {"fork", make({{0, 1}, {0, 2}}, Dynamics::Additive)},
        {"collider_additive", make({{0, 1}, {2, 1}}, Dynamics::Additive)},
        {"collider_multiplicative", make({{0, 1}, {2, 1}}, Dynamics::Multiplicative)},
        {"collider_chain_additive", make({{0, 1}, {2, 1}, {0, 2}}, Dynamics::Additive)},
        {"collider_chain_multiplicative",
         make({{0, 1}, {2, 1}, {0, 2}}, Dynamics::Multiplicative)},
    };
}

nlohmann::ordered_json DagReport::to_json() const {
    nlohmann::ordered_json j;
    j["dag"] = name;
    nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r;
        r["target"] = row.target;
        r["interaction"] = row.interaction;
        r["F"] = row.f;
        r["pearson"] = row.pearson ? nlohmann::ordered_json(*row.pearson)
                                   : nlohmann::ordered_json(nullptr);
        r["pearson_p"] = row.pearson_p ? nlohmann::ordered_json(*row.pearson_p)
                                       : nlohmann::ordered_json(nullptr);
        r["partial"] = row.partial ? nlohmann::ordered_json(*row.partial)
                                   : nlohmann::ordered_json(nullptr);
        r["partial_p"] = row.partial_p ? nlohmann::ordered_json(*row.partial_p)
                                       : nlohmann::ordered_json(nullptr);
        r["mi"] = row.mi;
        rows_json.push_back(r);
    }
    j["rows"] = rows_json;
    return j;
}

// ---------------------------------------------------------------------------
// Dyadic / triadic
// ---------------------------------------------------------------------------

std::array<std::array<int, 3>, 8> dytri_support(DyTri which) {
    if (which == DyTri::Dyadic)
        return {{{0, 0, 0},
                 {0, 2, 1},
                 {1, 0, 2},
                 {1, 2, 3},
                 {2, 1, 0},
                 {2, 3, 1},
                 {3, 1, 2},
                 {3, 3, 3}}};
    return {{{0, 0, 0},
             {1, 1, 1},
             {0, 2, 2},
             {1, 3, 3},
             {2, 0, 2},
             {3, 1, 3},
             {2, 2, 0},
             {3, 3, 1}}};
}

std::array<std::array<int, 3>, 8> dytri_support_from_bits(DyTri which) {
    // Categories as two-bit strings, value = 2*high + low.
    std::array<std::array<int, 3>, 8> out{};
    std::size_t n = 0;
    for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1)
            for (int b2 = 0; b2 < 2; ++b2) {
                int x0, x1, y0, y1, z0, z1;
                if (which == DyTri::Dyadic) {
                    // Pairwise links: X0 = Y1, Y0 = Z1, Z0 = X1.
                    x1 = b0;
                    y1 = b1;
                    z1 = b2;
                    x0 = y1;
                    y0 = z1;
                    z0 = x1;
                } else {
                    // Parity rule X0 + Y0 + Z0 = 0 (mod 2), shared X1 = Y1 = Z1.
                    x0 = b0;
                    y0 = b1;
                    z0 = (b0 + b1) % 2;
                    x1 = y1 = z1 = b2;
                }
                out[n++] = {2 * x0 + x1, 2 * y0 + y1, 2 * z0 + z1};
            }
    std::sort(out.begin(), out.end());
    return out;
}

JointTable dytri_table(const DyTriSpec& spec) {
    if (!(spec.eps >= 0.0)) throw InvalidArgument("dytri_table: eps must be >= 0");
    const double p = spec.p();
    if (!(p > spec.eps))
        throw InvalidArgument("dytri_table: eps too large, support probability must dominate");
    std::vector<double> probs(64, spec.eps);
    for (const auto& s : dytri_support(spec.which)) {
        const std::size_t idx = static_cast<std::size_t>(s[0]) * 16 +
                                static_cast<std::size_t>(s[1]) * 4 +
                                static_cast<std::size_t>(s[2]);
        probs[idx] = p;
    }
    return JointTable({"X", "Y", "Z"}, {4, 4, 4}, std::move(probs));
}

DyTriReport dytri_report(double eps) {
    if (!(eps > 0.0))
        throw InvalidArgument("dytri_report: numeric report needs eps > 0");
    DyTriReport rep;
    rep.eps = eps;
    rep.p = DyTriSpec{DyTri::Dyadic, eps}.p();
    const JointTable dy = dytri_table({DyTri::Dyadic, eps});
    const JointTable tri = dytri_table({DyTri::Triadic, eps});
    const std::vector<int> triple{0, 1, 2};

    CategoricalTransition t;
    t.vars = triple;
    t.steps = {{0, 3}, {0, 3}, {0, 3}};
    rep.single_dyadic = categorical_interaction(dy, t, triple);
    rep.single_triadic = categorical_interaction(tri, t, triple);

    const auto sweep_dy = categorical_sweep(dy, triple);
    const auto sweep_tri = categorical_sweep(tri, triple);
    rep.sweep_dyadic = sweep_dy.total;
    rep.sweep_triadic = sweep_tri.total;
    rep.dy_p_exp = sweep_dy.p_exponent;
    rep.dy_eps_exp = sweep_dy.eps_exponent;
    rep.tri_p_exp = sweep_tri.p_exponent;
    rep.tri_eps_exp = sweep_tri.eps_exponent;

    // Shannon indistinguishability: compare every implemented entropy-based
    // measure between the two tables.
    double gap = 0.0;
    auto track = [&gap](double a, double b) { gap = std::max(gap, std::abs(a - b)); };
    const std::vector<std::vector<int>> subsets{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    for (const auto& s : subsets) track(entropy(dy, s), entropy(tri, s));
    for (const auto& s : subsets)
        if (s.size() >= 2) {
            track(mutual_information(dy, s), mutual_information(tri, s));
            track(total_correlation(dy, s), total_correlation(tri, s));
        }
    for (int v = 0; v < 3; ++v)
        track(dual_mutual_information(dy, std::vector<int>{v}, triple),
              dual_mutual_information(tri, std::vector<int>{v}, triple));
    rep.max_shannon_gap = gap;
    return rep;
}

nlohmann::ordered_json DyTriReport::to_json() const {
    nlohmann::ordered_json j;
    j["eps"] = eps;
    j["p"] = p;
    j["single_0to3_dyadic"] = single_dyadic;
    j["single_0to3_triadic"] = single_triadic;
    j["sweep_dyadic"] = sweep_dyadic;
    j["sweep_triadic"] = sweep_triadic;
    j["dyadic_exponents"] = {{"p", dy_p_exp}, {"eps", dy_eps_exp}};
    j["triadic_exponents"] = {{"p", tri_p_exp}, {"eps", tri_eps_exp}};
    j["max_shannon_gap"] = max_shannon_gap;
    j["unit"] = "nats";
    return j;
}

}  // namespace hoi
