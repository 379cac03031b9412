// hoi: higher-order interaction and information measures on discrete
// distributions, with empirical estimation and study-reproduction drivers.
//
// Exit codes: 0 success, 1 reproduction tolerance exceeded, 2 malformed
// input, 3 zero-probability context / unestimable cell.

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hoi/estimation.hpp"
#include "hoi/experiments.hpp"
#include "hoi/info_measures.hpp"
#include "hoi/interactions.hpp"
#include "hoi/lattice.hpp"
#include "hoi/reproduce.hpp"
#include "hoi/rng.hpp"

using namespace hoi;
using nlohmann::ordered_json;

namespace {

constexpr double kLn2 = 0.6931471805599453;

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

struct LogBase {
    double base = 0.0;  // 0 = default units (bits for entropies, nats for interactions)

    static LogBase parse(const std::string& text) {
        if (text.empty()) return {};
        if (text == "e" || text == "E") return {std::exp(1.0)};
        try {
            const double b = std::stod(text);
            if (!(b > 0.0) || b == 1.0) throw InvalidArgument("log base must be > 0 and != 1");
            return {b};
        } catch (const std::exception&) {
            throw InvalidArgument("cannot parse log base '" + text + "'");
        }
    }
    bool is_default() const { return base == 0.0; }
    std::string unit_name() const {
        if (std::abs(base - 2.0) < 1e-12) return "bits";
        if (std::abs(base - std::exp(1.0)) < 1e-12) return "nats";
        std::ostringstream os;
        os << "log" << base;
        return os.str();
    }
    double from_bits(double bits) const { return is_default() ? bits : bits * kLn2 / std::log(base); }
    std::string bits_unit() const { return is_default() ? "bits" : unit_name(); }
    double from_nats(double nats) const { return is_default() ? nats : nats / std::log(base); }
    std::string nats_unit() const { return is_default() ? "nats" : unit_name(); }
};

/// All output is accumulated and flushed in one go; a failure part-way
/// through a command therefore never leaves a truncated file behind.
struct OutputSink {
    std::string path;  // empty = stdout
    std::ostringstream buffer;

    void line(const std::string& s) { buffer << s << '\n'; }
    void flush() {
        if (path.empty()) {
            std::cout << buffer.str();
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw InvalidArgument("cannot open output file '" + path + "'");
        out << buffer.str();
    }
};

JointTable load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open distribution file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("malformed JSON in '" + path + "': " + e.what());
    }
    return JointTable::from_json(j);
}

struct TableInput {
    std::string dist_path;
    std::string samples_path;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--dist", dist_path, "JSON distribution file");
        cmd->add_option("--samples", samples_path, "headered CSV/TSV of integer samples");
    }
    bool has_samples() const { return !samples_path.empty(); }
    SampleMatrix load_samples() const { return SampleMatrix::load(samples_path); }
    JointTable load_table() const {
        if (!dist_path.empty() && !samples_path.empty())
            throw InvalidArgument("give either --dist or --samples, not both");
        if (!dist_path.empty()) return load_distribution(dist_path);
        if (!samples_path.empty()) return load_samples().empirical_table();
        throw InvalidArgument("an input is required (--dist or --samples)");
    }
};

/// Subset syntax: comma-separated variable names or indices; an empty
/// string is the empty set.
std::vector<int> parse_subset(const std::string& text, const std::vector<std::string>& names) {
    std::vector<int> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw InvalidArgument("empty entry in variable list '" + text + "'");
        auto it = std::find(names.begin(), names.end(), item);
        if (it != names.end()) {
            out.push_back(static_cast<int>(it - names.begin()));
            continue;
        }
        try {
            std::size_t pos = 0;
            const int idx = std::stoi(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            if (idx < 0 || idx >= static_cast<int>(names.size()))
                throw InvalidArgument("variable index " + item + " out of range");
            out.push_back(idx);
        } catch (const std::invalid_argument&) {
            throw InvalidArgument("unknown variable '" + item + "'");
        }
    }
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoi(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidArgument("cannot parse integer '" + item + "'");
        }
    }
    return out;
}

std::vector<std::string> name_list(const std::vector<std::string>& names,
                                   const std::vector<int>& vars) {
    std::vector<std::string> out;
    for (int v : vars) out.push_back(names.at(static_cast<std::size_t>(v)));
    return out;
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_value) {
    if (seed_opt->count() > 0) return seed_value;
    if (const char* env = std::getenv("HOI_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidArgument("HOI_SEED is not an integer");
        }
    }
    throw InvalidArgument("a seed is required (--seed or HOI_SEED)");
}

// ---------------------------------------------------------------------------
// info
// ---------------------------------------------------------------------------

struct InfoArgs {
    TableInput input;
    std::vector<std::string> entropies, mis, dual_mis, tcs, pmis, bounds;
    std::string universe_text;
    std::string state_text;
    std::string log_base_text;
    std::string out_path;
};

void run_info(const InfoArgs& args) {
    const JointTable table = args.input.load_table();
    const LogBase lb = LogBase::parse(args.log_base_text);
    OutputSink sink{args.out_path, {}};

    auto emit = [&](InfoReport r) { sink.line(r.to_json().dump()); };

    for (const auto& text : args.entropies) {
        const auto subset = parse_subset(text, table.names());
        emit({name_list(table.names(), subset), "entropy", lb.from_bits(entropy(table, subset)),
              lb.bits_unit(), nullptr});
    }
    for (const auto& text : args.mis) {
        const auto subset = parse_subset(text, table.names());
        emit({name_list(table.names(), subset), "mutual_information",
              lb.from_bits(mutual_information(table, subset)), lb.bits_unit(), nullptr});
    }
    for (const auto& text : args.dual_mis) {
        const auto subset = parse_subset(text, table.names());
        std::vector<int> universe;
        if (args.universe_text.empty()) {
            universe.resize(static_cast<std::size_t>(table.var_count()));
            for (int i = 0; i < table.var_count(); ++i)
                universe[static_cast<std::size_t>(i)] = i;
        } else {
            universe = parse_subset(args.universe_text, table.names());
        }
        ordered_json ctx;
        ctx["universe"] = name_list(table.names(), universe);
        emit({name_list(table.names(), subset), "dual_mutual_information",
              lb.from_bits(dual_mutual_information(table, subset, universe)), lb.bits_unit(),
              ctx});
    }
    for (const auto& text : args.tcs) {
        const auto subset = parse_subset(text, table.names());
        emit({name_list(table.names(), subset), "total_correlation",
              lb.from_bits(total_correlation(table, subset)), lb.bits_unit(), nullptr});
    }
    for (const auto& text : args.pmis) {
        if (args.state_text.empty())
            throw InvalidArgument("--pmi needs --state with one value per variable");
        const auto subset = parse_subset(text, table.names());
        const auto state = parse_ints(args.state_text);
        ordered_json ctx;
        ctx["state"] = state;
        emit({name_list(table.names(), subset), "pointwise_mi",
              lb.from_nats(pointwise_mi(table, state, subset)), lb.nats_unit(), ctx});
    }
    for (const auto& text : args.bounds) {
        const auto triple = parse_subset(text, table.names());
        const auto b = check_mi_bounds(table, triple);
        ordered_json j;
        j["target"] = name_list(table.names(), triple);
        j["quantity"] = "mi_bounds";
        j["holds"] = b.holds;
        j["mi3"] = lb.from_bits(b.mi3);
        j["pairwise"] = {lb.from_bits(b.pairwise[0]), lb.from_bits(b.pairwise[1]),
                         lb.from_bits(b.pairwise[2])};
        j["conditional"] = {lb.from_bits(b.conditional[0]), lb.from_bits(b.conditional[1]),
                            lb.from_bits(b.conditional[2])};
        j["lower"] = lb.from_bits(b.lower);
        j["upper"] = lb.from_bits(b.upper);
        j["unit"] = lb.bits_unit();
        sink.line(j.dump());
    }
    sink.flush();
}

// ---------------------------------------------------------------------------
// mfi
// ---------------------------------------------------------------------------

struct MfiArgs {
    TableInput input;
    std::vector<std::string> targets;
    int order = -1;
    std::string universe_text;
    std::string background_text;
    std::string conditioning_text;
    bool conditioning_given = false;
    bool dual = false;
    bool with_terms = false;
    bool categorical = false;
    std::string transition_text;
    std::optional<double> cat_eps;
    bool use_blankets = false;
    double alpha = 0.01;
    double pseudocount = 0.0;
    int n_boot = 0;
    std::uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
    int threads = 1;
    std::string log_base_text;
    std::string out_path;
};

CategoricalTransition parse_transition(const std::string& text, const std::vector<int>& vars) {
    CategoricalTransition tr;
    tr.vars = vars;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw InvalidArgument("transition entries look like from:to, got '" + item + "'");
        try {
            tr.steps.emplace_back(std::stoi(item.substr(0, colon)),
                                  std::stoi(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw InvalidArgument("cannot parse transition '" + item + "'");
        }
    }
    if (tr.steps.size() != vars.size())
        throw InvalidArgument("need one from:to pair per target variable");
    return tr;
}

void run_mfi_exact(const MfiArgs& args, const JointTable& table) {
    const LogBase lb = LogBase::parse(args.log_base_text);
    OutputSink sink{args.out_path, {}};
    std::vector<int> universe;
    if (args.universe_text.empty()) {
        universe.resize(static_cast<std::size_t>(table.var_count()));
        for (int i = 0; i < table.var_count(); ++i) universe[static_cast<std::size_t>(i)] = i;
    } else {
        universe = parse_subset(args.universe_text, table.names());
    }

    auto emit = [&](InteractionReport rep) {
        auto j = rep.to_json(table.names());
        j["value"] = lb.from_nats(rep.value);
        j["unit"] = lb.nats_unit();
        sink.line(j.dump());
    };

    if (args.categorical) {
        std::vector<std::string> cat_targets = args.targets;
        if (cat_targets.empty()) {
            // Default: one transition per universe variable.
            std::string all;
            for (std::size_t i = 0; i < universe.size(); ++i) {
                if (i) all += ',';
                all += table.names()[static_cast<std::size_t>(universe[i])];
            }
            cat_targets.push_back(all);
        }
        for (const auto& text : cat_targets) {
            const auto target = parse_subset(text, table.names());
            const auto tr = parse_transition(args.transition_text, target);
            const double v = categorical_interaction(table, tr, universe, args.cat_eps);
            ordered_json j;
            j["target"] = name_list(table.names(), target);
            j["universe"] = name_list(table.names(), universe);
            ordered_json steps = ordered_json::array();
            for (const auto& [from, to] : tr.steps) steps.push_back({{"from", from}, {"to", to}});
            j["transition"] = steps;
            j["value"] = lb.from_nats(v);
            j["unit"] = lb.nats_unit();
            sink.line(j.dump());
        }
        sink.flush();
        return;
    }

    if (args.order >= 0) {
        for (auto& rep : mfi_all(table, args.order, universe)) emit(std::move(rep));
    }
    for (const auto& text : args.targets) {
        InteractionQuery q;
        q.target = parse_subset(text, table.names());
        q.universe = universe;
        q.background = parse_ints(args.background_text);
        q.side = args.dual ? LatticeSide::Dual : LatticeSide::Primal;
        emit(args.dual ? outeraction(table, q, args.with_terms)
                       : mfi(table, q, args.with_terms));
    }
    sink.flush();
}

void run_mfi_samples(const MfiArgs& args) {
    if (args.dual)
        throw InvalidArgument("--dual needs an exact distribution (--dist)");
    if (!args.background_text.empty())
        throw InvalidArgument("--background needs an exact distribution (--dist)");
    const SampleMatrix samples = args.input.load_samples();
    const LogBase lb = LogBase::parse(args.log_base_text);
    OutputSink sink{args.out_path, {}};
    SmoothingPolicy policy{args.pseudocount};

    MarkovBlanketMap blankets;
    if (args.use_blankets) blankets = discover_markov_blankets(samples, args.alpha);

    std::vector<std::vector<int>> targets;
    for (const auto& text : args.targets) targets.push_back(parse_subset(text, samples.names));
    const bool explicit_targets = !targets.empty();
    if (args.order >= 0) {
        if (args.use_blankets) {
            for (auto& t : prune_targets(blankets, args.order)) targets.push_back(std::move(t));
        } else {
            std::vector<int> universe(samples.names.size());
            for (std::size_t i = 0; i < universe.size(); ++i) universe[i] = static_cast<int>(i);
            // Enumerate subsets of the requested order.
            const std::uint32_t full =
                universe.empty() ? 0u : (1u << universe.size()) - 1u;
            for (std::uint32_t mask = 0; mask <= full && !universe.empty(); ++mask) {
                if (std::popcount(mask) != args.order) continue;
                std::vector<int> t;
                for (std::size_t i = 0; i < universe.size(); ++i)
                    if ((mask >> i) & 1u) t.push_back(static_cast<int>(i));
                targets.push_back(std::move(t));
            }
        }
    }
    if (targets.empty()) throw InvalidArgument("no targets requested (--target or --order)");

    std::uint64_t seed = 0;
    if (args.n_boot > 0) seed = resolve_seed(args.seed_opt, args.seed);

    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const auto& target = targets[ti];
        std::vector<int> conditioning;
        if (args.conditioning_given) {
            conditioning = parse_subset(args.conditioning_text, samples.names);
        } else if (args.use_blankets) {
            std::set<int> cond;
            for (int v : target)
                for (int u : blankets[static_cast<std::size_t>(v)]) cond.insert(u);
            for (int v : target) cond.erase(v);
            conditioning.assign(cond.begin(), cond.end());
        } else {
            for (int v = 0; v < samples.cols(); ++v)
                if (std::find(target.begin(), target.end(), v) == target.end())
                    conditioning.push_back(v);
        }
        auto est = estimate_mfi(samples, target, conditioning, policy);
        if (args.n_boot > 0) {
            const auto boot = bootstrap_sign_fraction(samples, target, conditioning, policy,
                                                      args.n_boot, splitmix64(seed + ti),
                                                      args.threads);
            est.sign_flip_fraction = boot.fraction;
            est.n_boot = boot.n_boot;
            est.n_skipped = boot.n_skipped;
        }
        if (args.use_blankets && explicit_targets) {
            bool connected = true;
            for (std::size_t i = 0; i < target.size() && connected; ++i)
                for (std::size_t k = i + 1; k < target.size(); ++k)
                    if (!blankets[static_cast<std::size_t>(target[i])].contains(target[k])) {
                        connected = false;
                        break;
                    }
            est.theorem_zero = !connected;
        }
        auto j = est.to_json(samples.names);
        j["value"] = lb.from_nats(est.value);
        j["unit"] = lb.nats_unit();
        sink.line(j.dump());
    }
    sink.flush();
}

void run_mfi(const MfiArgs& args) {
    if (args.input.has_samples() && !args.categorical) {
        run_mfi_samples(args);
        return;
    }
    run_mfi_exact(args, args.input.load_table());
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string dag_name;
    std::string edges_text;
    int nodes = 3;
    std::string dynamics = "additive";
    double p = 0.5;
    double sigma = 0.4;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
    bool exact = false;
    std::string out_path;
};

CausalDag build_dag(const SimulateArgs& args) {
    CausalDag dag;
    dag.root_p = args.p;
    dag.sigma = args.sigma;
    if (args.dynamics == "additive")
        dag.dynamics = Dynamics::Additive;
    else if (args.dynamics == "multiplicative")
        dag.dynamics = Dynamics::Multiplicative;
    else
        throw InvalidArgument("dynamics must be additive or multiplicative");

    if (!args.edges_text.empty()) {
        dag.nodes = args.nodes;
        std::stringstream ss(args.edges_text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto dash = item.find('-');
            if (dash == std::string::npos)
                throw InvalidArgument("edges look like from-to, got '" + item + "'");
            try {
                dag.edges.emplace_back(std::stoi(item.substr(0, dash)),
                                       std::stoi(item.substr(dash + 1)));
            } catch (const std::exception&) {
                throw InvalidArgument("cannot parse edge '" + item + "'");
            }
        }
        return dag;
    }
    dag.nodes = 3;
    if (args.dag_name == "chain")
        dag.edges = {{0, 1}, {1, 2}};
    else if (args.dag_name == "fork")
        dag.edges = {{0, 1}, {0, 2}};
    else if (args.dag_name == "collider")
        dag.edges = {{0, 1}, {2, 1}};
    else if (args.dag_name == "collider-chain")
        dag.edges = {{0, 1}, {2, 1}, {0, 2}};
    else
        throw InvalidArgument("dag must be chain, fork, collider or collider-chain "
                              "(or give --edges)");
    return dag;
}

void run_simulate(const SimulateArgs& args) {
    const CausalDag dag = build_dag(args);
    OutputSink sink{args.out_path, {}};
    if (args.exact) {
        sink.line(exact_dag_table(dag).to_json().dump());
        sink.flush();
        return;
    }
    if (args.m == 0) throw InvalidArgument("--m is required when sampling");
    const std::uint64_t seed = resolve_seed(args.seed_opt, args.seed);
    const SampleMatrix samples = simulate_dag(dag, args.m, seed);
    std::ostringstream csv;
    samples.save_csv(csv);
    sink.buffer << csv.str();
    sink.flush();
}

// ---------------------------------------------------------------------------
// gates / dytri
// ---------------------------------------------------------------------------

struct GatesArgs {
    double p = 0.23;
    double eps = 0.02;
    std::vector<std::string> gate_names;
    std::string out_path;  // JSON written here when given
};

void run_gates(const GatesArgs& args) {
    std::vector<Gate> gates;
    if (args.gate_names.empty())
        gates = {Gate::Xnor, Gate::Xor, Gate::And, Gate::Or, Gate::Nand, Gate::Nor};
    else
        for (const auto& n : args.gate_names) gates.push_back(gate_from_name(n));
    const auto rows = gate_report(gates, args.p, args.eps);
    const double unit = 4.0 * std::log(args.p / args.eps);

    std::ostringstream text;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "p = %g, eps = %g, I = 4 ln(p/eps) = %.6f\n", args.p,
                  args.eps, unit);
    text << buf;
    text << "gate    MI_ABC   I_ABC     I*_A      J*_A      J*_C      Jbar*\n";
    ordered_json jrows = ordered_json::array();
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%-6s %7.3f %9.4f %9.4f %9.4f %9.4f %12.4f\n",
                      gate_name(row.gate), row.mi_abc, row.i_abc, row.i_star_a, row.j_a, row.j_c,
                      row.j_bar);
        text << buf;
        ordered_json j;
        j["gate"] = gate_name(row.gate);
        j["H_A"] = row.h_a;
        j["H_C"] = row.h_c;
        j["H_AB"] = row.h_ab;
        j["H_AC"] = row.h_ac;
        j["H_ABC"] = row.h_abc;
        j["MI_ABC_bits"] = row.mi_abc;
        j["I_ABC"] = row.i_abc;
        j["I_star_A"] = row.i_star_a;
        j["J_star_A"] = row.j_a;
        j["J_star_C"] = row.j_c;
        j["J_bar"] = row.j_bar;
        jrows.push_back(j);
    }
    std::cout << text.str();
    if (!args.out_path.empty()) {
        ordered_json doc;
        doc["p"] = args.p;
        doc["eps"] = args.eps;
        doc["I"] = unit;
        doc["rows"] = jrows;
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out) throw InvalidArgument("cannot open output file '" + args.out_path + "'");
        out << doc.dump(2) << '\n';
    }
}

struct DytriArgs {
    double eps = 1e-4;
    std::string out_path;
};

void run_dytri(const DytriArgs& args) {
    const auto rep = dytri_report(args.eps);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "eps = %g, p = %.6f\n"
                  "I(0->3;0->3;0->3)  dyadic %.6f  triadic %.6f\n"
                  "summed sweep       dyadic %.6f  triadic %.6f\n"
                  "sweep exponents    dyadic p^%lld eps^%lld  triadic p^%lld eps^%lld\n"
                  "max Shannon gap    %.3g\n",
                  rep.eps, rep.p, rep.single_dyadic, rep.single_triadic, rep.sweep_dyadic,
                  rep.sweep_triadic, rep.dy_p_exp, rep.dy_eps_exp, rep.tri_p_exp, rep.tri_eps_exp,
                  rep.max_shannon_gap);
    std::cout << buf;
    if (!args.out_path.empty()) {
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out) throw InvalidArgument("cannot open output file '" + args.out_path + "'");
        out << rep.to_json().dump(2) << '\n';
    }
}

// ---------------------------------------------------------------------------
// blankets
// ---------------------------------------------------------------------------

struct BlanketArgs {
    TableInput input;
    double alpha = 0.01;
    int order = -1;
    std::string out_path;
};

void run_blankets(const BlanketArgs& args) {
    std::vector<std::string> names;
    std::vector<std::string> warnings;
    MarkovBlanketMap mb;
    if (args.input.has_samples()) {
        const auto samples = args.input.load_samples();
        names = samples.names;
        mb = discover_markov_blankets(samples, args.alpha, &warnings);
    } else {
        const auto table = args.input.load_table();
        names = table.names();
        mb = discover_markov_blankets(table);
    }
    OutputSink sink{args.out_path, {}};
    ordered_json j;
    ordered_json blankets;
    for (std::size_t v = 0; v < mb.size(); ++v) {
        std::vector<std::string> neigh;
        for (int u : mb[v]) neigh.push_back(names[static_cast<std::size_t>(u)]);
        blankets[names[v]] = neigh;
    }
    j["blankets"] = blankets;
    if (args.order >= 0) {
        ordered_json pruned = ordered_json::array();
        for (const auto& t : prune_targets(mb, args.order)) {
            std::vector<std::string> tn;
            for (int v : t) tn.push_back(names[static_cast<std::size_t>(v)]);
            pruned.push_back(tn);
        }
        j["targets"] = pruned;
    }
    if (!warnings.empty()) j["warnings"] = warnings;
    sink.line(j.dump());
    sink.flush();
}

// ---------------------------------------------------------------------------
// mobius
// ---------------------------------------------------------------------------

struct MobiusArgs {
    std::string lattice_text;
    std::string from_text, to_text, top_text;
    bool show_mu = false, show_leq = false, show_downset = false;
    std::string invert_path;
    std::string out_path;
};

Lattice parse_lattice(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw InvalidArgument("lattice looks like boolean:N, dual:N or chain:a1,a2,...");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (kind == "boolean") return Lattice::boolean_algebra(std::stoi(rest));
    if (kind == "dual") return Lattice::dual_boolean_algebra(std::stoi(rest));
    if (kind == "chain") return Lattice::chain_product(parse_ints(rest));
    throw InvalidArgument("unknown lattice kind '" + kind + "'");
}

void run_mobius(const MobiusArgs& args) {
    const Lattice lat = parse_lattice(args.lattice_text);
    OutputSink sink{args.out_path, {}};
    auto elem = [&](const std::string& text) {
        const auto levels = parse_ints(text);
        return lat.from_levels(levels);
    };
    const Elem top = args.top_text.empty() ? lat.top() : elem(args.top_text);

    if (args.show_mu || args.show_leq) {
        if (args.from_text.empty() || args.to_text.empty())
            throw InvalidArgument("--mu/--leq need --from and --to");
        const Elem a = elem(args.from_text), b = elem(args.to_text);
        ordered_json j;
        j["lattice"] = args.lattice_text;
        j["from"] = lat.levels(a);
        j["to"] = lat.levels(b);
        if (args.show_leq) j["leq"] = lat.leq(a, b);
        if (args.show_mu) j["mu"] = lat.mobius(a, b);
        sink.line(j.dump());
    }
    if (args.show_downset) {
        ordered_json j;
        j["lattice"] = args.lattice_text;
        j["top"] = lat.levels(top);
        ordered_json elems = ordered_json::array();
        for (Elem e : lat.downset(top)) elems.push_back(lat.levels(e));
        j["downset"] = elems;
        sink.line(j.dump());
    }
    if (!args.invert_path.empty()) {
        std::ifstream in(args.invert_path);
        if (!in) throw InvalidArgument("cannot open '" + args.invert_path + "'");
        nlohmann::json g;
        try {
            in >> g;
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument(std::string("malformed JSON: ") + e.what());
        }
        std::map<Elem, double> values;
        for (const auto& [key, value] : g.items())
            values[elem(key)] = value.get<double>();
        ordered_json j;
        j["lattice"] = args.lattice_text;
        j["top"] = lat.levels(top);
        j["inversion"] = lat.mobius_invert(values, top);
        sink.line(j.dump());
    }
    sink.flush();
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

struct ReproduceArgs {
    ReproduceConfig config;
    const CLI::Option* seed_opt = nullptr;
    std::uint64_t seed = 0;
};

int run_reproduce(ReproduceArgs& args) {
    args.config.seed = resolve_seed(args.seed_opt, args.seed);
    const auto result = reproduce_study(args.config);
    std::printf("wrote %zu files to %s\n", result.files.size(), args.config.outdir.c_str());
    std::printf("checks: %d/%d passed\n", result.checks_total - result.checks_failed,
                result.checks_total);
    if (!result.ok) {
        for (const auto& f : result.failures) std::fprintf(stderr, "FAIL %s\n", f.c_str());
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"higher-order interactions and information measures on discrete distributions"};
    app.require_subcommand(1);

    InfoArgs info_args;
    auto* info_cmd = app.add_subcommand("info", "entropy and mutual-information measures");
    info_args.input.add_options(info_cmd);
    info_cmd->add_option("--entropy", info_args.entropies,
                         "marginal entropy of a variable list (may repeat)");
    info_cmd->add_option("--mi", info_args.mis, "co-information of a variable list");
    info_cmd->add_option("--dual-mi", info_args.dual_mis, "dual-lattice mutual information");
    info_cmd->add_option("--total-correlation", info_args.tcs, "total correlation");
    info_cmd->add_option("--pmi", info_args.pmis, "generalised pointwise MI (needs --state)");
    info_cmd->add_option("--bounds", info_args.bounds, "pairwise bound check for a triple");
    info_cmd->add_option("--universe", info_args.universe_text, "universe for --dual-mi");
    info_cmd->add_option("--state", info_args.state_text, "full state for --pmi");
    info_cmd->add_option("--log-base", info_args.log_base_text, "override output log base");
    info_cmd->add_option("-o,--out", info_args.out_path, "write JSON lines here");

    MfiArgs mfi_args;
    auto* mfi_cmd = app.add_subcommand("mfi", "model-free interactions, exact or estimated");
    mfi_args.input.add_options(mfi_cmd);
    mfi_cmd->add_option("--target", mfi_args.targets, "interacting variable list (may repeat)");
    mfi_cmd->add_option("--order", mfi_args.order, "all interactions of this order");
    mfi_cmd->add_option("--universe", mfi_args.universe_text, "conditioning scope");
    mfi_cmd->add_option("--background", mfi_args.background_text,
                        "background values for universe \\ target");
    mfi_cmd->add_flag("--dual", mfi_args.dual, "compute the outeraction");
    mfi_cmd->add_flag("--terms", mfi_args.with_terms, "emit the per-state breakdown");
    mfi_cmd->add_flag("--cat", mfi_args.categorical, "categorical interaction (needs --transition)");
    mfi_cmd->add_option("--transition", mfi_args.transition_text,
                        "from:to level pairs, one per target variable");
    double cat_eps_value = 0.0;
    auto* cat_eps_opt = mfi_cmd->add_option("--eps", cat_eps_value,
                                            "substitute for zero probabilities (--cat only)");
    auto* cond_opt = mfi_cmd->add_option("--conditioning", mfi_args.conditioning_text,
                                         "conditioning variables (samples mode)");
    mfi_cmd->add_flag("--blankets", mfi_args.use_blankets,
                      "condition on discovered Markov blankets");
    mfi_cmd->add_option("--alpha", mfi_args.alpha, "significance level for blanket discovery");
    mfi_cmd->add_option("--pseudocount", mfi_args.pseudocount, "additive smoothing per cell");
    mfi_cmd->add_option("--boot", mfi_args.n_boot, "bootstrap resamples for F");
    mfi_args.seed_opt = mfi_cmd->add_option("--seed", mfi_args.seed, "bootstrap seed");
    mfi_cmd->add_option("--threads", mfi_args.threads, "bootstrap worker threads");
    mfi_cmd->add_option("--log-base", mfi_args.log_base_text, "override output log base");
    mfi_cmd->add_option("-o,--out", mfi_args.out_path, "write JSON lines here");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "draw samples from a causal DAG");
    sim_cmd->add_option("--dag", sim_args.dag_name, "chain, fork, collider or collider-chain");
    sim_cmd->add_option("--edges", sim_args.edges_text, "custom edge list from-to,from-to,...");
    sim_cmd->add_option("--nodes", sim_args.nodes, "node count for --edges");
    sim_cmd->add_option("--dynamics", sim_args.dynamics, "additive or multiplicative");
    sim_cmd->add_option("--p", sim_args.p, "root Bernoulli parameter");
    sim_cmd->add_option("--sigma", sim_args.sigma, "noise standard deviation");
    sim_cmd->add_option("--m", sim_args.m, "sample count");
    sim_args.seed_opt = sim_cmd->add_option("--seed", sim_args.seed, "simulation seed");
    sim_cmd->add_flag("--exact", sim_args.exact, "emit the exact table instead of samples");
    sim_cmd->add_option("-o,--out", sim_args.out_path, "output file (CSV, or JSON with --exact)");

    GatesArgs gates_args;
    auto* gates_cmd = app.add_subcommand("gates", "noisy logic-gate study");
    gates_cmd->add_option("--p", gates_args.p, "truth-table state probability");
    gates_cmd->add_option("--eps", gates_args.eps, "off-state probability");
    gates_cmd->add_option("--gate", gates_args.gate_names, "gate names (default: all six)");
    gates_cmd->add_option("-o,--out", gates_args.out_path, "also write JSON here");

    DytriArgs dytri_args;
    auto* dytri_cmd = app.add_subcommand("dytri", "dyadic/triadic categorical study");
    dytri_cmd->add_option("--eps", dytri_args.eps, "off-state probability");
    dytri_cmd->add_option("-o,--out", dytri_args.out_path, "also write JSON here");

    BlanketArgs blanket_args;
    auto* blanket_cmd = app.add_subcommand("blankets", "Markov blanket discovery and pruning");
    blanket_args.input.add_options(blanket_cmd);
    blanket_cmd->add_option("--alpha", blanket_args.alpha, "G-test significance level");
    blanket_cmd->add_option("--order", blanket_args.order, "also list prunable targets");
    blanket_cmd->add_option("-o,--out", blanket_args.out_path, "write JSON here");

    MobiusArgs mobius_args;
    auto* mobius_cmd = app.add_subcommand("mobius", "lattice inspection");
    mobius_cmd->add_option("--lattice", mobius_args.lattice_text,
                           "boolean:N, dual:N or chain:a1,a2,...")->required();
    mobius_cmd->add_flag("--mu", mobius_args.show_mu, "Mobius function of --from/--to");
    mobius_cmd->add_flag("--leq", mobius_args.show_leq, "order predicate of --from/--to");
    mobius_cmd->add_flag("--downset", mobius_args.show_downset, "enumerate the downset of --top");
    mobius_cmd->add_option("--from", mobius_args.from_text, "element as level list");
    mobius_cmd->add_option("--to", mobius_args.to_text, "element as level list");
    mobius_cmd->add_option("--top", mobius_args.top_text, "top element (default lattice top)");
    mobius_cmd->add_option("--invert", mobius_args.invert_path,
                           "JSON map of element -> value to Mobius-invert at --top");
    mobius_cmd->add_option("-o,--out", mobius_args.out_path, "write JSON lines here");

    ReproduceArgs repro_args;
    auto* repro_cmd = app.add_subcommand("reproduce", "regenerate every study table");
    repro_cmd->add_option("--outdir", repro_args.config.outdir, "output directory")->required();
    repro_args.seed_opt = repro_cmd->add_option("--seed", repro_args.seed, "master seed");
    repro_cmd->add_option("--m", repro_args.config.m, "samples per DAG");
    repro_cmd->add_option("--boot", repro_args.config.n_boot, "bootstrap resamples");
    repro_cmd->add_option("--threads", repro_args.config.threads, "bootstrap worker threads");
    repro_cmd->add_option("--p", repro_args.config.gate_p, "gate truth-table probability");
    repro_cmd->add_option("--eps", repro_args.config.gate_eps, "gate off-state probability");
    repro_cmd->add_option("--sigma", repro_args.config.sigma, "DAG noise sigma");
    repro_cmd->add_option("--root-p", repro_args.config.root_p, "DAG root Bernoulli parameter");
    repro_cmd->add_option("--dytri-eps", repro_args.config.dytri_eps,
                          "dyadic/triadic off-state probability");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*info_cmd) {
            run_info(info_args);
        } else if (*mfi_cmd) {
            mfi_args.conditioning_given = cond_opt->count() > 0;
            if (cat_eps_opt->count() > 0) mfi_args.cat_eps = cat_eps_value;
            run_mfi(mfi_args);
        } else if (*sim_cmd) {
            run_simulate(sim_args);
        } else if (*gates_cmd) {
            run_gates(gates_args);
        } else if (*dytri_cmd) {
            run_dytri(dytri_args);
        } else if (*blanket_cmd) {
            run_blankets(blanket_args);
        } else if (*mobius_cmd) {
            run_mobius(mobius_args);
        } else if (*repro_cmd) {
            return run_reproduce(repro_args);
        }
    } catch (const ZeroProbability& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const Unestimable& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const SignificanceUnavailable& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
