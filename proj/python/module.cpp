// pyhoi: python bindings for the hoi library. Exposes the joint-table
// representation, the entropy/MI family, exact and estimated interactions,
// lattice inspection, and the study drivers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "json.hpp"

#include "hoi/estimation.hpp"
#include "hoi/experiments.hpp"
#include "hoi/info_measures.hpp"
#include "hoi/interactions.hpp"
#include "hoi/lattice.hpp"
#include "hoi/reproduce.hpp"

namespace py = pybind11;
using namespace hoi;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
    switch (j.type()) {
        case nlohmann::ordered_json::value_t::null:
            return py::none();
        case nlohmann::ordered_json::value_t::boolean:
            return py::bool_(j.get<bool>());
        case nlohmann::ordered_json::value_t::number_integer:
            return py::int_(j.get<long long>());
        case nlohmann::ordered_json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case nlohmann::ordered_json::value_t::number_float:
            return py::float_(j.get<double>());
        case nlohmann::ordered_json::value_t::string:
            return py::str(j.get<std::string>());
        case nlohmann::ordered_json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case nlohmann::ordered_json::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
            return out;
        }
        default:
            return py::none();
    }
}

InteractionQuery make_query(const std::vector<int>& target,
                            std::optional<std::vector<int>> universe,
                            std::optional<std::vector<int>> background, int var_count) {
    InteractionQuery q;
    q.target = target;
    if (universe) {
        q.universe = *universe;
    } else {
        q.universe.resize(static_cast<std::size_t>(var_count));
        for (int i = 0; i < var_count; ++i) q.universe[static_cast<std::size_t>(i)] = i;
    }
    if (background) q.background = *background;
    return q;
}

Dynamics dynamics_from(const std::string& name) {
    if (name == "additive") return Dynamics::Additive;
    if (name == "multiplicative") return Dynamics::Multiplicative;
    throw InvalidArgument("dynamics must be 'additive' or 'multiplicative'");
}

DyTri dytri_from(const std::string& name) {
    if (name == "dyadic") return DyTri::Dyadic;
    if (name == "triadic") return DyTri::Triadic;
    throw InvalidArgument("which must be 'dyadic' or 'triadic'");
}

}  // namespace

PYBIND11_MODULE(pyhoi, m) {
    m.doc() = "higher-order interactions and information measures on discrete distributions";

    py::register_exception<InvalidArgument>(m, "InvalidArgumentError", PyExc_ValueError);
    py::register_exception<MissingValue>(m, "MissingValueError", PyExc_KeyError);
    py::register_exception<DegenerateDistribution>(m, "DegenerateDistributionError",
                                                   PyExc_ValueError);
    py::register_exception<ZeroProbability>(m, "ZeroProbabilityError", PyExc_ArithmeticError);
    py::register_exception<Unestimable>(m, "UnestimableError", PyExc_ArithmeticError);
    py::register_exception<SignificanceUnavailable>(m, "SignificanceUnavailableError",
                                                    PyExc_ArithmeticError);

    // ---- joint tables -----------------------------------------------------
    py::class_<JointTable>(m, "JointTable")
        .def(py::init<std::vector<std::string>, std::vector<int>, std::vector<double>>(),
             py::arg("names"), py::arg("arities"), py::arg("probs"))
        .def_static("from_weights", &JointTable::from_weights, py::arg("names"),
                    py::arg("arities"), py::arg("weights"))
        .def_static(
            "from_ising",
            [](const std::map<std::vector<int>, double>& couplings, int nvars) {
                IsingParams params;
                for (const auto& [subset, j] : couplings) {
                    std::uint32_t mask = 0;
                    for (int v : subset) {
                        if (v < 0 || v >= 32) throw InvalidArgument("coupling index out of range");
                        mask |= 1u << v;
                    }
                    params.couplings[mask] = j;
                }
                return JointTable::from_ising(params, nvars);
            },
            py::arg("couplings"), py::arg("nvars"),
            "Boltzmann table from couplings keyed by variable-index tuples")
        .def_static("from_json",
                    [](const std::string& text) {
                        return JointTable::from_json(nlohmann::json::parse(text));
                    })
        .def("to_json", [](const JointTable& t) { return t.to_json().dump(); })
        .def_property_readonly("names", &JointTable::names)
        .def_property_readonly("arities", &JointTable::arities)
        .def_property_readonly("probs", &JointTable::probs)
        .def("prob", [](const JointTable& t, const std::vector<int>& s) { return t.prob(s); })
        .def("marginalize",
             [](const JointTable& t, const std::vector<int>& keep) { return t.marginalize(keep); })
        .def("condition",
             [](const JointTable& t, const std::map<int, int>& fixed) {
                 return t.condition({fixed.begin(), fixed.end()});
             })
        .def("surprisal",
             [](const JointTable& t, const std::vector<int>& s, std::optional<double> floor) {
                 return t.surprisal(s, floor);
             },
             py::arg("state"), py::arg("zero_floor") = std::nullopt)
        .def("normalized", &JointTable::normalized)
        .def("__repr__", [](const JointTable& t) {
            return "<JointTable of " + std::to_string(t.var_count()) + " variables, " +
                   std::to_string(t.state_count()) + " states>";
        });

    // ---- entropy / MI family ----------------------------------------------
    m.def("entropy",
          [](const JointTable& t, const std::vector<int>& s) { return entropy(t, s); },
          py::arg("table"), py::arg("subset"), "marginal Shannon entropy in bits");
    m.def("mutual_information",
          [](const JointTable& t, const std::vector<int>& s) { return mutual_information(t, s); },
          py::arg("table"), py::arg("subset"), "co-information in bits");
    m.def("total_correlation",
          [](const JointTable& t, const std::vector<int>& s) { return total_correlation(t, s); },
          py::arg("table"), py::arg("subset"));
    m.def("dual_mutual_information",
          [](const JointTable& t, const std::vector<int>& s, const std::vector<int>& u) {
              return dual_mutual_information(t, s, u);
          },
          py::arg("table"), py::arg("subset"), py::arg("universe"));
    m.def("entropy_from_mi",
          [](const JointTable& t, const std::vector<int>& s) { return entropy_from_mi(t, s); },
          py::arg("table"), py::arg("subset"));
    m.def("pointwise_mi",
          [](const JointTable& t, const std::vector<int>& state, const std::vector<int>& s) {
              return pointwise_mi(t, state, s);
          },
          py::arg("table"), py::arg("state"), py::arg("subset"),
          "generalised pointwise MI in nats");
    m.def("check_mi_bounds",
          [](const JointTable& t, const std::vector<int>& triple) {
              const auto b = check_mi_bounds(t, triple);
              py::dict out;
              out["holds"] = b.holds;
              out["mi3"] = b.mi3;
              out["pairwise"] = py::make_tuple(b.pairwise[0], b.pairwise[1], b.pairwise[2]);
              out["conditional"] =
                  py::make_tuple(b.conditional[0], b.conditional[1], b.conditional[2]);
              out["lower"] = b.lower;
              out["upper"] = b.upper;
              return out;
          },
          py::arg("table"), py::arg("triple"));

    // ---- interactions -------------------------------------------------------
    m.def("mfi",
          [](const JointTable& t, const std::vector<int>& target,
             std::optional<std::vector<int>> universe, std::optional<std::vector<int>> background,
             bool terms) {
              const auto rep =
                  mfi(t, make_query(target, universe, background, t.var_count()), terms);
              return json_to_py(rep.to_json(t.names()));
          },
          py::arg("table"), py::arg("target"), py::arg("universe") = std::nullopt,
          py::arg("background") = std::nullopt, py::arg("terms") = false,
          "model-free interaction report (value in nats)");
    m.def("mfi_value",
          [](const JointTable& t, const std::vector<int>& target,
             std::optional<std::vector<int>> universe, std::optional<std::vector<int>> background) {
              return mfi(t, make_query(target, universe, background, t.var_count())).value;
          },
          py::arg("table"), py::arg("target"), py::arg("universe") = std::nullopt,
          py::arg("background") = std::nullopt);
    m.def("mfi_all",
          [](const JointTable& t, int order, std::optional<std::vector<int>> universe) {
              std::vector<int> uni;
              if (universe) {
                  uni = *universe;
              } else {
                  uni.resize(static_cast<std::size_t>(t.var_count()));
                  for (int i = 0; i < t.var_count(); ++i) uni[static_cast<std::size_t>(i)] = i;
              }
              py::list out;
              for (const auto& rep : mfi_all(t, order, uni))
                  out.append(json_to_py(rep.to_json(t.names())));
              return out;
          },
          py::arg("table"), py::arg("order"), py::arg("universe") = std::nullopt);
    m.def("outeraction",
          [](const JointTable& t, const std::vector<int>& target,
             std::optional<std::vector<int>> universe) {
              return outeraction(t, make_query(target, universe, std::nullopt, t.var_count()))
                  .value;
          },
          py::arg("table"), py::arg("target"), py::arg("universe") = std::nullopt,
          "dual-lattice interaction value in nats");
    m.def("j_quantity",
          [](const JointTable& t, int variable, const std::vector<int>& universe) {
              return j_quantity(t, variable, universe);
          },
          py::arg("table"), py::arg("variable"), py::arg("universe"));
    m.def("j_bar",
          [](const JointTable& t, const std::vector<int>& universe) { return j_bar(t, universe); },
          py::arg("table"), py::arg("universe"));
    m.def("dice_decomposition",
          [](const JointTable& t, const std::vector<int>& triple) {
              py::list out;
              for (const auto& pair : dice_decomposition(t, triple))
                  out.append(py::make_tuple(pair.context_var, pair.at_one, pair.at_zero));
              return out;
          },
          py::arg("table"), py::arg("triple"));
    m.def("surprisal_from_interactions",
          [](const JointTable& t, const std::vector<int>& subset,
             const std::vector<int>& universe) {
              return surprisal_from_interactions(t, subset, universe);
          },
          py::arg("table"), py::arg("subset"), py::arg("universe"));
    m.def("categorical_interaction",
          [](const JointTable& t, const std::vector<int>& vars,
             const std::vector<std::pair<int, int>>& steps, const std::vector<int>& universe,
             std::optional<double> eps) {
              CategoricalTransition tr;
              tr.vars = vars;
              tr.steps = steps;
              return categorical_interaction(t, tr, universe, eps);
          },
          py::arg("table"), py::arg("vars"), py::arg("steps"), py::arg("universe"),
          py::arg("eps") = std::nullopt);
    m.def("categorical_sweep",
          [](const JointTable& t, const std::vector<int>& triple, std::optional<double> eps) {
              const auto sweep = categorical_sweep(t, triple, eps);
              py::dict out;
              out["total"] = sweep.total;
              out["two_valued"] = sweep.two_valued;
              out["p_exponent"] = sweep.p_exponent;
              out["eps_exponent"] = sweep.eps_exponent;
              return out;
          },
          py::arg("table"), py::arg("triple"), py::arg("eps") = std::nullopt);

    // ---- lattices -----------------------------------------------------------
    py::class_<Lattice>(m, "Lattice")
        .def_static("boolean_algebra", &Lattice::boolean_algebra, py::arg("nvars"),
                    py::arg("max_vars") = kMaxBooleanVars)
        .def_static("dual_boolean_algebra", &Lattice::dual_boolean_algebra, py::arg("nvars"),
                    py::arg("max_vars") = kMaxBooleanVars)
        .def_static("chain_product", &Lattice::chain_product, py::arg("arities"))
        .def_property_readonly("size", &Lattice::size)
        .def("top", [](const Lattice& l) { return l.levels(l.top()); })
        .def("bottom", [](const Lattice& l) { return l.levels(l.bottom()); })
        .def("leq",
             [](const Lattice& l, const std::vector<int>& a, const std::vector<int>& b) {
                 return l.leq(l.from_levels(a), l.from_levels(b));
             })
        .def("mobius",
             [](const Lattice& l, const std::vector<int>& a, const std::vector<int>& b) {
                 return l.mobius(l.from_levels(a), l.from_levels(b));
             })
        .def("downset",
             [](const Lattice& l, std::optional<std::vector<int>> top) {
                 const Elem t = top ? l.from_levels(*top) : l.top();
                 py::list out;
                 for (Elem e : l.downset(t)) out.append(l.levels(e));
                 return out;
             },
             py::arg("top") = std::nullopt)
        .def("mobius_invert",
             [](const Lattice& l, const std::map<std::vector<int>, double>& g,
                std::optional<std::vector<int>> top) {
                 std::map<Elem, double> values;
                 for (const auto& [levels, v] : g) values[l.from_levels(levels)] = v;
                 const Elem t = top ? l.from_levels(*top) : l.top();
                 return l.mobius_invert(values, t);
             },
             py::arg("g"), py::arg("top") = std::nullopt);

    // ---- estimation ---------------------------------------------------------
    py::class_<SampleMatrix>(m, "SampleMatrix")
        .def(py::init([](const std::vector<std::string>& names,
                         const std::vector<std::vector<int>>& rows) {
                 SampleMatrix s;
                 s.names = names;
                 s.rows = rows.size();
                 for (const auto& row : rows) {
                     if (row.size() != names.size())
                         throw InvalidArgument("row width does not match names");
                     for (int v : row) s.values.push_back(v);
                 }
                 s.arities.assign(names.size(), 2);
                 for (std::size_t r = 0; r < s.rows; ++r)
                     for (std::size_t c = 0; c < names.size(); ++c)
                         s.arities[c] = std::max(s.arities[c], s.values[r * names.size() + c] + 1);
                 return s;
             }),
             py::arg("names"), py::arg("rows"))
        .def_static("load", &SampleMatrix::load, py::arg("path"))
        .def_readonly("names", &SampleMatrix::names)
        .def_readonly("arities", &SampleMatrix::arities)
        .def_property_readonly("rows", [](const SampleMatrix& s) { return s.rows; })
        .def("empirical_table", &SampleMatrix::empirical_table)
        .def("column", [](const SampleMatrix& s, int c) {
            std::vector<int> out(s.rows);
            for (std::size_t r = 0; r < s.rows; ++r) out[r] = s.at(r, c);
            return out;
        });

    m.def("estimate_mfi",
          [](const SampleMatrix& samples, const std::vector<int>& target,
             const std::vector<int>& conditioning, double pseudocount) {
              const auto est = estimate_mfi(samples, target, conditioning, {pseudocount});
              return json_to_py(est.to_json(samples.names));
          },
          py::arg("samples"), py::arg("target"), py::arg("conditioning") = std::vector<int>{},
          py::arg("pseudocount") = 0.0);
    m.def("bootstrap_sign_fraction",
          [](const SampleMatrix& samples, const std::vector<int>& target,
             const std::vector<int>& conditioning, int n_boot, std::uint64_t seed,
             double pseudocount, int threads) {
              const auto boot = bootstrap_sign_fraction(samples, target, conditioning,
                                                        {pseudocount}, n_boot, seed, threads);
              py::dict out;
              out["F"] = boot.fraction;
              out["n_boot"] = boot.n_boot;
              out["n_skipped"] = boot.n_skipped;
              out["n_flips"] = boot.n_flips;
              return out;
          },
          py::arg("samples"), py::arg("target"), py::arg("conditioning"), py::arg("n_boot"),
          py::arg("seed"), py::arg("pseudocount") = 0.0, py::arg("threads") = 1);
    m.def("discover_markov_blankets",
          [](const SampleMatrix& samples, double alpha) {
              return discover_markov_blankets(samples, alpha);
          },
          py::arg("samples"), py::arg("alpha") = 0.01);
    m.def("discover_markov_blankets_exact",
          [](const JointTable& table, double tol) { return discover_markov_blankets(table, tol); },
          py::arg("table"), py::arg("tol") = 1e-12);
    m.def("prune_targets", &prune_targets, py::arg("blankets"), py::arg("order"));
    m.def("underconditioning_bias",
          [](const JointTable& t, const std::vector<int>& target, const std::vector<int>& omitted,
             const std::vector<int>& kept) {
              return underconditioning_bias(t, target, omitted, kept);
          },
          py::arg("table"), py::arg("target"), py::arg("omitted"), py::arg("kept"));

    // ---- experiments ----------------------------------------------------------
    m.def("gate_table",
          [](const std::string& gate, double p, double eps) {
              return gate_table({gate_from_name(gate), p, eps});
          },
          py::arg("gate"), py::arg("p"), py::arg("eps"));
    m.def("gate_truth_uniform",
          [](const std::string& gate) { return gate_truth_uniform(gate_from_name(gate)); },
          py::arg("gate"));
    m.def("gate_report",
          [](const std::vector<std::string>& gates, double p, double eps) {
              std::vector<Gate> gs;
              for (const auto& g : gates) gs.push_back(gate_from_name(g));
              py::list out;
              for (const auto& row : gate_report(gs, p, eps)) {
                  py::dict r;
                  r["gate"] = gate_name(row.gate);
                  r["H_A"] = row.h_a;
                  r["H_C"] = row.h_c;
                  r["H_AB"] = row.h_ab;
                  r["H_AC"] = row.h_ac;
                  r["H_ABC"] = row.h_abc;
                  r["MI_ABC_bits"] = row.mi_abc;
                  r["I_ABC"] = row.i_abc;
                  r["I_star_A"] = row.i_star_a;
                  r["J_star_A"] = row.j_a;
                  r["J_star_C"] = row.j_c;
                  r["J_bar"] = row.j_bar;
                  out.append(r);
              }
              return out;
          },
          py::arg("gates"), py::arg("p"), py::arg("eps"));

    py::class_<CausalDag>(m, "CausalDag")
        .def(py::init([](int nodes, const std::vector<std::pair<int, int>>& edges,
                         const std::string& dynamics, double root_p, double sigma) {
                 CausalDag d;
                 d.nodes = nodes;
                 d.edges = edges;
                 d.dynamics = dynamics_from(dynamics);
                 d.root_p = root_p;
                 d.sigma = sigma;
                 return d;
             }),
             py::arg("nodes"), py::arg("edges"), py::arg("dynamics") = "additive",
             py::arg("root_p") = 0.5, py::arg("sigma") = 0.4);

    m.def("simulate_dag", &simulate_dag, py::arg("dag"), py::arg("m"), py::arg("seed"));
    m.def("exact_dag_table", &exact_dag_table, py::arg("dag"));
    m.def("dag_report",
          [](const CausalDag& dag, const std::string& name, std::size_t m, int n_boot,
             std::uint64_t seed, int threads) {
              return json_to_py(dag_report(dag, name, m, n_boot, seed, threads).to_json());
          },
          py::arg("dag"), py::arg("name"), py::arg("m"), py::arg("n_boot"), py::arg("seed"),
          py::arg("threads") = 1);
    m.def("dag_dynamics_suite",
          [](double root_p, double sigma) {
              py::list out;
              for (const auto& [name, dag] : dag_dynamics_suite(root_p, sigma))
                  out.append(py::make_tuple(name, dag));
              return out;
          },
          py::arg("root_p") = 0.5, py::arg("sigma") = 0.4);

    m.def("dytri_table",
          [](const std::string& which, double eps) {
              return dytri_table({dytri_from(which), eps});
          },
          py::arg("which"), py::arg("eps"));
    m.def("dytri_support",
          [](const std::string& which) {
              py::list out;
              for (const auto& s : dytri_support(dytri_from(which)))
                  out.append(py::make_tuple(s[0], s[1], s[2]));
              return out;
          },
          py::arg("which"));
    m.def("dytri_report",
          [](double eps) { return json_to_py(dytri_report(eps).to_json()); }, py::arg("eps"));

    m.def("reproduce_study",
          [](const std::string& outdir, std::uint64_t seed, std::size_t m, int n_boot,
             int threads) {
              ReproduceConfig cfg;
              cfg.outdir = outdir;
              cfg.seed = seed;
              cfg.m = m;
              cfg.n_boot = n_boot;
              cfg.threads = threads;
              const auto result = reproduce_study(cfg);
              py::dict out;
              out["ok"] = result.ok;
              out["checks_total"] = result.checks_total;
              out["checks_failed"] = result.checks_failed;
              out["failures"] = result.failures;
              out["files"] = result.files;
              return out;
          },
          py::arg("outdir"), py::arg("seed"), py::arg("m") = 100000, py::arg("n_boot") = 1000,
          py::arg("threads") = 1);

    m.attr("__version__") = "0.1.0";
}
