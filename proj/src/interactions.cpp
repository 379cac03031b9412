#include "hoi/interactions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "hoi/lattice.hpp"

namespace hoi {

namespace {

struct QueryContext {
    JointTable scoped;            // table marginalised to the universe
    std::vector<int> target_pos;  // positions of target vars inside universe
    std::uint32_t target_mask = 0;
    std::vector<int> base_state;  // background state over universe variables
};

// Validates the query, marginalises to the universe and precomputes the
// background state (universe order).
QueryContext prepare(const JointTable& table, const InteractionQuery& query) {
    const auto& tau = query.target;
    const auto& uni = query.universe;
    for (std::size_t i = 0; i < uni.size(); ++i) {
        if (uni[i] < 0 || uni[i] >= table.var_count())
            throw InvalidArgument("interaction: universe variable out of range");
        for (std::size_t k = 0; k < i; ++k)
            if (uni[k] == uni[i]) throw InvalidArgument("interaction: duplicate universe variable");
    }
    if (uni.size() > 25)
        throw InvalidArgument("interaction: universe too large");
    QueryContext ctx{table.marginalize(uni), {}, 0, std::vector<int>(uni.size(), 0)};
    for (int v : tau) {
        const auto it = std::find(uni.begin(), uni.end(), v);
        if (it == uni.end())
            throw InvalidArgument("interaction: target variable not inside universe");
        const int pos = static_cast<int>(it - uni.begin());
        if ((ctx.target_mask >> pos) & 1u)
            throw InvalidArgument("interaction: duplicate target variable");
        ctx.target_pos.push_back(pos);
        ctx.target_mask |= 1u << pos;
    }
    for (int pos : ctx.target_pos)
        if (ctx.scoped.arity(pos) != 2)
            throw InvalidArgument("interaction: target variables must be binary");
    if (query.side == LatticeSide::Dual)
        for (int a : ctx.scoped.arities())
            if (a != 2) throw InvalidArgument("outeraction: universe variables must be binary");
    // Background assignment for universe \ target, ascending by position.
    std::vector<int> rest;
    for (std::size_t i = 0; i < uni.size(); ++i)
        if (!((ctx.target_mask >> i) & 1u)) rest.push_back(static_cast<int>(i));
    if (!query.background.empty()) {
        if (query.background.size() != rest.size())
            throw InvalidArgument("interaction: background must assign exactly universe \\ target");
        for (std::size_t i = 0; i < rest.size(); ++i) {
            const int pos = rest[i];
            if (query.background[i] < 0 || query.background[i] >= ctx.scoped.arity(pos))
                throw InvalidArgument("interaction: background value outside arity");
            ctx.base_state[static_cast<std::size_t>(pos)] = query.background[i];
        }
    }
    return ctx;
}

double log_prob_or_throw(const QueryContext& ctx, const std::vector<int>& state) {
    const double p = ctx.scoped.prob(state);
    if (p <= 0.0) {
        std::ostringstream os;
        os << "interaction: probed state {";
        for (std::size_t i = 0; i < state.size(); ++i) {
            if (i) os << ", ";
            os << ctx.scoped.names()[i] << '=' << state[i];
        }
        os << "} has probability zero";
        throw ZeroProbability(os.str());
    }
    return std::log(p);
}

// Both sides are Mobius inversions of the background surprisal over the
// universe's subset lattice: the primal side inverts over the downset of
// tau (subsets, rest at background), the dual side over the order-reversed
// lattice (supersets, rest at 0).
InteractionReport evaluate(const JointTable& table, const InteractionQuery& query,
                           bool with_terms) {
    QueryContext ctx = prepare(table, query);
    const int n_uni = static_cast<int>(query.universe.size());
    InteractionReport report;
    report.query = query;
    if (with_terms) report.terms.emplace();

    const bool primal = query.side == LatticeSide::Primal;
    const Lattice lat =
        primal ? Lattice::boolean_algebra(n_uni) : Lattice::dual_boolean_algebra(n_uni);
    const Elem top = ctx.target_mask;

    auto state_for = [&](Elem eta) {
        std::vector<int> state = primal ? ctx.base_state : std::vector<int>(ctx.base_state.size(), 0);
        for (int i = 0; i < n_uni; ++i)
            if ((eta >> i) & 1u) state[static_cast<std::size_t>(i)] = 1;
        return state;
    };
    report.value = lat.mobius_invert(
        [&](Elem eta) {
            const std::vector<int> state = state_for(eta);
            const double lp = log_prob_or_throw(ctx, state);
            if (with_terms)
                report.terms->push_back({state, static_cast<int>(lat.mobius(eta, top)), lp});
            return lp;
        },
        top);
    if (with_terms) {
        std::sort(report.terms->begin(), report.terms->end(),
                  [](const InteractionTerm& a, const InteractionTerm& b) {
                      return a.state < b.state;
                  });
    }
    return report;
}

}  // namespace

InteractionReport mfi(const JointTable& table, const InteractionQuery& query, bool with_terms) {
    InteractionQuery q = query;
    q.side = LatticeSide::Primal;
    return evaluate(table, q, with_terms);
}

std::vector<InteractionReport> mfi_all(const JointTable& table, int order,
                                       std::span<const int> universe) {
    if (order < 0 || static_cast<std::size_t>(order) > universe.size())
        throw InvalidArgument("mfi_all: order outside [0, |universe|]");
    if (universe.size() > 25) throw InvalidArgument("mfi_all: universe too large");
    std::vector<InteractionReport> out;
    const std::uint32_t full = universe.empty() ? 0u : (1u << universe.size()) - 1u;
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        if (std::popcount(mask) != order) continue;
        InteractionQuery q;
        for (std::size_t i = 0; i < universe.size(); ++i)
            if ((mask >> i) & 1u) q.target.push_back(universe[i]);
        q.universe.assign(universe.begin(), universe.end());
        out.push_back(mfi(table, q));
    }
    return out;
}

InteractionReport outeraction(const JointTable& table, const InteractionQuery& query,
                              bool with_terms) {
    InteractionQuery q = query;
    q.side = LatticeSide::Dual;
    if (!q.background.empty())
        throw InvalidArgument("outeraction: dual side probes the full universe; "
                              "background assignments are not applicable");
    return evaluate(table, q, with_terms);
}

double j_quantity(const JointTable& table, int variable, std::span<const int> universe) {
    if (universe.size() != 3) throw InvalidArgument("j_quantity: universe of exactly 3 variables");
    if (std::find(universe.begin(), universe.end(), variable) == universe.end())
        throw InvalidArgument("j_quantity: variable must belong to the universe");
    InteractionQuery whole;
    whole.target.assign(universe.begin(), universe.end());
    whole.universe.assign(universe.begin(), universe.end());
    InteractionQuery rest;
    for (int v : universe)
        if (v != variable) rest.target.push_back(v);
    rest.universe.assign(universe.begin(), universe.end());
    return mfi(table, whole).value - mfi(table, rest).value;
}

double j_bar(const JointTable& table, std::span<const int> universe) {
    if (universe.size() != 3) throw InvalidArgument("j_bar: universe of exactly 3 variables");
    double prod = 1.0;
    for (int v : universe) prod *= j_quantity(table, v, universe);
    return prod;
}

std::array<DicePair, 3> dice_decomposition(const JointTable& table,
                                           std::span<const int> triple) {
    if (triple.size() != 3) throw InvalidArgument("dice_decomposition: exactly three variables");
    std::array<DicePair, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
        const int ctx_var = triple[i];
        InteractionQuery q;
        for (int v : triple)
            if (v != ctx_var) q.target.push_back(v);
        q.universe.assign(triple.begin(), triple.end());
        q.background = {1};
        out[i].context_var = ctx_var;
        out[i].at_one = mfi(table, q).value;
        q.background = {0};
        out[i].at_zero = mfi(table, q).value;
    }
    return out;
}

double surprisal_from_interactions(const JointTable& table, std::span<const int> subset,
                                   std::span<const int> universe) {
    double acc = 0.0;
    const std::uint32_t full = subset.empty() ? 0u : (1u << subset.size()) - 1u;
    for (std::uint32_t mask = 0;; ++mask) {
        InteractionQuery q;
        for (std::size_t i = 0; i < subset.size(); ++i)
            if ((mask >> i) & 1u) q.target.push_back(subset[i]);
        q.universe.assign(universe.begin(), universe.end());
        acc += mfi(table, q).value;
        if (mask == full) break;
    }
    // Direct lookup of ln p(subset = 1, universe \ subset = 0).
    const JointTable scoped = table.marginalize(universe);
    std::vector<int> state(universe.size(), 0);
    for (int v : subset) {
        const auto it = std::find(universe.begin(), universe.end(), v);
        if (it == universe.end())
            throw InvalidArgument("surprisal_from_interactions: subset not inside universe");
        state[static_cast<std::size_t>(it - universe.begin())] = 1;
    }
    const double direct = std::log(scoped.prob(state));
    if (std::abs(acc - direct) > 1e-6)
        throw Error("surprisal_from_interactions: inversion identity violated (" +
                    std::to_string(acc) + " vs " + std::to_string(direct) + ")");
    return acc;
}

double categorical_interaction(const JointTable& table, const CategoricalTransition& transition,
                               std::span<const int> universe,
                               std::optional<double> zero_prob) {
    const auto& vars = transition.vars;
    if (vars.size() != transition.steps.size())
        throw InvalidArgument("categorical_interaction: vars/steps length mismatch");
    if (vars.empty()) throw InvalidArgument("categorical_interaction: empty transition");
    for (std::size_t i = 0; i < universe.size(); ++i)
        for (std::size_t k = 0; k < i; ++k)
            if (universe[k] == universe[i])
                throw InvalidArgument("categorical_interaction: duplicate universe variable");
    const JointTable scoped = table.marginalize(universe);
    std::vector<int> pos(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const auto it = std::find(universe.begin(), universe.end(), vars[j]);
        if (it == universe.end())
            throw InvalidArgument("categorical_interaction: transition variable not in universe");
        pos[j] = static_cast<int>(it - universe.begin());
        const auto [from, to] = transition.steps[j];
        if (from < 0 || to >= scoped.arity(pos[j]) || !(to > from))
            throw InvalidArgument("categorical_interaction: levels must satisfy 0 <= from < to < arity");
    }
    // Probe the 2^k corner states spanned by the from/to levels, all other
    // universe variables at level 0; sign (-1)^(#variables at 'from').
    const auto k = vars.size();
    double acc = 0.0;
    for (std::uint32_t s = 0; s < (1u << k); ++s) {
        std::vector<int> state(universe.size(), 0);
        for (std::size_t j = 0; j < k; ++j) {
            const bool at_to = (s >> j) & 1u;
            state[static_cast<std::size_t>(pos[j])] =
                at_to ? transition.steps[j].second : transition.steps[j].first;
        }
        const int n_from = static_cast<int>(k) - std::popcount(s);
        const int sign = (n_from % 2 == 0) ? 1 : -1;
        double p = scoped.prob(state);
        if (p <= 0.0) {
            if (!zero_prob)
                throw ZeroProbability("categorical_interaction: probed state has probability zero"
                                      " and no epsilon was supplied");
            p = *zero_prob;
        }
        acc += sign * std::log(p);
    }
    return acc;
}

CategoricalSweep categorical_sweep(const JointTable& table, std::span<const int> triple,
                                   std::optional<double> zero_prob, bool with_breakdown) {
    if (triple.size() != 3) throw InvalidArgument("categorical_sweep: exactly three variables");
    const JointTable scoped = table.marginalize(triple);
    for (int i = 0; i < 3; ++i)
        if (scoped.arity(i) != 4)
            throw InvalidArgument("categorical_sweep: variables must have arity 4");

    CategoricalSweep sweep;
    // Two-valued check for the symbolic exponent report.
    double hi = 0.0;
    {
        std::vector<double> distinct;
        for (double p : scoped.probs()) {
            bool found = false;
            for (double d : distinct)
                if (std::abs(d - p) < 1e-15) {
                    found = true;
                    break;
                }
            if (!found) distinct.push_back(p);
        }
        if (distinct.size() == 2) {
            sweep.two_valued = true;
            hi = std::max(distinct[0], distinct[1]);
        }
    }

    const std::vector<int> local_vars{0, 1, 2};
    for (int x0 = 0; x0 < 4; ++x0)
        for (int x1 = x0 + 1; x1 < 4; ++x1)
            for (int y0 = 0; y0 < 4; ++y0)
                for (int y1 = y0 + 1; y1 < 4; ++y1)
                    for (int z0 = 0; z0 < 4; ++z0)
                        for (int z1 = z0 + 1; z1 < 4; ++z1) {
                            CategoricalTransition t;
                            t.vars = local_vars;
                            t.steps = {{x0, x1}, {y0, y1}, {z0, z1}};
                            const double v =
                                categorical_interaction(scoped, t, local_vars, zero_prob);
                            sweep.total += v;
                            if (with_breakdown)
                                sweep.breakdown.push_back(
                                    {{std::pair{x0, x1}, {y0, y1}, {z0, z1}}, v});
                            if (sweep.two_valued) {
                                for (std::uint32_t s = 0; s < 8; ++s) {
                                    const std::array<int, 3> state{
                                        (s & 1u) ? x1 : x0, (s & 2u) ? y1 : y0,
                                        (s & 4u) ? z1 : z0};
                                    const int n_from = 3 - std::popcount(s);
                                    const int sign = (n_from % 2 == 0) ? 1 : -1;
                                    const double p = scoped.prob(state);
                                    if (std::abs(p - hi) < 1e-15)
                                        sweep.p_exponent += sign;
                                    else
                                        sweep.eps_exponent += sign;
                                }
                            }
                        }
    return sweep;
}

nlohmann::ordered_json InteractionReport::to_json(const std::vector<std::string>& names) const {
    nlohmann::ordered_json j;
    auto name_list = [&](const std::vector<int>& vars) {
        std::vector<std::string> out;
        for (int v : vars) out.push_back(names.at(static_cast<std::size_t>(v)));
        return out;
    };
    j["target"] = name_list(query.target);
    j["universe"] = name_list(query.universe);
    if (!query.background.empty()) j["background"] = query.background;
    j["lattice"] = query.side == LatticeSide::Primal ? "primal" : "dual";
    j["value"] = value;
    j["unit"] = "nats";
    if (terms) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& t : *terms) {
            nlohmann::ordered_json tj;
            tj["state"] = t.state;
            tj["sign"] = t.sign;
            tj["log_p"] = t.log_p;
            arr.push_back(tj);
        }
        j["terms"] = arr;
    }
    return j;
}

}  // namespace hoi
