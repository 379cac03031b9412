#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "hoi/experiments.hpp"
#include "hoi/interactions.hpp"
#include "test_support.hpp"

using namespace hoi;
using hoi::test::independent_bits;
using hoi::test::iterated_difference_oracle;
using hoi::test::random_table;

namespace {

InteractionQuery query(std::vector<int> target, std::vector<int> universe) {
    InteractionQuery q;
    q.target = std::move(target);
    q.universe = std::move(universe);
    return q;
}

}  // namespace

TEST_CASE("two-point interaction is the log odds ratio") {
    JointTable t({"X", "Y"}, {2, 2}, {0.4, 0.1, 0.1, 0.4});
    const auto rep = mfi(t, query({0, 1}, {0, 1}), true);
    CHECK(rep.value == doctest::Approx(std::log(16.0)).epsilon(1e-12));
    REQUIRE(rep.terms.has_value());
    CHECK(rep.terms->size() == 4);
    double from_terms = 0.0;
    for (const auto& term : *rep.terms) from_terms += term.sign * term.log_p;
    CHECK(from_terms == doctest::Approx(rep.value).epsilon(1e-12));
}

TEST_CASE("boltzmann coupling is recovered exactly") {
    IsingParams params;
    params.couplings[0b11] = 0.7;
    auto t = JointTable::from_ising(params, 2);
    CHECK(mfi(t, query({0, 1}, {0, 1})).value == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("independent variables do not interact") {
    auto indep = independent_bits(4);
    for (const auto& target :
         {std::vector<int>{0, 1}, {0, 2}, {1, 3}, {0, 1, 2}, {0, 1, 2, 3}}) {
        CHECK(mfi(indep, query(target, {0, 1, 2, 3})).value ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("zero probed state raises a named error") {
    JointTable t({"X", "Y"}, {2, 2}, {0.5, 0.5, 0.0, 0.0});
    CHECK_THROWS_WITH_AS(mfi(t, query({0, 1}, {0, 1})),
                         doctest::Contains("X=1"), ZeroProbability);
}

TEST_CASE("mfi_all sweeps orders deterministically") {
    Rng rng(3);
    auto t = random_table(rng, {2, 2, 2}, 0.05);
    const auto second = mfi_all(t, 2, std::vector<int>{0, 1, 2});
    REQUIRE(second.size() == 3);
    CHECK(second[0].query.target == std::vector<int>{0, 1});
    CHECK(second[1].query.target == std::vector<int>{0, 2});
    CHECK(second[2].query.target == std::vector<int>{1, 2});

    const auto zeroth = mfi_all(t, 0, std::vector<int>{0, 1, 2});
    REQUIRE(zeroth.size() == 1);
    CHECK(zeroth[0].value ==
          doctest::Approx(std::log(t.prob(std::vector<int>{0, 0, 0}))).epsilon(1e-12));

    auto uniform = independent_bits(3);
    for (int order = 1; order <= 3; ++order)
        for (const auto& rep : mfi_all(uniform, order, std::vector<int>{0, 1, 2}))
            CHECK(rep.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("equivalence of the lattice form and the boolean derivative") {
    Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(3));  // 2..4
        std::vector<int> arities(static_cast<std::size_t>(n), 2);
        auto t = random_table(rng, arities, 0.05);
        std::vector<int> universe(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) universe[static_cast<std::size_t>(i)] = i;
        // Random nonempty target subset.
        std::vector<int> target;
        for (int i = 0; i < n; ++i)
            if (rng.uniform01() < 0.6) target.push_back(i);
        if (target.empty()) target.push_back(static_cast<int>(rng.uniform_below(n)));
        CHECK(mfi(t, query(target, universe)).value ==
              doctest::Approx(iterated_difference_oracle(t, target, universe)).epsilon(1e-9));
    }
}

TEST_CASE("interactions are symmetric under permutations of the target") {
    Rng rng(77);
    auto t = random_table(rng, {2, 2, 2}, 0.05);
    std::vector<int> target{0, 1, 2};
    const double base = mfi(t, query(target, {0, 1, 2})).value;
    std::sort(target.begin(), target.end());
    do {
        CHECK(mfi(t, query(target, {0, 1, 2})).value == doctest::Approx(base).epsilon(1e-12));
    } while (std::next_permutation(target.begin(), target.end()));
}

TEST_CASE("every ising coupling comes back at every order") {
    Rng rng(2025);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(3));  // 2..4
        IsingParams params;
        const std::uint32_t full = (1u << n) - 1u;
        for (std::uint32_t mask = 1; mask <= full; ++mask)
            params.couplings[mask] = 4.0 * rng.uniform01() - 2.0;
        auto t = JointTable::from_ising(params, n);
        std::vector<int> universe(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) universe[static_cast<std::size_t>(i)] = i;
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            std::vector<int> target;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1u) target.push_back(i);
            CHECK(mfi(t, query(target, universe)).value ==
                  doctest::Approx(params.couplings[mask]).epsilon(1e-9));
        }
    }
}

TEST_CASE("outeraction identities") {
    Rng rng(88);
    // I*(empty) = (-1)^|T| I(full set).
    for (int n = 2; n <= 4; ++n) {
        std::vector<int> universe(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) universe[static_cast<std::size_t>(i)] = i;
        auto t = random_table(rng, std::vector<int>(static_cast<std::size_t>(n), 2), 0.05);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        CHECK(outeraction(t, query({}, universe)).value ==
              doctest::Approx(sign * mfi(t, query(universe, universe)).value).epsilon(1e-9));
    }

    auto indep = independent_bits(3);
    CHECK(outeraction(indep, query({0}, {0, 1, 2})).value == doctest::Approx(0.0).epsilon(1e-12));

    // Singleton: I*(X) = I(XYZ) + I(YZ), and the explicit 4-state ratio.
    for (int trial = 0; trial < 25; ++trial) {
        auto t = random_table(rng, {2, 2, 2}, 0.05);
        const double dual = outeraction(t, query({0}, {0, 1, 2})).value;
        CHECK(dual == doctest::Approx(mfi(t, query({0, 1, 2}, {0, 1, 2})).value +
                                      mfi(t, query({1, 2}, {0, 1, 2})).value)
                          .epsilon(1e-9));
        const double explicit_ratio =
            std::log(t.prob(std::vector<int>{1, 1, 1}) * t.prob(std::vector<int>{1, 0, 0}) /
                     (t.prob(std::vector<int>{1, 0, 1}) * t.prob(std::vector<int>{1, 1, 0})));
        CHECK(dual == doctest::Approx(explicit_ratio).epsilon(1e-9));
    }

    CHECK_THROWS_AS(outeraction(indep, [] {
                        InteractionQuery q;
                        q.target = {0};
                        q.universe = {0, 1, 2};
                        q.background = {1, 1};
                        return q;
                    }()),
                    InvalidArgument);
}

TEST_CASE("j quantities on the noisy gates") {
    const double p = 0.23, eps = 0.02;
    const double unit = 4.0 * std::log(p / eps);
    const std::vector<int> uni{0, 1, 2};

    auto org = gate_table({Gate::Or, p, eps});
    CHECK(j_quantity(org, 0, uni) == doctest::Approx(-unit).epsilon(1e-12));
    auto norg = gate_table({Gate::Nor, p, eps});
    CHECK(j_quantity(norg, 0, uni) == doctest::Approx(unit).epsilon(1e-12));
    auto andg = gate_table({Gate::And, p, eps});
    CHECK(j_quantity(andg, 2, uni) == doctest::Approx(0.75 * unit).epsilon(1e-12));

    auto xnor = gate_table({Gate::Xnor, p, eps});
    CHECK(j_bar(xnor, uni) ==
          doctest::Approx(27.0 / 8.0 * unit * unit * unit).epsilon(1e-12));
    CHECK(j_bar(org, uni) == doctest::Approx(-0.75 * unit * unit * unit).epsilon(1e-12));
    CHECK(j_bar(independent_bits(3), uni) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("dice decomposition") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        auto t = random_table(rng, {2, 2, 2}, 0.05);
        const double three = mfi(t, query({0, 1, 2}, {0, 1, 2})).value;
        const auto pairs = dice_decomposition(t, std::vector<int>{0, 1, 2});
        for (const auto& pair : pairs)
            CHECK(pair.at_one - pair.at_zero == doctest::Approx(three).epsilon(1e-9));
    }

    const double p = 0.23, eps = 0.02;
    auto xorg = gate_table({Gate::Xor, p, eps});
    const auto pairs = dice_decomposition(xorg, std::vector<int>{0, 1, 2});
    CHECK(pairs[2].at_one - pairs[2].at_zero ==
          doctest::Approx(-4.0 * std::log(p / eps)).epsilon(1e-12));

    auto indep = independent_bits(3);
    for (const auto& pair : dice_decomposition(indep, std::vector<int>{0, 1, 2})) {
        CHECK(pair.at_one == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(pair.at_zero == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("surprisal decomposes into interactions") {
    Rng rng(111);
    // Empty subset: just the background log-probability.
    auto t = random_table(rng, {2, 2, 2}, 0.05);
    CHECK(surprisal_from_interactions(t, {}, std::vector<int>{0, 1, 2}) ==
          doctest::Approx(std::log(t.prob(std::vector<int>{0, 0, 0}))).epsilon(1e-12));

    for (int trial = 0; trial < 25; ++trial) {
        auto u = random_table(rng, {2, 2, 2}, 0.05);
        CHECK(surprisal_from_interactions(u, std::vector<int>{0, 1}, std::vector<int>{0, 1, 2}) ==
              doctest::Approx(std::log(u.prob(std::vector<int>{1, 1, 0}))).epsilon(1e-9));
    }

    // Independent fair bits: -n ln 2 overall, with vanishing multi-point terms.
    auto indep = independent_bits(3);
    CHECK(surprisal_from_interactions(indep, std::vector<int>{0, 1, 2},
                                      std::vector<int>{0, 1, 2}) ==
          doctest::Approx(-3.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("commutative diagram corner: eval then invert is the interaction") {
    Rng rng(131);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = random_table(rng, {2, 2, 2}, 0.05);
        const double lhs = mfi(t, query({0, 1}, {0, 1, 2})).value;
        const double rhs =
            std::log(t.prob(std::vector<int>{1, 1, 0}) * t.prob(std::vector<int>{0, 0, 0}) /
                     (t.prob(std::vector<int>{1, 0, 0}) * t.prob(std::vector<int>{0, 1, 0})));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("categorical interactions reduce to mfi on binary tables") {
    Rng rng(151);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = random_table(rng, {2, 2, 2}, 0.05);
        CategoricalTransition tr;
        tr.vars = {0, 1, 2};
        tr.steps = {{0, 1}, {0, 1}, {0, 1}};
        CHECK(categorical_interaction(t, tr, std::vector<int>{0, 1, 2}) ==
              doctest::Approx(mfi(t, query({0, 1, 2}, {0, 1, 2})).value).epsilon(1e-12));
        CategoricalTransition pair;
        pair.vars = {0, 2};
        pair.steps = {{0, 1}, {0, 1}};
        CHECK(categorical_interaction(t, pair, std::vector<int>{0, 1, 2}) ==
              doctest::Approx(mfi(t, query({0, 2}, {0, 1, 2})).value).epsilon(1e-12));
    }
}

TEST_CASE("categorical transitivity") {
    Rng rng(161);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = random_table(rng, {3, 3}, 0.05);
        auto value = [&](int x0, int x1, int y0, int y1) {
            CategoricalTransition tr;
            tr.vars = {0, 1};
            tr.steps = {{x0, x1}, {y0, y1}};
            return categorical_interaction(t, tr, std::vector<int>{0, 1});
        };
        CHECK(value(0, 2, 0, 1) ==
              doctest::Approx(value(0, 1, 0, 1) + value(1, 2, 0, 1)).epsilon(1e-9));
    }
}

TEST_CASE("categorical sweep on a uniform arity-4 triple") {
    JointTable uniform({"X", "Y", "Z"}, {4, 4, 4}, std::vector<double>(64, 1.0 / 64.0));
    const auto sweep = categorical_sweep(uniform, std::vector<int>{0, 1, 2});
    CHECK(sweep.total == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(!sweep.two_valued);
}

TEST_CASE("interaction report serialisation") {
    JointTable t({"X", "Y"}, {2, 2}, {0.4, 0.1, 0.1, 0.4});
    const auto rep = mfi(t, query({0, 1}, {0, 1}));
    const auto j = rep.to_json(t.names());
    CHECK(j["target"] == nlohmann::ordered_json::array({"X", "Y"}));
    CHECK(j["lattice"] == "primal");
    CHECK(j["unit"] == "nats");
}
