#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "hoi/experiments.hpp"
#include "hoi/info_measures.hpp"
#include "hoi/interactions.hpp"
#include "test_support.hpp"

using namespace hoi;

namespace {

InteractionQuery query(std::vector<int> target, std::vector<int> universe) {
    InteractionQuery q;
    q.target = std::move(target);
    q.universe = std::move(universe);
    return q;
}

double phi125() { return 0.5 * std::erfc(-1.25 / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("gate tables put p on the truth table") {
    const double p = 0.23, eps = 0.02;
    auto andg = gate_table({Gate::And, p, eps});
    CHECK(andg.prob(std::vector<int>{0, 0, 0}) == doctest::Approx(p));
    CHECK(andg.prob(std::vector<int>{1, 1, 1}) == doctest::Approx(p));
    CHECK(andg.prob(std::vector<int>{1, 1, 0}) == doctest::Approx(eps));
    CHECK(andg.prob(std::vector<int>{0, 0, 1}) == doctest::Approx(eps));

    CHECK_THROWS_AS(gate_table({Gate::And, 0.02, 0.23}), InvalidArgument);
    CHECK_THROWS_AS(gate_table({Gate::And, 0.3, 0.02}), InvalidArgument);
}

TEST_CASE("table 1 pattern of 3-point interactions") {
    const double p = 0.23, eps = 0.02;
    const double unit = 4.0 * std::log(p / eps);
    const std::vector<int> uni{0, 1, 2};
    auto value = [&](Gate g) { return mfi(gate_table({g, p, eps}), query(uni, uni)).value; };
    CHECK(value(Gate::Xnor) == doctest::Approx(unit).epsilon(1e-12));
    CHECK(value(Gate::Xor) == doctest::Approx(-unit).epsilon(1e-12));
    CHECK(value(Gate::And) == doctest::Approx(0.5 * unit).epsilon(1e-12));
    CHECK(value(Gate::Or) == doctest::Approx(-0.5 * unit).epsilon(1e-12));
    CHECK(value(Gate::Nand) == doctest::Approx(-0.5 * unit).epsilon(1e-12));
    CHECK(value(Gate::Nor) == doctest::Approx(0.5 * unit).epsilon(1e-12));
}

TEST_CASE("complement gates negate every output-involving interaction") {
    const double p = 0.21, eps = 0.04;
    const std::vector<int> uni{0, 1, 2};
    const std::pair<Gate, Gate> pairs[]{
        {Gate::Xnor, Gate::Xor}, {Gate::And, Gate::Nand}, {Gate::Or, Gate::Nor}};
    for (const auto& [g, neg] : pairs) {
        auto tg = gate_table({g, p, eps});
        auto tn = gate_table({neg, p, eps});
        for (const auto& target :
             {std::vector<int>{2}, {0, 2}, {1, 2}, {0, 1, 2}}) {
            CHECK(mfi(tg, query(target, uni)).value ==
                  doctest::Approx(-mfi(tn, query(target, uni)).value).epsilon(1e-9));
        }
    }
}

TEST_CASE("synergistic gates carry the strongest interaction") {
    const double p = 0.23, eps = 0.02;
    const std::vector<int> uni{0, 1, 2};
    const double strong =
        std::abs(mfi(gate_table({Gate::Xnor, p, eps}), query(uni, uni)).value);
    for (Gate g : {Gate::And, Gate::Or, Gate::Nand, Gate::Nor})
        CHECK(strong > std::abs(mfi(gate_table({g, p, eps}), query(uni, uni)).value));
}

TEST_CASE("3-input gates: the 4-point hierarchy") {
    const double p = 0.105, eps = 0.02;  // 8(p + eps) = 1
    const std::vector<int> uni{0, 1, 2, 3};
    const double i4 = mfi(gate_table({Gate::Xor3, p, eps}), query(uni, uni)).value;
    CHECK(i4 == doctest::Approx(8.0 * std::log(p / eps)).epsilon(1e-9));
    CHECK(mfi(gate_table({Gate::And3, p, eps}), query(uni, uni)).value ==
          doctest::Approx(i4 / 4.0).epsilon(1e-9));
    CHECK(mfi(gate_table({Gate::Or3, p, eps}), query(uni, uni)).value ==
          doctest::Approx(i4 / 4.0).epsilon(1e-9));
}

TEST_CASE("gate report columns") {
    const double p = 0.23, eps = 0.02;
    const double unit = 4.0 * std::log(p / eps);
    const auto rows = gate_report({Gate::Xnor, Gate::Or}, p, eps);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].mi_abc == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rows[0].i_star_a == doctest::Approx(0.5 * unit).epsilon(1e-12));
    CHECK(rows[0].j_a == doctest::Approx(1.5 * unit).epsilon(1e-12));
    CHECK(rows[1].i_star_a == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rows[1].j_c == doctest::Approx(-0.75 * unit).epsilon(1e-12));
    CHECK(rows[1].h_ac == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("simulation basics") {
    CausalDag chain;
    chain.nodes = 3;
    chain.edges = {{0, 1}, {1, 2}};
    chain.sigma = 0.0;
    chain.root_p = 0.5;
    const auto noiseless = simulate_dag(chain, 500, 4);
    for (std::size_t r = 0; r < noiseless.rows; ++r) {
        CHECK(noiseless.at(r, 1) == noiseless.at(r, 0));
        CHECK(noiseless.at(r, 2) == noiseless.at(r, 0));
    }

    chain.sigma = 0.4;
    const auto a = simulate_dag(chain, 1000, 9);
    const auto b = simulate_dag(chain, 1000, 9);
    CHECK(a.values == b.values);
    const auto c = simulate_dag(chain, 1000, 10);
    CHECK(a.values != c.values);

    CausalDag cyclic;
    cyclic.nodes = 2;
    cyclic.edges = {{0, 1}, {1, 0}};
    CHECK_THROWS_AS(simulate_dag(cyclic, 10, 1), InvalidArgument);
}

TEST_CASE("exact dag table matches the simulator") {
    CausalDag dag;
    dag.nodes = 3;
    dag.edges = {{0, 1}, {2, 1}};
    dag.dynamics = Dynamics::Multiplicative;
    dag.sigma = 0.4;
    dag.root_p = 0.5;
    const auto exact = exact_dag_table(dag);
    const auto samples = simulate_dag(dag, 60000, 2024);
    const auto empirical = samples.empirical_table();
    for (std::size_t i = 0; i < exact.state_count(); ++i)
        CHECK(empirical.prob_at(i) == doctest::Approx(exact.prob_at(i)).epsilon(0).scale(1).epsilon(0.02));

    // Chain: the adjacent interaction has the threshold-crossing closed form.
    CausalDag chain;
    chain.nodes = 3;
    chain.edges = {{0, 1}, {1, 2}};
    chain.sigma = 0.4;
    const auto table = exact_dag_table(chain);
    const double expected = 2.0 * std::log(phi125() / (1.0 - phi125()));
    CHECK(mfi(table, query({0, 1}, {0, 1, 2})).value ==
          doctest::Approx(expected).epsilon(1e-9));
    // And the non-adjacent pair and triple vanish exactly.
    CHECK(mfi(table, query({0, 2}, {0, 1, 2})).value == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(mfi(table, query({0, 1, 2}, {0, 1, 2})).value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("dyadic and triadic supports match the reference states and bit rules") {
    const auto dy = dytri_support(DyTri::Dyadic);
    CHECK(std::find(dy.begin(), dy.end(), std::array<int, 3>{1, 2, 3}) != dy.end());
    CHECK(std::find(dy.begin(), dy.end(), std::array<int, 3>{2, 3, 1}) != dy.end());
    const auto tri = dytri_support(DyTri::Triadic);
    CHECK(std::find(tri.begin(), tri.end(), std::array<int, 3>{1, 3, 3}) != tri.end());
    CHECK(std::find(tri.begin(), tri.end(), std::array<int, 3>{3, 3, 1}) != tri.end());

    auto sorted = [](std::array<std::array<int, 3>, 8> s) {
        std::sort(s.begin(), s.end());
        return s;
    };
    CHECK(dytri_support_from_bits(DyTri::Dyadic) == sorted(dy));
    CHECK(dytri_support_from_bits(DyTri::Triadic) == sorted(tri));
}

TEST_CASE("dytri tables") {
    // eps -> 0 limit: eight states at 1/8.
    const auto limit = dytri_table({DyTri::Dyadic, 0.0});
    int support = 0;
    for (std::size_t i = 0; i < limit.state_count(); ++i)
        if (limit.prob_at(i) > 0) {
            CHECK(limit.prob_at(i) == doctest::Approx(0.125));
            ++support;
        }
    CHECK(support == 8);
    CHECK_THROWS_AS(dytri_table({DyTri::Dyadic, 0.125}), InvalidArgument);
}

TEST_CASE("dytri report") {
    const double eps = 1e-3;
    const auto rep = dytri_report(eps);
    const double p = (1.0 - 56.0 * eps) / 8.0;
    CHECK(rep.single_dyadic == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.single_triadic == doctest::Approx(std::log(eps / p)).epsilon(1e-9));
    CHECK(rep.sweep_dyadic == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(rep.sweep_triadic == doctest::Approx(64.0 * std::log(eps / p)).epsilon(1e-7));
    CHECK(rep.dy_p_exp == 0);
    CHECK(rep.dy_eps_exp == 0);
    CHECK(rep.tri_p_exp == -64);
    CHECK(rep.tri_eps_exp == 64);
    CHECK(rep.max_shannon_gap < 1e-9);
    CHECK_THROWS_AS(dytri_report(0.0), InvalidArgument);
}

TEST_CASE("dag report on a small run") {
    CausalDag chain;
    chain.nodes = 3;
    chain.edges = {{0, 1}, {1, 2}};
    chain.sigma = 0.4;
    chain.root_p = 0.5;
    const auto report = dag_report(chain, "chain", 5000, 60, 12345);
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].target == std::vector<int>{0, 1});
    CHECK(report.rows[0].interaction > 3.0);
    CHECK(report.rows[0].f < 0.05);
    CHECK(report.rows[0].pearson.has_value());
    CHECK(*report.rows[0].pearson > 0.5);
    CHECK(report.rows[3].target == std::vector<int>{0, 1, 2});
    CHECK(!report.rows[3].pearson.has_value());
    const auto j = report.to_json();
    CHECK(j["rows"].size() == 4);
    CHECK(j["rows"][3]["pearson"].is_null());
}

TEST_CASE("dag dynamics suite shapes") {
    const auto suite = dag_dynamics_suite();
    REQUIRE(suite.size() == 6);
    CHECK(suite[0].first == "chain");
    CHECK(suite[3].second.dynamics == Dynamics::Multiplicative);
    CHECK(suite[4].second.edges.size() == 3);
}
