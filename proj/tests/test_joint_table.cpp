#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hoi/joint_table.hpp"
#include "test_support.hpp"

using namespace hoi;
using hoi::test::independent_bits;
using hoi::test::random_table;

TEST_CASE("normalize turns weights into a distribution") {
    auto t = JointTable::from_weights({"x"}, {2}, {2.0, 2.0});
    CHECK(t.prob_at(0) == doctest::Approx(0.5));
    auto u = JointTable::from_weights({"x", "y"}, {2, 2}, {1, 1, 1, 1});
    for (std::size_t i = 0; i < 4; ++i) CHECK(u.prob_at(i) == doctest::Approx(0.25));
    auto v = JointTable::from_weights({"x"}, {2}, {3.0, 1.0});
    CHECK(v.prob_at(0) == doctest::Approx(0.75));
    CHECK(v.prob_at(1) == doctest::Approx(0.25));
    CHECK_THROWS_AS(JointTable::from_weights({"x"}, {2}, {0.0, 0.0}), DegenerateDistribution);
}

TEST_CASE("state indexing uses the last variable as fastest digit") {
    JointTable t({"a", "b", "c"}, {2, 3, 2},
                 std::vector<double>(12, 1.0 / 12.0));
    CHECK(t.index_of(std::vector<int>{0, 0, 0}) == 0);
    CHECK(t.index_of(std::vector<int>{0, 0, 1}) == 1);
    CHECK(t.index_of(std::vector<int>{0, 1, 0}) == 2);
    CHECK(t.index_of(std::vector<int>{1, 0, 0}) == 6);
    CHECK(t.state_of(9) == std::vector<int>{1, 1, 1});
}

TEST_CASE("marginalize") {
    // Independent fair bits.
    auto indep = independent_bits(2);
    auto mx = indep.marginalize(std::vector<int>{0});
    CHECK(mx.prob_at(0) == doctest::Approx(0.5));
    CHECK(mx.prob_at(1) == doctest::Approx(0.5));

    // Uniform over even-parity triples; any pair is uniform on 4 states.
    std::vector<double> xorp(8, 0.0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) xorp[static_cast<std::size_t>(4 * a + 2 * b + (a ^ b))] = 0.25;
    JointTable xor3({"A", "B", "C"}, {2, 2, 2}, xorp);
    auto mab = xor3.marginalize(std::vector<int>{0, 1});
    for (std::size_t i = 0; i < 4; ++i) CHECK(mab.prob_at(i) == doctest::Approx(0.25));

    // Keeping everything is the identity.
    auto same = xor3.marginalize(std::vector<int>{0, 1, 2});
    for (std::size_t i = 0; i < 8; ++i) CHECK(same.prob_at(i) == doctest::Approx(xor3.prob_at(i)));

    // Empty keep: the trivial one-entry table.
    auto none = xor3.marginalize(std::vector<int>{});
    CHECK(none.var_count() == 0);
    CHECK(none.state_count() == 1);
    CHECK(none.prob_at(0) == doctest::Approx(1.0));

    // Order of keep is preserved.
    auto swapped = xor3.marginalize(std::vector<int>{2, 0});
    CHECK(swapped.names() == std::vector<std::string>{"C", "A"});

    // Path independence on random tables.
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = random_table(rng, {2, 3, 2, 2});
        auto ab = t.marginalize(std::vector<int>{0, 1});
        auto a1 = ab.marginalize(std::vector<int>{0});
        auto a2 = t.marginalize(std::vector<int>{0});
        for (std::size_t i = 0; i < a1.state_count(); ++i)
            CHECK(a1.prob_at(i) == doctest::Approx(a2.prob_at(i)).epsilon(1e-12));
    }
}

TEST_CASE("condition") {
    Rng rng(99);
    auto t = random_table(rng, {2, 2, 2}, 0.05);
    auto cond = t.condition({{1, 0}});  // fix middle variable to 0
    CHECK(cond.var_count() == 2);
    // Hand renormalisation over the B = 0 slice.
    double mass = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) mass += t.prob(std::vector<int>{a, 0, c});
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
            CHECK(cond.prob(std::vector<int>{a, c}) ==
                  doctest::Approx(t.prob(std::vector<int>{a, 0, c}) / mass).epsilon(1e-12));

    // Empty conditioning is the identity.
    auto same = t.condition({});
    for (std::size_t i = 0; i < 8; ++i) CHECK(same.prob_at(i) == doctest::Approx(t.prob_at(i)));

    // Impossible event.
    JointTable degenerate({"a", "b"}, {2, 2}, {0.5, 0.5, 0.0, 0.0});
    CHECK_THROWS_AS(degenerate.condition({{0, 1}}), ZeroProbability);
}

TEST_CASE("surprisal and the zero policy") {
    auto uniform2 = independent_bits(2);
    CHECK(uniform2.surprisal(std::vector<int>{1, 0}) == doctest::Approx(std::log(4.0)));

    JointTable certain({"a"}, {2}, {1.0, 0.0});
    CHECK(certain.surprisal(std::vector<int>{0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(certain.surprisal(std::vector<int>{1}), ZeroProbability);
    CHECK(certain.surprisal(std::vector<int>{1}, 1e-12) ==
          doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("from_ising") {
    // No couplings: uniform.
    auto flat = JointTable::from_ising({}, 3);
    for (std::size_t i = 0; i < 8; ++i) CHECK(flat.prob_at(i) == doctest::Approx(0.125));

    // Single field: two-state Boltzmann ratio e^h.
    IsingParams field;
    field.couplings[0b1] = 0.9;
    auto one = JointTable::from_ising(field, 1);
    CHECK(one.prob(std::vector<int>{1}) / one.prob(std::vector<int>{0}) ==
          doctest::Approx(std::exp(0.9)));

    IsingParams bad;
    bad.couplings[0b100] = 1.0;
    CHECK_THROWS_AS(JointTable::from_ising(bad, 2), InvalidArgument);
    IsingParams empty_subset;
    empty_subset.couplings[0] = 1.0;
    CHECK_THROWS_AS(JointTable::from_ising(empty_subset, 2), InvalidArgument);
}

TEST_CASE("json round-trip is exact") {
    Rng rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = random_table(rng, {2, 2, 3});
        const auto text = t.to_json().dump();
        auto back = JointTable::from_json(nlohmann::json::parse(text));
        REQUIRE(back.state_count() == t.state_count());
        for (std::size_t i = 0; i < t.state_count(); ++i)
            CHECK(back.prob_at(i) == t.prob_at(i));  // bitwise equality
        CHECK(back.names() == t.names());
        CHECK(back.arities() == t.arities());
    }
    CHECK_THROWS_AS(JointTable::from_json(nlohmann::json::parse("{\"vars\":[]}")),
                    InvalidArgument);
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(JointTable({"a"}, {2}, {0.5, 0.6}), InvalidArgument);
    CHECK_THROWS_AS(JointTable({"a"}, {2}, {-0.1, 1.1}), InvalidArgument);
    CHECK_THROWS_AS(JointTable({"a"}, {2}, {0.5, 0.5, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(JointTable({"a", "b"}, {2}, {0.5, 0.5}), InvalidArgument);
    // 21 binary variables exceed the dense cap.
    std::vector<std::string> names(21, "x");
    for (int i = 0; i < 21; ++i) names[static_cast<std::size_t>(i)] += std::to_string(i);
    CHECK_THROWS_AS(JointTable(names, std::vector<int>(21, 2),
                               std::vector<double>(std::size_t{1} << 21, 0.0)),
                    InvalidArgument);
}
