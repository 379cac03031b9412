#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hoi/experiments.hpp"
#include "hoi/info_measures.hpp"
#include "test_support.hpp"

using namespace hoi;
using hoi::test::independent_bits;
using hoi::test::random_table;

namespace {

constexpr double kLn2 = 0.6931471805599453;

JointTable identical_bits(int n) {
    // X0 = X1 = ... = X{n-1}, each marginal fair.
    std::vector<double> p(std::size_t{1} << n, 0.0);
    p.front() = 0.5;
    p.back() = 0.5;
    std::vector<std::string> names(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) names[static_cast<std::size_t>(i)] = "v" + std::to_string(i);
    return JointTable(names, std::vector<int>(static_cast<std::size_t>(n), 2), p);
}

}  // namespace

TEST_CASE("entropy basics and gate values") {
    auto bit = independent_bits(1);
    CHECK(entropy(bit, std::vector<int>{0}) == doctest::Approx(1.0));
    CHECK(entropy(bit, std::vector<int>{}) == doctest::Approx(0.0));

    auto xnor = gate_truth_uniform(Gate::Xnor);
    CHECK(entropy(xnor, std::vector<int>{0, 1, 2}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(entropy(xnor, std::vector<int>{0, 2}) == doctest::Approx(2.0).epsilon(1e-12));

    auto andg = gate_truth_uniform(Gate::And);
    // -(3/4 log2 3/4 + 1/4 log2 1/4) = 2 - (3/4) log2 3
    const double expected = 2.0 - 0.75 * std::log2(3.0);
    CHECK(entropy(andg, std::vector<int>{2}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(entropy(andg, std::vector<int>{2}) > 0.0);  // standard nonnegative entropy
}

TEST_CASE("mutual information (co-information)") {
    CHECK(mutual_information(identical_bits(2), std::vector<int>{0, 1}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    auto xorg = gate_truth_uniform(Gate::Xor);
    CHECK(mutual_information(xorg, std::vector<int>{0, 1, 2}) ==
          doctest::Approx(-1.0).epsilon(1e-12));
    auto andg = gate_truth_uniform(Gate::And);
    CHECK(mutual_information(andg, std::vector<int>{0, 1, 2}) ==
          doctest::Approx(1.0 - 0.75 * std::log2(3.0)).epsilon(1e-12));
    CHECK(mutual_information(andg, std::vector<int>{0, 1, 2}) ==
          doctest::Approx(-0.189).epsilon(1e-3));

    // Singleton co-information is the marginal entropy.
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = random_table(rng, {2, 2, 2});
        for (int v = 0; v < 3; ++v)
            CHECK(mutual_information(t, std::vector<int>{v}) ==
                  doctest::Approx(entropy(t, std::vector<int>{v})).epsilon(1e-12));
    }
}

TEST_CASE("total correlation") {
    CHECK(total_correlation(independent_bits(3), std::vector<int>{0, 1, 2}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(total_correlation(identical_bits(2), std::vector<int>{0, 1}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    auto xorg = gate_truth_uniform(Gate::Xor);
    CHECK(total_correlation(xorg, std::vector<int>{0, 1, 2}) ==
          doctest::Approx(1.0).epsilon(1e-12));  // 3 - 2
}

TEST_CASE("dual mutual information") {
    const std::vector<int> uni{0, 1, 2};
    // MI*(empty) = MI(universe).
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = random_table(rng, {2, 2, 2});
        CHECK(dual_mutual_information(t, std::vector<int>{}, uni) ==
              doctest::Approx(mutual_information(t, uni)).epsilon(1e-12));
    }
    // Independent bits: every dual MI vanishes.
    auto indep = independent_bits(3);
    CHECK(dual_mutual_information(indep, std::vector<int>{0}, uni) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // Perfectly identical bits: 1 - 1 - 1 + 1 = 0.
    CHECK(dual_mutual_information(identical_bits(3), std::vector<int>{0}, uni) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // The singleton leg: MI*(X) = MI(universe) - MI(universe minus X).
    for (int trial = 0; trial < 10; ++trial) {
        auto t = random_table(rng, {2, 2, 2, 2});
        const std::vector<int> u4{0, 1, 2, 3};
        for (int v = 0; v < 4; ++v) {
            std::vector<int> others;
            for (int w = 0; w < 4; ++w)
                if (w != v) others.push_back(w);
            CHECK(dual_mutual_information(t, std::vector<int>{v}, u4) ==
                  doctest::Approx(mutual_information(t, u4) - mutual_information(t, others))
                      .epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(dual_mutual_information(indep, std::vector<int>{0}, std::vector<int>{1, 2}),
                    InvalidArgument);
}

TEST_CASE("generalised pointwise mutual information") {
    auto indep = independent_bits(3);
    CHECK(pointwise_mi(indep, std::vector<int>{1, 0, 1}, std::vector<int>{0, 1}) ==
          doctest::Approx(0.0).epsilon(1e-12));

    CHECK(pointwise_mi(identical_bits(2), std::vector<int>{1, 1}, std::vector<int>{0, 1}) ==
          doctest::Approx(kLn2).epsilon(1e-12));

    // Singleton: the single surviving term is the marginal surprisal.
    Rng rng(17);
    auto t = random_table(rng, {2, 2}, 0.05);
    const auto marginal = t.marginalize(std::vector<int>{0});
    CHECK(pointwise_mi(t, std::vector<int>{1, 0}, std::vector<int>{0}) ==
          doctest::Approx(-std::log(marginal.prob(std::vector<int>{1}))).epsilon(1e-12));

    JointTable zero({"a", "b"}, {2, 2}, {0.5, 0.5, 0.0, 0.0});
    CHECK_THROWS_AS(pointwise_mi(zero, std::vector<int>{1, 0}, std::vector<int>{0, 1}),
                    ZeroProbability);
}

TEST_CASE("expectation of pointwise mi is co-information") {
    Rng rng(23);
    for (const auto& arities : {std::vector<int>{2, 2}, {2, 2, 2}, {2, 2, 2, 2}}) {
        auto t = random_table(rng, arities, 0.02);
        std::vector<int> subset(arities.size());
        for (std::size_t i = 0; i < arities.size(); ++i) subset[i] = static_cast<int>(i);
        double acc = 0.0;
        for (std::size_t idx = 0; idx < t.state_count(); ++idx)
            acc += t.prob_at(idx) * pointwise_mi(t, t.state_of(idx), subset);
        CHECK(acc == doctest::Approx(mutual_information(t, subset) * kLn2).epsilon(1e-9));
    }
}

TEST_CASE("entropy rebuilt from co-informations") {
    Rng rng(31);
    for (const auto& arities :
         {std::vector<int>{2, 2}, {2, 2, 2}, {2, 3, 2}, {2, 2, 2, 2}}) {
        auto t = random_table(rng, arities);
        std::vector<int> subset(arities.size());
        for (std::size_t i = 0; i < arities.size(); ++i) subset[i] = static_cast<int>(i);
        CHECK(entropy_from_mi(t, subset) ==
              doctest::Approx(entropy(t, subset)).epsilon(1e-9));
        // And on a strict sub-subset.
        CHECK(entropy_from_mi(t, std::vector<int>{0, 1}) ==
              doctest::Approx(entropy(t, std::vector<int>{0, 1})).epsilon(1e-9));
    }
}

TEST_CASE("pairwise bound on 3-variable co-information") {
    // The XOR triple attains the lower bound: conditional MIs are 1 bit.
    auto xorg = gate_truth_uniform(Gate::Xor);
    auto bounds = check_mi_bounds(xorg, std::vector<int>{0, 1, 2});
    CHECK(bounds.holds);
    CHECK(bounds.mi3 == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(bounds.lower == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(bounds.upper == doctest::Approx(0.0).epsilon(1e-12));
    for (double c : bounds.conditional) CHECK(c == doctest::Approx(1.0).epsilon(1e-12));

    auto indep = independent_bits(3);
    auto b0 = check_mi_bounds(indep, std::vector<int>{0, 1, 2});
    CHECK(b0.holds);
    CHECK(b0.mi3 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b0.upper == doctest::Approx(0.0).epsilon(1e-12));

    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = random_table(rng, {2, 2, 2});
        CHECK(check_mi_bounds(t, std::vector<int>{0, 1, 2}).holds);
    }
}

TEST_CASE("info report serialisation") {
    InfoReport r{{"A", "B"}, "MI", 1.0, "bits", nullptr};
    const auto j = r.to_json();
    CHECK(j["target"] == nlohmann::ordered_json::array({"A", "B"}));
    CHECK(j["quantity"] == "MI");
    CHECK(j["unit"] == "bits");
    CHECK(!j.contains("context"));
}
