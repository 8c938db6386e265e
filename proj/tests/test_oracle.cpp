#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "smoothlab/oracle.hpp"
#include "support/fixtures.hpp"

using namespace smoothlab;

TEST_CASE("deterministic split: phi_n(1) = e^-1 for every depth") {
    const auto seq = sample_env(fixtures::det_split_law(), 4, 1);
    for (std::size_t n = 0; n <= 4; ++n) {
        const auto t = exact_wn_transform(seq, {1.0}, n);
        CHECK(t.values[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    }
}

TEST_CASE("extinction/doubling law: nested hand evaluations") {
    // phi_1(u) = 0.5 + 0.5 e^{-2u}; the weight-2 outcome has a single child,
    // so phi_2(u) = 0.5 + 0.5 phi_1(2u).
    const auto seq = sample_env(fixtures::extinction_law(), 2, 1);
    const auto t1 = exact_wn_transform(seq, {1.0}, 1);
    CHECK(t1.values[0] == doctest::Approx(0.5 + 0.5 * std::exp(-2.0)).epsilon(1e-15));
    CHECK(0.5 + 0.5 * std::exp(-2.0) == doctest::Approx(0.56767).epsilon(1e-4));
    const auto t2 = exact_wn_transform(seq, {1.0}, 2);
    const double inner = 0.5 + 0.5 * std::exp(-4.0);
    CHECK(t2.values[0] == doctest::Approx(0.5 + 0.5 * inner).epsilon(1e-15));
}

TEST_CASE("transforms are nonincreasing in u with value 1 at u = 0") {
    const auto seq = sample_env(fixtures::theorem1_two_state_law(), 3, 9);
    std::vector<double> upts{0.0, 0.01, 0.1, 1.0, 5.0, 50.0};
    const auto t = exact_wn_transform(seq, upts, 3);
    CHECK(t.values[0] == 1.0);
    for (std::size_t i = 1; i < t.values.size(); ++i) {
        CHECK(t.values[i] <= t.values[i - 1]);
        CHECK(t.values[i] > 0.0);
    }
}

TEST_CASE("exact_wn_mean: valid atom laws give exactly one") {
    for (const auto& law : {fixtures::det_split_law(), fixtures::extinction_law(),
                            fixtures::theorem1_two_state_law()}) {
        const auto seq = sample_env(law, 3, 5);
        for (std::size_t n = 0; n <= 3; ++n)
            CHECK(exact_wn_mean(seq, n) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("exact_wn_mean: deliberately subcritical mean 0.9 gives 0.9^n") {
    // Validation is bypassed on purpose: the law is constructible, just not
    // mean-one.
    EnvState s = EnvState::finite_discrete("sub", {{0.5, WeightVector({0.9, 0.45})},
                                                   {0.5, WeightVector({0.45})}});
    auto law = std::make_shared<const EnvironmentLaw>(std::vector<double>{1.0},
                                                      std::vector<EnvState>{std::move(s)});
    CHECK_FALSE(validate_law(*law).pass);
    const auto seq = sample_env(law, 4, 2);
    for (std::size_t n = 0; n <= 4; ++n)
        CHECK(exact_wn_mean(seq, n) == doctest::Approx(std::pow(0.9, n)).epsilon(1e-12));
}

TEST_CASE("complexity guards") {
    const auto seq = sample_env(fixtures::det_split_law(), 8, 1);
    CHECK_THROWS_AS(exact_wn_transform(seq, {1.0}, 5), TooLarge);
    CHECK_THROWS_AS(exact_wn_mean(seq, 5), TooLarge);
    // 4 children in one outcome exceeds the per-outcome guard.
    EnvState wide = EnvState::finite_discrete(
        "wide", {{1.0, WeightVector({0.25, 0.25, 0.25, 0.25})}});
    auto wl = std::make_shared<const EnvironmentLaw>(std::vector<double>{1.0},
                                                     std::vector<EnvState>{std::move(wide)});
    CHECK_THROWS_AS(exact_wn_transform(sample_env(wl, 2, 1), {1.0}, 1), TooLarge);
    // Burst states have no finite outcome list.
    CHECK_THROWS_AS(exact_wn_transform(sample_env(fixtures::burst_law(), 2, 1), {1.0}, 1),
                    ContinuousState);
}

TEST_CASE("csv export") {
    const auto seq = sample_env(fixtures::det_split_law(), 2, 1);
    const auto t = exact_wn_transform(seq, {0.5, 1.0}, 2);
    std::ostringstream os;
    t.write_csv(os);
    CHECK(os.str().rfind("u,value\n", 0) == 0);
    CHECK(os.str().find("0.5,") != std::string::npos);
}
