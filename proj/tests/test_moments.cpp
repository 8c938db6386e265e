#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "smoothlab/brwre.hpp"
#include "smoothlab/moments.hpp"
#include "support/fixtures.hpp"

using namespace smoothlab;

namespace {
// Hand-expanded values for the drift-positive reference law
// (0.5,(1.8)), (0.5,(0.1,0.1)).
const double kC1Ref = 0.5 * 1.8 * std::log(1.8) * std::log(1.8);
const double kC2Ref = 0.5 * 1.8 * std::log(1.8) + 0.5 * 0.2 * std::abs(std::log(0.2));
const double kKappaRef = 0.5 * 1.8 * std::log(1.8) + 0.5 * 2.0 * 0.1 * std::log(0.1);
}  // namespace

TEST_CASE("quenched_mean examples") {
    CHECK(quenched_mean(fixtures::det_split_state()) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(quenched_mean(EnvState::burst_state("b")) == 1.0);
    CHECK(quenched_mean(EnvState::finite_discrete("unit", {{1.0, WeightVector({1.0})}})) == 1.0);
}

TEST_CASE("moment_c1: log+ vanishes when every weight is <= 1") {
    CHECK(moment_c1(*fixtures::det_split_law()).value.value() == 0.0);
    CHECK(moment_c1(*fixtures::burst_law()).value.value() == 0.0);
}

TEST_CASE("moment_c1 on the drift-positive reference law") {
    const MomentValue v = moment_c1(*fixtures::drift_pos_law());
    CHECK(v.value.value() == doctest::Approx(kC1Ref).epsilon(1e-14));
    CHECK(v.method == MomentMethod::Exact);
    CHECK(kC1Ref == doctest::Approx(0.310944).epsilon(1e-5));
}

TEST_CASE("moment_c2: deterministic unit mass gives zero") {
    CHECK(moment_c2(*fixtures::det_split_law()).value.value() == 0.0);
}

TEST_CASE("moment_c2 on the drift-positive reference law") {
    const MomentValue v = moment_c2(*fixtures::drift_pos_law());
    CHECK(v.value.value() == doctest::Approx(kC2Ref).epsilon(1e-14));
    CHECK(kC2Ref == doctest::Approx(0.689952).epsilon(1e-5));
}

TEST_CASE("moment_c2 of the burst family diverges with a series tag") {
    const MomentValue v = moment_c2(*fixtures::burst_law());
    CHECK(v.value.is_pos_inf());
    CHECK(v.divergent_series);
    CHECK(v.method == MomentMethod::Series);
}

TEST_CASE("kappa examples") {
    CHECK(kappa_weights(*fixtures::det_split_law()).value.value() ==
          doctest::Approx(-std::numbers::ln2).epsilon(1e-14));
    // Burst: series to k = 60 with the Euler-Maclaurin tail, within 1e-6
    // (actual agreement ~1e-10).
    const MomentValue burst = kappa_weights(*fixtures::burst_law());
    CHECK(burst.method == MomentMethod::Series);
    CHECK(burst.value.value() == doctest::Approx(-std::numbers::ln2).epsilon(1e-9));
    CHECK(std::abs(burst.value.value() + std::numbers::ln2) < 1e-6);
    const MomentValue drift = kappa_weights(*fixtures::drift_pos_law());
    CHECK(drift.value.value() == doctest::Approx(kKappaRef).epsilon(1e-14));
    CHECK(kKappaRef == doctest::Approx(0.298749).epsilon(1e-5));
}

TEST_CASE("classification of the three reference regimes") {
    CHECK(classify(*fixtures::det_split_law()).verdict == LawClass::UNIQUE_L1);
    CHECK(classify(*fixtures::drift_pos_law()).verdict == LawClass::NO_L1_DRIFT);
    const Verdict burst = classify(*fixtures::burst_law());
    CHECK(burst.verdict == LawClass::NO_L1_XLOGX);
    CHECK(std::find(burst.flags.begin(), burst.flags.end(), "divergent-series") !=
          burst.flags.end());
    CHECK(classify(*fixtures::theorem1_two_state_law()).verdict == LawClass::UNIQUE_L1);
}

TEST_CASE("classification is deterministic on exact laws") {
    for (int i = 0; i < 3; ++i)
        CHECK(classify(*fixtures::theorem1_two_state_law()).verdict == LawClass::UNIQUE_L1);
}

TEST_CASE("kappa = -inf with finite c1, c2 classifies UNIQUE_L1 with a flag") {
    MomentReport rep;
    rep.c1.value = ExtReal::finite(0.1);
    rep.c1.certified_finite = true;
    rep.c2.value = ExtReal::finite(0.2);
    rep.c2.certified_finite = true;
    rep.kappa.value = ExtReal::neg_inf();
    const Verdict v = classify_from_report(rep);
    CHECK(v.verdict == LawClass::UNIQUE_L1);
    CHECK(std::find(v.flags.begin(), v.flags.end(), "literal-(c3)") != v.flags.end());
}

TEST_CASE("Monte Carlo kappa straddling zero yields INCONCLUSIVE") {
    MomentReport rep;
    rep.c1.value = ExtReal::finite(0.0);
    rep.c1.certified_finite = true;
    rep.c2.value = ExtReal::finite(0.0);
    rep.c2.certified_finite = true;
    rep.kappa.value = ExtReal::finite(0.001);
    rep.kappa.method = MomentMethod::MonteCarlo;
    rep.kappa.std_error = 0.01;
    const Verdict v = classify_from_report(rep);
    CHECK(v.verdict == LawClass::INCONCLUSIVE);
    CHECK(std::find(v.flags.begin(), v.flags.end(), "kappa-ci-straddles-zero") != v.flags.end());
}

TEST_CASE("indeterminate kappa yields INCONCLUSIVE") {
    MomentReport rep;
    rep.kappa.value = ExtReal::indeterminate();
    CHECK(classify_from_report(rep).verdict == LawClass::INCONCLUSIVE);
}

TEST_CASE("permuting weight vectors leaves the moments unchanged") {
    Xoshiro256pp meta(555);
    for (int trial = 0; trial < 5; ++trial) {
        const auto law = fixtures::random_finite_law(meta);
        // Rebuild with each outcome's weights reversed.
        std::vector<double> probs;
        std::vector<EnvState> states;
        for (std::size_t s = 0; s < law->size(); ++s) {
            probs.push_back(law->prob(s));
            std::vector<WeightedOutcome> outs;
            for (const auto& o : law->state(s).outcomes()) {
                std::vector<double> w(o.weights.begin(), o.weights.end());
                std::reverse(w.begin(), w.end());
                outs.push_back({o.p, WeightVector(std::move(w))});
            }
            states.push_back(EnvState::finite_discrete(law->state(s).id() + "r", std::move(outs)));
        }
        const EnvironmentLaw perm(std::move(probs), std::move(states));
        CHECK(moment_c1(perm).value.value() ==
              doctest::Approx(moment_c1(*law).value.value()).epsilon(1e-13));
        CHECK(moment_c2(perm).value.value() ==
              doctest::Approx(moment_c2(*law).value.value()).epsilon(1e-13));
        CHECK(kappa_weights(perm).value.value() ==
              doctest::Approx(kappa_weights(*law).value.value()).epsilon(1e-13));
    }
}

TEST_CASE("kappa bound: kappa <= E[sum y log+ y] when both finite") {
    Xoshiro256pp meta(77);
    for (int trial = 0; trial < 10; ++trial) {
        const auto law = fixtures::random_finite_law(meta);
        double upper = 0.0;  // E[sum y log+ y] by direct summation
        for (std::size_t s = 0; s < law->size(); ++s)
            for (const auto& o : law->state(s).outcomes())
                for (double y : o.weights)
                    if (y > 1.0) upper += law->prob(s) * o.p * y * std::log(y);
        CHECK(kappa_weights(*law).value.value() <= upper + 1e-12);
    }
}

TEST_CASE("Monte Carlo kappa agrees with the closed form on a Gaussian tilted law") {
    const auto brw = fixtures::binary_gaussian_law();
    const auto induced = induce_weight_law(*brw, 0.8);
    const MomentValue exact = kappa_weights(*induced);
    CHECK(exact.method == MomentMethod::Exact);
    const MomentValue mc = kappa_weights_mc(*induced, 200000, 99);
    CHECK(std::abs(mc.value.value() - exact.value.value()) <= 4.0 * mc.std_error);
    CHECK(mc.std_error > 0.0);
}

TEST_CASE("tilted Gaussian c1/c2 come back as Monte Carlo with certificates") {
    const auto induced = induce_weight_law(*fixtures::binary_gaussian_law(), 0.8);
    MomentOptions opt;
    opt.mc_budget = 100000;
    opt.seed = 5;
    const MomentValue c1 = moment_c1(*induced, opt);
    CHECK(c1.method == MomentMethod::MonteCarlo);
    CHECK(c1.certified_finite);
    CHECK(c1.value.value() >= 0.0);
    const MomentValue c2 = moment_c2(*induced, opt);
    CHECK(c2.method == MomentMethod::MonteCarlo);
    CHECK(c2.value.value() > 0.0);
    // Classification still lands decisively thanks to the exact kappa.
    const Verdict v = classify(*induced, opt);
    CHECK(v.verdict == LawClass::UNIQUE_L1);
}
