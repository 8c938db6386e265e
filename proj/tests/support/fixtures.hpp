#pragma once

// Shared reference laws for the test suites. Values asserted against these
// fixtures are frozen from independent derivations (hand expansion, series,
// or the enumeration oracle), not from the code paths under test.

#include <cmath>
#include <memory>

#include "smoothlab/brwre.hpp"
#include "smoothlab/env_model.hpp"

namespace smoothlab::fixtures {

inline EnvState det_split_state() {
    return EnvState::finite_discrete("split", {{1.0, WeightVector({0.5, 0.5})}});
}

// Single-state law with the deterministic split (0.5, 0.5): e^{-u} is its
// exact fixed point.
inline LawPtr det_split_law() {
    return std::make_shared<const EnvironmentLaw>(std::vector<double>{1.0},
                                                  std::vector<EnvState>{det_split_state()});
}

// The drift-positive reference: single state, outcomes (0.5,(1.8)) and
// (0.5,(0.1,0.1)). kappa ~= +0.29875, c1 ~= 0.31094, c2 ~= 0.68995.
inline EnvState drift_pos_state() {
    return EnvState::finite_discrete(
        "kpos", {{0.5, WeightVector({1.8})}, {0.5, WeightVector({0.1, 0.1})}});
}

inline LawPtr drift_pos_law() {
    return std::make_shared<const EnvironmentLaw>(std::vector<double>{1.0},
                                                  std::vector<EnvState>{drift_pos_state()});
}

// Two-state Theorem-1 regime reference: kappa ~= -0.31196 < 0, c1, c2 finite,
// both states genuinely random (no deterministic split hiding a trivial
// fixed point).
inline LawPtr theorem1_two_state_law() {
    EnvState a = EnvState::finite_discrete(
        "a", {{0.5, WeightVector({1.2, 0.3})}, {0.5, WeightVector({0.5})}});
    EnvState b = EnvState::finite_discrete(
        "b", {{0.6, WeightVector({0.9, 0.6})}, {0.4, WeightVector({0.25})}});
    return std::make_shared<const EnvironmentLaw>(std::vector<double>{0.5, 0.5},
                                                  std::vector<EnvState>{std::move(a), std::move(b)});
}

// Extinction/doubling law from the operator examples: outcomes () and (2)
// with probability 1/2 each; H(e^{-u})(1) = 0.5 + 0.5 e^{-2}.
inline EnvState extinction_state() {
    return EnvState::finite_discrete("ext", {{0.5, WeightVector(std::vector<double>{})}, {0.5, WeightVector(std::vector<double>{2.0})}});
}

inline LawPtr extinction_law() {
    return std::make_shared<const EnvironmentLaw>(std::vector<double>{1.0},
                                                  std::vector<EnvState>{extinction_state()});
}

inline LawPtr burst_law() {
    return std::make_shared<const EnvironmentLaw>(
        std::vector<double>{1.0}, std::vector<EnvState>{EnvState::burst_state("burst")});
}

// Environment law whose annealed step distribution is the +-1 equal-mass
// walk: atoms log(1/e) and log(e) with mass 1/2 each require outcome
// probabilities e/4 (two children 1/e), 1/(2e) (one child e), remainder
// childless. Quenched mean (e/4)(2/e) + (1/(2e)) e = 1.
inline LawPtr pm1_walk_law() {
    const double e = std::exp(1.0);
    const double p1 = e / 4.0;
    const double p2 = 1.0 / (2.0 * e);
    EnvState s = EnvState::finite_discrete(
        "pm1", {{p1, WeightVector(std::vector<double>{1.0 / e, 1.0 / e})},
                {p2, WeightVector(std::vector<double>{e})},
                {1.0 - p1 - p2, WeightVector(std::vector<double>{})}});
    return std::make_shared<const EnvironmentLaw>(std::vector<double>{1.0},
                                                  std::vector<EnvState>{std::move(s)});
}

// Binary Gaussian branching random walk: every particle has exactly two
// N(0,1)-displaced children; m(theta) = 2 e^{theta^2/2}, kappa(theta) =
// log 2 - theta^2/2, critical theta* = sqrt(2 ln 2).
inline std::shared_ptr<const DisplacementState> binary_gaussian_state() {
    return std::make_shared<const DisplacementState>(
        "bg", std::vector<DisplacementOutcome>{
                  {1.0, {GaussianDisplacement{0.0, 1.0}, GaussianDisplacement{0.0, 1.0}}}});
}

inline BrwLawPtr binary_gaussian_law() {
    return std::make_shared<const BRWEnvironmentLaw>(
        std::vector<double>{1.0},
        std::vector<std::shared_ptr<const DisplacementState>>{binary_gaussian_state()});
}

// Two Gaussian states with sigma^2 in {1, 3}: kappa(theta) = log 2 - theta^2.
inline BrwLawPtr two_state_gaussian_law() {
    auto s1 = std::make_shared<const DisplacementState>(
        "g1", std::vector<DisplacementOutcome>{
                  {1.0, {GaussianDisplacement{0.0, 1.0}, GaussianDisplacement{0.0, 1.0}}}});
    auto s3 = std::make_shared<const DisplacementState>(
        "g3", std::vector<DisplacementOutcome>{
                  {1.0, {GaussianDisplacement{0.0, 3.0}, GaussianDisplacement{0.0, 3.0}}}});
    return std::make_shared<const BRWEnvironmentLaw>(
        std::vector<double>{0.5, 0.5},
        std::vector<std::shared_ptr<const DisplacementState>>{std::move(s1), std::move(s3)});
}

// Atom-displacement mirror of the Theorem-1 two-state law: at theta = 1 the
// induced weights reproduce the weight-space fixture exactly (each state has
// m(1) = 1).
inline BrwLawPtr two_state_atom_brw_law() {
    auto a = std::make_shared<const DisplacementState>(
        "wa", std::vector<DisplacementOutcome>{
                  {0.5, {AtomDisplacement{-std::log(1.2)}, AtomDisplacement{-std::log(0.3)}}},
                  {0.5, {AtomDisplacement{-std::log(0.5)}}}});
    auto b = std::make_shared<const DisplacementState>(
        "wb", std::vector<DisplacementOutcome>{
                  {0.6, {AtomDisplacement{-std::log(0.9)}, AtomDisplacement{-std::log(0.6)}}},
                  {0.4, {AtomDisplacement{-std::log(0.25)}}}});
    return std::make_shared<const BRWEnvironmentLaw>(
        std::vector<double>{0.5, 0.5},
        std::vector<std::shared_ptr<const DisplacementState>>{std::move(a), std::move(b)});
}

// Random valid FiniteDiscrete law: weights rescaled so every state has
// quenched mean one; resampled until supercritical.
inline LawPtr random_finite_law(Xoshiro256pp& rng, std::size_t max_states = 3) {
    for (;;) {
        const std::size_t n_states = 1 + static_cast<std::size_t>(rng.next() % max_states);
        std::vector<double> probs(n_states, 0.0);
        double ptot = 0.0;
        for (auto& p : probs) {
            p = 0.1 + rng.uniform01();
            ptot += p;
        }
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < n_states; ++i) {
            probs[i] /= ptot;
            cum += probs[i];
        }
        probs[n_states - 1] = 1.0 - cum;
        std::vector<EnvState> states;
        for (std::size_t s = 0; s < n_states; ++s) {
            const std::size_t n_out = 1 + static_cast<std::size_t>(rng.next() % 3);
            std::vector<WeightedOutcome> outcomes(n_out);
            double qtot = 0.0;
            for (auto& o : outcomes) {
                o.p = 0.1 + rng.uniform01();
                qtot += o.p;
            }
            double qcum = 0.0;
            for (std::size_t k = 0; k + 1 < n_out; ++k) {
                outcomes[k].p /= qtot;
                qcum += outcomes[k].p;
            }
            outcomes[n_out - 1].p = 1.0 - qcum;
            double mean = 0.0;
            std::vector<std::vector<double>> raw(n_out);
            for (std::size_t k = 0; k < n_out; ++k) {
                const std::size_t children = 1 + static_cast<std::size_t>(rng.next() % 3);
                raw[k].resize(children);
                double sum = 0.0;
                for (auto& y : raw[k]) {
                    y = 0.05 + 1.95 * rng.uniform01();
                    sum += y;
                }
                mean += outcomes[k].p * sum;
            }
            for (std::size_t k = 0; k < n_out; ++k) {
                for (auto& y : raw[k]) y /= mean;
                outcomes[k].weights = WeightVector(raw[k]);
            }
            states.push_back(
                EnvState::finite_discrete("s" + std::to_string(s), std::move(outcomes)));
        }
        auto law = std::make_shared<const EnvironmentLaw>(std::move(probs), std::move(states));
        if (validate_law(*law).pass) return law;
    }
}

}  // namespace smoothlab::fixtures
