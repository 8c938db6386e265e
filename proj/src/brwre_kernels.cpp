// Particle-simulation kernels. This translation unit is built with
// aggressive FP flags (see src/CMakeLists.txt); keep anything that relies on
// NaN/Inf semantics out of here.

#include <cmath>
#include <string>
#include <vector>

#include "smoothlab/brwre.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab {

namespace {

Trajectory simulate_one(const BRWEnvironmentLaw& law, double theta,
                        const std::vector<std::uint32_t>& seq_idx, std::size_t generations,
                        std::size_t cap, std::uint64_t seed) {
    Trajectory traj;
    traj.seed = seed;
    traj.W.reserve(generations + 1);
    traj.population.reserve(generations + 1);
    traj.log_normalizer.reserve(generations + 1);
    traj.W.push_back(1.0);
    traj.population.push_back(1);
    traj.log_normalizer.push_back(0.0);

    Xoshiro256pp rng(seed);
    std::vector<double> pos{0.0};
    std::vector<double> next;
    double log_norm = 0.0;

    for (std::size_t g = 0; g < generations; ++g) {
        const DisplacementState& state = law.state(seq_idx[g]);
        log_norm += std::log(state.m_theta(theta));
        if (pos.empty()) {
            traj.W.push_back(0.0);
            traj.population.push_back(0);
            traj.log_normalizer.push_back(log_norm);
            continue;
        }
        next.clear();
        const auto& outcomes = state.outcomes();
        const bool single_outcome = outcomes.size() == 1;
        for (const double parent : pos) {
            const std::size_t k = single_outcome ? 0 : state.sample_outcome(rng);
            const auto& children = outcomes[k].children;
            if (next.size() + children.size() > cap)
                throw CapExceeded("simulate: population exceeds cap " + std::to_string(cap) +
                                  " at generation " + std::to_string(g + 1));
            for (const auto& c : children) {
                if (is_atom(c)) {
                    next.push_back(parent + std::get<AtomDisplacement>(c).z);
                } else {
                    const auto& gd = std::get<GaussianDisplacement>(c);
                    next.push_back(parent + gd.mu + std::sqrt(gd.sigma2) * rng.normal());
                }
            }
        }
        pos.swap(next);
        double acc = 0.0;
        const double* p = pos.data();
        const std::size_t n = pos.size();
        for (std::size_t i = 0; i < n; ++i) acc += std::exp(-theta * p[i]);
        traj.W.push_back(acc * std::exp(-log_norm));
        traj.population.push_back(pos.size());
        traj.log_normalizer.push_back(log_norm);
    }
    return traj;
}

}  // namespace

Trajectory simulate(const BRWEnvironmentLaw& law, double theta, const BrwSequence& seq,
                    std::size_t generations, std::size_t cap, std::uint64_t seed, double delta) {
    if (generations > seq.idx.size())
        throw OutOfRange("simulate: generations exceed environment length");
    if (!theta_domain_check(law, theta, delta))
        throw EllipticityViolation("simulate: theta outside the elliptic domain");
    return simulate_one(law, theta, seq.idx, generations, cap, seed);
}

namespace {

std::vector<Trajectory> ensemble_impl(const BRWEnvironmentLaw& law, double theta,
                                      const BrwSequence& seq, std::size_t generations,
                                      std::size_t cap, std::uint64_t master_seed,
                                      std::size_t replicas, double delta, bool parallel) {
    if (generations > seq.idx.size())
        throw OutOfRange("run_ensemble: generations exceed environment length");
    if (!theta_domain_check(law, theta, delta))
        throw EllipticityViolation("run_ensemble: theta outside the elliptic domain");
    std::vector<Trajectory> out(replicas);
    std::vector<unsigned char> failed(replicas, 0);
    const long long nr = static_cast<long long>(replicas);
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long r = 0; r < nr; ++r) {
            const std::uint64_t s =
                derive_seed(master_seed, {std::string("replica"), static_cast<std::uint64_t>(r)});
            try {
                out[static_cast<std::size_t>(r)] =
                    simulate_one(law, theta, seq.idx, generations, cap, s);
            } catch (const CapExceeded&) {
                failed[static_cast<std::size_t>(r)] = 1;
            }
        }
    } else {
        for (long long r = 0; r < nr; ++r) {
            const std::uint64_t s =
                derive_seed(master_seed, {std::string("replica"), static_cast<std::uint64_t>(r)});
            try {
                out[static_cast<std::size_t>(r)] =
                    simulate_one(law, theta, seq.idx, generations, cap, s);
            } catch (const CapExceeded&) {
                failed[static_cast<std::size_t>(r)] = 1;
            }
        }
    }
    for (std::size_t r = 0; r < replicas; ++r)
        if (failed[r])
            throw CapExceeded("run_ensemble: replica " + std::to_string(r) +
                              " exceeded the population cap; the run must be discarded");
    return out;
}

}  // namespace

std::vector<Trajectory> run_ensemble(const BRWEnvironmentLaw& law, double theta,
                                     const BrwSequence& seq, std::size_t generations,
                                     std::size_t cap, std::uint64_t master_seed,
                                     std::size_t replicas, double delta) {
    return ensemble_impl(law, theta, seq, generations, cap, master_seed, replicas, delta, true);
}

std::vector<Trajectory> run_ensemble_serial(const BRWEnvironmentLaw& law, double theta,
                                            const BrwSequence& seq, std::size_t generations,
                                            std::size_t cap, std::uint64_t master_seed,
                                            std::size_t replicas, double delta) {
    return ensemble_impl(law, theta, seq, generations, cap, master_seed, replicas, delta, false);
}

}  // namespace smoothlab
