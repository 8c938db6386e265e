#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "smoothlab/displacement.hpp"
#include "smoothlab/env_model.hpp"
#include "smoothlab/extreal.hpp"

namespace smoothlab {

// Law nu of the i.i.d. point-process environment omega.
class BRWEnvironmentLaw {
  public:
    BRWEnvironmentLaw(std::vector<double> probs,
                      std::vector<std::shared_ptr<const DisplacementState>> states);

    std::size_t size() const { return states_.size(); }
    double prob(std::size_t i) const { return probs_[i]; }
    const DisplacementState& state(std::size_t i) const { return *states_[i]; }
    const std::shared_ptr<const DisplacementState>& state_ptr(std::size_t i) const {
        return states_[i];
    }
    std::size_t sample_state_index(double u01) const;

    double supercriticality() const { return supercriticality_; }
    bool atoms_only() const;

  private:
    std::vector<double> probs_;
    std::vector<std::shared_ptr<const DisplacementState>> states_;
    std::vector<double> cum_;
    double supercriticality_ = 0.0;
};

using BrwLawPtr = std::shared_ptr<const BRWEnvironmentLaw>;

// A realized BRW environment prefix (indices into the law's states).
struct BrwSequence {
    BrwLawPtr law;
    std::vector<std::uint32_t> idx;
    std::uint64_t seed = 0;
};

BrwSequence sample_brw_env(const BrwLawPtr& law, std::size_t n, std::uint64_t seed);

inline constexpr double kDefaultEllipticityDelta = 1e-6;

// True iff E m(theta) < inf (always, for atom/Gaussian families) and
// m_s(theta) > delta for every state.
bool theta_domain_check(const BRWEnvironmentLaw& law, double theta, double delta);

// The weight-space state induced by one displacement state:
// y_i = e^{-theta z_i} / m(theta), quenched mean one by construction.
EnvState induce_weight_state(std::shared_ptr<const DisplacementState> state, double theta,
                             double delta = kDefaultEllipticityDelta);

// The full induced environment law (same state probabilities).
LawPtr induce_weight_law(const BRWEnvironmentLaw& law, double theta,
                         double delta = kDefaultEllipticityDelta);

// The induced weight-space environment sequence matching a BRW sequence.
EnvSequence induce_weight_sequence(const BrwSequence& seq, double theta,
                                   double delta = kDefaultEllipticityDelta);

// kappa(theta) = sum_s pi_s [ -theta m'_s/m_s + log m_s ]. Sign bridge:
// kappa_brw(law, theta) = -kappa_weights(induced law).
double kappa_brw(const BRWEnvironmentLaw& law, double theta,
                 double delta = kDefaultEllipticityDelta);

struct XlogxMoment {
    ExtReal value;
    bool exact = false;          // finite enumeration vs Monte Carlo
    double std_error = 0.0;
    std::uint64_t budget = 0;
    // Finiteness holds analytically for finite outcome lists of atom or
    // Gaussian displacements, whatever the estimate.
    bool certified_finite = false;
};

// E[W_1 |log W_1|] with W_1 = sum_i e^{-theta z_i} / m(theta).
XlogxMoment w1_xlogx_moment(const BRWEnvironmentLaw& law, double theta, std::uint64_t budget,
                            std::uint64_t seed, double delta = kDefaultEllipticityDelta);

// One replica of the explicit particle simulation. No resampling or pruning:
// a population larger than `cap` throws CapExceeded and the run is discarded.
struct Trajectory {
    std::vector<double> W;                  // W[0] = 1
    std::vector<std::uint64_t> population;  // population[0] = 1
    std::vector<double> log_normalizer;     // log prod_{j<k} m_{xi_j}(theta)
    std::uint64_t seed = 0;
};

Trajectory simulate(const BRWEnvironmentLaw& law, double theta, const BrwSequence& seq,
                    std::size_t generations, std::size_t cap, std::uint64_t seed,
                    double delta = kDefaultEllipticityDelta);

// Independent replicas with derived seeds (master, "replica", index),
// aggregated in replica order whatever the scheduling. run_ensemble runs the
// replica loop under OpenMP; run_ensemble_serial is the reference loop.
std::vector<Trajectory> run_ensemble(const BRWEnvironmentLaw& law, double theta,
                                     const BrwSequence& seq, std::size_t generations,
                                     std::size_t cap, std::uint64_t master_seed,
                                     std::size_t replicas,
                                     double delta = kDefaultEllipticityDelta);
std::vector<Trajectory> run_ensemble_serial(const BRWEnvironmentLaw& law, double theta,
                                            const BrwSequence& seq, std::size_t generations,
                                            std::size_t cap, std::uint64_t master_seed,
                                            std::size_t replicas,
                                            double delta = kDefaultEllipticityDelta);

enum class BrwVerdict { MEAN_ONE, DEGENERATE, INCONCLUSIVE };

std::string to_string(BrwVerdict v);

struct BrwVerdictRecord {
    BrwVerdict verdict = BrwVerdict::INCONCLUSIVE;
    double theta = 0.0;
    double kappa = 0.0;
    XlogxMoment moment;
    std::vector<std::string> evidence;
};

// MEAN_ONE iff the x log x moment is certified finite and kappa > 0;
// DEGENERATE iff kappa <= 0 or the moment is certified infinite;
// INCONCLUSIVE when only straddling Monte Carlo evidence exists.
BrwVerdictRecord verdict_brw(const BRWEnvironmentLaw& law, double theta,
                             std::uint64_t moment_budget = 1000000, std::uint64_t seed = 0,
                             double delta = kDefaultEllipticityDelta);

}  // namespace smoothlab
