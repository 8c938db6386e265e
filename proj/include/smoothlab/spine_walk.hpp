#pragma once

#include <cstdint>
#include <vector>

#include "smoothlab/env_model.hpp"

namespace smoothlab {

struct StepAtom {
    double x = 0.0;     // log y
    double mass = 0.0;  // p * y
};

// Exact size-biased step distribution: mass p_k * y at log y for every
// positive weight entry. Total mass 1 under the quenched-mean-one assumption.
class StepLaw {
  public:
    StepLaw() = default;
    // Sorts, drops zero-mass atoms, merges atoms closer than merge_res
    // (mass-preserving, mass-weighted position).
    static StepLaw from_atoms(std::vector<StepAtom> atoms, double merge_res = 1e-9);

    const std::vector<StepAtom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    double total_mass() const;
    double mean() const;  // sum x * mass

    // P[X >= t], counting atoms within edge_tol of t as included.
    double upper_tail(double t, double edge_tol = 1e-9) const;

    double sample(Xoshiro256pp& rng) const;  // inverse CDF over atoms

  private:
    std::vector<StepAtom> atoms_;
};

// G_xi of one state. ContinuousState for states without a finite atom list
// (use sample_step for those).
StepLaw step_law(const EnvState& state, double merge_res = 1e-9);

// Mixture sum_s pi_s G_s with atoms merged.
StepLaw annealed_step_law(const EnvironmentLaw& law, double merge_res = 1e-9);

// E[X_0] = E[sum y log y], computed from the annealed atoms. Must agree with
// moments::kappa_weights on exact laws.
double drift(const EnvironmentLaw& law);

// One annealed step drawn mechanically (state ~ pi, then a size-biased pick
// inside a sampled weight vector). Exact states carry weight 1; continuous
// states return the self-normalizing importance pair (X, w = sum_j y_j).
struct StepSample {
    double x = 0.0;
    double weight = 1.0;
};
StepSample sample_step(const EnvironmentLaw& law, Xoshiro256pp& rng);

// S_0 = delta_0, S_n = S_{n-1} * X. Throws AtomExplosion past max_atoms.
std::vector<StepLaw> walk_convolve(const EnvironmentLaw& law, std::size_t n_max,
                                   double merge_res = 1e-9, std::size_t max_atoms = 1000000);
std::vector<StepLaw> walk_convolve(const StepLaw& step, std::size_t n_max,
                                   double merge_res = 1e-9, std::size_t max_atoms = 1000000);

struct TailSums {
    std::vector<double> increments;    // increments[n-1] = P[S_n >= c n]
    std::vector<double> partial_sums;  // running sums of the above
};

TailSums tail_sums(const EnvironmentLaw& law, double c, std::size_t n_max,
                   double merge_res = 1e-9);
TailSums tail_sums(const std::vector<StepLaw>& levels, double c);

}  // namespace smoothlab
