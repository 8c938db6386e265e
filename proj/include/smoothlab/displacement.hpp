#pragma once

#include <string>
#include <variant>
#include <vector>

#include "smoothlab/errors.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab {

// One child displacement distribution of a point-process outcome.
struct AtomDisplacement {
    double z = 0.0;
};

struct GaussianDisplacement {
    double mu = 0.0;
    double sigma2 = 1.0;
};

using Displacement = std::variant<AtomDisplacement, GaussianDisplacement>;

inline bool is_atom(const Displacement& d) {
    return std::holds_alternative<AtomDisplacement>(d);
}

// A point-process environment state: with probability q_k the particle
// produces the listed children, each displaced independently by its own
// distribution.
struct DisplacementOutcome {
    double q = 0.0;
    std::vector<Displacement> children;
};

class DisplacementState {
  public:
    DisplacementState(std::string id, std::vector<DisplacementOutcome> outcomes);

    const std::string& id() const { return id_; }
    const std::vector<DisplacementOutcome>& outcomes() const { return outcomes_; }

    bool atoms_only() const { return atoms_only_; }
    double expected_children() const { return expected_children_; }
    std::size_t max_children() const { return max_children_; }

    // Laplace transform of the offspring point process, m(theta) =
    // E[sum_r e^{-theta z_r}], and its theta-derivative. Closed form:
    // Atom(z) contributes e^{-theta z}, Gaussian(mu, s2) contributes
    // e^{-theta mu + theta^2 s2 / 2}.
    double m_theta(double theta) const;
    double m_prime(double theta) const;

    // Sample (outcome index, child displacements) for one particle.
    std::size_t sample_outcome(Xoshiro256pp& rng) const;
    double sample_child(const Displacement& d, Xoshiro256pp& rng) const;

  private:
    std::string id_;
    std::vector<DisplacementOutcome> outcomes_;
    std::vector<double> cum_q_;
    bool atoms_only_ = true;
    double expected_children_ = 0.0;
    std::size_t max_children_ = 0;
};

}  // namespace smoothlab
