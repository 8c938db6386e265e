#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "smoothlab/displacement.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab {

// Finite non-negative weight vector, the realized (y_1, y_2, ...) which are
// ultimately zero. Trailing zeros are stripped on construction so that
// positive counts and products are plain loops; interior zeros are kept.
class WeightVector {
  public:
    WeightVector() = default;
    explicit WeightVector(std::vector<double> w);

    const std::vector<double>& weights() const { return w_; }
    std::size_t size() const { return w_.size(); }
    bool empty() const { return w_.empty(); }
    double operator[](std::size_t i) const { return w_[i]; }
    auto begin() const { return w_.begin(); }
    auto end() const { return w_.end(); }

    std::size_t positive_count() const;
    double sum() const;

    bool operator==(const WeightVector& o) const { return w_ == o.w_; }

  private:
    std::vector<double> w_;
};

struct WeightedOutcome {
    double p = 0.0;
    WeightVector weights;
};

// Parameters of the built-in Burst family: the particle splits into N
// children of weight 1/2 where P(N = 2^k) = (12/pi^2) 2^{-k}/k^2 for k >= 1
// and P(N = 0) carries the remaining mass 6 (ln 2)^2 / pi^2. This gives
// E N = 2 (quenched mean one), kappa = -ln 2, c1 = 0 and c2 = +inf.
namespace burst {
inline constexpr double kChildWeight = 0.5;
inline constexpr int kSeriesTerms = 60;
double coefficient();       // 12/pi^2
double zero_probability();  // 6 (ln 2)^2 / pi^2
double count_probability(int k);  // P(N = 2^k), k >= 1
}  // namespace burst

enum class StateKind { FiniteDiscrete, ThetaTilted, Burst };

// One environment state: the per-generation offspring law of weight vectors.
class EnvState {
  public:
    static EnvState finite_discrete(std::string id, std::vector<WeightedOutcome> outcomes);
    static EnvState theta_tilted(std::string id, std::shared_ptr<const DisplacementState> disp,
                                 double theta);
    static EnvState burst_state(std::string id);

    const std::string& id() const { return id_; }
    StateKind kind() const { return kind_; }

    const std::vector<WeightedOutcome>& outcomes() const;
    const DisplacementState& displacement() const;
    double theta() const;
    // Normalizer m(theta) of the tilted kind.
    double tilt_normalizer() const;

    // Exact E[sum_i y_i]. Closed form for ThetaTilted and Burst.
    double quenched_mean() const;
    // Exact E[#{i : y_i > 0}].
    double expected_positive_count() const;

    // True when the weight-vector law has a finite, explicitly enumerable
    // outcome list (FiniteDiscrete, or ThetaTilted with atom children only).
    // Burst is exact too but through its series; it is handled by kind.
    bool exact_enumerable() const;
    std::vector<WeightedOutcome> enumerated_outcomes() const;

    WeightVector sample_weights(Xoshiro256pp& rng) const;
    WeightVector sample_weights(std::uint64_t seed) const;

    // Hard cap on realized positive counts (guards the Burst tail).
    static constexpr std::size_t kWeightCap = std::size_t{1} << 22;

  private:
    EnvState() = default;

    std::string id_;
    StateKind kind_ = StateKind::FiniteDiscrete;
    std::vector<WeightedOutcome> outcomes_;  // FiniteDiscrete
    std::vector<double> cum_p_;
    std::shared_ptr<const DisplacementState> disp_;  // ThetaTilted
    double theta_ = 0.0;
    double m_theta_ = 1.0;
};

// The common per-coordinate law of the i.i.d. environment sequence.
class EnvironmentLaw {
  public:
    EnvironmentLaw(std::vector<double> probs, std::vector<EnvState> states);

    std::size_t size() const { return states_.size(); }
    const EnvState& state(std::size_t i) const { return states_[i]; }
    double prob(std::size_t i) const { return probs_[i]; }
    const EnvState* find_state(const std::string& id) const;

    std::size_t sample_state_index(double u01) const;

    bool exact() const;  // every state exact_enumerable or Burst

  private:
    std::vector<double> probs_;
    std::vector<EnvState> states_;
    std::vector<double> cum_;
};

using LawPtr = std::shared_ptr<const EnvironmentLaw>;

// A realized environment prefix (xi_0, ..., xi_{n-1}) plus the information
// needed to regenerate it bit-exactly: the law, the master seed and the
// offset accumulated by shifts.
class EnvSequence {
  public:
    EnvSequence(LawPtr law, std::vector<std::uint32_t> indices, std::uint64_t seed,
                std::uint64_t offset = 0);

    std::size_t size() const { return idx_.size(); }
    std::uint32_t index_at(std::size_t i) const { return idx_[i]; }
    const EnvState& state_at(std::size_t i) const { return law_->state(idx_[i]); }
    const LawPtr& law() const { return law_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t offset() const { return offset_; }
    const std::vector<std::uint32_t>& indices() const { return idx_; }

  private:
    LawPtr law_;
    std::vector<std::uint32_t> idx_;
    std::uint64_t seed_ = 0;
    std::uint64_t offset_ = 0;
};

struct StateValidation {
    std::string id;
    double quenched_mean = 0.0;
    bool quenched_mean_ok = false;
    double expected_positive_count = 0.0;
    bool positive_count_finite = true;  // structural for the supported kinds
};

struct ValidationReport {
    std::vector<StateValidation> states;
    double supercriticality = 0.0;  // sum_s pi_s log E_s[#positive]
    bool supercritical = false;
    bool pass = false;
    double tol = 0.0;
};

// Checks the standing assumptions: quenched mean one per state (within tol
// for FiniteDiscrete; exact kinds are reported with their closed-form value),
// a.s. finite positive counts, and supercriticality of the law.
ValidationReport validate_law(const EnvironmentLaw& law, double tol = 1e-9);

// i.i.d. draws from the law's state distribution. Deterministic given
// (law, n, seed); extending n with the same seed is prefix-stable.
EnvSequence sample_env(const LawPtr& law, std::size_t n, std::uint64_t seed);

// (xi_k, xi_{k+1}, ...). shift(seq, 0) == seq; shifts compose additively.
EnvSequence shift(const EnvSequence& seq, std::size_t k);

}  // namespace smoothlab
