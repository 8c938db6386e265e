#include "smoothlab/env_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smoothlab {

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
    for (double y : w_) {
        if (y < 0.0 || !std::isfinite(y)) throw MalformedLaw("weight vector: entry must be finite and >= 0");
    }
    while (!w_.empty() && w_.back() == 0.0) w_.pop_back();
}

std::size_t WeightVector::positive_count() const {
    return static_cast<std::size_t>(std::count_if(w_.begin(), w_.end(), [](double y) { return y > 0.0; }));
}

double WeightVector::sum() const {
    double s = 0.0;
    for (double y : w_) s += y;
    return s;
}

namespace burst {

double coefficient() { return 12.0 / (std::numbers::pi * std::numbers::pi); }

double zero_probability() {
    const double l2 = std::numbers::ln2;
    return 6.0 * l2 * l2 / (std::numbers::pi * std::numbers::pi);
}

double count_probability(int k) {
    if (k < 1) throw OutOfRange("burst::count_probability: k >= 1 required");
    return coefficient() * std::ldexp(1.0, -k) / (static_cast<double>(k) * k);
}

}  // namespace burst

EnvState EnvState::finite_discrete(std::string id, std::vector<WeightedOutcome> outcomes) {
    if (outcomes.empty()) throw MalformedLaw("state '" + id + "': no outcomes");
    double total = 0.0;
    for (const auto& o : outcomes) {
        if (o.p < 0.0) throw MalformedLaw("state '" + id + "': negative outcome probability");
        total += o.p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw MalformedLaw("state '" + id + "': outcome probabilities sum to " + std::to_string(total));
    EnvState s;
    s.id_ = std::move(id);
    s.kind_ = StateKind::FiniteDiscrete;
    s.outcomes_ = std::move(outcomes);
    double c = 0.0;
    for (const auto& o : s.outcomes_) {
        c += o.p;
        s.cum_p_.push_back(c);
    }
    s.cum_p_.back() = 1.0;
    return s;
}

EnvState EnvState::theta_tilted(std::string id, std::shared_ptr<const DisplacementState> disp,
                                double theta) {
    if (!disp) throw MalformedLaw("state '" + id + "': null displacement reference");
    EnvState s;
    s.id_ = std::move(id);
    s.kind_ = StateKind::ThetaTilted;
    s.disp_ = std::move(disp);
    s.theta_ = theta;
    s.m_theta_ = s.disp_->m_theta(theta);
    if (!(s.m_theta_ > 0.0) || !std::isfinite(s.m_theta_))
        throw MalformedLaw("state '" + s.id_ + "': m(theta) not positive finite");
    return s;
}

EnvState EnvState::burst_state(std::string id) {
    EnvState s;
    s.id_ = std::move(id);
    s.kind_ = StateKind::Burst;
    return s;
}

const std::vector<WeightedOutcome>& EnvState::outcomes() const {
    if (kind_ != StateKind::FiniteDiscrete)
        throw Error("state '" + id_ + "': outcomes() on non-finite kind");
    return outcomes_;
}

const DisplacementState& EnvState::displacement() const {
    if (kind_ != StateKind::ThetaTilted) throw Error("state '" + id_ + "': not tilted");
    return *disp_;
}

double EnvState::theta() const {
    if (kind_ != StateKind::ThetaTilted) throw Error("state '" + id_ + "': not tilted");
    return theta_;
}

double EnvState::tilt_normalizer() const {
    if (kind_ != StateKind::ThetaTilted) throw Error("state '" + id_ + "': not tilted");
    return m_theta_;
}

double EnvState::quenched_mean() const {
    switch (kind_) {
        case StateKind::FiniteDiscrete: {
            double m = 0.0;
            for (const auto& o : outcomes_) m += o.p * o.weights.sum();
            return m;
        }
        case StateKind::ThetaTilted:
            // E[sum_i e^{-theta z_i}] / m(theta) = 1 by construction.
            return 1.0;
        case StateKind::Burst:
            // (1/2) E N = 1 by the choice of the series coefficient.
            return 1.0;
    }
    return 0.0;
}

double EnvState::expected_positive_count() const {
    switch (kind_) {
        case StateKind::FiniteDiscrete: {
            double m = 0.0;
            for (const auto& o : outcomes_) m += o.p * static_cast<double>(o.weights.positive_count());
            return m;
        }
        case StateKind::ThetaTilted:
            // Tilted weights e^{-theta z}/m are always positive.
            return disp_->expected_children();
        case StateKind::Burst:
            return 2.0;  // E N
    }
    return 0.0;
}

bool EnvState::exact_enumerable() const {
    switch (kind_) {
        case StateKind::FiniteDiscrete: return true;
        case StateKind::ThetaTilted: return disp_->atoms_only();
        case StateKind::Burst: return false;
    }
    return false;
}

std::vector<WeightedOutcome> EnvState::enumerated_outcomes() const {
    if (kind_ == StateKind::FiniteDiscrete) return outcomes_;
    if (kind_ == StateKind::ThetaTilted && disp_->atoms_only()) {
        std::vector<WeightedOutcome> out;
        out.reserve(disp_->outcomes().size());
        for (const auto& o : disp_->outcomes()) {
            std::vector<double> w;
            w.reserve(o.children.size());
            for (const auto& c : o.children)
                w.push_back(std::exp(-theta_ * std::get<AtomDisplacement>(c).z) / m_theta_);
            out.push_back({o.q, WeightVector(std::move(w))});
        }
        return out;
    }
    throw ContinuousState("state '" + id_ + "': not exactly enumerable");
}

WeightVector EnvState::sample_weights(Xoshiro256pp& rng) const {
    switch (kind_) {
        case StateKind::FiniteDiscrete: {
            const double u = rng.uniform01();
            std::size_t i = 0;
            while (i + 1 < cum_p_.size() && u >= cum_p_[i]) ++i;
            return outcomes_[i].weights;
        }
        case StateKind::ThetaTilted: {
            const std::size_t k = disp_->sample_outcome(rng);
            const auto& children = disp_->outcomes()[k].children;
            std::vector<double> w;
            w.reserve(children.size());
            for (const auto& c : children)
                w.push_back(std::exp(-theta_ * disp_->sample_child(c, rng)) / m_theta_);
            return WeightVector(std::move(w));
        }
        case StateKind::Burst: {
            double u = rng.uniform01();
            const double p0 = burst::zero_probability();
            if (u < p0) return WeightVector{};
            u -= p0;
            int k = 1;
            while (k < 63) {
                const double pk = burst::count_probability(k);
                if (u < pk) break;
                u -= pk;
                ++k;
            }
            const std::size_t n = std::size_t{1} << k;
            if (n > kWeightCap)
                throw CapExceeded("burst sample: positive count " + std::to_string(n) +
                                  " exceeds hard cap");
            return WeightVector(std::vector<double>(n, burst::kChildWeight));
        }
    }
    return WeightVector{};
}

WeightVector EnvState::sample_weights(std::uint64_t seed) const {
    Xoshiro256pp rng(seed);
    return sample_weights(rng);
}

EnvironmentLaw::EnvironmentLaw(std::vector<double> probs, std::vector<EnvState> states)
    : probs_(std::move(probs)), states_(std::move(states)) {
    if (states_.empty()) throw MalformedLaw("environment law: empty state list");
    if (probs_.size() != states_.size())
        throw MalformedLaw("environment law: probability/state count mismatch");
    double total = 0.0;
    for (double p : probs_) {
        if (p < 0.0) throw MalformedLaw("environment law: negative state probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw MalformedLaw("environment law: state probabilities sum to " + std::to_string(total));
    double c = 0.0;
    for (double p : probs_) {
        c += p;
        cum_.push_back(c);
    }
    cum_.back() = 1.0;
}

const EnvState* EnvironmentLaw::find_state(const std::string& id) const {
    for (const auto& s : states_)
        if (s.id() == id) return &s;
    return nullptr;
}

std::size_t EnvironmentLaw::sample_state_index(double u01) const {
    std::size_t i = 0;
    while (i + 1 < cum_.size() && u01 >= cum_[i]) ++i;
    return i;
}

bool EnvironmentLaw::exact() const {
    for (const auto& s : states_)
        if (!s.exact_enumerable() && s.kind() != StateKind::Burst) return false;
    return true;
}

ValidationReport validate_law(const EnvironmentLaw& law, double tol) {
    ValidationReport rep;
    rep.tol = tol;
    bool all_means_ok = true;
    double supercrit = 0.0;
    bool supercrit_defined = true;
    for (std::size_t i = 0; i < law.size(); ++i) {
        const EnvState& s = law.state(i);
        StateValidation sv;
        sv.id = s.id();
        sv.quenched_mean = s.quenched_mean();
        // Closed-form kinds are exact; FiniteDiscrete is checked against tol.
        sv.quenched_mean_ok = s.kind() == StateKind::FiniteDiscrete
                                  ? std::abs(sv.quenched_mean - 1.0) <= tol
                                  : true;
        sv.expected_positive_count = s.expected_positive_count();
        sv.positive_count_finite = true;
        all_means_ok = all_means_ok && sv.quenched_mean_ok;
        if (sv.expected_positive_count > 0.0) {
            supercrit += law.prob(i) * std::log(sv.expected_positive_count);
        } else if (law.prob(i) > 0.0) {
            supercrit_defined = false;  // log 0 = -inf: the law cannot pass
        }
        rep.states.push_back(std::move(sv));
    }
    rep.supercriticality = supercrit_defined ? supercrit : -HUGE_VAL;
    rep.supercritical = supercrit_defined && supercrit > 0.0;
    rep.pass = all_means_ok && rep.supercritical;
    return rep;
}

EnvSequence::EnvSequence(LawPtr law, std::vector<std::uint32_t> indices, std::uint64_t seed,
                         std::uint64_t offset)
    : law_(std::move(law)), idx_(std::move(indices)), seed_(seed), offset_(offset) {
    if (!law_) throw MalformedLaw("environment sequence: null law");
    for (auto i : idx_)
        if (i >= law_->size()) throw MalformedLaw("environment sequence: state index out of range");
}

EnvSequence sample_env(const LawPtr& law, std::size_t n, std::uint64_t seed) {
    if (!law) throw MalformedLaw("sample_env: null law");
    std::vector<std::uint32_t> idx;
    idx.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // One independent draw per position keyed by (seed, i): extending the
        // sequence never disturbs earlier entries.
        Xoshiro256pp rng(derive_seed(seed, {std::string("env"), static_cast<std::uint64_t>(i)}));
        idx.push_back(static_cast<std::uint32_t>(law->sample_state_index(rng.uniform01())));
    }
    return EnvSequence(law, std::move(idx), seed, 0);
}

EnvSequence shift(const EnvSequence& seq, std::size_t k) {
    if (k > seq.size()) throw OutOfRange("shift: k exceeds sequence length");
    std::vector<std::uint32_t> idx(seq.indices().begin() + static_cast<std::ptrdiff_t>(k),
                                   seq.indices().end());
    return EnvSequence(seq.law(), std::move(idx), seq.seed(), seq.offset() + k);
}

}  // namespace smoothlab
