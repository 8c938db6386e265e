#include "smoothlab/displacement.hpp"

#include <cmath>

namespace smoothlab {

DisplacementState::DisplacementState(std::string id, std::vector<DisplacementOutcome> outcomes)
    : id_(std::move(id)), outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw MalformedLaw("displacement state '" + id_ + "': no outcomes");
    double total = 0.0;
    bool any_child = false;
    for (const auto& o : outcomes_) {
        if (o.q < 0.0) throw MalformedLaw("displacement state '" + id_ + "': negative probability");
        total += o.q;
        expected_children_ += o.q * static_cast<double>(o.children.size());
        max_children_ = std::max(max_children_, o.children.size());
        if (!o.children.empty()) any_child = true;
        for (const auto& c : o.children)
            if (!is_atom(c)) atoms_only_ = false;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw MalformedLaw("displacement state '" + id_ + "': probabilities sum to " +
                           std::to_string(total));
    if (!any_child)
        throw MalformedLaw("displacement state '" + id_ + "': every outcome is childless");
    cum_q_.reserve(outcomes_.size());
    double c = 0.0;
    for (const auto& o : outcomes_) {
        c += o.q;
        cum_q_.push_back(c);
    }
    cum_q_.back() = 1.0;
}

double DisplacementState::m_theta(double theta) const {
    double m = 0.0;
    for (const auto& o : outcomes_) {
        double s = 0.0;
        for (const auto& c : o.children) {
            if (is_atom(c)) {
                s += std::exp(-theta * std::get<AtomDisplacement>(c).z);
            } else {
                const auto& g = std::get<GaussianDisplacement>(c);
                s += std::exp(-theta * g.mu + 0.5 * theta * theta * g.sigma2);
            }
        }
        m += o.q * s;
    }
    return m;
}

double DisplacementState::m_prime(double theta) const {
    double m = 0.0;
    for (const auto& o : outcomes_) {
        double s = 0.0;
        for (const auto& c : o.children) {
            if (is_atom(c)) {
                const double z = std::get<AtomDisplacement>(c).z;
                s += -z * std::exp(-theta * z);
            } else {
                const auto& g = std::get<GaussianDisplacement>(c);
                s += (-g.mu + theta * g.sigma2) *
                     std::exp(-theta * g.mu + 0.5 * theta * theta * g.sigma2);
            }
        }
        m += o.q * s;
    }
    return m;
}

std::size_t DisplacementState::sample_outcome(Xoshiro256pp& rng) const {
    const double u = rng.uniform01();
    std::size_t lo = 0;
    while (lo + 1 < cum_q_.size() && u >= cum_q_[lo]) ++lo;
    return lo;
}

double DisplacementState::sample_child(const Displacement& d, Xoshiro256pp& rng) const {
    if (is_atom(d)) return std::get<AtomDisplacement>(d).z;
    const auto& g = std::get<GaussianDisplacement>(d);
    return g.mu + std::sqrt(g.sigma2) * rng.normal();
}

}  // namespace smoothlab
