#include "smoothlab/brwre.hpp"

#include <cmath>

#include "smoothlab/rng.hpp"

namespace smoothlab {

BRWEnvironmentLaw::BRWEnvironmentLaw(std::vector<double> probs,
                                     std::vector<std::shared_ptr<const DisplacementState>> states)
    : probs_(std::move(probs)), states_(std::move(states)) {
    if (states_.empty()) throw MalformedLaw("brw law: empty state list");
    if (probs_.size() != states_.size())
        throw MalformedLaw("brw law: probability/state count mismatch");
    double total = 0.0;
    for (double p : probs_) {
        if (p < 0.0) throw MalformedLaw("brw law: negative state probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw MalformedLaw("brw law: state probabilities sum to " + std::to_string(total));
    for (const auto& s : states_)
        if (!s) throw MalformedLaw("brw law: null state");
    double super = 0.0;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        const double ec = states_[i]->expected_children();
        if (ec <= 0.0 && probs_[i] > 0.0) {
            super = -HUGE_VAL;
            break;
        }
        if (probs_[i] > 0.0) super += probs_[i] * std::log(ec);
    }
    supercriticality_ = super;
    if (!(super > 0.0))
        throw MalformedLaw("brw law: supercriticality E log E[#children] must be positive, got " +
                           std::to_string(super));
    double c = 0.0;
    for (double p : probs_) {
        c += p;
        cum_.push_back(c);
    }
    cum_.back() = 1.0;
}

std::size_t BRWEnvironmentLaw::sample_state_index(double u01) const {
    std::size_t i = 0;
    while (i + 1 < cum_.size() && u01 >= cum_[i]) ++i;
    return i;
}

bool BRWEnvironmentLaw::atoms_only() const {
    for (const auto& s : states_)
        if (!s->atoms_only()) return false;
    return true;
}

BrwSequence sample_brw_env(const BrwLawPtr& law, std::size_t n, std::uint64_t seed) {
    if (!law) throw MalformedLaw("sample_brw_env: null law");
    BrwSequence seq;
    seq.law = law;
    seq.seed = seed;
    seq.idx.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Xoshiro256pp rng(derive_seed(seed, {std::string("env"), static_cast<std::uint64_t>(i)}));
        seq.idx.push_back(static_cast<std::uint32_t>(law->sample_state_index(rng.uniform01())));
    }
    return seq;
}

bool theta_domain_check(const BRWEnvironmentLaw& law, double theta, double delta) {
    if (!(delta > 0.0)) throw InvalidDelta("theta_domain_check: delta must be positive");
    for (std::size_t i = 0; i < law.size(); ++i) {
        const double m = law.state(i).m_theta(theta);
        if (!std::isfinite(m) || m <= delta) return false;
    }
    return true;
}

EnvState induce_weight_state(std::shared_ptr<const DisplacementState> state, double theta,
                             double delta) {
    if (!(delta > 0.0)) throw InvalidDelta("induce_weight_state: delta must be positive");
    if (!state) throw MalformedLaw("induce_weight_state: null state");
    const double m = state->m_theta(theta);
    if (!std::isfinite(m) || m <= delta)
        throw EllipticityViolation("induce_weight_state: m(theta) = " + std::to_string(m) +
                                   " <= delta for state '" + state->id() + "'");
    std::string id = state->id() + "@theta";
    return EnvState::theta_tilted(std::move(id), std::move(state), theta);
}

LawPtr induce_weight_law(const BRWEnvironmentLaw& law, double theta, double delta) {
    std::vector<double> probs;
    std::vector<EnvState> states;
    for (std::size_t i = 0; i < law.size(); ++i) {
        probs.push_back(law.prob(i));
        states.push_back(induce_weight_state(law.state_ptr(i), theta, delta));
    }
    return std::make_shared<const EnvironmentLaw>(std::move(probs), std::move(states));
}

EnvSequence induce_weight_sequence(const BrwSequence& seq, double theta, double delta) {
    if (!seq.law) throw MalformedLaw("induce_weight_sequence: null law");
    return EnvSequence(induce_weight_law(*seq.law, theta, delta), seq.idx, seq.seed);
}

double kappa_brw(const BRWEnvironmentLaw& law, double theta, double delta) {
    if (!theta_domain_check(law, theta, delta))
        throw EllipticityViolation("kappa_brw: theta outside the elliptic domain");
    double kappa = 0.0;
    for (std::size_t i = 0; i < law.size(); ++i) {
        const DisplacementState& s = law.state(i);
        const double m = s.m_theta(theta);
        kappa += law.prob(i) * (-theta * s.m_prime(theta) / m + std::log(m));
    }
    return kappa;
}

namespace {

double xlogx(double w) { return w > 0.0 ? w * std::abs(std::log(w)) : 0.0; }

}  // namespace

XlogxMoment w1_xlogx_moment(const BRWEnvironmentLaw& law, double theta, std::uint64_t budget,
                            std::uint64_t seed, double delta) {
    if (!theta_domain_check(law, theta, delta))
        throw EllipticityViolation("w1_xlogx_moment: theta outside the elliptic domain");
    XlogxMoment out;
    out.certified_finite = true;  // finite outcome lists of atom/Gaussian children
    if (law.atoms_only()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < law.size(); ++i) {
            const DisplacementState& s = law.state(i);
            const double m = s.m_theta(theta);
            for (const auto& o : s.outcomes()) {
                double w1 = 0.0;
                for (const auto& c : o.children)
                    w1 += std::exp(-theta * std::get<AtomDisplacement>(c).z) / m;
                acc += law.prob(i) * o.q * xlogx(w1);
            }
        }
        out.value = ExtReal::finite(acc);
        out.exact = true;
        return out;
    }
    if (budget == 0) throw StrategyMismatch("w1_xlogx_moment: Monte Carlo budget is zero");
    constexpr int kBatches = 100;
    const std::uint64_t per_batch = std::max<std::uint64_t>(1, budget / kBatches);
    std::vector<double> batch_mean(kBatches, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < kBatches; ++b) {
        Xoshiro256pp rng(derive_seed(seed, {std::string("w1-batch"), static_cast<std::uint64_t>(b)}));
        double acc = 0.0;
        for (std::uint64_t i = 0; i < per_batch; ++i) {
            const std::size_t si = law.sample_state_index(rng.uniform01());
            const DisplacementState& s = law.state(si);
            const double m = s.m_theta(theta);
            const std::size_t k = s.sample_outcome(rng);
            double w1 = 0.0;
            for (const auto& c : s.outcomes()[k].children)
                w1 += std::exp(-theta * s.sample_child(c, rng)) / m;
            acc += xlogx(w1);
        }
        batch_mean[static_cast<std::size_t>(b)] = acc / static_cast<double>(per_batch);
    }
    double mean = 0.0;
    for (double m : batch_mean) mean += m;
    mean /= kBatches;
    double var = 0.0;
    for (double m : batch_mean) var += (m - mean) * (m - mean);
    var /= kBatches - 1;
    out.value = ExtReal::finite(mean);
    out.exact = false;
    out.std_error = std::sqrt(var / kBatches);
    out.budget = per_batch * kBatches;
    return out;
}

std::string to_string(BrwVerdict v) {
    switch (v) {
        case BrwVerdict::MEAN_ONE: return "MEAN_ONE";
        case BrwVerdict::DEGENERATE: return "DEGENERATE";
        case BrwVerdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

BrwVerdictRecord verdict_brw(const BRWEnvironmentLaw& law, double theta,
                             std::uint64_t moment_budget, std::uint64_t seed, double delta) {
    if (!theta_domain_check(law, theta, delta))
        throw EllipticityViolation("verdict_brw: theta outside the elliptic domain");
    BrwVerdictRecord rec;
    rec.theta = theta;
    rec.kappa = kappa_brw(law, theta, delta);
    rec.moment = w1_xlogx_moment(law, theta, moment_budget, seed, delta);
    rec.evidence.push_back("kappa=" + std::to_string(rec.kappa));
    rec.evidence.push_back(rec.moment.exact ? "moment=exact" : "moment=monte-carlo");
    if (rec.moment.certified_finite) rec.evidence.push_back("moment-finite=analytic");
    if (rec.kappa <= 0.0) {
        rec.verdict = BrwVerdict::DEGENERATE;
        return rec;
    }
    if (rec.moment.value.is_pos_inf()) {
        rec.verdict = BrwVerdict::DEGENERATE;
        return rec;
    }
    rec.verdict = rec.moment.certified_finite ? BrwVerdict::MEAN_ONE : BrwVerdict::INCONCLUSIVE;
    return rec;
}

}  // namespace smoothlab
