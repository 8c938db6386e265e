#include "smoothlab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "smoothlab/quadrature.hpp"
#include "smoothlab/rng.hpp"
#include "smoothlab/spine_walk.hpp"

namespace smoothlab {

namespace {

struct FlatSamples {
    // Ragged batch of sampled weight vectors: weights[offsets[m] .. offsets[m+1]).
    std::vector<double> weights;
    std::vector<std::size_t> offsets;
    std::size_t count() const { return offsets.size() - 1; }
};

FlatSamples sample_batch(const EnvState& state, std::uint64_t budget, std::uint64_t seed) {
    FlatSamples out;
    out.offsets.push_back(0);
    Xoshiro256pp rng(seed);
    for (std::uint64_t m = 0; m < budget; ++m) {
        const WeightVector v = state.sample_weights(rng);
        for (double y : v)
            if (y > 0.0) out.weights.push_back(y);
        out.offsets.push_back(out.weights.size());
    }
    return out;
}

// -log sum_k w_k e^{-L_k} for L_k >= 0 and weights summing to one. Two
// regimes: while the mixture stays near 1 the sum of 1 - e^{-L_k} keeps full
// relative precision (the direct log of a phi-space sum would not); once the
// mixture drops below 1/2 a shifted log-sum-exp takes over.
double neg_log_mixture(const std::vector<double>& ls, const double* ws, double uniform_w) {
    double s = 0.0;
    for (std::size_t k = 0; k < ls.size(); ++k)
        s += (ws ? ws[k] : uniform_w) * -std::expm1(-ls[k]);
    if (s <= 0.5) return -std::log1p(-s);
    double min_l = HUGE_VAL;
    for (double l : ls) min_l = std::min(min_l, l);
    double acc = 0.0;
    for (std::size_t k = 0; k < ls.size(); ++k)
        acc += (ws ? ws[k] : uniform_w) * std::exp(-(ls[k] - min_l));
    return min_l - std::log(acc);
}

// Per-point evaluation of -log E[prod_i phi(u y_i)], shared by the parallel
// and the serial driver. All accumulations run in a fixed order independent
// of scheduling.
class PointEvaluator {
  public:
    PointEvaluator(const EnvState& state, const LaplaceCurve& curve,
                   const ExpectationStrategy& strat)
        : state_(state), curve_(curve), strat_(strat) {
        switch (state.kind()) {
            case StateKind::FiniteDiscrete:
                mode_ = Mode::Enumerated;
                outcomes_ = state.outcomes();
                break;
            case StateKind::Burst:
                mode_ = Mode::Burst;
                break;
            case StateKind::ThetaTilted:
                if (state.displacement().atoms_only()) {
                    mode_ = Mode::Enumerated;
                    outcomes_ = state.enumerated_outcomes();
                } else {
                    switch (strat.kind) {
                        case ExpectationStrategy::Kind::Exact:
                            throw StrategyMismatch("apply_H: Exact strategy on continuous state '" +
                                                   state.id() + "'");
                        case ExpectationStrategy::Kind::MonteCarlo:
                            if (strat.budget == 0)
                                throw StrategyMismatch("apply_H: Monte Carlo budget is zero");
                            mode_ = Mode::MonteCarlo;
                            samples_ = sample_batch(state, strat.budget, strat.seed);
                            break;
                        case ExpectationStrategy::Kind::GaussQuadrature:
                            mode_ = Mode::Quadrature;
                            rule_ = gauss_hermite(strat.nodes);
                            break;
                    }
                }
                break;
        }
    }

    double log_value(double u, bool& clamped) const {
        switch (mode_) {
            case Mode::Enumerated: return enumerated(u, clamped);
            case Mode::Burst: return burst_series(u, clamped);
            case Mode::MonteCarlo: return monte_carlo(u, clamped);
            case Mode::Quadrature: return quadrature(u, clamped);
        }
        return 0.0;
    }

  private:
    enum class Mode { Enumerated, Burst, MonteCarlo, Quadrature };

    double enumerated(double u, bool& clamped) const {
        sums_.clear();
        ws_.clear();
        for (const auto& o : outcomes_) {
            double s = 0.0;
            for (double y : o.weights)
                if (y > 0.0) s += curve_.L_at(u * y, &clamped);
            sums_.push_back(s);
            ws_.push_back(o.p);
        }
        return neg_log_mixture(sums_, ws_.data(), 0.0);
    }

    // E[phi(u/2)^N] = 1 - sum_k p_k (1 - e^{-2^k L(u/2)}), series to k = 60.
    // The neglected tail carries mass ~1e-22, far below double resolution.
    double burst_series(double u, bool& clamped) const {
        const double A = curve_.L_at(u * burst::kChildWeight, &clamped);
        double s = 0.0;
        for (int k = 1; k <= burst::kSeriesTerms; ++k)
            s += burst::count_probability(k) * -std::expm1(-std::ldexp(1.0, k) * A);
        return -std::log1p(-s);  // s <= 1 - p_0 < 0.71
    }

    double monte_carlo(double u, bool& clamped) const {
        const std::size_t M = samples_.count();
        sums_.clear();
        for (std::size_t m = 0; m < M; ++m) {
            double s = 0.0;
            for (std::size_t i = samples_.offsets[m]; i < samples_.offsets[m + 1]; ++i)
                s += curve_.L_at(u * samples_.weights[i], &clamped);
            sums_.push_back(s);
        }
        return neg_log_mixture(sums_, nullptr, 1.0 / static_cast<double>(M));
    }

    double quadrature(double u, bool& clamped) const {
        const DisplacementState& d = state_.displacement();
        const double theta = state_.theta();
        const double m = state_.tilt_normalizer();
        const double inv_sqrt_pi = 0.5641895835477563;
        sums_.clear();
        ws_.clear();
        for (const auto& o : d.outcomes()) {
            double s = 0.0;
            for (const auto& child : o.children) {
                if (is_atom(child)) {
                    const double y = std::exp(-theta * std::get<AtomDisplacement>(child).z) / m;
                    s += curve_.L_at(u * y, &clamped);
                    continue;
                }
                const auto& g = std::get<GaussianDisplacement>(child);
                const double scale = std::sqrt(2.0 * g.sigma2);
                ls_.clear();
                qw_.clear();
                for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
                    const double z = g.mu + scale * rule_.nodes[i];
                    const double y = std::exp(-theta * z) / m;
                    ls_.push_back(curve_.L_at(u * y, &clamped));
                    qw_.push_back(rule_.weights[i] * inv_sqrt_pi);
                }
                s += neg_log_mixture(ls_, qw_.data(), 0.0);
            }
            sums_.push_back(s);
            ws_.push_back(o.q);
        }
        return neg_log_mixture(sums_, ws_.data(), 0.0);
    }

    const EnvState& state_;
    const LaplaceCurve& curve_;
    const ExpectationStrategy& strat_;
    Mode mode_ = Mode::Enumerated;
    std::vector<WeightedOutcome> outcomes_;
    FlatSamples samples_;
    QuadRule rule_;
    mutable std::vector<double> sums_;
    mutable std::vector<double> ws_;
    mutable std::vector<double> ls_;
    mutable std::vector<double> qw_;
};

LaplaceCurve apply_H_impl(const EnvState& state, const LaplaceCurve& curve,
                          const ExpectationStrategy& strat, bool parallel) {
    PointEvaluator eval(state, curve, strat);
    const GridPtr& grid = curve.grid();
    const std::size_t n = grid->size();
    std::vector<double> out(n, 0.0);
    std::vector<unsigned char> clamp(n, 0);
    if (parallel) {
#pragma omp parallel for schedule(static) firstprivate(eval)
        for (long long j = 0; j < static_cast<long long>(n); ++j) {
            bool c = false;
            out[static_cast<std::size_t>(j)] =
                eval.log_value((*grid)[static_cast<std::size_t>(j)], c);
            clamp[static_cast<std::size_t>(j)] = c ? 1 : 0;
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            bool c = false;
            out[j] = eval.log_value((*grid)[j], c);
            clamp[j] = c ? 1 : 0;
        }
    }
    bool any_clamp = curve.clamp_flag();
    for (unsigned char c : clamp) any_clamp = any_clamp || c != 0;
    return LaplaceCurve(grid, std::move(out), any_clamp);
}

}  // namespace

LaplaceCurve apply_H(const EnvState& state, const LaplaceCurve& curve,
                     const ExpectationStrategy& strat) {
    return apply_H_impl(state, curve, strat, true);
}

LaplaceCurve apply_H_serial(const EnvState& state, const LaplaceCurve& curve,
                            const ExpectationStrategy& strat) {
    return apply_H_impl(state, curve, strat, false);
}

namespace {

ExpectationStrategy level_strategy(const ExpectationStrategy& strat, std::size_t level) {
    ExpectationStrategy s = strat;
    if (s.kind == ExpectationStrategy::Kind::MonteCarlo)
        s.seed = derive_seed(strat.seed, {std::string("H"), static_cast<std::uint64_t>(level)});
    return s;
}

}  // namespace

LaplaceCurve iterate(const EnvSequence& seq, GridPtr grid, const ExpectationStrategy& strat) {
    LaplaceCurve curve = LaplaceCurve::standard_exponential(std::move(grid));
    for (std::size_t k = seq.size(); k-- > 0;)
        curve = apply_H(seq.state_at(k), curve, level_strategy(strat, k));
    return curve;
}

double successive_diff(const LaplaceCurve& a, const LaplaceCurve& b) {
    if (!a.grid()->same_as(*b.grid())) throw GridMismatch("successive_diff: different grids");
    double best = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double u = (*a.grid())[j];
        if (u > 10.0) break;
        // |e^{-La} - e^{-Lb}| without cancellation where phi hugs 1.
        const double lo = std::min(a.L_at_index(j), b.L_at_index(j));
        const double d = std::abs(a.L_at_index(j) - b.L_at_index(j));
        best = std::max(best, std::exp(-lo) * -std::expm1(-d) / u);
    }
    return best;
}

double mean_at_zero(const LaplaceCurve& curve) { return curve.mean_at_zero(); }

std::vector<double> psi_of_state(const EnvState& state, GridPtr grid,
                                 const ExpectationStrategy& strat) {
    const LaplaceCurve phi1 = apply_H(state, LaplaceCurve::standard_exponential(grid), strat);
    std::vector<double> psi(grid->size());
    for (std::size_t j = 0; j < grid->size(); ++j) {
        const double u = (*grid)[j];
        // (phi_1 - 1 + u)/u without forming 1 - phi_1 by subtraction.
        psi[j] = (u + std::expm1(-phi1.L_at_index(j))) / u;
    }
    return psi;
}

double a_discrepancy(const EnvState& state, const LaplaceCurve& next_curve, double u) {
    if (!(u > 0.0)) throw NonpositiveU("a_discrepancy: u must be positive");
    double acc = 0.0;
    if (state.kind() == StateKind::Burst) {
        const double A = next_curve.L_at(u * burst::kChildWeight);
        const double om = -std::expm1(-A);
        for (int k = 1; k <= burst::kSeriesTerms; ++k) {
            const double n = std::ldexp(1.0, k);
            acc += burst::count_probability(k) * (n * om - (-std::expm1(-n * A)));
        }
        return acc / u;
    }
    for (const auto& o : state.enumerated_outcomes()) {
        double sum_one_minus = 0.0;
        double sum_L = 0.0;
        for (double y : o.weights) {
            if (y <= 0.0) continue;
            const double L = next_curve.L_at(u * y);
            sum_one_minus += -std::expm1(-L);
            sum_L += L;
        }
        acc += o.p * (sum_one_minus - (-std::expm1(-sum_L)));
    }
    return acc / u;
}

double phistar(const LaplaceCurve& curve, double u) {
    if (!(u > 0.0)) throw NonpositiveU("phistar: u must be positive");
    return curve.one_minus_eval(u) / u;
}

namespace {

void enumerate_prefixes(const EnvironmentLaw& law, std::size_t depth,
                        std::vector<std::size_t>& prefix, double prob,
                        const std::function<void(const std::vector<std::size_t>&, double)>& fn) {
    if (prefix.size() == depth) {
        fn(prefix, prob);
        return;
    }
    for (std::size_t s = 0; s < law.size(); ++s) {
        if (law.prob(s) == 0.0) continue;
        prefix.push_back(s);
        enumerate_prefixes(law, depth, prefix, prob * law.prob(s), fn);
        prefix.pop_back();
    }
}

}  // namespace

double telescoping_residual(const EnvironmentLaw& law,
                            const std::vector<LaplaceCurve>& curve_by_state, double u,
                            std::size_t n) {
    if (!(u > 0.0)) throw NonpositiveU("telescoping_residual: u must be positive");
    if (n > 5) throw TooDeep("telescoping_residual: n <= 5 required");
    for (std::size_t s = 0; s < law.size(); ++s)
        if (law.state(s).kind() != StateKind::FiniteDiscrete)
            throw ContinuousState("telescoping_residual: FiniteDiscrete states only");
    if (curve_by_state.size() != law.size())
        throw MalformedLaw("telescoping_residual: one curve per state required");
    double enumeration = std::pow(static_cast<double>(law.size()), static_cast<double>(n + 1));
    if (enumeration > 1e6) throw TooLarge("telescoping_residual: too many prefixes");

    std::vector<StepLaw> steps;
    steps.reserve(law.size());
    for (std::size_t s = 0; s < law.size(); ++s) steps.push_back(step_law(law.state(s)));

    double total = 0.0;
    std::vector<std::size_t> prefix;
    enumerate_prefixes(law, n + 1, prefix, 1.0,
                       [&](const std::vector<std::size_t>& p, double prob) {
        double lhs = phistar(curve_by_state[p[0]], u);
        StepLaw walk = StepLaw::from_atoms({{0.0, 1.0}});
        for (std::size_t k = 0; k < n; ++k) {
            double ea = 0.0;
            for (const auto& atom : walk.atoms())
                ea += atom.mass *
                      a_discrepancy(law.state(p[k]), curve_by_state[p[k + 1]], u * std::exp(atom.x));
            lhs += ea;
            // Convolve in the k-th step to advance S_k -> S_{k+1}.
            std::vector<StepAtom> next;
            for (const auto& a : walk.atoms())
                for (const auto& b : steps[p[k]].atoms())
                    next.push_back({a.x + b.x, a.mass * b.mass});
            walk = StepLaw::from_atoms(std::move(next));
        }
        double rhs = 0.0;
        for (const auto& atom : walk.atoms())
            rhs += atom.mass * phistar(curve_by_state[p[n]], u * std::exp(atom.x));
        total += prob * std::abs(lhs - rhs);
    });
    return total;
}

ConvergenceProfile convergence_profile(const EnvSequence& seq, GridPtr grid,
                                       const ExpectationStrategy& strat, std::size_t n_max,
                                       double tol) {
    if (n_max > seq.size()) throw OutOfRange("convergence_profile: n_max exceeds sequence length");
    ConvergenceProfile out;
    LaplaceCurve prev = LaplaceCurve::standard_exponential(grid);
    double prev_g = HUGE_VAL;
    for (std::size_t n = 1; n <= n_max; ++n) {
        LaplaceCurve curr = LaplaceCurve::standard_exponential(grid);
        for (std::size_t k = n; k-- > 0;)
            curr = apply_H(seq.state_at(k), curr, level_strategy(strat, k));
        ConvergenceRecord rec;
        rec.n = n;
        rec.g_n = successive_diff(prev, curr);
        rec.mean = curr.mean_at_zero();
        rec.clamped = curr.clamp_flag();
        out.records.push_back(rec);
        if (rec.g_n < tol && prev_g < tol && out.converged_at == 0) {
            out.converged_at = n - 1;
            break;
        }
        prev_g = rec.g_n;
        prev = std::move(curr);
    }
    return out;
}

}  // namespace smoothlab
