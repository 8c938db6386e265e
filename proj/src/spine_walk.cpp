#include "smoothlab/spine_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smoothlab {

StepLaw StepLaw::from_atoms(std::vector<StepAtom> atoms, double merge_res) {
    std::erase_if(atoms, [](const StepAtom& a) { return a.mass == 0.0; });
    for (const auto& a : atoms)
        if (a.mass < 0.0 || !std::isfinite(a.x)) throw MalformedLaw("step law: bad atom");
    std::sort(atoms.begin(), atoms.end(),
              [](const StepAtom& a, const StepAtom& b) { return a.x < b.x; });
    StepLaw out;
    for (const auto& a : atoms) {
        if (!out.atoms_.empty() && a.x - out.atoms_.back().x <= merge_res) {
            StepAtom& last = out.atoms_.back();
            const double m = last.mass + a.mass;
            last.x = (last.x * last.mass + a.x * a.mass) / m;
            last.mass = m;
        } else {
            out.atoms_.push_back(a);
        }
    }
    return out;
}

double StepLaw::total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass;
    return s;
}

double StepLaw::mean() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.x * a.mass;
    return s;
}

double StepLaw::upper_tail(double t, double edge_tol) const {
    double s = 0.0;
    for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
        if (it->x >= t - edge_tol)
            s += it->mass;
        else
            break;
    }
    return s;
}

double StepLaw::sample(Xoshiro256pp& rng) const {
    const double total = total_mass();
    double u = rng.uniform01() * total;
    for (const auto& a : atoms_) {
        if (u < a.mass) return a.x;
        u -= a.mass;
    }
    return atoms_.back().x;
}

StepLaw step_law(const EnvState& state, double merge_res) {
    std::vector<StepAtom> atoms;
    if (state.kind() == StateKind::Burst) {
        // All positive weights equal 1/2; the total size-biased mass is the
        // quenched mean, exactly 1 by construction.
        atoms.push_back({-std::numbers::ln2, 1.0});
        return StepLaw::from_atoms(std::move(atoms), merge_res);
    }
    if (!state.exact_enumerable())
        throw ContinuousState("step_law: state '" + state.id() +
                              "' has no finite atom list; use sample_step");
    for (const auto& o : state.enumerated_outcomes())
        for (double y : o.weights)
            if (y > 0.0) atoms.push_back({std::log(y), o.p * y});
    return StepLaw::from_atoms(std::move(atoms), merge_res);
}

StepLaw annealed_step_law(const EnvironmentLaw& law, double merge_res) {
    std::vector<StepAtom> atoms;
    for (std::size_t s = 0; s < law.size(); ++s) {
        const double pi_s = law.prob(s);
        if (pi_s == 0.0) continue;
        const StepLaw g = step_law(law.state(s), merge_res);
        for (const auto& a : g.atoms()) atoms.push_back({a.x, pi_s * a.mass});
    }
    return StepLaw::from_atoms(std::move(atoms), merge_res);
}

double drift(const EnvironmentLaw& law) { return annealed_step_law(law).mean(); }

StepSample sample_step(const EnvironmentLaw& law, Xoshiro256pp& rng) {
    const std::size_t s = law.sample_state_index(rng.uniform01());
    const EnvState& state = law.state(s);
    if (state.exact_enumerable() || state.kind() == StateKind::Burst)
        return {step_law(state).sample(rng), 1.0};
    // Importance pair: pick child i proportional to y_i inside one sampled
    // vector and carry w = sum_j y_j; estimators over these are
    // self-normalizing.
    const WeightVector v = state.sample_weights(rng);
    const double total = v.sum();
    if (total <= 0.0) return {0.0, 0.0};
    double u = rng.uniform01() * total;
    for (double y : v) {
        if (y <= 0.0) continue;
        if (u < y) return {std::log(y), total};
        u -= y;
    }
    return {std::log(v[v.size() - 1]), total};
}

namespace {

StepLaw convolve(const StepLaw& a, const StepLaw& b, double merge_res, std::size_t max_atoms) {
    if (a.size() * b.size() > max_atoms)
        throw AtomExplosion("walk_convolve: atom count would exceed cap");
    std::vector<StepAtom> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a.atoms())
        for (const auto& y : b.atoms()) out.push_back({x.x + y.x, x.mass * y.mass});
    StepLaw merged = StepLaw::from_atoms(std::move(out), merge_res);
    if (merged.size() > max_atoms) throw AtomExplosion("walk_convolve: atom cap exceeded");
    return merged;
}

}  // namespace

std::vector<StepLaw> walk_convolve(const StepLaw& step, std::size_t n_max, double merge_res,
                                   std::size_t max_atoms) {
    std::vector<StepLaw> levels;
    levels.reserve(n_max + 1);
    levels.push_back(StepLaw::from_atoms({{0.0, 1.0}}, merge_res));
    for (std::size_t n = 1; n <= n_max; ++n)
        levels.push_back(convolve(levels.back(), step, merge_res, max_atoms));
    return levels;
}

std::vector<StepLaw> walk_convolve(const EnvironmentLaw& law, std::size_t n_max, double merge_res,
                                   std::size_t max_atoms) {
    return walk_convolve(annealed_step_law(law, merge_res), n_max, merge_res, max_atoms);
}

TailSums tail_sums(const std::vector<StepLaw>& levels, double c) {
    TailSums out;
    double run = 0.0;
    for (std::size_t n = 1; n < levels.size(); ++n) {
        const double p = levels[n].upper_tail(c * static_cast<double>(n));
        run += p;
        out.increments.push_back(p);
        out.partial_sums.push_back(run);
    }
    return out;
}

TailSums tail_sums(const EnvironmentLaw& law, double c, std::size_t n_max, double merge_res) {
    return tail_sums(walk_convolve(law, n_max, merge_res), c);
}

}  // namespace smoothlab
