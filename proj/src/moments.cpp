#include "smoothlab/moments.hpp"

#include <cmath>
#include <numbers>

#include "smoothlab/rng.hpp"

namespace smoothlab {

std::string MomentValue::method_str() const {
    switch (method) {
        case MomentMethod::Exact: return "exact";
        case MomentMethod::Series: return "series";
        case MomentMethod::MonteCarlo:
            return "monte-carlo(" + std::to_string(budget) + "," + std::to_string(std_error) + ")";
    }
    return "?";
}

double quenched_mean(const EnvState& state) { return state.quenched_mean(); }

namespace {

double log_plus(double y) { return y > 1.0 ? std::log(y) : 0.0; }

// The three summands for one realized weight vector.
struct Summands {
    double c1 = 0.0;
    double c2 = 0.0;
    double kappa = 0.0;
};

Summands summands_for(const WeightVector& v) {
    Summands s;
    double total = 0.0;
    for (double y : v) {
        if (y <= 0.0) continue;
        const double ly = std::log(y);
        const double lp = log_plus(y);
        s.c1 += y * lp * lp;
        s.kappa += y * ly;
        total += y;
    }
    s.c2 = total > 0.0 ? total * std::abs(std::log(total)) : 0.0;
    return s;
}

enum class Functional { C1, C2, Kappa };

// Exact per-state value over an enumerable outcome list.
double exact_state_value(const EnvState& state, Functional f) {
    double acc = 0.0;
    for (const auto& o : state.enumerated_outcomes()) {
        const Summands s = summands_for(o.weights);
        acc += o.p * (f == Functional::C1 ? s.c1 : f == Functional::C2 ? s.c2 : s.kappa);
    }
    return acc;
}

// sum_{k>K} 1/k^2 by Euler-Maclaurin; the remainder of this expansion is
// below 1/(30 K^5), far inside the 1e-6 budget at K = 60.
double basel_tail(int K) {
    const double k = K;
    return 1.0 / k - 1.0 / (2.0 * k * k) + 1.0 / (6.0 * k * k * k);
}

double burst_expected_count_series() {
    double s = 0.0;
    for (int k = burst::kSeriesTerms; k >= 1; --k) s += 1.0 / (static_cast<double>(k) * k);
    return burst::coefficient() * (s + basel_tail(burst::kSeriesTerms));
}

MomentValue burst_value(Functional f) {
    MomentValue mv;
    switch (f) {
        case Functional::C1:
            // All weights are 1/2, so log+ vanishes.
            mv.value = ExtReal::finite(0.0);
            mv.method = MomentMethod::Exact;
            mv.certified_finite = true;
            break;
        case Functional::C2:
            // sum_k p_k 2^{k-1} (k-1) ln 2 = (c ln2 / 2) sum (k-1)/k^2, divergent.
            mv.value = ExtReal::pos_inf();
            mv.method = MomentMethod::Series;
            mv.divergent_series = true;
            break;
        case Functional::Kappa:
            mv.value = ExtReal::finite(-std::numbers::ln2 * 0.5 * burst_expected_count_series());
            mv.method = MomentMethod::Series;
            mv.certified_finite = true;
            break;
    }
    return mv;
}

// Closed form for a tilted state: E[sum y log y] = theta m'/m - log m.
double tilted_kappa_closed_form(const EnvState& state) {
    const DisplacementState& d = state.displacement();
    const double theta = state.theta();
    const double m = d.m_theta(theta);
    return theta * d.m_prime(theta) / m - std::log(m);
}

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Batch-means Monte Carlo of one functional for one state. The batch
// partition is fixed by (budget, batches), and batches reduce in index
// order, so the result is identical however the loop is scheduled.
McEstimate mc_state_value(const EnvState& state, Functional f, std::uint64_t budget,
                          std::uint64_t seed, int batches) {
    if (budget == 0 || batches <= 0) throw StrategyMismatch("moments: Monte Carlo budget is zero");
    const std::uint64_t per_batch = budget / static_cast<std::uint64_t>(batches);
    if (per_batch == 0) throw StrategyMismatch("moments: budget smaller than batch count");
    std::vector<double> batch_mean(static_cast<std::size_t>(batches), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < batches; ++b) {
        Xoshiro256pp rng(derive_seed(seed, {std::string("moment-batch"),
                                            static_cast<std::uint64_t>(b)}));
        double acc = 0.0;
        for (std::uint64_t i = 0; i < per_batch; ++i) {
            const Summands s = summands_for(state.sample_weights(rng));
            acc += f == Functional::C1 ? s.c1 : f == Functional::C2 ? s.c2 : s.kappa;
        }
        batch_mean[static_cast<std::size_t>(b)] = acc / static_cast<double>(per_batch);
    }
    double mean = 0.0;
    for (double m : batch_mean) mean += m;
    mean /= static_cast<double>(batches);
    double var = 0.0;
    for (double m : batch_mean) var += (m - mean) * (m - mean);
    var /= static_cast<double>(batches - 1);
    McEstimate e;
    e.value = mean;
    e.std_error = std::sqrt(var / static_cast<double>(batches));
    return e;
}

MomentValue state_value(const EnvState& state, Functional f, const MomentOptions& opt) {
    MomentValue mv;
    if (state.kind() == StateKind::Burst) return burst_value(f);
    if (state.exact_enumerable()) {
        mv.value = ExtReal::finite(exact_state_value(state, f));
        mv.method = MomentMethod::Exact;
        mv.certified_finite = true;
        return mv;
    }
    // ThetaTilted with continuous displacements.
    if (f == Functional::Kappa) {
        mv.value = ExtReal::finite(tilted_kappa_closed_form(state));
        mv.method = MomentMethod::Exact;
        mv.certified_finite = true;
        return mv;
    }
    const McEstimate e = mc_state_value(
        state, f, opt.mc_budget,
        derive_seed(opt.seed, {std::string("moment-state"), std::string(state.id())}),
        opt.batches);
    mv.value = ExtReal::finite(e.value);
    mv.method = MomentMethod::MonteCarlo;
    mv.std_error = e.std_error;
    mv.budget = opt.mc_budget;
    // Finiteness is analytic for the tilted families (finitely many children,
    // atom or Gaussian displacements: every moment E W^{1+eps} is finite);
    // only the value needs estimating.
    mv.certified_finite = true;
    return mv;
}

MomentValue law_value(const EnvironmentLaw& law, Functional f, const MomentOptions& opt) {
    MomentValue total;
    total.value = ExtReal::finite(0.0);
    total.method = MomentMethod::Exact;
    total.certified_finite = true;
    double var_acc = 0.0;
    for (std::size_t s = 0; s < law.size(); ++s) {
        const double pi_s = law.prob(s);
        if (pi_s == 0.0) continue;
        const MomentValue mv = state_value(law.state(s), f, opt);
        total.value = total.value + mv.value.scaled(pi_s);
        if (mv.method == MomentMethod::Series) total.method = MomentMethod::Series;
        if (mv.method == MomentMethod::MonteCarlo) {
            total.method = MomentMethod::MonteCarlo;
            total.budget += mv.budget;
        }
        var_acc += pi_s * pi_s * mv.std_error * mv.std_error;
        total.divergent_series = total.divergent_series || mv.divergent_series;
        total.certified_finite = total.certified_finite && mv.certified_finite;
    }
    total.std_error = std::sqrt(var_acc);
    return total;
}

}  // namespace

MomentValue moment_c1(const EnvironmentLaw& law, const MomentOptions& opt) {
    return law_value(law, Functional::C1, opt);
}

MomentValue moment_c2(const EnvironmentLaw& law, const MomentOptions& opt) {
    return law_value(law, Functional::C2, opt);
}

MomentValue kappa_weights(const EnvironmentLaw& law, const MomentOptions& opt) {
    return law_value(law, Functional::Kappa, opt);
}

MomentValue kappa_weights_mc(const EnvironmentLaw& law, std::uint64_t budget, std::uint64_t seed,
                             int batches) {
    if (budget == 0 || batches <= 0) throw StrategyMismatch("moments: Monte Carlo budget is zero");
    const std::uint64_t per_batch = budget / static_cast<std::uint64_t>(batches);
    if (per_batch == 0) throw StrategyMismatch("moments: budget smaller than batch count");
    std::vector<double> batch_mean(static_cast<std::size_t>(batches), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < batches; ++b) {
        Xoshiro256pp rng(derive_seed(seed, {std::string("kappa-mc"), static_cast<std::uint64_t>(b)}));
        double acc = 0.0;
        for (std::uint64_t i = 0; i < per_batch; ++i) {
            const std::size_t s = law.sample_state_index(rng.uniform01());
            double k = 0.0;
            for (double y : law.state(s).sample_weights(rng))
                if (y > 0.0) k += y * std::log(y);
            acc += k;
        }
        batch_mean[static_cast<std::size_t>(b)] = acc / static_cast<double>(per_batch);
    }
    double mean = 0.0;
    for (double m : batch_mean) mean += m;
    mean /= static_cast<double>(batches);
    double var = 0.0;
    for (double m : batch_mean) var += (m - mean) * (m - mean);
    var /= static_cast<double>(batches - 1);
    MomentValue mv;
    mv.value = ExtReal::finite(mean);
    mv.method = MomentMethod::MonteCarlo;
    mv.std_error = std::sqrt(var / static_cast<double>(batches));
    mv.budget = budget;
    return mv;
}

MomentReport moment_report(const EnvironmentLaw& law, const MomentOptions& opt) {
    MomentReport r;
    r.c1 = moment_c1(law, opt);
    r.c2 = moment_c2(law, opt);
    r.kappa = kappa_weights(law, opt);
    return r;
}

std::string to_string(LawClass c) {
    switch (c) {
        case LawClass::UNIQUE_L1: return "UNIQUE_L1";
        case LawClass::NO_L1_DRIFT: return "NO_L1_DRIFT";
        case LawClass::NO_L1_XLOGX: return "NO_L1_XLOGX";
        case LawClass::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

enum class Sign { Negative, NonNegative, Straddle };

Sign kappa_sign(const MomentValue& kappa) {
    const ExtReal& v = kappa.value;
    if (v.is_pos_inf()) return Sign::NonNegative;
    if (v.is_neg_inf()) return Sign::Negative;
    if (kappa.method == MomentMethod::MonteCarlo) {
        const double lo = v.value() - 3.0 * kappa.std_error;
        const double hi = v.value() + 3.0 * kappa.std_error;
        if (lo >= 0.0) return Sign::NonNegative;
        if (hi < 0.0) return Sign::Negative;
        return Sign::Straddle;
    }
    return v.value() >= 0.0 ? Sign::NonNegative : Sign::Negative;
}

bool certainly_finite(const MomentValue& mv) {
    return mv.value.is_finite() && mv.certified_finite;
}

bool certainly_infinite(const MomentValue& mv) { return mv.value.is_pos_inf(); }

}  // namespace

Verdict classify_from_report(const MomentReport& report) {
    Verdict v;
    v.report = report;
    const MomentValue& kappa = report.kappa;

    if (kappa.value.is_indeterminate()) {
        v.verdict = LawClass::INCONCLUSIVE;
        v.flags.push_back("kappa-indeterminate");
        return v;
    }
    const Sign sign = kappa_sign(kappa);
    if (sign == Sign::Straddle) {
        v.verdict = LawClass::INCONCLUSIVE;
        v.flags.push_back("kappa-ci-straddles-zero");
        return v;
    }
    if (sign == Sign::NonNegative) {
        v.verdict = LawClass::NO_L1_DRIFT;
        return v;
    }
    // kappa < 0 from here on (possibly -inf).
    if (certainly_finite(report.c1) && certainly_finite(report.c2)) {
        v.verdict = LawClass::UNIQUE_L1;
        if (kappa.value.is_neg_inf()) v.flags.push_back("literal-(c3)");
        return v;
    }
    if (certainly_finite(report.c1) && kappa.value.is_finite() && certainly_infinite(report.c2)) {
        v.verdict = LawClass::NO_L1_XLOGX;
        if (report.c2.divergent_series) v.flags.push_back("divergent-series");
        return v;
    }
    v.verdict = LawClass::INCONCLUSIVE;
    return v;
}

Verdict classify(const EnvironmentLaw& law, const MomentOptions& opt) {
    return classify_from_report(moment_report(law, opt));
}

}  // namespace smoothlab
