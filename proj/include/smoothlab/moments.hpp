#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smoothlab/env_model.hpp"
#include "smoothlab/extreal.hpp"

namespace smoothlab {

enum class MomentMethod { Exact, Series, MonteCarlo };

struct MomentValue {
    ExtReal value;
    MomentMethod method = MomentMethod::Exact;
    double std_error = 0.0;      // batch-means standard error (MonteCarlo)
    std::uint64_t budget = 0;    // samples used (MonteCarlo)
    bool divergent_series = false;
    // Finiteness established analytically or by exact computation, as opposed
    // to being merely a finite Monte Carlo estimate.
    bool certified_finite = false;

    std::string method_str() const;
};

struct MomentReport {
    MomentValue c1;     // E[sum y (log+ y)^2]
    MomentValue c2;     // E[(sum y)|log sum y|]
    MomentValue kappa;  // E[sum y log y], 0 log 0 := 0
};

struct MomentOptions {
    std::uint64_t mc_budget = 1000000;
    std::uint64_t seed = 0;
    int batches = 100;
};

double quenched_mean(const EnvState& state);

MomentValue moment_c1(const EnvironmentLaw& law, const MomentOptions& opt = {});
MomentValue moment_c2(const EnvironmentLaw& law, const MomentOptions& opt = {});
MomentValue kappa_weights(const EnvironmentLaw& law, const MomentOptions& opt = {});

// Monte Carlo estimator of kappa regardless of the exact path being
// available; used to cross-check the closed forms on sampled laws.
MomentValue kappa_weights_mc(const EnvironmentLaw& law, std::uint64_t budget, std::uint64_t seed,
                             int batches = 100);

MomentReport moment_report(const EnvironmentLaw& law, const MomentOptions& opt = {});

enum class LawClass { UNIQUE_L1, NO_L1_DRIFT, NO_L1_XLOGX, INCONCLUSIVE };

std::string to_string(LawClass c);

struct Verdict {
    LawClass verdict = LawClass::INCONCLUSIVE;
    MomentReport report;
    std::vector<std::string> flags;
};

// Theorem-2 check first (kappa exists and >= 0), then Theorem 1, then
// Theorem 3. Monte Carlo moments whose 3-sigma interval straddles a decision
// boundary yield INCONCLUSIVE.
Verdict classify(const EnvironmentLaw& law, const MomentOptions& opt = {});
Verdict classify_from_report(const MomentReport& report);

}  // namespace smoothlab
