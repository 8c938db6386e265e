#pragma once

#include <cstdint>
#include <vector>

#include "smoothlab/curve.hpp"
#include "smoothlab/env_model.hpp"

namespace smoothlab {

// How E_xi[.] is realized inside the smoothing operator. Exactly enumerable
// states (FiniteDiscrete, tilted atom states) and Burst always take their
// exact path; the strategy decides what happens for continuous tilted states:
//   Exact          -> refuse them (StrategyMismatch),
//   MonteCarlo     -> common-random-numbers sampling: one weight-vector batch
//                     shared by every grid point of the application,
//   GaussQuadrature-> per-child Gauss-Hermite integration.
struct ExpectationStrategy {
    enum class Kind { Exact, MonteCarlo, GaussQuadrature };
    Kind kind = Kind::Exact;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
    int nodes = 64;

    static ExpectationStrategy exact() { return {}; }
    static ExpectationStrategy monte_carlo(std::uint64_t budget, std::uint64_t seed) {
        ExpectationStrategy s;
        s.kind = Kind::MonteCarlo;
        s.budget = budget;
        s.seed = seed;
        return s;
    }
    static ExpectationStrategy quadrature(int nodes) {
        ExpectationStrategy s;
        s.kind = Kind::GaussQuadrature;
        s.nodes = nodes;
        return s;
    }
};

// One application of the smoothing operator: at each grid point u the output
// is E_state[prod_i phi(u y_i)] (empty product = 1). Grid points are
// independent, so the loop is data-parallel; apply_H runs it under OpenMP and
// apply_H_serial is the plain-loop reference the tests compare against.
LaplaceCurve apply_H(const EnvState& state, const LaplaceCurve& curve,
                     const ExpectationStrategy& strat = {});
LaplaceCurve apply_H_serial(const EnvState& state, const LaplaceCurve& curve,
                            const ExpectationStrategy& strat = {});

// phi_n(xi, .) by the backward recursion phi_n(xi,u) = H phi_{n-1}(T xi, u):
// start from phi_0 = e^{-u} and apply the states last to first. Monte Carlo
// strategies derive one sub-seed per level.
LaplaceCurve iterate(const EnvSequence& seq, GridPtr grid, const ExpectationStrategy& strat = {});

// max over grid points u <= 10 of |a(u) - b(u)| / u  (the g_n metric).
double successive_diff(const LaplaceCurve& a, const LaplaceCurve& b);

// (1 - phi(u_1)) / u_1 at the smallest grid point: the quenched mean.
double mean_at_zero(const LaplaceCurve& curve);

// psi(u) = (phi_1(u) - 1 + u)/u with phi_1 = H(e^{-u}); nonnegative,
// nondecreasing, psi(0+) = 0.
std::vector<double> psi_of_state(const EnvState& state, GridPtr grid,
                                 const ExpectationStrategy& strat = {});

// A(xi, u) = u^{-1} E[ sum_i (1 - phi(u y_i)) - (1 - prod_i phi(u y_i)) ]
// with phi = next_curve. Strictly positive off u = 0 for non-degenerate
// curves once the state produces >= 2 positive weights with positive
// probability. Exact states only.
double a_discrepancy(const EnvState& state, const LaplaceCurve& next_curve, double u);

// phi*(u) = (1 - phi(u)) / u.
double phistar(const LaplaceCurve& curve, double u);

// Residual of the finite telescoping identity
//   phi*(xi,u) + E_xi sum_{k<n} A(T^k xi, u e^{S_k}) = E_xi phi*(T^n xi, u e^{S_n})
// with the supplied per-state curve approximations standing in for phi,
// averaged over all environment prefixes of length n+1 weighted by their
// probability. Exact enumeration: FiniteDiscrete laws, n <= 5.
double telescoping_residual(const EnvironmentLaw& law, const std::vector<LaplaceCurve>& curve_by_state,
                            double u, std::size_t n);

struct ConvergenceRecord {
    std::size_t n = 0;
    double g_n = 0.0;    // successive_diff(phi_{n-1}, phi_n)
    double mean = 0.0;   // mean_at_zero(phi_n)
    bool clamped = false;
};

struct ConvergenceProfile {
    std::vector<ConvergenceRecord> records;
    // First n with g_n < tol and g_{n+1} < tol (0 when never reached).
    std::size_t converged_at = 0;
};

// g_n along prefixes of one environment sequence, recomputing each prefix
// chain (consecutive iterates differ in the innermost state, so there is no
// shared work). Stops early once two consecutive g fall below tol.
ConvergenceProfile convergence_profile(const EnvSequence& seq, GridPtr grid,
                                       const ExpectationStrategy& strat, std::size_t n_max,
                                       double tol = 1e-6);

}  // namespace smoothlab
