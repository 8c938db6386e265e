#pragma once

#include <iosfwd>
#include <vector>

#include "smoothlab/env_model.hpp"

namespace smoothlab {

// Ground truth on tiny instances by full tree enumeration at the exact
// multiplied arguments (no grid, no interpolation), in extended precision.
struct ExactTransform {
    std::vector<double> u_points;
    std::vector<double> values;  // E_xi e^{-u W_n}
    std::size_t depth = 0;

    void write_csv(std::ostream& os) const;
};

// phi_n(xi, u) by the exact backward recursion phi_0 = e^{-u},
// phi_k(u) = sum_outcomes p prod_i phi_{k-1}(u y_i). Guards: n <= 4,
// outcomes per state <= 4, children per outcome <= 3.
ExactTransform exact_wn_transform(const EnvSequence& seq, const std::vector<double>& u_points,
                                  std::size_t depth);

// Exact E_xi W_n by enumerating the tree and summing weights. Equals the
// product of per-level quenched means, i.e. 1 for valid laws.
double exact_wn_mean(const EnvSequence& seq, std::size_t depth);

}  // namespace smoothlab
