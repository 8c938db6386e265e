#pragma once

#include <vector>

namespace smoothlab {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Hermite rule for integrals against e^{-x^2} dx on the real line.
// For Z ~ N(mu, s2): E f(Z) = (1/sqrt(pi)) sum_i w_i f(mu + sqrt(2 s2) x_i).
QuadRule gauss_hermite(int n);

}  // namespace smoothlab
