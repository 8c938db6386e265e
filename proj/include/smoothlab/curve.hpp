#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "smoothlab/errors.hpp"

namespace smoothlab {

// Strictly increasing positive evaluation grid for Laplace transforms.
class UGrid {
  public:
    explicit UGrid(std::vector<double> points);

    static std::shared_ptr<const UGrid> log_spaced(double u_min, double u_max, std::size_t n);
    // 401 points, log-spaced over [1e-8, 1e8].
    static std::shared_ptr<const UGrid> standard();

    std::size_t size() const { return pts_.size(); }
    double operator[](std::size_t j) const { return pts_[j]; }
    const std::vector<double>& points() const { return pts_; }
    double front() const { return pts_.front(); }
    double back() const { return pts_.back(); }

    bool same_as(const UGrid& o) const;

  private:
    std::vector<double> pts_;
};

using GridPtr = std::shared_ptr<const UGrid>;

// A quenched Laplace transform phi sampled on a grid, stored as
// L = -log phi (finite, >= 0, nondecreasing, concave). Storing L keeps the
// representation meaningful where phi itself underflows (u ~ 1e8).
//
// Off-grid evaluation interpolates L with a monotone cubic (Fritsch-Carlson)
// in u. This reproduces any linear L exactly -- in particular e^{-u} survives
// the smoothing operator bit-for-bit, which the fixed-point checks rely on --
// and is shape-preserving. Below the grid L is linear in u (L'(0) = mean);
// above the grid L is clamped and the evaluation is flagged.
class LaplaceCurve {
  public:
    LaplaceCurve(GridPtr grid, std::vector<double> log_values, bool clamp_flag = false);

    // phi_0 = e^{-u}: L = u on the grid.
    static LaplaceCurve standard_exponential(GridPtr grid);
    // Constant curve phi = c in (0,1].
    static LaplaceCurve constant(GridPtr grid, double c);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return logv_.size(); }
    double L_at_index(std::size_t j) const { return logv_[j]; }
    double phi_at_index(std::size_t j) const;
    const std::vector<double>& log_values() const { return logv_; }
    bool clamp_flag() const { return clamp_flag_; }

    // Interpolated L(u); sets *clamped when u exceeds the grid.
    double L_at(double u, bool* clamped = nullptr) const;
    // phi(u) in (0,1]; phi(0) = 1; throws NegativeArgument for u < 0.
    double eval(double u, bool* clamped = nullptr) const;
    // 1 - phi(u), computed without cancellation (via expm1).
    double one_minus_eval(double u, bool* clamped = nullptr) const;

    // (1 - phi(u_1)) / u_1: numerical derivative at zero, the quenched mean.
    double mean_at_zero() const;

    struct InvariantReport {
        bool values_in_range = true;   // 0 < phi <= 1 (L finite, >= 0)
        bool phi_nonincreasing = true;
        bool phi_convex = true;        // divided second differences >= -slack
        bool L_nondecreasing = true;
        bool L_concave = true;         // divided second differences <= +slack
        bool pass() const {
            return values_in_range && phi_nonincreasing && phi_convex && L_nondecreasing &&
                   L_concave;
        }
    };
    InvariantReport check_invariants(double slack = 1e-10) const;

    void write_csv(std::ostream& os) const;
    static LaplaceCurve read_csv(std::istream& is, bool clamp_flag = false);

  private:
    void build_derivatives();

    GridPtr grid_;
    std::vector<double> logv_;
    std::vector<double> deriv_;  // pchip node derivatives of L
    bool clamp_flag_ = false;
};

}  // namespace smoothlab
