#include "smoothlab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace smoothlab {

UGrid::UGrid(std::vector<double> points) : pts_(std::move(points)) {
    if (pts_.size() < 3) throw MalformedLaw("grid: at least 3 points required");
    double prev = 0.0;
    for (double u : pts_) {
        if (!(u > prev) || !std::isfinite(u))
            throw MalformedLaw("grid: points must be positive and strictly increasing");
        prev = u;
    }
}

std::shared_ptr<const UGrid> UGrid::log_spaced(double u_min, double u_max, std::size_t n) {
    if (!(u_min > 0.0) || !(u_max > u_min) || n < 3) throw MalformedLaw("grid: bad log-spaced spec");
    const double lo = std::log10(u_min);
    const double hi = std::log10(u_max);
    std::vector<double> pts(n);
    for (std::size_t j = 0; j < n; ++j)
        pts[j] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1));
    pts.front() = u_min;
    pts.back() = u_max;
    return std::make_shared<const UGrid>(std::move(pts));
}

std::shared_ptr<const UGrid> UGrid::standard() {
    static const std::shared_ptr<const UGrid> g = log_spaced(1e-8, 1e8, 401);
    return g;
}

bool UGrid::same_as(const UGrid& o) const {
    return this == &o || pts_ == o.pts_;
}

LaplaceCurve::LaplaceCurve(GridPtr grid, std::vector<double> log_values, bool clamp_flag)
    : grid_(std::move(grid)), logv_(std::move(log_values)), clamp_flag_(clamp_flag) {
    if (!grid_) throw MalformedLaw("curve: null grid");
    if (logv_.size() != grid_->size()) throw GridMismatch("curve: value/grid size mismatch");
    for (double L : logv_)
        if (!(L >= 0.0) || !std::isfinite(L))
            throw MalformedLaw("curve: L values must be finite and >= 0");
    build_derivatives();
}

LaplaceCurve LaplaceCurve::standard_exponential(GridPtr grid) {
    std::vector<double> L(grid->points().begin(), grid->points().end());
    return LaplaceCurve(std::move(grid), std::move(L));
}

LaplaceCurve LaplaceCurve::constant(GridPtr grid, double c) {
    if (!(c > 0.0) || c > 1.0) throw MalformedLaw("curve: constant must be in (0,1]");
    std::vector<double> L(grid->size(), -std::log(c));
    return LaplaceCurve(std::move(grid), std::move(L));
}

double LaplaceCurve::phi_at_index(std::size_t j) const { return std::exp(-logv_[j]); }

// Fritsch-Carlson node derivatives: monotone data produce a monotone
// interpolant, and linear data reproduce their slope exactly.
void LaplaceCurve::build_derivatives() {
    const std::size_t n = logv_.size();
    const auto& x = grid_->points();
    deriv_.assign(n, 0.0);
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        d[k] = (logv_[k + 1] - logv_[k]) / h[k];
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (d[k - 1] == 0.0 || d[k] == 0.0 || (d[k - 1] > 0) != (d[k] > 0)) {
            deriv_[k] = 0.0;
        } else {
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            deriv_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    auto edge = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) return 0.0;
        if ((d0 > 0) != (d1 > 0) && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m;
    };
    deriv_[0] = edge(h[0], h[1], d[0], d[1]);
    deriv_[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

double LaplaceCurve::L_at(double u, bool* clamped) const {
    if (u < 0.0) throw NegativeArgument("curve: negative evaluation point");
    const auto& x = grid_->points();
    if (u == 0.0) return 0.0;
    if (u < x.front()) return logv_.front() * (u / x.front());
    if (u > x.back()) {
        if (clamped) *clamped = true;
        return logv_.back();
    }
    const auto it = std::upper_bound(x.begin(), x.end(), u);
    std::size_t k = static_cast<std::size_t>(it - x.begin());
    if (k >= x.size()) k = x.size() - 1;
    if (k == 0) k = 1;
    --k;  // u in [x[k], x[k+1]]
    const double h = x[k + 1] - x[k];
    const double t = (u - x[k]) / h;
    const double y0 = logv_[k], y1 = logv_[k + 1];
    const double m0 = deriv_[k] * h, m1 = deriv_[k + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    return y0 * (2 * t3 - 3 * t2 + 1) + m0 * (t3 - 2 * t2 + t) + y1 * (-2 * t3 + 3 * t2) +
           m1 * (t3 - t2);
}

double LaplaceCurve::eval(double u, bool* clamped) const { return std::exp(-L_at(u, clamped)); }

double LaplaceCurve::one_minus_eval(double u, bool* clamped) const {
    return -std::expm1(-L_at(u, clamped));
}

double LaplaceCurve::mean_at_zero() const {
    return -std::expm1(-logv_.front()) / grid_->front();
}

// Shape checks on divided differences. Where phi hugs 1 the slopes are
// formed through expm1 of L-differences, and every comparison carries a
// rounding allowance inversely proportional to the local spacing; curvature
// below that allowance is not resolvable in double precision.
LaplaceCurve::InvariantReport LaplaceCurve::check_invariants(double slack) const {
    InvariantReport rep;
    const auto& x = grid_->points();
    const std::size_t n = logv_.size();
    double prev_slope_phi = 0.0, prev_slope_L = 0.0, prev_noise = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = x[k + 1] - x[k];
        const double dL = logv_[k + 1] - logv_[k];
        // phi_{k+1} - phi_k = e^{-L_k} (e^{-dL} - 1)
        const double slope_phi = std::exp(-logv_[k]) * std::expm1(-dL) / h;
        const double slope_L = dL / h;
        const double noise = 4e-16 * std::max(1.0, logv_[k]) / h;
        if (slope_phi > slack + noise) rep.phi_nonincreasing = false;
        if (slope_L < -(slack + noise)) rep.L_nondecreasing = false;
        if (k > 0) {
            const double allowance = slack + noise + prev_noise;
            if (slope_phi - prev_slope_phi < -allowance) rep.phi_convex = false;
            if (slope_L - prev_slope_L > allowance) rep.L_concave = false;
        }
        prev_slope_phi = slope_phi;
        prev_slope_L = slope_L;
        prev_noise = noise;
    }
    return rep;
}

void LaplaceCurve::write_csv(std::ostream& os) const {
    os << "u,phi,L\n";
    char buf[96];
    for (std::size_t j = 0; j < logv_.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", (*grid_)[j], phi_at_index(j),
                      logv_[j]);
        os << buf;
    }
}

LaplaceCurve LaplaceCurve::read_csv(std::istream& is, bool clamp_flag) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("curve csv: empty stream");
    std::vector<double> us, Ls;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[3];
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(row, cell, ',')) throw ParseError("curve csv: short row");
            vals[c] = std::stod(cell);
        }
        us.push_back(vals[0]);
        Ls.push_back(vals[2]);
    }
    auto grid = std::make_shared<const UGrid>(std::move(us));
    return LaplaceCurve(std::move(grid), std::move(Ls), clamp_flag);
}

}  // namespace smoothlab
