#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "smoothlab/spine_walk.hpp"

namespace smoothlab {

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

inline double standard_error(const std::vector<double>& v) {
    return std::sqrt(sample_variance(v) / static_cast<double>(v.size()));
}

inline double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    double hi = v[n / 2];
    if (n % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
    return 0.5 * (hi + v[n / 2 - 1]);
}

// Blocked median-of-means, the robust location estimate used for
// heavy-tailed families.
inline double median_of_means(const std::vector<double>& v, std::size_t blocks) {
    const std::size_t per = v.size() / blocks;
    std::vector<double> means;
    means.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        double s = 0.0;
        for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += v[i];
        means.push_back(s / static_cast<double>(per));
    }
    return median_of(std::move(means));
}

// One-sample Kolmogorov-Smirnov statistic of samples against the discrete
// CDF of a StepLaw (atoms and masses). Tied samples are compared as one
// jump: at each distinct value the left limits F(x-) vs i0/n and the right
// limits F(x) vs i1/n enter the supremum. For discrete targets the usual
// critical values are conservative.
inline double ks_statistic(std::vector<double> samples, const StepLaw& law) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    const double total = law.total_mass();
    const auto& atoms = law.atoms();
    double d = 0.0;
    double cum = 0.0;
    std::size_t a = 0;
    std::size_t i = 0;
    while (i < samples.size()) {
        const double x = samples[i];
        std::size_t j = i;
        while (j < samples.size() && samples[j] == x) ++j;
        while (a < atoms.size() && atoms[a].x < x - 1e-12) cum += atoms[a].mass, ++a;
        const double f_left = cum / total;
        while (a < atoms.size() && atoms[a].x <= x + 1e-12) cum += atoms[a].mass, ++a;
        const double f_right = cum / total;
        d = std::max(d, std::abs(f_left - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f_right - static_cast<double>(j) / n));
        i = j;
    }
    return d;
}

// Critical value of the KS statistic at significance alpha via the
// asymptotic Kolmogorov distribution: lambda = sqrt(-ln(alpha/2)/2).
inline double ks_critical(std::size_t n, double alpha) {
    const double lambda = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return lambda / std::sqrt(static_cast<double>(n));
}

}  // namespace smoothlab
