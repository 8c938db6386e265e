#include "smoothlab/rng.hpp"

#include <cmath>
#include <cstring>

namespace smoothlab {

namespace {

// 256-layer ziggurat for the standard normal (Marsaglia-Tsang construction).
// Layer boundaries x_i satisfy f(x_{i+1}) = f(x_i) + V/x_i with
// f(x) = exp(-x^2/2), x_1 = R, and the base layer (i = 0) covering
// [0, V/f(R)] plus the tail beyond R. R and V are the standard constants for
// which the recursion closes at y = 1 after 256 layers.
struct ZigguratTables {
    double x[257];
    double f[257];

    ZigguratTables() {
        constexpr double R = 3.6541528853610088;
        constexpr double V = 0.00492867323399;
        const double fR = std::exp(-0.5 * R * R);
        x[0] = V / fR;  // pseudo-width of the base layer
        x[1] = R;
        f[0] = fR;
        f[1] = fR;
        for (int i = 2; i < 256; ++i) {
            const double y = f[i - 1] + V / x[i - 1];
            x[i] = std::sqrt(-2.0 * std::log(y));
            f[i] = y;
        }
        x[256] = 0.0;
        f[256] = 1.0;
    }
};

const ZigguratTables& tables() {
    static const ZigguratTables t;
    return t;
}

}  // namespace

double Xoshiro256pp::normal() {
    const ZigguratTables& t = tables();
    for (;;) {
        const std::uint64_t bits = next();
        const int i = static_cast<int>(bits & 0xff);
        const bool neg = (bits & 0x100) != 0;
        const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
        const double xcand = u * t.x[i];
        if (xcand < t.x[i + 1]) return neg ? -xcand : xcand;
        if (i == 0) {
            // Tail beyond R (Marsaglia's method).
            constexpr double R = 3.6541528853610088;
            double ex, ey;
            do {
                ex = exponential() / R;
                ey = exponential();
            } while (2.0 * ey < ex * ex);
            const double xr = R + ex;
            return neg ? -xr : xr;
        }
        // Wedge between the inscribed rectangle and the density.
        const double fx = std::exp(-0.5 * xcand * xcand);
        const double fy = t.f[i] + uniform01() * (t.f[i + 1] - t.f[i]);
        if (fy < fx) return neg ? -xcand : xcand;
    }
}

namespace {

std::uint64_t absorb(std::uint64_t h, const SeedLabel& label) {
    if (std::holds_alternative<std::string>(label)) {
        const std::string& s = std::get<std::string>(label);
        h = fnv1a64("s", h);
        h = fnv1a64(s, h);
    } else {
        const std::uint64_t v = std::get<std::uint64_t>(label);
        char buf[8];
        std::memcpy(buf, &v, 8);
        h = fnv1a64("i", h);
        h = fnv1a64(std::string_view(buf, 8), h);
    }
    std::uint64_t st = h;
    return splitmix64(st);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, const std::vector<SeedLabel>& labels) {
    std::uint64_t st = master;
    std::uint64_t h = splitmix64(st);
    for (const auto& l : labels) h = absorb(h, l);
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<SeedLabel> labels) {
    std::uint64_t st = master;
    std::uint64_t h = splitmix64(st);
    for (const auto& l : labels) h = absorb(h, l);
    return h;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace smoothlab
