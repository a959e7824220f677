#pragma once

// Small numerical helpers shared across modules: compensated summation,
// least-squares fits, and the counter-based RNG used by the Monte Carlo code.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace qmem {

// Pairwise (cascade) summation. Error grows like O(log n) instead of O(n),
// which keeps the ~1e8-term Brillouin-zone sums at full double accuracy.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::span<const double>(v.data(), v.size()));
}

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 1.0;
    double max_abs_residual = 0.0;
};

// Ordinary least squares y = intercept + slope*x.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 points of equal length");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
        f.max_abs_residual = std::max(f.max_abs_residual, std::abs(r));
    }
    f.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// Log-log slope of |y| vs x, for scaling-exponent checks.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0 || y[i] == 0)
            throw std::invalid_argument("loglog_slope: nonpositive abscissa or zero value");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(std::abs(y[i]));
    }
    return linear_fit(lx, ly).slope;
}

// splitmix64: the mixing function behind the counter-based RNG streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based uniform stream: value(i) depends only on (seed, context, i),
// so lattice sites can be updated in any order (or in parallel) with
// bit-identical results. Stream layout documented in fm_metropolis.hpp.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t context)
        : base_(splitmix64(seed ^ splitmix64(context))) {}

    double uniform(std::uint64_t draw) const {
        const std::uint64_t bits = splitmix64(base_ + draw);
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t base_;
};

// FNV-1a, used for output-file checksums in run manifests.
inline std::uint64_t fnv1a(std::span<const char> data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace qmem
