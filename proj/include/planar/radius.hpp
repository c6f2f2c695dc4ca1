#pragma once

// Radius of convergence from degree majorants M_n = sum_{deg T = n} |gamma_T|.
//
// rad(f) = sup{ r : sum_n M_n r^n < inf }. The estimate fits log M_n against n
// over the last third of the degrees (zeros skipped); the radius is
// exp(-slope). Superexponential decay is flagged as an infinite radius.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace planar {

struct RadiusOptions {
    double window_fraction = 1.0 / 3.0;
    // Infinite when M_N^(1/N) drops below this ...
    double root_cutoff = 0.01;
    // ... or when the root-test radii r_n = M_n^(-1/n) grow like n^p with p at least this.
    double growth_cutoff = 0.5;
};

struct RadiusEstimate {
    double estimate = 0.0;  // +inf when infinite
    bool infinite = false;
    std::string method;  // "root-fit", "root-cutoff", "root-growth" or "polynomial"
    int window_begin = 0;
    int window_end = 0;       // inclusive
    double residual = 0.0;    // rms of the log-linear fit
    double growth = 0.0;      // fitted exponent p of r_n ~ n^p over the window
};

namespace detail {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += e * e;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

}  // namespace detail

// majorants[n] = M_n for n = 0..N, N >= 8.
inline RadiusEstimate estimate_radius(const std::vector<double>& majorants, const RadiusOptions& opts = {}) {
    if (majorants.size() < 9) throw std::invalid_argument("estimate_radius: need majorants up to degree >= 8");
    for (double m : majorants) {
        if (!(m >= 0.0) || std::isinf(m)) throw std::invalid_argument("estimate_radius: majorants must be finite and >= 0");
    }
    const int top = static_cast<int>(majorants.size()) - 1;
    const int width = static_cast<int>(std::ceil((top + 1) * opts.window_fraction));
    RadiusEstimate out;
    out.window_begin = top - width + 1;
    out.window_end = top;

    std::vector<double> deg, logm, logdeg, logroot;
    for (int n = std::max(out.window_begin, 1); n <= top; ++n) {
        const double m = majorants[static_cast<std::size_t>(n)];
        if (m == 0.0) continue;
        deg.push_back(n);
        logm.push_back(std::log(m));
        logdeg.push_back(std::log(static_cast<double>(n)));
        logroot.push_back(-std::log(m) / n);  // log r_n
    }
    if (deg.empty()) {
        out.infinite = true;
        out.estimate = std::numeric_limits<double>::infinity();
        out.method = "polynomial";
        return out;
    }
    if (deg.size() == 1) throw std::invalid_argument("estimate_radius: fewer than two nonzero majorants in the window");

    const auto fit = detail::least_squares(deg, logm);
    out.residual = fit.rms;
    out.growth = detail::least_squares(logdeg, logroot).slope;
    out.estimate = std::exp(-fit.slope);
    out.method = "root-fit";

    const double last = majorants[static_cast<std::size_t>(top)];
    if (last > 0.0 && std::pow(last, 1.0 / top) < opts.root_cutoff) {
        out.infinite = true;
        out.method = "root-cutoff";
    } else if (out.growth >= opts.growth_cutoff) {
        out.infinite = true;
        out.method = "root-growth";
    }
    if (out.infinite) out.estimate = std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace planar
