#pragma once

// Small summary-statistics kit for replicate analysis: sample variance,
// delete-one jackknife standard errors (computed in O(R) from running sums),
// and standardized moments. The jackknife of a variance difference is paired:
// both variances are recomputed on the same leave-one-out sample, which keeps
// the correlation between estimators computed from shared datasets.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace inveff {

inline double mean(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

// Unbiased sample variance (R-1 divisor), computed on centered values.
inline double sample_variance(std::span<const double> v) {
    const std::size_t r = v.size();
    if (r < 2) throw std::invalid_argument("sample_variance: need at least 2 values");
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) {
        double c = x - m;
        acc += c * c;
    }
    return acc / static_cast<double>(r - 1);
}

// Leave-one-out sample variances v_(i), each with R-2 divisor.
inline std::vector<double> leave_one_out_variances(std::span<const double> v) {
    const std::size_t r = v.size();
    if (r < 3) throw std::invalid_argument("leave_one_out_variances: need at least 3 values");
    const double m = mean(v);
    double s2 = 0.0;
    std::vector<double> centered(r);
    for (std::size_t i = 0; i < r; ++i) {
        centered[i] = v[i] - m;
        s2 += centered[i] * centered[i];
    }
    // With c_i = x_i - mean: mean_(i) shifts by -c_i/(R-1) and
    // sum_{j != i} (x_j - mean_(i))^2 = s2 - c_i^2 - c_i^2/(R-1).
    std::vector<double> out(r);
    const double rm1 = static_cast<double>(r - 1);
    const double rm2 = static_cast<double>(r - 2);
    for (std::size_t i = 0; i < r; ++i) {
        double c2 = centered[i] * centered[i];
        out[i] = (s2 - c2 - c2 / rm1) / rm2;
    }
    return out;
}

namespace detail {

inline double jackknife_se_from_pseudovalues(std::span<const double> loo) {
    const std::size_t r = loo.size();
    const double m = mean(loo);
    double acc = 0.0;
    for (double x : loo) {
        double c = x - m;
        acc += c * c;
    }
    return std::sqrt(acc * static_cast<double>(r - 1) / static_cast<double>(r));
}

} // namespace detail

// Delete-one jackknife standard error of the sample variance.
inline double jackknife_se_of_variance(std::span<const double> v) {
    if (v.size() < 3) return 0.0;
    return detail::jackknife_se_from_pseudovalues(leave_one_out_variances(v));
}

// Delete-one jackknife standard error of sample_variance(a) - sample_variance(b),
// where a[i] and b[i] come from the same replication.
inline double jackknife_se_of_variance_gap(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("jackknife gap: length mismatch");
    if (a.size() < 3) return 0.0;
    const std::vector<double> la = leave_one_out_variances(a);
    const std::vector<double> lb = leave_one_out_variances(b);
    std::vector<double> diff(la.size());
    for (std::size_t i = 0; i < la.size(); ++i) diff[i] = la[i] - lb[i];
    return detail::jackknife_se_from_pseudovalues(diff);
}

struct CentralMoments {
    double mean = 0.0;
    double m2 = 0.0; // (1/R) sum (x - mean)^2
    double m3 = 0.0;
    double m4 = 0.0;
};

inline CentralMoments central_moments(std::span<const double> v) {
    CentralMoments cm;
    cm.mean = mean(v);
    for (double x : v) {
        double c = x - cm.mean;
        double c2 = c * c;
        cm.m2 += c2;
        cm.m3 += c2 * c;
        cm.m4 += c2 * c2;
    }
    const double r = static_cast<double>(v.size());
    cm.m2 /= r;
    cm.m3 /= r;
    cm.m4 /= r;
    return cm;
}

} // namespace inveff
