#pragma once

// Gauss-Legendre quadrature. Nodes and weights are found by Newton iteration
// on the Legendre recurrence and cached per order; rules are exact for
// polynomials of degree <= 2n-1 and spectrally accurate for smooth integrands.

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace inveff {

struct QuadratureRule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights; // positive, sum to 2
};

namespace detail {

inline QuadratureRule compute_gauss_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = 3.14159265358979323846;
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th root of P_n
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Bonnet recurrence for P_n(x) and P_{n-1}(x)
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

} // namespace detail

// Cached rule on [-1, 1]. Thread-safe.
inline const QuadratureRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
    return it->second;
}

// Integral of f over [a, b] with an n-node rule.
template <class F>
double integrate(F&& f, double a, double b, int n) {
    const QuadratureRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += rule.weights[i] * f(mid + halfwidth * rule.nodes[i]);
    return acc * halfwidth;
}

// Integral of f over [-half_width, half_width], split into equal panels with
// an n-node rule on each. Used for whole-line integrals of densities whose
// tails are negligible beyond half_width.
template <class F>
double integrate_symmetric(F&& f, double half_width, int panels, int nodes_per_panel) {
    if (panels < 1) throw std::invalid_argument("integrate_symmetric: panels must be >= 1");
    const double width = 2.0 * half_width / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        double a = -half_width + p * width;
        acc += integrate(f, a, a + width, nodes_per_panel);
    }
    return acc;
}

} // namespace inveff
