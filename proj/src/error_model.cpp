#include "inveff/error_model.hpp"

#include <cmath>
#include <limits>

#include "inveff/errors.hpp"
#include "inveff/quadrature.hpp"
#include "inveff/rng.hpp"

namespace inveff {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Integration window for whole-line quadrature: both built-in densities are
// below 1e-16 outside [-40, 40].
constexpr double kTailCut = 40.0;
constexpr int kPanels = 40;
constexpr int kNodesPerPanel = 32;

template <class F>
double whole_line(F&& f, int nodes_per_panel = kNodesPerPanel) {
    return integrate_symmetric(f, kTailCut, kPanels, nodes_per_panel);
}

} // namespace

ErrorModel gaussian_error(double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian_error: sigma must be positive");
    ErrorModel em;
    em.name = "gaussian";
    const double inv_var = 1.0 / (sigma * sigma);
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * kPi));
    em.density = [sigma, norm](double y) {
        double z = y / sigma;
        return norm * std::exp(-0.5 * z * z);
    };
    em.score = [inv_var](double y) { return y * inv_var; };
    em.score_deriv = [inv_var](double) { return inv_var; };
    em.score_second = [](double) { return 0.0; };
    em.fisher_info = inv_var;
    em.variance = sigma * sigma;
    em.sampler = [sigma](std::uint64_t seed, std::size_t n) {
        Rng rng(seed);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = sigma * rng.normal();
        return out;
    };
    return em;
}

ErrorModel logistic_error() {
    ErrorModel em;
    em.name = "logistic";
    em.density = [](double y) {
        double c = std::cosh(0.5 * y); // e^{-y}/(1+e^{-y})^2 = 1/(4 cosh^2(y/2))
        return 0.25 / (c * c);
    };
    em.score = [](double y) { return std::tanh(0.5 * y); };
    em.score_deriv = [](double y) {
        double c = std::cosh(0.5 * y);
        return 0.5 / (c * c);
    };
    em.score_second = [](double y) {
        double c = std::cosh(0.5 * y);
        return -0.5 * std::tanh(0.5 * y) / (c * c);
    };
    em.fisher_info = 1.0 / 3.0;
    em.variance = kPi * kPi / 3.0;
    em.sampler = [](std::uint64_t seed, std::size_t n) {
        Rng rng(seed);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            double u = rng.uniform_open01();
            out[i] = std::log(u) - std::log1p(-u); // F^{-1}(u) = log(u/(1-u))
        }
        return out;
    };
    return em;
}

ErrorModel error_model_by_name(const std::string& name, double sigma) {
    if (name == "gaussian") return gaussian_error(sigma);
    if (name == "logistic") return logistic_error();
    throw ConfigError("unknown error model '" + name + "' (expected \"gaussian\" or \"logistic\")");
}

std::vector<double> sample_errors(const ErrorModel& em, std::uint64_t seed, std::size_t n) {
    if (n < 1) throw std::invalid_argument("sample_errors: n must be >= 1");
    return em.sampler(seed, n);
}

ValidationReport validate_error_model(const ErrorModel& em, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("validate_error_model: tol must be positive");
    ValidationReport report;
    report.model = em.name;

    auto add = [&report](const std::string& name, double measured, double expected, double tolerance) {
        ValidationCheck c{name, measured, expected, tolerance,
                          std::isfinite(measured) && std::abs(measured - expected) <= tolerance};
        report.checks.push_back(c);
    };
    auto add_at_least = [&report](const std::string& name, double measured, double threshold, double tolerance) {
        ValidationCheck c{name, measured, threshold, tolerance,
                          std::isfinite(measured) && measured >= threshold - tolerance};
        report.checks.push_back(c);
    };

    const double mass = whole_line([&](double y) { return em.density(y); });
    const double mass_refined = whole_line([&](double y) { return em.density(y); }, 2 * kNodesPerPanel);
    add("density_integrates_to_one", mass, 1.0, tol);
    add("quadrature_converged", mass - mass_refined, 0.0, tol);

    double min_density = std::numeric_limits<double>::infinity();
    double max_score_deriv = 0.0, max_score_second = 0.0;
    for (int i = -400; i <= 400; ++i) {
        double y = 0.05 * i; // grid over [-20, 20]
        min_density = std::min(min_density, em.density(y));
        max_score_deriv = std::max(max_score_deriv, std::abs(em.score_deriv(y)));
        max_score_second = std::max(max_score_second, std::abs(em.score_second(y)));
    }
    add_at_least("density_nonnegative", min_density, 0.0, 0.0);
    report.checks.push_back({"score_deriv_bounded", max_score_deriv, 0.0, 1e6,
                             std::isfinite(max_score_deriv) && max_score_deriv < 1e6});
    report.checks.push_back({"score_second_bounded", max_score_second, 0.0, 1e6,
                             std::isfinite(max_score_second) && max_score_second < 1e6});

    const double mean = whole_line([&](double y) { return y * em.density(y); });
    add("mean_zero", mean, 0.0, tol);

    const double second_moment = whole_line([&](double y) { return y * y * em.density(y); });
    add("variance_matches", second_moment, em.variance, tol * std::max(1.0, em.variance));

    // psi'(y) = -Lambda(y) psi(y), so int y psi'(y) dy computes from closed forms
    const double y_psi_prime = whole_line([&](double y) { return -y * em.score(y) * em.density(y); });
    add("y_times_density_deriv_integrates_to_minus_one", y_psi_prime, -1.0, tol);

    const double score_mean = whole_line([&](double y) { return em.score(y) * em.density(y); });
    add("score_mean_zero", score_mean, 0.0, tol);

    const double info_sq = whole_line([&](double y) {
        double s = em.score(y);
        return s * s * em.density(y);
    });
    const double info_deriv = whole_line([&](double y) { return em.score_deriv(y) * em.density(y); });
    add("fisher_info_from_score_sq", info_sq, em.fisher_info, tol * std::max(1.0, em.fisher_info));
    add("fisher_info_from_score_deriv", info_deriv, em.fisher_info, tol * std::max(1.0, em.fisher_info));

    add_at_least("information_inequality", second_moment * info_sq, 1.0, tol);

    report.pass = true;
    for (const auto& c : report.checks) report.pass = report.pass && c.pass;
    return report;
}

} // namespace inveff
