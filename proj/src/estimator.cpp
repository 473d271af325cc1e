#include "inveff/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "inveff/quadrature.hpp"

namespace inveff {

namespace {

void check_basis(const Dataset& ds, const SpectralOperator& op) {
    if (!ds.operator_name.empty() && ds.operator_name != op.name)
        throw ConfigError("dataset was generated under operator '" + ds.operator_name +
                          "' but is being estimated under '" + op.name + "'");
}

void check_fisher_info(const ErrorModel& em) {
    if (!(em.fisher_info > 0.0) || !std::isfinite(em.fisher_info))
        throw std::domain_error("one-step correction requires finite positive Fisher information");
}

// phi_{V,k}(X_i) for k = 0..k_top, row-major [i * (k_top+1) + k].
std::vector<double> output_basis_matrix(const Dataset& ds, const SpectralOperator& op, int k_top) {
    const std::size_t n = ds.size();
    std::vector<double> basis(n * (k_top + 1));
    for (std::size_t i = 0; i < n; ++i) {
        double* row = basis.data() + i * (k_top + 1);
        for (int k = 0; k <= k_top; ++k) row[k] = op.output_basis(k, ds.xs[i]);
    }
    return basis;
}

} // namespace

FunctionalSpec FunctionalSpec::unit_mass(int k) {
    FunctionalSpec phi;
    phi.phi_coefficients.assign(k + 1, 0.0);
    phi.phi_coefficients[k] = 1.0;
    return phi;
}

double representer_value(const Representer& rep, const SpectralOperator& op, double x) {
    double acc = 0.0;
    for (int k = 0; k < static_cast<int>(rep.gamma_coefficients.size()); ++k)
        acc += rep.gamma_coefficients[k] * op.output_basis(k, x);
    return acc;
}

double naive_coefficient(const Dataset& ds, const SpectralOperator& op, int k) {
    if (k < 0) throw std::invalid_argument("naive_coefficient: k must be >= 0");
    check_basis(ds, op);
    const std::size_t n = ds.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += ds.ys[i] * op.output_basis(k, ds.xs[i]);
    return acc / (op.eigenvalue(k) * static_cast<double>(n));
}

InputFunction series_estimate(const Dataset& ds, const SpectralOperator& op, int m) {
    if (m < 0) throw std::invalid_argument("series_estimate: m must be >= 0");
    check_basis(ds, op);
    InputFunction fit;
    fit.basis_name = op.basis_name;
    fit.coefficients.resize(m + 1);
    for (int k = 0; k <= m; ++k) fit.coefficients[k] = naive_coefficient(ds, op, k);
    return fit;
}

CoefficientEstimates one_step_batch(const Dataset& ds, const SpectralOperator& op,
                                    const ErrorModel& em, const std::vector<int>& ks, int m) {
    if (m < 0) throw std::invalid_argument("one_step_batch: m must be >= 0");
    for (int k : ks)
        if (k < 0) throw std::invalid_argument("one_step_batch: coefficient indices must be >= 0");
    check_basis(ds, op);
    check_fisher_info(em);

    const std::size_t n = ds.size();
    const double n_real = static_cast<double>(n);
    int k_top = m;
    for (int k : ks) k_top = std::max(k_top, k);

    const std::vector<double> basis = output_basis_matrix(ds, op, k_top);
    const int stride = k_top + 1;

    std::vector<double> rho(k_top + 1);
    for (int k = 0; k <= k_top; ++k) rho[k] = op.eigenvalue(k);

    // raw sums S_k = sum_i Y_i phi_{V,k}(X_i), accumulated in ascending i so
    // they match naive_coefficient's arithmetic exactly
    std::vector<double> sums(k_top + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = basis.data() + i * stride;
        const double y = ds.ys[i];
        for (int k = 0; k <= k_top; ++k) sums[k] += y * row[k];
    }

    // pilot fit of order m
    std::vector<double> pilot(m + 1);
    for (int k = 0; k <= m; ++k) pilot[k] = sums[k] / (rho[k] * n_real);

    // score of the pilot residuals, then the correction sums
    std::vector<double> corrections(ks.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = basis.data() + i * stride;
        double fitted = 0.0;
        for (int k = 0; k <= m; ++k) fitted += pilot[k] * rho[k] * row[k];
        const double lam = em.score(ds.ys[i] - fitted);
        for (std::size_t j = 0; j < ks.size(); ++j) corrections[j] += lam * row[ks[j]];
    }

    CoefficientEstimates est;
    est.ks = ks;
    est.naive.resize(ks.size());
    est.one_step.resize(ks.size());
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const int k = ks[j];
        est.naive[j] = sums[k] / (rho[k] * n_real);
        est.one_step[j] = est.naive[j] + corrections[j] / (rho[k] * em.fisher_info * n_real);
    }
    return est;
}

double one_step_coefficient(const Dataset& ds, const SpectralOperator& op,
                            const ErrorModel& em, int k, int m) {
    return one_step_batch(ds, op, em, {k}, m).one_step[0];
}

Representer gamma_representer(const SpectralOperator& op, const FunctionalSpec& phi,
                              int k_max, double growth_threshold) {
    if (k_max < 0) throw std::invalid_argument("gamma_representer: k_max must be >= 0");
    Representer rep;
    rep.gamma_coefficients.resize(k_max + 1);
    rep.norm_sq = 0.0;

    auto weight = [&phi](int k) {
        return k < static_cast<int>(phi.phi_coefficients.size()) ? phi.phi_coefficients[k] : 0.0;
    };

    std::vector<double> running(k_max + 1);
    double total = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        const double g = weight(k) / op.eigenvalue(k);
        rep.gamma_coefficients[k] = g;
        rep.norm_sq += g * g;
        total += std::abs(g);
        running[k] = total;
    }

    SummabilityDiagnostic& diag = rep.summability;
    diag.threshold = growth_threshold;
    for (int c = 1; c <= k_max; c = 2 * c + 1) {
        diag.checkpoints.push_back(c);
        diag.partial_sums.push_back(running[c]);
    }
    if (diag.checkpoints.empty() || diag.checkpoints.back() != k_max) {
        diag.checkpoints.push_back(k_max);
        diag.partial_sums.push_back(running[k_max]);
    }
    const std::size_t cp = diag.partial_sums.size();
    if (cp >= 2 && diag.partial_sums[cp - 2] > 0.0) {
        diag.growth_factor = diag.partial_sums[cp - 1] / diag.partial_sums[cp - 2];
        diag.convergent = diag.growth_factor <= growth_threshold;
    } else {
        diag.growth_factor = 1.0;
        diag.convergent = true;
    }
    return rep;
}

namespace {

void check_functional(const FunctionalSpec& phi) {
    if (phi.phi_coefficients.empty())
        throw std::invalid_argument("functional has no coordinates");
    if (phi.normalized) {
        double norm_sq = 0.0;
        for (double w : phi.phi_coefficients) norm_sq += w * w;
        if (std::abs(norm_sq - 1.0) > 1e-8)
            throw std::invalid_argument("functional is declared normalized but ||phi||^2 = " +
                                        std::to_string(norm_sq));
    }
}

} // namespace

double efficient_functional(const Dataset& ds, const SpectralOperator& op,
                            const ErrorModel& em, const FunctionalSpec& phi,
                            int m, int k_max) {
    check_functional(phi);
    const Representer rep = gamma_representer(op, phi, k_max);
    if (!rep.summability.convergent && !phi.assume_summable) {
        std::ostringstream msg;
        msg << "representer summability series sum_k |<phi, phi_k>|/rho_k appears divergent "
            << "(partial sums still grow by factor " << rep.summability.growth_factor
            << " > " << rep.summability.threshold
            << " across the last dyadic block); the efficient estimator is undefined "
            << "for this functional";
        throw ConditionRefusal(msg.str());
    }

    std::vector<int> ks;
    const int top = std::min(k_max, static_cast<int>(phi.phi_coefficients.size()) - 1);
    for (int k = 0; k <= top; ++k)
        if (phi.phi_coefficients[k] != 0.0) ks.push_back(k);
    if (ks.empty()) return 0.0;

    const CoefficientEstimates est = one_step_batch(ds, op, em, ks, m);
    double acc = 0.0;
    for (std::size_t j = 0; j < ks.size(); ++j)
        acc += est.one_step[j] * phi.phi_coefficients[ks[j]];
    return acc;
}

double optimal_variance_coefficient(const SpectralOperator& op, const ErrorModel& em, int k) {
    if (k < 0) throw std::invalid_argument("optimal_variance_coefficient: k must be >= 0");
    const double rho = op.eigenvalue(k);
    return 1.0 / (rho * rho * em.fisher_info);
}

double optimal_variance_functional(const ErrorModel& em, const Representer& rep) {
    return rep.norm_sq / em.fisher_info;
}

double plugin_asymptotic_variance(const SpectralOperator& op, const ErrorModel& em,
                                  const InputFunction& f, int k, int n_nodes) {
    if (n_nodes < 64)
        throw std::invalid_argument("plugin_asymptotic_variance: n_nodes must be >= 64");
    const double rho = op.eigenvalue(k);
    const double signal = integrate(
        [&](double x) {
            double kf = forward_apply(op, f, x);
            double phi = op.output_basis(k, x);
            return kf * kf * phi * phi;
        },
        0.0, 1.0, n_nodes);
    const double mean = rho * f.coefficient(k);
    const double var_y_phi = em.variance + signal - mean * mean;
    return var_y_phi / (rho * rho);
}

double plugin_asymptotic_variance_functional(const SpectralOperator& op, const ErrorModel& em,
                                             const InputFunction& f, const FunctionalSpec& phi,
                                             const Representer& rep, int n_nodes) {
    if (n_nodes < 64)
        throw std::invalid_argument("plugin_asymptotic_variance_functional: n_nodes must be >= 64");
    const double signal = integrate(
        [&](double x) {
            double kf = forward_apply(op, f, x);
            double g = representer_value(rep, op, x);
            return kf * kf * g * g;
        },
        0.0, 1.0, n_nodes);
    double mean = 0.0;
    const int top = static_cast<int>(phi.phi_coefficients.size()) - 1;
    for (int k = 0; k <= top; ++k) mean += phi.phi_coefficients[k] * f.coefficient(k);
    return em.variance * rep.norm_sq + signal - mean * mean;
}

int truncation_schedule(std::size_t n, double r) {
    if (!(r > 0.0) || !(r < 0.5))
        throw std::invalid_argument("truncation_schedule: r must lie in (0, 1/2)");
    if (n < 1) throw std::invalid_argument("truncation_schedule: n must be >= 1");
    return static_cast<int>(std::ceil(std::pow(static_cast<double>(n), r)));
}

} // namespace inveff
