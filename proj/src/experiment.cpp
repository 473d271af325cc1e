#include "inveff/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "inveff/rng.hpp"
#include "inveff/stats.hpp"

namespace inveff {

namespace {

constexpr int kVarianceQuadratureNodes = 256;

struct TargetPlan {
    std::vector<int> ks;          // coefficient indices entering the estimate
    std::vector<double> weights;  // matching <phi, phi_k>; {1} for a coefficient target
    double truth_value = 0.0;
    double optimal_variance = 0.0;
    double plugin_variance = 0.0;
    double noise_only_variance = 0.0;
};

TargetPlan plan_target(const ExperimentConfig& cfg, const SpectralOperator& op,
                       const ErrorModel& em, const InputFunction& f) {
    TargetPlan plan;
    if (cfg.target.kind == TargetSpec::Kind::Coefficient) {
        const int k = cfg.target.k;
        if (k < 0) throw ConfigError("target coefficient index must be >= 0");
        plan.ks = {k};
        plan.weights = {1.0};
        plan.truth_value = f.coefficient(k);
        plan.optimal_variance = optimal_variance_coefficient(op, em, k);
        plan.plugin_variance = plugin_asymptotic_variance(op, em, f, k, kVarianceQuadratureNodes);
        const double rho = op.eigenvalue(k);
        plan.noise_only_variance = em.variance / (rho * rho);
    } else {
        const FunctionalSpec& phi = cfg.target.phi;
        const Representer rep = gamma_representer(op, phi, cfg.k_max);
        if (!rep.summability.convergent && !phi.assume_summable)
            throw ConditionRefusal(
                "representer summability series sum_k |<phi, phi_k>|/rho_k appears divergent "
                "for the configured functional target; refusing to run the experiment");
        const int top = std::min(cfg.k_max, static_cast<int>(phi.phi_coefficients.size()) - 1);
        for (int k = 0; k <= top; ++k) {
            if (phi.phi_coefficients[k] == 0.0) continue;
            plan.ks.push_back(k);
            plan.weights.push_back(phi.phi_coefficients[k]);
            plan.truth_value += phi.phi_coefficients[k] * f.coefficient(k);
        }
        plan.optimal_variance = optimal_variance_functional(em, rep);
        plan.plugin_variance =
            plugin_asymptotic_variance_functional(op, em, f, phi, rep, kVarianceQuadratureNodes);
        plan.noise_only_variance = em.variance * rep.norm_sq;
    }
    return plan;
}

EstimatorSummary summarize(std::size_t n, const std::string& name,
                           std::span<const double> estimates, const TargetPlan& plan,
                           std::size_t replications) {
    EstimatorSummary s;
    s.n = n;
    s.estimator = name;
    s.replications = replications;
    s.mean_estimate = mean(estimates);
    s.bias = s.mean_estimate - plan.truth_value;

    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<double> scaled(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i)
        scaled[i] = root_n * (estimates[i] - plan.truth_value);
    s.variance_scaled = sample_variance(scaled);
    s.jackknife_se = jackknife_se_of_variance(scaled);
    s.ratio_to_optimal = s.variance_scaled / plan.optimal_variance;
    s.ratio_to_plugin = s.variance_scaled / plan.plugin_variance;
    if (estimates.size() >= 100) {
        s.normality = normality_diagnostic(estimates);
    } else {
        s.normality.count = estimates.size();
        s.normality.degenerate = true;
    }
    return s;
}

} // namespace

NormalityDiagnostic normality_diagnostic(std::span<const double> replicates) {
    if (replicates.size() < 100)
        throw std::invalid_argument("normality_diagnostic: needs at least 100 replicates");
    NormalityDiagnostic d;
    d.count = replicates.size();
    const double r = static_cast<double>(replicates.size());
    d.skewness_se = std::sqrt(6.0 / r);
    d.kurtosis_se = std::sqrt(24.0 / r);
    const CentralMoments cm = central_moments(replicates);
    if (cm.m2 <= 1e-24 * (1.0 + cm.mean * cm.mean)) {
        d.degenerate = true;
        return d;
    }
    d.skewness = cm.m3 / std::pow(cm.m2, 1.5);
    d.excess_kurtosis = cm.m4 / (cm.m2 * cm.m2) - 3.0;
    return d;
}

InputFunction build_truth(const TruthSpec& truth) {
    if (truth.kind == TruthSpec::Kind::PowerDecay)
        return make_input_power_decay(truth.s, truth.amplitude, truth.k_max);
    InputFunction f;
    f.coefficients = truth.coefficients.empty() ? std::vector<double>{0.0} : truth.coefficients;
    return f;
}

ExperimentResult run_monte_carlo(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.replications < 2) throw ConfigError("replications must be >= 2");
    if (cfg.n_grid.empty()) throw ConfigError("n_grid must be nonempty");
    for (std::size_t n : cfg.n_grid)
        if (n < 1) throw ConfigError("every n in n_grid must be >= 1");
    if (cfg.k_max < 0) throw ConfigError("k_max must be >= 0");
    if (cfg.truncation.kind == TruncationRule::Kind::Rate) {
        if (!(cfg.truncation.r > 0.0) || !(cfg.truncation.r < 0.5))
            throw ConfigError("truncation rate r must lie in (0, 1/2)");
    } else if (cfg.truncation.m < 0) {
        throw ConfigError("fixed truncation level m must be >= 0");
    }

    const SpectralOperator op = operator_by_name(cfg.operator_name);
    const ErrorModel em = error_model_by_name(cfg.error_name, cfg.sigma);
    const InputFunction f = build_truth(cfg.truth);
    const TargetPlan plan = plan_target(cfg, op, em, f);

    ExperimentResult res;
    res.config = cfg;
    res.master_seed = cfg.master_seed;
    res.truth_value = plan.truth_value;
    res.optimal_variance = plan.optimal_variance;
    res.plugin_variance = plan.plugin_variance;

    const std::size_t reps = cfg.replications;
    for (std::size_t grid_index = 0; grid_index < cfg.n_grid.size(); ++grid_index) {
        const std::size_t n = cfg.n_grid[grid_index];
        const int m = cfg.truncation.kind == TruncationRule::Kind::Rate
                          ? truncation_schedule(n, cfg.truncation.r)
                          : cfg.truncation.m;
        const std::uint64_t grid_seed = split_seed(cfg.master_seed, grid_index);

        std::vector<double> naive(reps), one_step(reps);
        auto run_replication = [&](std::size_t rep) {
            const std::uint64_t seed = split_seed(grid_seed, rep);
            const Dataset ds = generate_dataset(op, f, em, n, seed);
            const CoefficientEstimates est = one_step_batch(ds, op, em, plan.ks, m);
            double a = 0.0, b = 0.0;
            for (std::size_t j = 0; j < plan.ks.size(); ++j) {
                a += est.naive[j] * plan.weights[j];
                b += est.one_step[j] * plan.weights[j];
            }
            naive[rep] = a;
            one_step[rep] = b;
        };

        const int workers = std::max(1, cfg.workers);
        if (workers == 1) {
            for (std::size_t rep = 0; rep < reps; ++rep) run_replication(rep);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (std::size_t rep = next.fetch_add(1); rep < reps; rep = next.fetch_add(1))
                        run_replication(rep);
                });
            for (auto& t : pool) t.join();
        }

        res.summaries.push_back(summarize(n, "naive", naive, plan, reps));
        res.summaries.push_back(summarize(n, "one_step", one_step, plan, reps));

        const double root_n = std::sqrt(static_cast<double>(n));
        std::vector<double> scaled_naive(reps), scaled_one_step(reps);
        for (std::size_t i = 0; i < reps; ++i) {
            scaled_naive[i] = root_n * (naive[i] - plan.truth_value);
            scaled_one_step[i] = root_n * (one_step[i] - plan.truth_value);
        }
        VarianceGap gap;
        gap.n = n;
        gap.naive_minus_one_step =
            sample_variance(scaled_naive) - sample_variance(scaled_one_step);
        gap.jackknife_se = jackknife_se_of_variance_gap(scaled_naive, scaled_one_step);
        res.gaps.push_back(gap);

        if (cfg.keep_replicates)
            res.replicates.push_back({n, std::move(naive), std::move(one_step)});
    }

    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

BoundReport compare_to_bound(const ExperimentResult& res, const SpectralOperator& op,
                             const ErrorModel& em, const InputFunction& f) {
    const TargetPlan plan = plan_target(res.config, op, em, f);
    BoundReport report;
    report.all_ok = true;
    for (const auto& gap : res.gaps) {
        BoundRow row;
        row.n = gap.n;
        row.plugin_variance = plan.plugin_variance;
        row.noise_only_variance = plan.noise_only_variance;
        row.optimal_variance = plan.optimal_variance;

        const EstimatorSummary* naive = nullptr;
        const EstimatorSummary* one_step = nullptr;
        for (const auto& s : res.summaries) {
            if (s.n != gap.n) continue;
            if (s.estimator == "naive") naive = &s;
            if (s.estimator == "one_step") one_step = &s;
        }
        if (naive == nullptr || one_step == nullptr)
            throw std::logic_error("compare_to_bound: incomplete experiment result");

        row.naive_variance = naive->variance_scaled;
        row.one_step_variance = one_step->variance_scaled;
        const double slack = 1e-12 * std::max(1.0, row.plugin_variance);
        row.theory_ordering_ok = row.plugin_variance >= row.noise_only_variance - slack &&
                                 row.noise_only_variance >= row.optimal_variance - slack;
        row.naive_within_bars =
            std::abs(row.naive_variance - row.plugin_variance) <= 4.0 * naive->jackknife_se;
        row.one_step_within_bars =
            std::abs(row.one_step_variance - row.optimal_variance) <= 4.0 * one_step->jackknife_se;
        row.empirical_ordering_ok =
            row.one_step_variance <= row.naive_variance + 4.0 * gap.jackknife_se;
        report.all_ok = report.all_ok && row.theory_ordering_ok && row.naive_within_bars &&
                        row.one_step_within_bars && row.empirical_ordering_ok;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace inveff
