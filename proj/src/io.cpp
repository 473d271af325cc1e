#include "inveff/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "inveff/errors.hpp"

namespace inveff {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

const json& require_field(const json& j, const char* key, const char* context) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string(context) + ": missing field \"" + key + "\"");
    return *it;
}

void check_schema_version(const json& j, const char* context) {
    if (j.contains("schema_version") && j["schema_version"] != kSchemaVersion)
        throw ConfigError(std::string(context) + ": unsupported schema_version");
}

void parse_error_model(const json& j, std::string& name, double& sigma, const char* context) {
    const json& em = require_field(j, "error_model", context);
    if (em.is_string()) {
        name = em.get<std::string>();
        return;
    }
    name = require_field(em, "name", context).get<std::string>();
    if (em.contains("sigma")) sigma = em["sigma"].get<double>();
}

TruthSpec parse_truth(const json& j, const char* context) {
    TruthSpec truth;
    const std::string kind = require_field(j, "kind", context).get<std::string>();
    if (kind == "coefficients") {
        truth.kind = TruthSpec::Kind::Coefficients;
        truth.coefficients = require_field(j, "values", context).get<std::vector<double>>();
    } else if (kind == "power_decay") {
        truth.kind = TruthSpec::Kind::PowerDecay;
        truth.s = require_field(j, "s", context).get<double>();
        truth.amplitude = require_field(j, "amplitude", context).get<double>();
        truth.k_max = require_field(j, "k_max", context).get<int>();
    } else {
        throw ConfigError(std::string(context) +
                          ": truth.kind must be \"coefficients\" or \"power_decay\"");
    }
    return truth;
}

json truth_to_json(const TruthSpec& truth) {
    json j;
    if (truth.kind == TruthSpec::Kind::Coefficients) {
        j["kind"] = "coefficients";
        j["values"] = truth.coefficients;
    } else {
        j["kind"] = "power_decay";
        j["s"] = truth.s;
        j["amplitude"] = truth.amplitude;
        j["k_max"] = truth.k_max;
    }
    return j;
}

TargetSpec parse_target(const json& j, const char* context) {
    TargetSpec target;
    const std::string kind = require_field(j, "kind", context).get<std::string>();
    if (kind == "coefficient") {
        target.kind = TargetSpec::Kind::Coefficient;
        target.k = require_field(j, "k", context).get<int>();
    } else if (kind == "functional") {
        target.kind = TargetSpec::Kind::Functional;
        target.phi.phi_coefficients =
            require_field(j, "phi_coefficients", context).get<std::vector<double>>();
        target.phi.normalized = j.value("normalized", true);
        target.phi.assume_summable = j.value("assume_summable", false);
    } else {
        throw ConfigError(std::string(context) +
                          ": target.kind must be \"coefficient\" or \"functional\"");
    }
    return target;
}

json target_to_json(const TargetSpec& target) {
    json j;
    if (target.kind == TargetSpec::Kind::Coefficient) {
        j["kind"] = "coefficient";
        j["k"] = target.k;
    } else {
        j["kind"] = "functional";
        j["phi_coefficients"] = target.phi.phi_coefficients;
        j["normalized"] = target.phi.normalized;
        j["assume_summable"] = target.phi.assume_summable;
    }
    return j;
}

TruncationRule parse_truncation(const json& j, const char* context) {
    TruncationRule rule;
    const std::string kind = require_field(j, "kind", context).get<std::string>();
    if (kind == "rate") {
        rule.kind = TruncationRule::Kind::Rate;
        rule.r = require_field(j, "r", context).get<double>();
    } else if (kind == "fixed") {
        rule.kind = TruncationRule::Kind::Fixed;
        rule.m = require_field(j, "m", context).get<int>();
    } else {
        throw ConfigError(std::string(context) + ": truncation.kind must be \"rate\" or \"fixed\"");
    }
    return rule;
}

json truncation_to_json(const TruncationRule& rule) {
    json j;
    if (rule.kind == TruncationRule::Kind::Rate) {
        j["kind"] = "rate";
        j["r"] = rule.r;
    } else {
        j["kind"] = "fixed";
        j["m"] = rule.m;
    }
    return j;
}

json error_model_to_json(const std::string& name, double sigma) {
    json j;
    j["name"] = name;
    if (name == "gaussian") j["sigma"] = sigma;
    return j;
}

} // namespace

// --- datasets ----------------------------------------------------------------

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
    out << "x,y\n";
    for (std::size_t i = 0; i < ds.size(); ++i)
        out << format_double(ds.xs[i]) << ',' << format_double(ds.ys[i]) << '\n';
}

Dataset read_dataset_csv(std::istream& in) {
    Dataset ds;
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y", 0) != 0)
        throw ConfigError("dataset CSV must start with an \"x,y\" header row");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const char* p = line.c_str();
        char* end = nullptr;
        double x = std::strtod(p, &end);
        if (end == p || *end != ',')
            throw ConfigError("dataset CSV: malformed row at line " + std::to_string(lineno));
        p = end + 1;
        double y = std::strtod(p, &end);
        if (end == p)
            throw ConfigError("dataset CSV: malformed row at line " + std::to_string(lineno));
        ds.xs.push_back(x);
        ds.ys.push_back(y);
    }
    if (ds.xs.empty()) throw ConfigError("dataset CSV contains no observations");
    ds.has_truth = false;
    return ds;
}

json dataset_to_json(const Dataset& ds) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "dataset";
    j["n"] = ds.size();
    j["x"] = ds.xs;
    j["y"] = ds.ys;
    json prov;
    prov["seed"] = ds.seed;
    prov["operator"] = ds.operator_name;
    prov["error_model"] = ds.error_name;
    if (ds.has_truth) {
        json truth;
        truth["basis"] = ds.truth.basis_name;
        truth["coefficients"] = ds.truth.coefficients;
        prov["truth"] = truth;
    }
    j["provenance"] = prov;
    return j;
}

Dataset dataset_from_json(const json& j) {
    check_schema_version(j, "dataset");
    Dataset ds;
    ds.xs = require_field(j, "x", "dataset").get<std::vector<double>>();
    ds.ys = require_field(j, "y", "dataset").get<std::vector<double>>();
    if (ds.xs.size() != ds.ys.size())
        throw ConfigError("dataset: x and y have different lengths");
    if (ds.xs.empty()) throw ConfigError("dataset contains no observations");
    if (j.contains("provenance")) {
        const json& prov = j["provenance"];
        ds.seed = prov.value("seed", std::uint64_t{0});
        ds.operator_name = prov.value("operator", std::string{});
        ds.error_name = prov.value("error_model", std::string{});
        if (prov.contains("truth")) {
            ds.truth.basis_name = prov["truth"].value("basis", std::string{"sine"});
            ds.truth.coefficients = prov["truth"]["coefficients"].get<std::vector<double>>();
            ds.has_truth = true;
        }
    }
    return ds;
}

Dataset read_dataset_auto(std::istream& in) {
    int c = in.peek();
    while (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
        in.get();
        c = in.peek();
    }
    if (c == '{') {
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ConfigError(std::string("failed to parse dataset JSON: ") + e.what());
        }
        return dataset_from_json(j);
    }
    return read_dataset_csv(in);
}

// --- configs -------------------------------------------------------------------

SimulateConfig simulate_config_from_json(const json& j) {
    check_schema_version(j, "simulate config");
    SimulateConfig cfg;
    cfg.operator_name = require_field(j, "operator", "simulate config").get<std::string>();
    parse_error_model(j, cfg.error_name, cfg.sigma, "simulate config");
    cfg.truth = parse_truth(require_field(j, "truth", "simulate config"), "simulate config");
    cfg.n = require_field(j, "n", "simulate config").get<std::size_t>();
    cfg.seed = require_field(j, "seed", "simulate config").get<std::uint64_t>();
    return cfg;
}

EstimateConfig estimate_config_from_json(const json& j) {
    check_schema_version(j, "estimate config");
    EstimateConfig cfg;
    cfg.operator_name = require_field(j, "operator", "estimate config").get<std::string>();
    parse_error_model(j, cfg.error_name, cfg.sigma, "estimate config");
    cfg.target = parse_target(require_field(j, "target", "estimate config"), "estimate config");
    cfg.truncation =
        parse_truncation(require_field(j, "truncation", "estimate config"), "estimate config");
    cfg.k_max = j.value("k_max", 64);
    return cfg;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    check_schema_version(j, "experiment config");
    ExperimentConfig cfg;
    cfg.operator_name = require_field(j, "operator", "experiment config").get<std::string>();
    parse_error_model(j, cfg.error_name, cfg.sigma, "experiment config");
    cfg.truth = parse_truth(require_field(j, "truth", "experiment config"), "experiment config");
    cfg.target = parse_target(require_field(j, "target", "experiment config"), "experiment config");
    cfg.n_grid = require_field(j, "n_grid", "experiment config").get<std::vector<std::size_t>>();
    cfg.replications =
        require_field(j, "replications", "experiment config").get<std::size_t>();
    cfg.truncation =
        parse_truncation(require_field(j, "truncation", "experiment config"), "experiment config");
    cfg.k_max = j.value("k_max", 64);
    cfg.master_seed = require_field(j, "master_seed", "experiment config").get<std::uint64_t>();
    cfg.keep_replicates = j.value("keep_replicates", false);
    return cfg;
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["operator"] = cfg.operator_name;
    j["error_model"] = error_model_to_json(cfg.error_name, cfg.sigma);
    j["truth"] = truth_to_json(cfg.truth);
    j["target"] = target_to_json(cfg.target);
    j["n_grid"] = cfg.n_grid;
    j["replications"] = cfg.replications;
    j["truncation"] = truncation_to_json(cfg.truncation);
    j["k_max"] = cfg.k_max;
    j["master_seed"] = cfg.master_seed;
    j["keep_replicates"] = cfg.keep_replicates;
    return j;
}

// --- results -------------------------------------------------------------------

json validation_report_to_json(const ValidationReport& report) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "validation_report";
    j["model"] = report.model;
    j["pass"] = report.pass;
    json checks = json::array();
    for (const auto& c : report.checks) {
        json jc;
        jc["name"] = c.name;
        jc["measured"] = c.measured;
        jc["expected"] = c.expected;
        jc["tolerance"] = c.tolerance;
        jc["pass"] = c.pass;
        checks.push_back(jc);
    }
    j["checks"] = checks;
    return j;
}

json experiment_result_to_json(const ExperimentResult& res, const BoundReport& bounds) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "experiment_result";
    j["config"] = experiment_config_to_json(res.config);
    j["master_seed"] = res.master_seed;
    j["truth_value"] = res.truth_value;
    j["optimal_variance"] = res.optimal_variance;
    j["plugin_variance"] = res.plugin_variance;

    json rows = json::array();
    for (const auto& s : res.summaries) {
        json r;
        r["n"] = s.n;
        r["estimator"] = s.estimator;
        r["replications"] = s.replications;
        r["mean_estimate"] = s.mean_estimate;
        r["bias"] = s.bias;
        r["variance_scaled"] = s.variance_scaled;
        r["jackknife_se"] = s.jackknife_se;
        r["ratio_to_optimal"] = s.ratio_to_optimal;
        r["ratio_to_plugin"] = s.ratio_to_plugin;
        r["skewness"] = s.normality.skewness;
        r["excess_kurtosis"] = s.normality.excess_kurtosis;
        r["skewness_se"] = s.normality.skewness_se;
        r["kurtosis_se"] = s.normality.kurtosis_se;
        r["normality_degenerate"] = s.normality.degenerate;
        rows.push_back(r);
    }
    j["results"] = rows;

    json gaps = json::array();
    for (const auto& g : res.gaps) {
        json r;
        r["n"] = g.n;
        r["naive_minus_one_step"] = g.naive_minus_one_step;
        r["jackknife_se"] = g.jackknife_se;
        gaps.push_back(r);
    }
    j["variance_gaps"] = gaps;

    json brows = json::array();
    for (const auto& row : bounds.rows) {
        json r;
        r["n"] = row.n;
        r["naive_variance"] = row.naive_variance;
        r["one_step_variance"] = row.one_step_variance;
        r["plugin_variance"] = row.plugin_variance;
        r["noise_only_variance"] = row.noise_only_variance;
        r["optimal_variance"] = row.optimal_variance;
        r["theory_ordering_ok"] = row.theory_ordering_ok;
        r["naive_within_bars"] = row.naive_within_bars;
        r["one_step_within_bars"] = row.one_step_within_bars;
        r["empirical_ordering_ok"] = row.empirical_ordering_ok;
        brows.push_back(r);
    }
    j["bound_report"] = {{"all_ok", bounds.all_ok}, {"rows", brows}};
    return j;
}

void write_experiment_result_csv(const ExperimentResult& res, std::ostream& out) {
    out << "n,estimator,replications,mean_estimate,bias,variance_scaled,jackknife_se,"
           "ratio_to_optimal,ratio_to_plugin,skewness,excess_kurtosis,skewness_se,kurtosis_se\n";
    for (const auto& s : res.summaries) {
        out << s.n << ',' << s.estimator << ',' << s.replications << ','
            << format_double(s.mean_estimate) << ',' << format_double(s.bias) << ','
            << format_double(s.variance_scaled) << ',' << format_double(s.jackknife_se) << ','
            << format_double(s.ratio_to_optimal) << ',' << format_double(s.ratio_to_plugin) << ','
            << format_double(s.normality.skewness) << ','
            << format_double(s.normality.excess_kurtosis) << ','
            << format_double(s.normality.skewness_se) << ','
            << format_double(s.normality.kurtosis_se) << '\n';
    }
}

void write_replicates_csv(const ExperimentResult& res, std::ostream& out) {
    out << "n,replication,naive,one_step\n";
    for (const auto& block : res.replicates)
        for (std::size_t i = 0; i < block.naive.size(); ++i)
            out << block.n << ',' << i << ',' << format_double(block.naive[i]) << ','
                << format_double(block.one_step[i]) << '\n';
}

// --- helpers ---------------------------------------------------------------------

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ConfigError("failed to parse JSON in " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << text;
}

} // namespace inveff
