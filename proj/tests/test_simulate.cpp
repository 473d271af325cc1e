#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "inveff/io.hpp"
#include "inveff/simulate.hpp"
#include "inveff/stats.hpp"

using namespace inveff;

namespace {

// Noiseless error model for fixed-point tests: zero draws, zero score.
ErrorModel zero_noise_stub() {
    ErrorModel em = gaussian_error(1.0);
    em.name = "zero_noise_stub";
    em.sampler = [](std::uint64_t, std::size_t n) { return std::vector<double>(n, 0.0); };
    return em;
}

} // namespace

TEST_CASE("shape and determinism") {
    const SpectralOperator op = brownian_bridge_operator();
    const ErrorModel em = gaussian_error(1.0);
    const InputFunction f = make_input_power_decay(3.0, 1.0, 8);

    const Dataset a = generate_dataset(op, f, em, 5, 42);
    const Dataset b = generate_dataset(op, f, em, 5, 42);
    REQUIRE(a.size() == 5);
    REQUIRE(a.ys.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(a.xs[i] == b.xs[i]);
        CHECK(a.ys[i] == b.ys[i]);
        CHECK(a.xs[i] >= 0.0);
        CHECK(a.xs[i] <= 1.0);
    }
    CHECK(a.operator_name == "brownian_bridge");
    CHECK(a.error_name == "gaussian");
    CHECK(a.has_truth);

    const Dataset c = generate_dataset(op, f, em, 5, 43);
    bool any_different = false;
    for (std::size_t i = 0; i < 5; ++i) any_different = any_different || a.ys[i] != c.ys[i];
    CHECK(any_different);

    CHECK_THROWS_AS(generate_dataset(op, f, em, 0, 1), std::invalid_argument);
}

TEST_CASE("design stream is independent of the error model") {
    const SpectralOperator op = identity_operator();
    const InputFunction f = zero_input();
    const Dataset g = generate_dataset(op, f, gaussian_error(1.0), 64, 7);
    const Dataset l = generate_dataset(op, f, logistic_error(), 64, 7);
    for (std::size_t i = 0; i < 64; ++i) CHECK(g.xs[i] == l.xs[i]);
    bool ys_differ = false;
    for (std::size_t i = 0; i < 64; ++i) ys_differ = ys_differ || g.ys[i] != l.ys[i];
    CHECK(ys_differ);
}

TEST_CASE("zero input gives pure noise") {
    const SpectralOperator op = identity_operator();
    const ErrorModel em = gaussian_error(1.0);
    const std::size_t n = 20000;
    const Dataset ds = generate_dataset(op, zero_input(), em, n, 3);
    CHECK(std::abs(mean(ds.ys)) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("noiseless responses are exactly the forward map") {
    const SpectralOperator op = brownian_bridge_operator();
    const ErrorModel em = zero_noise_stub();
    InputFunction f;
    f.coefficients = {1.0};
    const Dataset ds = generate_dataset(op, f, em, 100, 5);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(ds.ys[i] == op.eigenvalue(0) * op.output_basis(0, ds.xs[i]));
        CHECK(ds.ys[i] == forward_apply(op, f, ds.xs[i]));
    }
}

TEST_CASE("basis mismatch is a configuration error") {
    InputFunction f = zero_input();
    f.basis_name = "haar";
    CHECK_THROWS_AS(generate_dataset(identity_operator(), f, gaussian_error(1.0), 4, 1),
                    ConfigError);
}

TEST_CASE("design uniformity: Kolmogorov-Smirnov at the 1e-4 level") {
    const std::size_t n = 100000;
    const Dataset ds =
        generate_dataset(identity_operator(), zero_input(), gaussian_error(1.0), n, 12345);
    std::vector<double> xs = ds.xs;
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double hi = (i + 1.0) / n - xs[i];
        double lo = xs[i] - static_cast<double>(i) / n;
        ks = std::max(ks, std::max(hi, lo));
    }
    // critical value c with 2 exp(-2 c^2) = 1e-4
    const double critical = std::sqrt(std::log(2.0 / 1e-4) / 2.0);
    CHECK(std::sqrt(static_cast<double>(n)) * ks < critical);
}

TEST_CASE("residuals are uncorrelated with the design") {
    const SpectralOperator op = brownian_bridge_operator();
    const InputFunction f = make_input_power_decay(3.0, 1.0, 8);
    const std::size_t n = 50000;
    const Dataset ds = generate_dataset(op, f, logistic_error(), n, 99);
    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) resid[i] = ds.ys[i] - forward_apply(op, f, ds.xs[i]);
    const double mx = mean(ds.xs), mr = mean(resid);
    double sxx = 0.0, srr = 0.0, sxr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (ds.xs[i] - mx) * (ds.xs[i] - mx);
        srr += (resid[i] - mr) * (resid[i] - mr);
        sxr += (ds.xs[i] - mx) * (resid[i] - mr);
    }
    const double corr = sxr / std::sqrt(sxx * srr);
    CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("CSV round trip keeps the numbers bit-exact") {
    const Dataset ds =
        generate_dataset(identity_operator(), zero_input(), logistic_error(), 57, 8);
    std::stringstream buf;
    write_dataset_csv(ds, buf);
    const Dataset back = read_dataset_csv(buf);
    REQUIRE(back.size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(back.xs[i] == ds.xs[i]);
        CHECK(back.ys[i] == ds.ys[i]);
    }
    CHECK_FALSE(back.has_truth);
}

TEST_CASE("JSON round trip keeps provenance") {
    const SpectralOperator op = brownian_bridge_operator();
    const InputFunction f = make_input_power_decay(3.0, 0.5, 4);
    const Dataset ds = generate_dataset(op, f, gaussian_error(2.0), 12, 77);
    const Dataset back = dataset_from_json(dataset_to_json(ds));
    REQUIRE(back.size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(back.xs[i] == ds.xs[i]);
        CHECK(back.ys[i] == ds.ys[i]);
    }
    CHECK(back.seed == 77);
    CHECK(back.operator_name == "brownian_bridge");
    CHECK(back.error_name == "gaussian");
    REQUIRE(back.has_truth);
    for (int k = 0; k <= 4; ++k) CHECK(back.truth.coefficients[k] == f.coefficients[k]);
}
