#include "inveff/operator_model.hpp"

#include <cmath>

#include "inveff/quadrature.hpp"

namespace inveff {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

double sine_basis(int k, double x) {
    return kSqrt2 * std::sin((k + 1) * kPi * x);
}

// f(t) in the sine basis; used only by the kernel oracle.
double evaluate_sine_series(const InputFunction& f, double t) {
    double acc = 0.0;
    for (int k = 0; k <= f.k_max(); ++k)
        acc += f.coefficients[k] * sine_basis(k, t);
    return acc;
}

} // namespace

SpectralOperator brownian_bridge_operator() {
    SpectralOperator op;
    op.name = "brownian_bridge";
    op.basis_name = "sine";
    op.eigenvalue = [](int k) {
        double d = kPi * (k + 1);
        return 1.0 / (d * d);
    };
    op.input_basis = sine_basis;
    op.output_basis = sine_basis; // Hermitian kernel: output family equals input family
    op.sup_eigenvalue_bound = 1.0 / (kPi * kPi);
    op.basis_sup_bound = kSqrt2;
    return op;
}

SpectralOperator identity_operator() {
    SpectralOperator op;
    op.name = "identity";
    op.basis_name = "sine";
    op.eigenvalue = [](int) { return 1.0; };
    op.input_basis = sine_basis;
    op.output_basis = sine_basis;
    op.sup_eigenvalue_bound = 1.0;
    op.basis_sup_bound = kSqrt2;
    return op;
}

SpectralOperator operator_by_name(const std::string& name) {
    if (name == "brownian_bridge") return brownian_bridge_operator();
    if (name == "identity") return identity_operator();
    throw ConfigError("unknown operator '" + name + "' (expected \"brownian_bridge\" or \"identity\")");
}

double forward_apply(const SpectralOperator& op, const InputFunction& f, double x) {
    if (f.basis_name != op.basis_name)
        throw ConfigError("input function basis '" + f.basis_name +
                          "' does not match operator basis '" + op.basis_name + "'");
    double acc = 0.0;
    for (int k = 0; k <= f.k_max(); ++k)
        acc += f.coefficients[k] * op.eigenvalue(k) * op.output_basis(k, x);
    return acc;
}

double greens_quadrature_oracle(const InputFunction& f, double x, int n_nodes) {
    if (n_nodes < 32)
        throw std::invalid_argument("greens_quadrature_oracle: n_nodes must be >= 32");
    if (f.basis_name != "sine")
        throw ConfigError("greens_quadrature_oracle expects the sine input basis");
    auto integrand = [&](double t) {
        double kernel = std::min(x, t) - x * t;
        return kernel * evaluate_sine_series(f, t);
    };
    const int half = n_nodes / 2;
    double acc = 0.0;
    if (x > 0.0) acc += integrate(integrand, 0.0, x, half);
    if (x < 1.0) acc += integrate(integrand, x, 1.0, half);
    return acc;
}

InputFunction make_input_power_decay(double s, double amplitude, int k_max) {
    if (!(s > 0.5))
        throw std::invalid_argument("make_input_power_decay: s must exceed 1/2");
    if (k_max < 1)
        throw std::invalid_argument("make_input_power_decay: k_max must be >= 1");
    InputFunction f;
    f.coefficients.resize(k_max + 1);
    for (int k = 0; k <= k_max; ++k)
        f.coefficients[k] = amplitude * std::pow(k + 1, -s);
    return f;
}

InputFunction zero_input() {
    InputFunction f;
    f.coefficients = {0.0};
    return f;
}

} // namespace inveff
