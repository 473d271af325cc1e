#pragma once

// Spectral representation of the forward operator K acting on L2[0,1]:
// eigenvalues rho_k together with the paired orthonormal basis families
// phi_k (input side) and phi_{V,k} (output side), so that
// K phi_k = rho_k phi_{V,k}. Everything downstream (simulation, estimation,
// variance bounds) consumes only this spectral data; the integral kernel of
// the built-in second-derivative inverse appears solely in the independent
// quadrature oracle used for cross-checks.

#include <functional>
#include <string>
#include <vector>

#include "inveff/errors.hpp"

namespace inveff {

struct SpectralOperator {
    std::string name;
    std::string basis_name; // tag tying InputFunction coefficients to this basis
    std::function<double(int)> eigenvalue;           // rho_k > 0
    std::function<double(int, double)> input_basis;  // phi_k(z), z in [0,1]
    std::function<double(int, double)> output_basis; // phi_{V,k}(x), x in [0,1]
    double sup_eigenvalue_bound = 0.0;
    double basis_sup_bound = 0.0;
};

// Finite expansion f = sum_k coefficients[k] * phi_k; coefficients past the
// stored vector are zero by convention.
struct InputFunction {
    std::vector<double> coefficients;
    std::string basis_name = "sine";

    double coefficient(int k) const {
        return (k >= 0 && k < static_cast<int>(coefficients.size())) ? coefficients[k] : 0.0;
    }
    int k_max() const { return static_cast<int>(coefficients.size()) - 1; }
};

// Integral operator with kernel min(x,t) - x*t (the inverse of the negative
// second derivative with zero boundary values). Hermitian, so both basis
// families coincide: rho_k = 1/(pi(k+1))^2, phi_k(x) = sqrt(2) sin((k+1) pi x).
SpectralOperator brownian_bridge_operator();

// Direct regression: rho_k = 1 with the same sine basis on both sides.
SpectralOperator identity_operator();

// Lookup by configuration name: "brownian_bridge" | "identity".
SpectralOperator operator_by_name(const std::string& name);

// (Kf)(x) = sum_k f_k rho_k phi_{V,k}(x); exact for finitely supported f.
double forward_apply(const SpectralOperator& op, const InputFunction& f, double x);

// Independent oracle for the Brownian-bridge operator: Gauss-Legendre
// quadrature of int_0^1 (min(x,t) - x t) f(t) dt with f evaluated as a sine
// series. The integrand has a kink at t = x, so the rule is applied
// separately on [0, x] and [x, 1] with n_nodes/2 nodes each.
double greens_quadrature_oracle(const InputFunction& f, double x, int n_nodes);

// f_k = amplitude * (k+1)^{-s} for 0 <= k <= k_max; requires s > 1/2 so the
// coefficients are square-summable at a polynomial rate.
InputFunction make_input_power_decay(double s, double amplitude, int k_max);

// The zero function in the sine basis.
InputFunction zero_input();

} // namespace inveff
