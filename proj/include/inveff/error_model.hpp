#pragma once

// Error densities psi with their location score Lambda = -psi'/psi, the first
// two score derivatives, Fisher information, variance, and an exact sampler.
// Built-ins ship closed forms for everything; quadrature enters only as an
// oracle inside validate_error_model.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "inveff/errors.hpp"

namespace inveff {

struct ErrorModel {
    std::string name;
    std::function<double(double)> density;      // psi(y), mean zero
    std::function<double(double)> score;        // Lambda(y) = -psi'(y)/psi(y)
    std::function<double(double)> score_deriv;  // Lambda'(y)
    std::function<double(double)> score_second; // Lambda''(y)
    double fisher_info = 0.0;                   // I(psi) = E Lambda^2(eps)
    double variance = 0.0;                      // sigma^2 = E eps^2
    std::function<std::vector<double>(std::uint64_t, std::size_t)> sampler;
};

// Normal(0, sigma^2): Lambda(y) = y/sigma^2, I = 1/sigma^2. The unique case
// where sigma^2 * I = 1.
ErrorModel gaussian_error(double sigma);

// Standard logistic, psi(y) = e^{-y} / (1 + e^{-y})^2:
// Lambda(y) = tanh(y/2), I = 1/3, sigma^2 = pi^2/3. Sampled by inverse CDF.
ErrorModel logistic_error();

// Lookup by configuration name: "gaussian" (uses sigma) | "logistic".
ErrorModel error_model_by_name(const std::string& name, double sigma = 1.0);

// n independent draws from em, fully determined by the seed.
std::vector<double> sample_errors(const ErrorModel& em, std::uint64_t seed, std::size_t n);

struct ValidationCheck {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::string model;
    std::vector<ValidationCheck> checks;
    bool pass = false;
};

// Quadrature audit of every ErrorModel contract: unit mass, mean zero,
// variance, both Fisher-information routes, the identity int y psi'(y) dy = -1,
// score mean zero, bounded score derivatives, the information inequality
// sigma^2 * I >= 1, and quadrature convergence under node doubling.
// A failing density yields failed checks, not an exception.
ValidationReport validate_error_model(const ErrorModel& em, double tol);

} // namespace inveff
