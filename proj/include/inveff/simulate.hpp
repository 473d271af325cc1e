#pragma once

// Synthetic data from the observation model Y = (Kf)(X) + eps with uniform
// random design on [0,1].

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "inveff/error_model.hpp"
#include "inveff/operator_model.hpp"

namespace inveff {

struct Dataset {
    std::vector<double> xs; // design points in [0,1]
    std::vector<double> ys; // responses
    std::uint64_t seed = 0;
    std::string operator_name;
    std::string error_name;
    InputFunction truth;     // generating input function, when known
    bool has_truth = false;  // false for datasets loaded from bare x,y tables

    std::size_t size() const { return xs.size(); }
};

// X_i iid Uniform(0,1), eps_i iid from em independent of the design,
// Y_i = (Kf)(X_i) + eps_i. The dataset seed is split into a design lane and a
// noise lane (see rng.hpp), so the same seed reproduces the dataset exactly
// and the design stream does not depend on the error model.
Dataset generate_dataset(const SpectralOperator& op, const InputFunction& f,
                         const ErrorModel& em, std::size_t n, std::uint64_t seed);

} // namespace inveff
