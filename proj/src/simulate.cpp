#include "inveff/simulate.hpp"

#include <stdexcept>

#include "inveff/rng.hpp"

namespace inveff {

Dataset generate_dataset(const SpectralOperator& op, const InputFunction& f,
                         const ErrorModel& em, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_dataset: n must be >= 1");
    if (f.basis_name != op.basis_name)
        throw ConfigError("input function basis '" + f.basis_name +
                          "' does not match operator basis '" + op.basis_name + "'");

    Dataset ds;
    ds.seed = seed;
    ds.operator_name = op.name;
    ds.error_name = em.name;
    ds.truth = f;
    ds.has_truth = true;

    Rng design(split_seed(seed, kDesignLane));
    ds.xs.resize(n);
    for (std::size_t i = 0; i < n; ++i) ds.xs[i] = design.uniform01();

    std::vector<double> eps = em.sampler(split_seed(seed, kNoiseLane), n);

    ds.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        ds.ys[i] = forward_apply(op, f, ds.xs[i]) + eps[i];
    return ds;
}

} // namespace inveff
