#include "walras/sampler.hpp"

#include <stdexcept>

namespace walras {

Vector sample_dirichlet(Index dimension, double concentration, std::mt19937_64& rng) {
    if (dimension < 1) throw std::invalid_argument("sample_dirichlet: dimension must be >= 1");
    if (!(concentration > 0.0)) throw std::invalid_argument("sample_dirichlet: concentration must be > 0");
    std::gamma_distribution<double> gamma(concentration, 1.0);
    Vector v(dimension);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        for (Index k = 0; k < dimension; ++k) v[k] = gamma(rng);
        const double total = v.sum();
        if (!(total > 0.0)) continue;
        v /= total;
        if (v.minCoeff() >= 1e-12) return v;
    }
    throw std::runtime_error("sample_dirichlet: concentration too small to draw an interior point");
}

Economy sample_cobb_douglas_economy(Index agents, Index commodities, double endowment_concentration,
                                    double exponent_concentration, std::mt19937_64& rng) {
    Economy economy;
    economy.endowments = Matrix(agents, commodities);
    for (Index j = 0; j < commodities; ++j)
        economy.endowments.col(j) = sample_dirichlet(agents, endowment_concentration, rng);
    while (true) {
        economy.utilities.clear();
        for (Index i = 0; i < agents; ++i)
            economy.utilities.push_back(
                UtilityFunction::cobb_douglas(sample_dirichlet(commodities, exponent_concentration, rng)));
        if (validate_economy(economy, true).empty()) return economy;
    }
}

}  // namespace walras
