// The weight-lattice jump data extracted from a Schuermann triple: the set
// Lambda_Omega of weights carrying a component of Omega, with rates
// c_lambda = |v_lambda|^2.  This is all the classical compound-Poisson picture
// needs, so both the semigroup formulas and the simulator consume it.

#pragma once

#include "qglevy/schurmann.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qglevy {

struct LevyLatticeModel {
    int rank = 1;
    double q = 0.0;
    std::vector<std::vector<int>> lambdas;  // distinct lattice points
    std::vector<double> rates;              // c_lambda > 0

    LevyLatticeModel() = default;
    LevyLatticeModel(int rank_, double q_, std::vector<std::vector<int>> lambdas_,
                     std::vector<double> rates_)
        : rank(rank_), q(q_), lambdas(std::move(lambdas_)), rates(std::move(rates_)) {
        validate();
    }

    void validate() const {
        if (!(q > 0.0)) throw std::invalid_argument("LevyLatticeModel: q must be positive");
        if (lambdas.size() != rates.size())
            throw std::invalid_argument("LevyLatticeModel: lambda/rate size mismatch");
        for (const auto& l : lambdas)
            if (static_cast<int>(l.size()) != rank)
                throw std::invalid_argument("LevyLatticeModel: lambda has wrong dimension");
        for (size_t a = 0; a < lambdas.size(); ++a) {
            if (!(rates[a] > 0.0))
                throw std::invalid_argument("LevyLatticeModel: rates must be positive");
            for (size_t b = a + 1; b < lambdas.size(); ++b)
                if (lambdas[a] == lambdas[b])
                    throw std::invalid_argument("LevyLatticeModel: duplicate lambda");
        }
    }

    double total_rate() const {
        double c = 0.0;
        for (double r : rates) c += r;
        return c;
    }

    // psi(k^mu) = sum_lambda c_lambda (q^{<mu,lambda>/2} - 1)
    double psi_cartan(const std::vector<int>& mu) const {
        if (static_cast<int>(mu.size()) != rank)
            throw std::invalid_argument("psi_cartan: mu has wrong dimension");
        double acc = 0.0;
        for (size_t a = 0; a < lambdas.size(); ++a) {
            long pairing = 0;
            for (int i = 0; i < rank; ++i) pairing += static_cast<long>(mu[i]) * lambdas[a][i];
            acc += rates[a] * (std::pow(q, 0.5 * static_cast<double>(pairing)) - 1.0);
        }
        return acc;
    }
};

// Zero-rate weight components are dropped; Omega = 0 gives the empty model.
inline LevyLatticeModel model_from_triple(const SchurmannTriple& t) {
    LevyLatticeModel m;
    m.rank = t.ctx().rank;
    m.q = t.q();
    for (const auto& wc : t.components()) {
        m.lambdas.push_back(wc.lambda);
        m.rates.push_back(wc.rate);
    }
    m.validate();
    return m;
}

}  // namespace qglevy
