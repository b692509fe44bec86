#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ergokit/errors.hpp"

namespace ergokit {

// Configuration-space observable shared by the chain, Gibbs and expansion modules.
// custom_polynomial applies p(z) = sum_m coefficients[m] z^m to every site and sums.
struct ObservableSpec {
    enum class Kind { site_square, l2_norm_sq, energy, custom_polynomial };

    Kind kind = Kind::l2_norm_sq;
    std::size_t site = 0;                  // site_square only (0-based)
    std::vector<double> coefficients;      // custom_polynomial only

    static ObservableSpec site_square(std::size_t i) {
        ObservableSpec o;
        o.kind = Kind::site_square;
        o.site = i;
        return o;
    }
    static ObservableSpec l2_norm_sq() {
        ObservableSpec o;
        o.kind = Kind::l2_norm_sq;
        return o;
    }
    static ObservableSpec energy() {
        ObservableSpec o;
        o.kind = Kind::energy;
        return o;
    }
    static ObservableSpec custom_polynomial(std::vector<double> coeffs) {
        ObservableSpec o;
        o.kind = Kind::custom_polynomial;
        o.coefficients = std::move(coeffs);
        return o;
    }

    std::string name() const {
        switch (kind) {
            case Kind::site_square: return "site_square(" + std::to_string(site) + ")";
            case Kind::l2_norm_sq: return "l2_norm_sq";
            case Kind::energy: return "energy";
            case Kind::custom_polynomial: return "custom_polynomial";
        }
        return "?";
    }
};

// Evaluate a configuration-only observable (energy is rejected here; it needs
// momenta and chain parameters - see chain::evaluate_observable).
double evaluate_config_observable(const ObservableSpec& F, const std::vector<double>& q,
                                  double dx);

} // namespace ergokit
