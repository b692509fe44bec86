#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ergokit/gibbs.hpp"
#include "ergokit/observable.hpp"

// Low-temperature structure of the Gibbs measure: stationary (saddle) solutions
// of A phi + G'(phi) = 0 and the first-order Laplace expansion of expectations.
namespace ergokit::stationary {

struct StationarySolution {
    Eigen::VectorXd phi_star;
    double residual_norm = 0.0;
    int newton_iters = 0;
};

// Damped Newton from phi = 0 on R(phi) = A phi + grad G_total(phi).
StationarySolution solve_stationary(const gibbs::GibbsSpec& spec, double tol = 1e-12,
                                    int max_iter = 50);

struct ExpansionResult {
    double zeroth = 0.0;      // F(phi*)
    double first_order = 0.0; // (1/(2 beta)) Tr[ Hess F (A + Hess G)^{-1} ]
    double beta = 0.0;
};

ExpansionResult laplace_expansion(const gibbs::GibbsSpec& spec, const ObservableSpec& F,
                                  double beta);

struct ConcentrationRow {
    double beta = 0.0;
    double mean_sq_distance = 0.0; // E ||q - phi*||^2
    double stderr_ = 0.0;
};

struct ConcentrationTable {
    std::vector<ConcentrationRow> rows;
    double fitted_slope = 0.0; // of log E||q-phi*||^2 against log beta
};

// Samples the measure at each beta and fits the 1/beta concentration law.
ConcentrationTable concentration_check(const gibbs::GibbsSpec& spec,
                                       const std::vector<double>& betas,
                                       const gibbs::MCMCConfig& cfg);

} // namespace ergokit::stationary
