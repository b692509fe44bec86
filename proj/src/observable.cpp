#include "ergokit/observable.hpp"

#include "ergokit/kernels.hpp"

namespace ergokit {

double evaluate_config_observable(const ObservableSpec& F, const std::vector<double>& q,
                                  double dx) {
    switch (F.kind) {
        case ObservableSpec::Kind::site_square:
            if (F.site >= q.size())
                throw validation_error("ObservableSpec: site index out of range");
            return q[F.site] * q[F.site];
        case ObservableSpec::Kind::l2_norm_sq:
            return dx * kernels::sum_sq(q.data(), q.size());
        case ObservableSpec::Kind::custom_polynomial: {
            double total = 0.0;
            for (double z : q) {
                double v = 0.0;
                for (std::size_t m = F.coefficients.size(); m-- > 0;)
                    v = v * z + F.coefficients[m];
                total += v;
            }
            return total;
        }
        case ObservableSpec::Kind::energy:
            throw validation_error(
                "ObservableSpec: energy needs momenta; use chain::evaluate_observable");
    }
    throw validation_error("ObservableSpec: unknown kind");
}

} // namespace ergokit
