#include "speedlimit/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace speedlimit {

namespace {

// Plain-measure weighted sum of transform(a[k], b[k]); compensated and
// serial for reproducibility, mirroring integrate().
template <typename Transform>
double plain_weighted_sum(const PhaseField& a, const PhaseField& b, const char* where,
                          Transform&& transform) {
    detail::require_same_grid(a, b, where);
    const PhaseGrid& g = *a.grid;
    const auto wq = g.weight_q();
    const auto wp = g.weight_p();
    double sum = 0.0, comp = 0.0;
    for (int i = 0; i < g.n_q(); ++i) {
        for (int j = 0; j < g.n_p(); ++j) {
            const std::size_t k = g.index(i, j);
            const double x = a.values[k];
            const double y = b.values[k];
            if (!std::isfinite(x) || !std::isfinite(y)) {
                throw std::runtime_error(std::string(where) + ": non-finite field value");
            }
            const double term = wq[i] * wp[j] * transform(x, y);
            const double t = sum + term;
            comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
            sum = t;
        }
    }
    return sum + comp;
}

double sqrt_clamped(double v, const char* where) {
    if (v < -1e-14) {
        std::ostringstream msg;
        msg << where << ": density value " << v << " is negative beyond tolerance";
        throw std::runtime_error(msg.str());
    }
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

}  // namespace

double wigner_trace_distance(const PhaseField& w_t, const PhaseField& w_0) {
    detail::require_role(w_t, FieldRole::Wigner, "wigner_trace_distance");
    detail::require_role(w_0, FieldRole::Wigner, "wigner_trace_distance");
    const double plain =
        plain_weighted_sum(w_t, w_0, "wigner_trace_distance",
                           [](double x, double y) { return std::abs(x - y); });
    return plain * w_t.grid->measure_prefactor();
}

double classical_trace_distance(const PhaseField& rho_t, const PhaseField& rho_0) {
    detail::require_role(rho_t, FieldRole::Density, "classical_trace_distance");
    detail::require_role(rho_0, FieldRole::Density, "classical_trace_distance");
    return plain_weighted_sum(rho_t, rho_0, "classical_trace_distance",
                              [](double x, double y) {
                                  return std::abs(sqrt_clamped(x, "classical_trace_distance") -
                                                  sqrt_clamped(y, "classical_trace_distance"));
                              });
}

double bhattacharyya(const PhaseField& rho_t, const PhaseField& rho_0) {
    detail::require_role(rho_t, FieldRole::Density, "bhattacharyya");
    detail::require_role(rho_0, FieldRole::Density, "bhattacharyya");
    double overlap = plain_weighted_sum(rho_t, rho_0, "bhattacharyya",
                                        [](double x, double y) {
                                            return sqrt_clamped(x, "bhattacharyya") *
                                                   sqrt_clamped(y, "bhattacharyya");
                                        });
    if (overlap > 1.0 && overlap <= 1.0 + 1e-9) overlap = 1.0;
    if (overlap < 0.0 && overlap >= -1e-9) overlap = 0.0;
    return overlap;
}

double bhattacharyya_analytic(double b, double bdot, const UnitSystem& units,
                              double sigma_q, double sigma_p) {
    if (!std::isfinite(b) || b <= 0.0 || !std::isfinite(bdot)) {
        throw std::invalid_argument("bhattacharyya_analytic: invalid scale parameters");
    }
    const double stretch = (1.0 + b * b) / b;
    const double shear = units.mass * sigma_q * bdot / sigma_p;
    return 2.0 / std::sqrt(stretch * stretch + shear * shear);
}

double bhattacharyya_analytic(double b, double bdot, const UnitSystem& units) {
    return bhattacharyya_analytic(b, bdot, units, units.sigma_q(), units.sigma_p());
}

double hellinger(const PhaseField& rho_t, const PhaseField& rho_0) {
    detail::require_role(rho_t, FieldRole::Density, "hellinger");
    detail::require_role(rho_0, FieldRole::Density, "hellinger");
    const double half_sq =
        0.5 * plain_weighted_sum(rho_t, rho_0, "hellinger", [](double x, double y) {
            const double d = sqrt_clamped(x, "hellinger") - sqrt_clamped(y, "hellinger");
            return d * d;
        });
    return std::sqrt(std::max(0.0, half_sq));
}

}  // namespace speedlimit
