#include "speedlimit/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "speedlimit/parallel.hpp"

namespace speedlimit {

namespace {
constexpr double kPi = std::numbers::pi;
}

double laguerre(int n, double x) {
    if (n < 0) throw std::invalid_argument("laguerre: order must be non-negative");
    if (n > 60) {
        throw std::invalid_argument(
            "laguerre: orders above 60 are not supported (recurrence terms overflow "
            "double range before cancellation)");
    }
    if (!std::isfinite(x)) throw std::invalid_argument("laguerre: argument must be finite");
    if (n == 0) return 1.0;
    double prev = 1.0;          // L_0
    double curr = 1.0 - x;      // L_1
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * curr - k * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    return curr;
}

void GaussianSpec::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(sigma_q) || !positive(sigma_p)) {
        throw std::invalid_argument("GaussianSpec: widths must be finite and positive");
    }
    if (!std::isfinite(q0) || !std::isfinite(p0)) {
        throw std::invalid_argument("GaussianSpec: center must be finite");
    }
}

namespace {

void check_scale_params(double b, double bdot, const char* where) {
    if (!std::isfinite(b) || b <= 0.0 || !std::isfinite(bdot)) {
        std::ostringstream msg;
        msg << where << ": scale parameters must be finite with b > 0 (got b=" << b
            << ", bdot=" << bdot << ")";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

double ho_eigenstate_wigner_value(int n, const UnitSystem& units,
                                  double b, double bdot, double q, double p) {
    const double Q = q / b;
    const double P = b * p - units.mass * q * bdot;
    const double energy = P * P / (2.0 * units.mass) +
                          0.5 * units.mass * units.omega0 * units.omega0 * Q * Q;
    const double e_scale = units.hbar * units.omega0;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign / (kPi * units.hbar) * std::exp(-2.0 * energy / e_scale) *
           laguerre(n, 4.0 * energy / e_scale);
}

PhaseField ho_eigenstate_wigner(int n, const UnitSystem& units,
                                double b, double bdot, const GridPtr& grid) {
    if (n < 0 || n > 60) {
        throw std::invalid_argument("ho_eigenstate_wigner: eigenstate index must lie in [0, 60]");
    }
    units.validate();
    check_scale_params(b, bdot, "ho_eigenstate_wigner");
    if (!grid) throw std::invalid_argument("ho_eigenstate_wigner: null grid");

    PhaseField w(grid, FieldRole::Wigner);
    const PhaseGrid& g = *grid;
    parallel_for(static_cast<std::size_t>(g.n_q()), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (int j = 0; j < g.n_p(); ++j) {
                w.values[g.index(static_cast<int>(i), j)] = ho_eigenstate_wigner_value(
                    n, units, b, bdot, g.q()[i], g.p()[j]);
            }
        }
    });
    return w;
}

double gaussian_density_value(const GaussianSpec& spec, const UnitSystem& units,
                              double b, double bdot, double q, double p) {
    const double Q = q / b;
    const double P = b * p - units.mass * q * bdot;
    const double uq = (Q - spec.q0) / spec.sigma_q;
    const double up = (P - spec.p0) / spec.sigma_p;
    return std::exp(-uq * uq - up * up) / (kPi * spec.sigma_q * spec.sigma_p);
}

PhaseField gaussian_classical_density(const GaussianSpec& spec, const UnitSystem& units,
                                      double b, double bdot, const GridPtr& grid) {
    spec.validate();
    units.validate();
    check_scale_params(b, bdot, "gaussian_classical_density");
    if (!grid) throw std::invalid_argument("gaussian_classical_density: null grid");

    PhaseField rho(grid, FieldRole::Density);
    const PhaseGrid& g = *grid;
    parallel_for(static_cast<std::size_t>(g.n_q()), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (int j = 0; j < g.n_p(); ++j) {
                rho.values[g.index(static_cast<int>(i), j)] =
                    gaussian_density_value(spec, units, b, bdot, g.q()[i], g.p()[j]);
            }
        }
    });
    return rho;
}

PhaseField gaussian_wigner(const GaussianSpec& spec, const UnitSystem& units,
                           double b, double bdot, const GridPtr& grid) {
    const double product = spec.sigma_q * spec.sigma_p;
    if (std::abs(product - 0.5 * units.hbar) > 1e-9 * units.hbar) {
        throw std::invalid_argument(
            "gaussian_wigner: sigma_q * sigma_p must equal hbar / 2 (pure squeezed state); "
            "other width products have no single-wavefunction Wigner representation");
    }
    PhaseField w = gaussian_classical_density(spec, units, b, bdot, grid);
    const double inv = 1.0 / (2.0 * kPi * units.hbar);
    for (double& v : w.values) v = std::sqrt(v * inv);
    w.role = FieldRole::Wigner;
    return w;
}

std::complex<double> SampledWavefunction::value(double q) const {
    const double s = (q - q_min) / dq;
    if (s < 0.0 || s > static_cast<double>(psi.size() - 1)) return {0.0, 0.0};
    const auto k = static_cast<std::size_t>(s);
    if (k + 1 >= psi.size()) return psi.back();
    const double frac = s - static_cast<double>(k);
    return psi[k] * (1.0 - frac) + psi[k + 1] * frac;
}

void SampledWavefunction::validate() const {
    if (psi.size() < 8) {
        throw std::invalid_argument("SampledWavefunction: needs at least 8 samples");
    }
    if (!std::isfinite(q_min) || !std::isfinite(dq) || dq <= 0.0) {
        throw std::invalid_argument("SampledWavefunction: invalid sample spacing");
    }
    // Trapezoid L2 norm on the native spacing.
    double norm = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        const double w = (k == 0 || k + 1 == psi.size()) ? 0.5 : 1.0;
        norm += w * std::norm(psi[k]);
    }
    norm *= dq;
    if (std::abs(norm - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "SampledWavefunction: not L2-normalized (norm^2 = " << norm << ")";
        throw std::invalid_argument(msg.str());
    }
}

PhaseField wigner_from_wavefunction(const SampledWavefunction& psi, const UnitSystem& units,
                                    const GridPtr& grid) {
    psi.validate();
    units.validate();
    if (!grid) throw std::invalid_argument("wigner_from_wavefunction: null grid");
    const PhaseGrid& g = *grid;
    if (g.q_min() < psi.q_min || g.q_max() > psi.q_max()) {
        std::ostringstream msg;
        msg << "wigner_from_wavefunction: wavefunction support [" << psi.q_min << ", "
            << psi.q_max() << "] is narrower than the grid q-range [" << g.q_min() << ", "
            << g.q_max() << "]";
        throw std::domain_error(msg.str());
    }

    PhaseField w(grid, FieldRole::Wigner);
    std::vector<double> max_imag(static_cast<std::size_t>(g.n_q()), 0.0);

    parallel_for(static_cast<std::size_t>(g.n_q()), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double q = g.q()[i];
            // psi(q - y) and psi(q + y) both vanish once |y| exceeds the
            // distance from q to the nearer support edge.
            const double reach = std::min(q - psi.q_min, psi.q_max() - q);
            const int ny = std::max(1, static_cast<int>(std::floor(reach / psi.dq)));
            double imag_peak = 0.0;
            for (int j = 0; j < g.n_p(); ++j) {
                const double p = g.p()[j];
                std::complex<double> acc{0.0, 0.0};
                for (int k = -ny; k <= ny; ++k) {
                    const double y = k * psi.dq;
                    const double weight = (k == -ny || k == ny) ? 0.5 : 1.0;
                    const double phase = -2.0 * p * y / units.hbar;
                    acc += weight * psi.value(q - y) * std::conj(psi.value(q + y)) *
                           std::complex<double>(std::cos(phase), std::sin(phase));
                }
                acc *= psi.dq / (kPi * units.hbar);
                imag_peak = std::max(imag_peak, std::abs(acc.imag()));
                w.values[g.index(static_cast<int>(i), j)] = acc.real();
            }
            max_imag[i] = imag_peak;
        }
    });

    const double residue = *std::max_element(max_imag.begin(), max_imag.end());
    if (residue >= 1e-8) {
        std::ostringstream msg;
        msg << "wigner_from_wavefunction: imaginary residue " << residue
            << " exceeds 1e-8; the sampled wavefunction is inconsistent";
        throw std::runtime_error(msg.str());
    }
    return w;
}

PhaseField classical_from_wigner(const PhaseField& w, const UnitSystem& units) {
    detail::require_nonempty(w, "classical_from_wigner");
    if (w.role != FieldRole::Wigner) {
        throw std::invalid_argument("classical_from_wigner: input must have role Wigner");
    }
    units.validate();
    PhaseField rho(w.grid, FieldRole::Density);
    const double scale = 2.0 * kPi * units.hbar;
    for (std::size_t k = 0; k < w.values.size(); ++k) {
        rho.values[k] = scale * w.values[k] * w.values[k];
    }
    return rho;
}

PhaseField sqrt_density(const PhaseField& rho) {
    detail::require_nonempty(rho, "sqrt_density");
    if (rho.role != FieldRole::Density) {
        throw std::invalid_argument("sqrt_density: input must have role Density");
    }
    PhaseField root(rho.grid, FieldRole::SqrtDensity);
    for (std::size_t k = 0; k < rho.values.size(); ++k) {
        const double v = rho.values[k];
        if (v < -1e-14) {
            std::ostringstream msg;
            msg << "sqrt_density: density value " << v << " is negative beyond tolerance";
            throw std::runtime_error(msg.str());
        }
        root.values[k] = v > 0.0 ? std::sqrt(v) : 0.0;
    }
    return root;
}

}  // namespace speedlimit
