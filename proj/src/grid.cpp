#include "speedlimit/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "speedlimit/parallel.hpp"

namespace speedlimit {

namespace detail {

std::vector<double> quadrature_weights(int n, double h) {
    std::vector<double> w(static_cast<std::size_t>(n));
    if (n % 2 == 1) {
        // Composite Simpson: h/3 * [1 4 2 4 ... 2 4 1].
        const double third = h / 3.0;
        w.front() = third;
        w.back() = third;
        for (int i = 1; i + 1 < n; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * third;
    } else {
        // Composite trapezoid: h * [1/2 1 ... 1 1/2].
        for (int i = 0; i < n; ++i) w[i] = h;
        w.front() = 0.5 * h;
        w.back() = 0.5 * h;
    }
    return w;
}

void require_nonempty(const PhaseField& f, const char* where) {
    if (!f.grid || f.values.size() != f.grid->size()) {
        throw std::invalid_argument(std::string(where) + ": field is not attached to a grid");
    }
}

void require_same_grid(const PhaseField& a, const PhaseField& b, const char* where) {
    require_nonempty(a, where);
    require_nonempty(b, where);
    if (a.grid.get() != b.grid.get() && !a.grid->same_layout(*b.grid)) {
        throw std::invalid_argument(std::string(where) + ": fields live on different grids");
    }
}

void require_role(const PhaseField& f, FieldRole role, const char* where) {
    require_nonempty(f, where);
    if (f.role != role) {
        throw std::invalid_argument(std::string(where) + ": field has the wrong role tag");
    }
}

}  // namespace detail

PhaseGrid PhaseGrid::make(double q_min, double q_max, int n_q,
                          double p_min, double p_max, int n_p,
                          Measure measure, const UnitSystem& units) {
    auto check_axis = [](const char* name, double lo, double hi, int n) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
            std::ostringstream msg;
            msg << "make_grid: " << name << " range must be finite and ascending (got ["
                << lo << ", " << hi << "])";
            throw std::invalid_argument(msg.str());
        }
        if (n < 8 || n > 4096) {
            std::ostringstream msg;
            msg << "make_grid: " << name << " node count must lie in [8, 4096] (got " << n << ")";
            throw std::invalid_argument(msg.str());
        }
    };
    check_axis("q", q_min, q_max, n_q);
    check_axis("p", p_min, p_max, n_p);
    units.validate();

    PhaseGrid g;
    g.dq_ = (q_max - q_min) / (n_q - 1);
    g.dp_ = (p_max - p_min) / (n_p - 1);
    g.q_.resize(static_cast<std::size_t>(n_q));
    g.p_.resize(static_cast<std::size_t>(n_p));
    for (int i = 0; i < n_q; ++i) g.q_[i] = q_min + i * g.dq_;
    for (int j = 0; j < n_p; ++j) g.p_[j] = p_min + j * g.dp_;
    // Pin the endpoints so symmetric ranges stay exactly symmetric.
    g.q_.back() = q_max;
    g.p_.back() = p_max;
    g.wq_ = detail::quadrature_weights(n_q, g.dq_);
    g.wp_ = detail::quadrature_weights(n_p, g.dp_);
    g.simpson_q_ = (n_q % 2 == 1);
    g.simpson_p_ = (n_p % 2 == 1);
    g.measure_ = measure;
    g.prefactor_ = measure == Measure::Gamma ? 2.0 * std::numbers::pi * units.hbar : 1.0;
    return g;
}

bool PhaseGrid::same_layout(const PhaseGrid& other) const {
    return n_q() == other.n_q() && n_p() == other.n_p() &&
           q_.front() == other.q_.front() && q_.back() == other.q_.back() &&
           p_.front() == other.p_.front() && p_.back() == other.p_.back() &&
           measure_ == other.measure_ && prefactor_ == other.prefactor_;
}

GridPtr make_grid(double q_min, double q_max, int n_q,
                  double p_min, double p_max, int n_p,
                  Measure measure, const UnitSystem& units) {
    return std::make_shared<const PhaseGrid>(
        PhaseGrid::make(q_min, q_max, n_q, p_min, p_max, n_p, measure, units));
}

PhaseField::PhaseField(GridPtr g, FieldRole r) : grid(std::move(g)), role(r) {
    if (!grid) throw std::invalid_argument("PhaseField: null grid");
    values.assign(grid->size(), 0.0);
}

namespace {

// Neumaier-compensated accumulation of w * v over all nodes. Serial on
// purpose: the summation order (and therefore the last ulp of every
// reported number) must not depend on the worker count.
template <typename Transform>
double weighted_sum(const PhaseField& f, const char* where, Transform&& transform) {
    detail::require_nonempty(f, where);
    const PhaseGrid& g = *f.grid;
    const auto wq = g.weight_q();
    const auto wp = g.weight_p();
    double sum = 0.0;
    double comp = 0.0;
    const double* v = f.values.data();
    for (int i = 0; i < g.n_q(); ++i) {
        const double wi = wq[i];
        for (int j = 0; j < g.n_p(); ++j) {
            const double x = v[g.index(i, j)];
            if (!std::isfinite(x)) {
                throw std::runtime_error(std::string(where) +
                                         ": field contains a non-finite value");
            }
            const double term = wi * wp[j] * transform(x);
            const double t = sum + term;
            if (std::abs(sum) >= std::abs(term)) {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
    }
    return sum + comp;
}

enum class Axis { Q, P };

// 4th-order first-derivative stencils. Interior: (f[-2] - 8 f[-1] + 8 f[+1]
// - f[+2]) / 12h. The two nodes nearest each edge use the matching
// one-sided 5-point stencils.
void differentiate(const PhaseField& f, Axis axis, PhaseField& out) {
    const PhaseGrid& g = *f.grid;
    const int n = axis == Axis::Q ? g.n_q() : g.n_p();
    const int m = axis == Axis::Q ? g.n_p() : g.n_q();
    const double inv12h = 1.0 / (12.0 * (axis == Axis::Q ? g.dq() : g.dp()));
    const double* v = f.values.data();
    double* o = out.values.data();

    auto idx = [&](int a, int b) {
        return axis == Axis::Q ? g.index(a, b) : g.index(b, a);
    };

    parallel_for(static_cast<std::size_t>(m), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t bb = lo; bb < hi; ++bb) {
            const int b = static_cast<int>(bb);
            auto at = [&](int a) { return v[idx(a, b)]; };
            o[idx(0, b)] =
                (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) *
                inv12h;
            o[idx(1, b)] =
                (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) * inv12h;
            for (int a = 2; a < n - 2; ++a) {
                o[idx(a, b)] =
                    (at(a - 2) - 8.0 * at(a - 1) + 8.0 * at(a + 1) - at(a + 2)) * inv12h;
            }
            o[idx(n - 2, b)] =
                (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) + 6.0 * at(n - 4) -
                 at(n - 5)) *
                inv12h;
            o[idx(n - 1, b)] =
                (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) - 16.0 * at(n - 4) +
                 3.0 * at(n - 5)) *
                inv12h;
        }
    });
}

}  // namespace

double integrate(const PhaseField& f) {
    const double plain = weighted_sum(f, "integrate", [](double x) { return x; });
    return plain * f.grid->measure_prefactor();
}

double l1_norm(const PhaseField& f) {
    const double plain = weighted_sum(f, "l1_norm", [](double x) { return std::abs(x); });
    return plain * f.grid->measure_prefactor();
}

double l2_norm(const PhaseField& f) {
    const double plain = weighted_sum(f, "l2_norm", [](double x) { return x * x; });
    return std::sqrt(plain * f.grid->measure_prefactor());
}

PhaseField partial_q(const PhaseField& f) {
    detail::require_nonempty(f, "partial_q");
    PhaseField out(f.grid, FieldRole::Generic);
    differentiate(f, Axis::Q, out);
    return out;
}

PhaseField partial_p(const PhaseField& f) {
    detail::require_nonempty(f, "partial_p");
    PhaseField out(f.grid, FieldRole::Generic);
    differentiate(f, Axis::P, out);
    return out;
}

}  // namespace speedlimit
