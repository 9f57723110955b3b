#pragma once

#include <memory>
#include <span>
#include <vector>

#include "speedlimit/units.hpp"

namespace speedlimit {

/// Integration measure attached to a grid.
///  - Plain: integrate() sums f * dq * dp weights.
///  - Gamma: same, times the prefactor 2*pi*hbar. Under this measure a
///    pure-state Wigner function has unit L2 mass, which is the natural
///    normalization for comparing phase-space speeds with operator norms.
enum class Measure { Plain, Gamma };

/// Uniform rectangular phase-space grid with per-axis quadrature weights.
///
/// Weights follow the composite Simpson rule on axes with an odd node
/// count (even number of intervals) and the composite trapezoid rule
/// otherwise; the two axes are chosen independently and combine as a
/// tensor product. Immutable after construction.
class PhaseGrid {
public:
    static PhaseGrid make(double q_min, double q_max, int n_q,
                          double p_min, double p_max, int n_p,
                          Measure measure, const UnitSystem& units = {});

    std::span<const double> q() const { return q_; }
    std::span<const double> p() const { return p_; }
    std::span<const double> weight_q() const { return wq_; }
    std::span<const double> weight_p() const { return wp_; }

    int n_q() const { return static_cast<int>(q_.size()); }
    int n_p() const { return static_cast<int>(p_.size()); }
    std::size_t size() const { return q_.size() * p_.size(); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * p_.size() + j; }

    double dq() const { return dq_; }
    double dp() const { return dp_; }
    double q_min() const { return q_.front(); }
    double q_max() const { return q_.back(); }
    double p_min() const { return p_.front(); }
    double p_max() const { return p_.back(); }

    Measure measure() const { return measure_; }
    /// 2*pi*hbar for Measure::Gamma, 1 for Measure::Plain.
    double measure_prefactor() const { return prefactor_; }
    bool simpson_q() const { return simpson_q_; }
    bool simpson_p() const { return simpson_p_; }

    bool same_layout(const PhaseGrid& other) const;

private:
    PhaseGrid() = default;

    std::vector<double> q_, p_, wq_, wp_;
    double dq_ = 0.0, dp_ = 0.0, prefactor_ = 1.0;
    Measure measure_ = Measure::Plain;
    bool simpson_q_ = false, simpson_p_ = false;
};

using GridPtr = std::shared_ptr<const PhaseGrid>;

/// Factory used across the library; validates ranges (finite, ascending)
/// and node counts (8..4096 per axis) and returns a shared immutable grid.
GridPtr make_grid(double q_min, double q_max, int n_q,
                  double p_min, double p_max, int n_p,
                  Measure measure, const UnitSystem& units = {});

/// What a field on the grid represents. Constructors tag their output and
/// consumers that rely on a particular normalization check the tag, which
/// catches e.g. passing a Wigner function where a probability density is
/// expected.
enum class FieldRole { Wigner, Density, SqrtDensity, Bracket, Generic };

/// A real scalar field sampled on a PhaseGrid, stored row-major with the
/// momentum index fastest.
struct PhaseField {
    GridPtr grid;
    FieldRole role = FieldRole::Generic;
    std::vector<double> values;

    PhaseField() = default;
    PhaseField(GridPtr g, FieldRole r);

    double& at(int i, int j) { return values[grid->index(i, j)]; }
    double at(int i, int j) const { return values[grid->index(i, j)]; }
    std::size_t size() const { return values.size(); }
};

/// Weighted sum of all nodes under the grid's measure (Simpson/trapezoid
/// tensor weights times the measure prefactor). Uses compensated summation
/// so the result is independent of threading and accurate to a few ulp.
double integrate(const PhaseField& f);

/// integrate(|f|).
double l1_norm(const PhaseField& f);

/// sqrt(integrate(f^2)).
double l2_norm(const PhaseField& f);

/// Partial derivatives along q (axis 0) and p (axis 1): 4th-order central
/// stencils on interior nodes, 4th-order one-sided stencils on the two
/// boundary bands of each edge.
PhaseField partial_q(const PhaseField& f);
PhaseField partial_p(const PhaseField& f);

namespace detail {
/// 1D composite quadrature weights (without the spacing-independent
/// measure prefactor): Simpson for odd n, trapezoid for even n.
std::vector<double> quadrature_weights(int n, double h);
void require_same_grid(const PhaseField& a, const PhaseField& b, const char* where);
void require_nonempty(const PhaseField& f, const char* where);
void require_role(const PhaseField& f, FieldRole role, const char* where);
}  // namespace detail

}  // namespace speedlimit
