#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "plaw/dynamics.hpp"
#include "plaw/integrate.hpp"

namespace plaw {

/// One orbit of a scattered beam.
struct ScatterRecord {
    double E = 0.0;
    double b = 0.0;          ///< impact parameter, b = J / sqrt(2E)
    double J = 0.0;
    double swept = 0.0;      ///< total swept polar angle
    double deflection = 0.0; ///< swept - pi, signed like b
};

struct RosetteRecord {
    double E = 0.0;
    double J = 0.0;
    double lobe_angle = 0.0;  ///< polar angle between consecutive perihelia
};

/// Total polar angle swept by the unbounded orbit with energy E > 0 (or
/// E == 0 with mu > 0) and angular momentum J != 0:
///   2 int_{r_min}^inf (J / r^2) / sqrt(2(E - V_eff(r; J))) dr.
/// The sign follows J. Throws QuadratureFailure, DomainError.
double swept_angle_quadrature(const PowerLawProblem& problem, double E, double J);

/// Swept angle measured on integrated orbits from the pericentre outwards in
/// both time directions, with the asymptotic direction extrapolated from the
/// polar angle at two far radii. E >= 0.
double swept_angle_trajectory(const PowerLawProblem& problem, double E, double J,
                              const IntegratorConfig& cfg = {.rel_tol = 1e-12, .abs_tol = 1e-14});

/// Deflection f(b) = swept(E, |b| sqrt(2E)) - pi, with f(-b) = -f(b).
/// Positive for attraction and b > 0. Requires E > 0, b != 0.
double deflection(const PowerLawProblem& problem, double E, double b);

/// 2 atan(mu / (2 E b)).
double rutherford_deflection(double mu, double E, double b);

/// n logarithmically spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

enum class Coverage { SubCircle, FullCircle, MultiCover };

struct BeamCoverage {
    /// A = pi/c - pi and the predicted arc measure 2A.
    double A = 0.0;
    double arc_measure = 0.0;
    Coverage coverage = Coverage::SubCircle;
    /// Records for b and -b of every grid value, in grid order.
    std::vector<ScatterRecord> table;
    double sup_abs_deflection = 0.0;
    /// Largest number of distinct b in the table whose outgoing direction
    /// (deflection mod 2 pi) crosses one common direction.
    std::size_t max_multiplicity = 0;
    double multi_direction = 0.0;
    std::vector<double> multi_b;  ///< bracketing b values realising max_multiplicity
};

/// Sweeps the positive grid b_grid (and its mirror) in parallel.
/// Requires E > 0 and 0 < alpha < 2.
BeamCoverage beam_coverage(const PowerLawProblem& problem, double E, std::span<const double> b_grid,
                           unsigned threads = 0);

/// Newtonian time between consecutive perihelia of a bounded orbit.
double radial_period(const PowerLawProblem& problem, double E, double J);

/// Perihelion-to-perihelion polar angle of the bounded orbit (E < 0, J != 0):
///   2 int_{r_min}^{r_max} (J / r^2) / sqrt(2(E - V_eff)) dr.
/// At the circular energy the limit 2 pi / sqrt(2 - alpha) is returned.
/// Throws EmptyHill, DomainError.
double lobe_angle(const PowerLawProblem& problem, double E, double J);

/// Small-oscillation limit of lobe_angle at the circular orbit.
double circular_lobe_angle(double alpha);

struct StarburstRow {
    double J = 0.0;
    double lobe_angle = 0.0;
    double error_vs_limit = 0.0;  ///< |lobe_angle - pi/c|
};

struct StarburstStudy {
    double limit = 0.0;  ///< pi / c
    std::vector<StarburstRow> rows;
    bool error_decreasing = false;
    /// max over rows of |lobe(E, J) - lobe(lambda^-alpha E, lambda^c J)| with
    /// lambda = J^(-1/c), i.e. the rescaled family at J = 1.
    double scaling_deviation = 0.0;
};

/// Lobe angles along a decreasing J sequence at fixed E < 0.
StarburstStudy starburst_study(const PowerLawProblem& problem, double E, std::span<const double> J_sequence,
                               unsigned threads = 0);

}  // namespace plaw
