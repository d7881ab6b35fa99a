#include "plaw/scatterlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "plaw/errors.hpp"
#include "plaw/numerics.hpp"

namespace plaw {

namespace {

constexpr double pi = std::numbers::pi;

/// Evaluates fn(i) for i in [0, n) on a small thread pool; results keep index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned threads, Fn fn) {
    std::vector<T> out(n);
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

/// E - V_eff at w = 1/r written as G(w) - G(w_e) around a turning point w_e
/// of G(w) = E + mu w^alpha - J^2 w^2 / 2, accurate for small |delta|.
double gap_near_turning_point(const PowerLawProblem& problem, double J, double w_e, double delta) {
    const double a = problem.alpha();
    return problem.mu() * std::pow(w_e, a) * std::expm1(a * std::log1p(delta / w_e)) -
           0.5 * J * J * delta * (2.0 * w_e + delta);
}

/// 2 int_{w_lo}^{w_hi} weight(w) / sqrt(2 G(w)) dw, both endpoints turning
/// points unless w_lo == 0 (unbounded orbit).
double radial_integral(const PowerLawProblem& problem, double E, double J, double w_lo, double w_hi,
                       const std::function<double(double)>& weight) {
    const double half = 0.5 * (w_hi - w_lo);
    const auto integrand = [&](double w, double gap) {
        if (!(gap > 0.0)) return 0.0;
        return weight(w) / std::sqrt(2.0 * gap);
    };
    // Near a turning point w = w_e +- v^2 removes the inverse square root.
    const auto near_turning_point = [&](double w_e, double sign) {
        return numerics::integrate_from_endpoint(
                   [&, w_e, sign](double v) {
                       const double d = sign * v * v;
                       return 2.0 * v * integrand(w_e + d, gap_near_turning_point(problem, J, w_e, d));
                   },
                   std::sqrt(half))
            .value;
    };
    double left = 0.0;
    if (w_lo == 0.0) {
        left = numerics::integrate_from_endpoint(
                   [&](double u) {
                       const double gap = E + problem.mu() * std::pow(u, problem.alpha()) - 0.5 * J * J * u * u;
                       return integrand(u, gap);
                   },
                   half)
                   .value;
    } else {
        left = near_turning_point(w_lo, 1.0);
    }
    const double right = near_turning_point(w_hi, -1.0);
    return 2.0 * (left + right);
}

void require_positive_energy(double E, const char* what) {
    if (!std::isfinite(E) || !(E > 0.0)) throw DomainError(std::string(what) + ": requires E > 0");
}

}  // namespace

double swept_angle_quadrature(const PowerLawProblem& problem, double E, double J) {
    problem.require_sub_quadratic("swept_angle_quadrature");
    if (J == 0.0 || !std::isfinite(J)) throw DomainError("swept_angle_quadrature: requires finite J != 0");
    if (!(E > 0.0 || (E == 0.0 && problem.mu() > 0.0))) {
        throw DomainError("swept_angle_quadrature: requires an unbounded orbit");
    }
    const double aJ = std::abs(J);
    const HillInterval hill = hill_interval(problem, E, aJ);
    const double value = radial_integral(problem, E, aJ, 0.0, 1.0 / hill.r_min, [aJ](double) { return aJ; });
    return std::copysign(value, J);
}

double swept_angle_trajectory(const PowerLawProblem& problem, double E, double J, const IntegratorConfig& cfg) {
    problem.require_sub_quadratic("swept_angle_trajectory");
    if (J == 0.0 || !std::isfinite(J)) throw DomainError("swept_angle_trajectory: requires finite J != 0");
    if (!(E > 0.0 || (E == 0.0 && problem.mu() > 0.0))) {
        throw DomainError("swept_angle_trajectory: requires an unbounded orbit");
    }
    const PhaseState peri = pericenter_state(problem, E, J);
    const double r_min = peri.q.x;
    const double R = 1e5 * std::max(r_min, 1.0);
    // Tail of theta(r): r^-1 at positive energy, r^-c at zero energy.
    const double p = E > 0.0 ? 1.0 : 1.0 - 0.5 * problem.alpha();
    const double weight = std::pow(2.0, p);

    IntegratorConfig run = cfg;
    run.escape_radius = 2.0 * R;
    run.output_interval = 0.0;

    const auto outward = [&](const PhaseState& start) {
        const Trajectory traj = integrate(problem, start, 1e30, run);
        if (!traj.has_event(EventKind::Escape)) {
            throw NumericalError("swept_angle_trajectory: orbit did not reach the far radius");
        }
        const std::vector<double> angles = traj.unwrapped_angles();
        const auto samples = traj.samples();
        // Angle at radius R on the interpolant, continued from the nearest sample.
        std::size_t i = 0;
        while (norm(samples[i + 1].q) < R) ++i;
        const double tR = numerics::find_root([&](double t) { return norm(traj.state_at(t).q) - R; },
                                              samples[i].t, samples[i + 1].t);
        const double raw = polar_angle(traj.state_at(tR).q);
        const double theta_R = angles[i] + std::remainder(raw - angles[i], 2.0 * pi);
        const double theta_2R = angles.back();
        return (weight * theta_2R - theta_R) / (weight - 1.0) - angles.front();
    };
    const double forward = outward(peri);
    const double backward = outward({peri.q, -1.0 * peri.v, 0.0});
    return forward - backward;
}

double deflection(const PowerLawProblem& problem, double E, double b) {
    require_positive_energy(E, "deflection");
    if (b == 0.0 || !std::isfinite(b)) throw DomainError("deflection: requires finite b != 0");
    const double J = std::abs(b) * std::sqrt(2.0 * E);
    const double f = swept_angle_quadrature(problem, E, J) - pi;
    return b < 0.0 ? -f : f;
}

double rutherford_deflection(double mu, double E, double b) {
    require_positive_energy(E, "rutherford_deflection");
    if (b == 0.0) throw DomainError("rutherford_deflection: requires b != 0");
    return 2.0 * std::atan(mu / (2.0 * E * b));
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi) || n == 0) {
        throw DomainError("log_grid: requires 0 < lo <= hi and n >= 1");
    }
    std::vector<double> out(n, lo);
    if (n == 1) return out;
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    out.back() = hi;
    return out;
}

BeamCoverage beam_coverage(const PowerLawProblem& problem, double E, std::span<const double> b_grid,
                           unsigned threads) {
    problem.require_sub_quadratic("beam_coverage");
    require_positive_energy(E, "beam_coverage");
    for (double b : b_grid) {
        if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("beam_coverage: grid values must be positive");
    }
    const double c = 1.0 - 0.5 * problem.alpha();

    BeamCoverage out;
    out.A = pi / c - pi;
    out.arc_measure = 2.0 * std::abs(out.A);
    if (std::abs(out.arc_measure - 2.0 * pi) <= 1e-12 * 2.0 * pi) {
        out.coverage = Coverage::FullCircle;
    } else {
        out.coverage = out.arc_measure < 2.0 * pi ? Coverage::SubCircle : Coverage::MultiCover;
    }

    const std::vector<ScatterRecord> positive = parallel_map<ScatterRecord>(b_grid.size(), threads, [&](std::size_t i) {
        const double b = b_grid[i];
        const double J = b * std::sqrt(2.0 * E);
        const double swept = swept_angle_quadrature(problem, E, J);
        return ScatterRecord{E, b, J, swept, swept - pi};
    });
    out.table.reserve(2 * positive.size());
    for (const auto& r : positive) {
        out.table.push_back(r);
        out.table.push_back({E, -r.b, -r.J, -r.swept, -r.deflection});
        out.sup_abs_deflection = std::max(out.sup_abs_deflection, std::abs(r.deflection));
    }

    // Multiplicity of outgoing directions: each side of b = 0 is a continuous
    // branch, and every grid interval covers the deflections between its ends.
    std::vector<ScatterRecord> sorted = out.table;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.b < b.b; });
    struct Piece {
        double f0, f1, b0, b1;
    };
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        if ((sorted[i].b < 0.0) != (sorted[i + 1].b < 0.0)) continue;
        pieces.push_back({sorted[i].deflection, sorted[i + 1].deflection, sorted[i].b, sorted[i + 1].b});
    }
    constexpr std::size_t directions = 720;
    for (std::size_t k = 0; k < directions; ++k) {
        const double psi = -pi + 2.0 * pi * (static_cast<double>(k) + 0.5 / std::numbers::sqrt2) / directions;
        std::vector<double> hits;
        for (const Piece& piece : pieces) {
            const double lo = std::min(piece.f0, piece.f1);
            const double hi = std::max(piece.f0, piece.f1);
            for (double x = psi + 2.0 * pi * std::ceil((lo - psi) / (2.0 * pi)); x < hi; x += 2.0 * pi) {
                if (x <= lo) continue;
                const double s = (x - piece.f0) / (piece.f1 - piece.f0);
                hits.push_back(piece.b0 + s * (piece.b1 - piece.b0));
            }
        }
        if (hits.size() > out.max_multiplicity) {
            out.max_multiplicity = hits.size();
            out.multi_direction = psi;
            std::sort(hits.begin(), hits.end());
            out.multi_b = std::move(hits);
        }
    }
    return out;
}

namespace {

struct BoundOrbit {
    HillInterval hill;
    double J;
};

BoundOrbit bound_orbit(const PowerLawProblem& problem, double E, double J, const char* what) {
    problem.require_sub_quadratic(what);
    if (J == 0.0 || !std::isfinite(J)) throw DomainError(std::string(what) + ": requires finite J != 0");
    if (!(problem.mu() > 0.0)) throw EmptyHill(std::string(what) + ": bounded orbits need mu > 0");
    if (!(E < 0.0)) throw DomainError(std::string(what) + ": requires E < 0");
    const double aJ = std::abs(J);
    return {hill_interval(problem, E, aJ), aJ};
}

}  // namespace

double circular_lobe_angle(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("circular_lobe_angle: requires 0 < alpha < 2");
    return 2.0 * pi / std::sqrt(2.0 - alpha);
}

double radial_period(const PowerLawProblem& problem, double E, double J) {
    const BoundOrbit orbit = bound_orbit(problem, E, J, "radial_period");
    const double aJ = orbit.J;
    if (orbit.hill.degenerate()) {
        const double r = orbit.hill.r_min;
        const double a = problem.alpha();
        const double curvature = 3.0 * aJ * aJ / std::pow(r, 4) - problem.mu() * a * (a + 1.0) * std::pow(r, -a - 2.0);
        return 2.0 * pi / std::sqrt(curvature);
    }
    return radial_integral(problem, E, aJ, 1.0 / orbit.hill.r_max, 1.0 / orbit.hill.r_min,
                           [](double w) { return 1.0 / (w * w); });
}

double lobe_angle(const PowerLawProblem& problem, double E, double J) {
    const BoundOrbit orbit = bound_orbit(problem, E, J, "lobe_angle");
    if (orbit.hill.degenerate()) return circular_lobe_angle(problem.alpha());
    const double aJ = orbit.J;
    return radial_integral(problem, E, aJ, 1.0 / orbit.hill.r_max, 1.0 / orbit.hill.r_min,
                           [aJ](double) { return aJ; });
}

StarburstStudy starburst_study(const PowerLawProblem& problem, double E, std::span<const double> J_sequence,
                               unsigned threads) {
    problem.require_sub_quadratic("starburst_study");
    if (!(E < 0.0)) throw DomainError("starburst_study: requires E < 0");
    if (J_sequence.empty()) throw DomainError("starburst_study: empty J sequence");
    const double c = 1.0 - 0.5 * problem.alpha();

    StarburstStudy out;
    out.limit = pi / c;
    struct Pair {
        double lobe = 0.0;
        double rescaled = 0.0;
    };
    const std::vector<Pair> values = parallel_map<Pair>(J_sequence.size(), threads, [&](std::size_t i) {
        const double J = J_sequence[i];
        const double lambda = std::pow(std::abs(J), -1.0 / c);
        return Pair{lobe_angle(problem, E, J), lobe_angle(problem, std::pow(lambda, -problem.alpha()) * E, 1.0)};
    });
    out.error_decreasing = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double error = std::abs(values[i].lobe - out.limit);
        if (i > 0 && !(error < out.rows.back().error_vs_limit)) out.error_decreasing = false;
        out.rows.push_back({J_sequence[i], values[i].lobe, error});
        out.scaling_deviation = std::max(out.scaling_deviation, std::abs(values[i].lobe - values[i].rescaled));
    }
    return out;
}

}  // namespace plaw
