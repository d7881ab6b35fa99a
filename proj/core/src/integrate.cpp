#include "plaw/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>

#include "plaw/errors.hpp"
#include "plaw/numerics.hpp"

namespace plaw {

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("IntegratorConfig: tolerances must be positive");
    if (!(max_step > 0.0)) throw DomainError("IntegratorConfig: max_step must be positive");
    if (!(collision_radius > 0.0)) throw DomainError("IntegratorConfig: collision_radius must be positive");
    if (!(escape_radius > collision_radius)) throw DomainError("IntegratorConfig: escape_radius too small");
    if (max_samples < 2) throw DomainError("IntegratorConfig: max_samples must be at least 2");
    if (!(output_interval >= 0.0) || !std::isfinite(output_interval)) {
        throw DomainError("IntegratorConfig: output_interval must be finite and non-negative");
    }
    if (!(brake_speed > 0.0) || !(brake_energy_tol > 0.0)) throw DomainError("IntegratorConfig: brake thresholds");
    if (!(drift_budget_factor > 0.0)) throw DomainError("IntegratorConfig: drift_budget_factor must be positive");
}

namespace {

template <std::size_t N>
using State = std::array<double, N>;

/// Dormand-Prince 5(4) dense output polynomial over one step.
template <std::size_t N>
struct DenseStep {
    double x0 = 0.0;
    double h = 0.0;
    State<N> r1{}, r2{}, r3{}, r4{}, r5{};

    State<N> operator()(double x) const {
        const double th = (x - x0) / h;
        const double th1 = 1.0 - th;
        State<N> y;
        for (std::size_t i = 0; i < N; ++i) y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return y;
    }
};

template <std::size_t N>
struct StepResult {
    State<N> y;
    State<N> f;
    double err;
    DenseStep<N> dense;
};

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
    State<N> out = y;
    for (const auto& [a, k] : terms) {
        if (a == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i) out[i] += h * a * (*k)[i];
    }
    return out;
}

template <std::size_t N, class Rhs>
StepResult<N> dopri_step(const Rhs& rhs, double x, const State<N>& y, const State<N>& k1, double h, double rtol,
                         double atol) {
    const State<N> k2 = rhs(x + h / 5.0, axpy<N>(y, h, {{1.0 / 5.0, &k1}}));
    const State<N> k3 = rhs(x + 3.0 * h / 10.0, axpy<N>(y, h, {{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}}));
    const State<N> k4 = rhs(x + 4.0 * h / 5.0,
                            axpy<N>(y, h, {{44.0 / 45.0, &k1}, {-56.0 / 15.0, &k2}, {32.0 / 9.0, &k3}}));
    const State<N> k5 = rhs(x + 8.0 * h / 9.0, axpy<N>(y, h,
                                                       {{19372.0 / 6561.0, &k1},
                                                        {-25360.0 / 2187.0, &k2},
                                                        {64448.0 / 6561.0, &k3},
                                                        {-212.0 / 729.0, &k4}}));
    const State<N> k6 = rhs(x + h, axpy<N>(y, h,
                                           {{9017.0 / 3168.0, &k1},
                                            {-355.0 / 33.0, &k2},
                                            {46732.0 / 5247.0, &k3},
                                            {49.0 / 176.0, &k4},
                                            {-5103.0 / 18656.0, &k5}}));
    StepResult<N> out;
    out.y = axpy<N>(y, h,
                    {{35.0 / 384.0, &k1},
                     {500.0 / 1113.0, &k3},
                     {125.0 / 192.0, &k4},
                     {-2187.0 / 6784.0, &k5},
                     {11.0 / 84.0, &k6}});
    const State<N> k7 = rhs(x + h, out.y);
    out.f = k7;

    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                     e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(out.y[i]));
        sum += (e / sc) * (e / sc);
    }
    out.err = std::sqrt(sum / N);

    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    auto& d = out.dense;
    d.x0 = x;
    d.h = h;
    for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = out.y[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        d.r1[i] = y[i];
        d.r2[i] = ydiff;
        d.r3[i] = bspl;
        d.r4[i] = ydiff - h * k7[i] - bspl;
        d.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    return out;
}

template <std::size_t N>
double rms_norm(const State<N>& v, const State<N>& y, double rtol, double atol) {
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = atol + rtol * std::abs(y[i]);
        sum += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(sum / N);
}

/// Initial step heuristic of Hairer, Norsett and Wanner.
template <std::size_t N, class Rhs>
double initial_step(const Rhs& rhs, double x, const State<N>& y, const State<N>& f, double span, double rtol,
                    double atol) {
    const double d0 = rms_norm<N>(y, y, rtol, atol);
    const double d1 = rms_norm<N>(f, y, rtol, atol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    const State<N> y1 = axpy<N>(y, h0, {{1.0, &f}});
    const State<N> f1 = rhs(x + h0, y1);
    State<N> df;
    for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - f[i];
    const double d2 = rms_norm<N>(df, y, rtol, atol) / h0;
    const double m = std::max(d1, d2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    double h = std::min(100.0 * h0, h1);
    if (!std::isfinite(h) || !(h > 0.0)) h = 1e-6 * std::max(1.0, span);
    return std::min(h, span);
}

/// Newton's equations in Newtonian time, state (x, y, vx, vy).
struct NewtonSystem {
    static constexpr std::size_t dim = 4;
    static constexpr bool fictitious = false;
    PowerLawProblem problem;

    State<4> operator()(double, const State<4>& y) const {
        const double r = std::hypot(y[0], y[1]);
        if (r == 0.0) {
            constexpr double nan = std::numeric_limits<double>::quiet_NaN();
            return {y[2], y[3], nan, nan};
        }
        const double k = -problem.mu() * problem.alpha() * std::pow(r, -problem.alpha() - 2.0);
        return {y[2], y[3], k * y[0], k * y[1]};
    }

    static State<4> pack(const PhaseState& s) { return {s.q.x, s.q.y, s.v.x, s.v.y}; }
    double time(double x, const State<4>&) const { return x; }
    PhaseState phase(double x, const State<4>& y) const { return {{y[0], y[1]}, {y[2], y[3]}, x}; }
    double radius(const State<4>& y) const { return std::hypot(y[0], y[1]); }
    double radial_rate(const State<4>& y) const { return y[0] * y[2] + y[1] * y[3]; }
    bool accept(const State<4>&) const { return true; }
    void commit(const State<4>&) {}
};

/// Folding-plane motion Q'' = C |Q|^(gamma-2) Q with dt/dtau = beta^2 |Q|^gamma,
/// state (Qx, Qy, Q'x, Q'y, t).
struct FoldingSystem {
    static constexpr std::size_t dim = 5;
    static constexpr bool fictitious = true;
    double beta;
    double gamma;
    double coefficient;
    double arg;  ///< unwrapped arg Q at the start of the current step

    State<5> operator()(double, const State<5>& y) const {
        const double R = std::hypot(y[0], y[1]);
        double k = 0.0;
        if (coefficient != 0.0) {
            if (R == 0.0) {
                k = gamma > 1.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
            } else {
                k = coefficient * std::pow(R, gamma - 2.0);
            }
        }
        return {y[2], y[3], k * y[0], k * y[1], beta * beta * std::pow(R, gamma)};
    }

    double unwrap(const State<5>& y) const {
        const double raw = std::atan2(y[1], y[0]);
        return arg + std::remainder(raw - arg, 2.0 * std::numbers::pi);
    }

    double time(double, const State<5>& y) const { return y[4]; }

    PhaseState phase(double, const State<5>& y) const {
        const double R = std::hypot(y[0], y[1]);
        const double a = unwrap(y);
        const std::complex<double> P{y[2], y[3]};
        const std::complex<double> q = std::polar(std::pow(R, beta), beta * a);
        const std::complex<double> v = std::polar(std::pow(R, beta - 1.0 - gamma) / beta, (beta - 1.0) * a) * P;
        return {to_vec(q), to_vec(v), y[4]};
    }

    double radius(const State<5>& y) const { return std::pow(std::hypot(y[0], y[1]), beta); }
    double radial_rate(const State<5>& y) const { return y[0] * y[2] + y[1] * y[3]; }
    bool accept(const State<5>& y) const { return std::abs(unwrap(y) - arg) <= 0.5 * std::numbers::pi; }
    void commit(const State<5>& y) { arg = unwrap(y); }
};

struct PendingEvent {
    EventKind kind;
    double x;
    bool terminal;
};

/// Falling inwards on an orbit whose inner turning radius lies inside the
/// collision radius.
bool collision_unavoidable(const PowerLawProblem& problem, const PhaseState& s, double collision_radius) {
    if (!(dot(s.q, s.v) < 0.0) || problem.mu() <= 0.0) return false;
    const double J = angular_momentum(s);
    if (J == 0.0) return true;
    if (!problem.sub_quadratic()) return false;
    try {
        return hill_interval(problem, energy(problem, s), J).r_min < collision_radius;
    } catch (const DomainError&) {
        return false;
    }
}

template <class System>
Trajectory drive(const PowerLawProblem& problem, System sys, const State<System::dim>& y0, double x0,
                 double x_final, const IntegratorConfig& cfg) {
    constexpr std::size_t N = System::dim;
    const double E0 = energy(problem, sys.phase(x0, y0));
    const double eps = std::numeric_limits<double>::epsilon();

    std::vector<PhaseState> samples;
    std::vector<double> tau;
    std::vector<Event> events;
    IntegrationStats stats;

    const auto record = [&](double x, const State<N>& y) {
        PhaseState s = sys.phase(x, y);
        if (!samples.empty() && !(s.t > samples.back().t)) return;
        samples.push_back(s);
        if constexpr (System::fictitious) tau.push_back(x);
    };

    double x = x0;
    State<N> y = y0;
    State<N> f = sys(x, y);
    record(x, y);

    const double t0 = sys.time(x0, y0);
    const bool grid = cfg.output_interval > 0.0;
    std::size_t grid_index = 1;
    bool finished = false;

    double h = std::min(initial_step<N>(sys, x, y, f, x_final - x0, cfg.rel_tol, cfg.abs_tol), cfg.max_step);

    while (!finished) {
        if (x >= x_final) break;
        bool last = false;
        if (h >= x_final - x) {
            h = x_final - x;
            last = true;
        }
        if (h <= 16.0 * eps * std::abs(x) || x + h == x) {
            const PhaseState s = sys.phase(x, y);
            if (collision_unavoidable(problem, s, cfg.collision_radius)) {
                record(x, y);
                events.push_back({EventKind::Collision, samples.back().t, samples.back()});
                break;
            }
            throw StepUnderflow("integrate: step size underflow at t = " + std::to_string(s.t));
        }

        StepResult<N> step = dopri_step<N>(sys, x, y, f, h, cfg.rel_tol, cfg.abs_tol);
        if (!std::isfinite(step.err)) {
            ++stats.rejected_steps;
            h *= 0.2;
            continue;
        }
        if (step.err > 1.0) {
            ++stats.rejected_steps;
            h *= std::max(0.2, 0.9 * std::pow(step.err, -0.2));
            continue;
        }
        if (!sys.accept(step.y)) {
            ++stats.rejected_steps;
            h *= 0.5;
            continue;
        }
        ++stats.accepted_steps;
        const double x_new = last ? x_final : x + h;
        const DenseStep<N>& dense = step.dense;
        const auto at = [&](double xx) { return dense(xx); };

        // Events inside (x, x_new].
        std::optional<PendingEvent> terminal;
        const auto consider = [&](PendingEvent ev) {
            if (ev.terminal) {
                if (!terminal || ev.x < terminal->x) terminal = ev;
            }
        };
        const double rate0 = sys.radial_rate(y);
        const double rate1 = sys.radial_rate(step.y);
        std::optional<PendingEvent> brake;
        if (rate0 * rate1 < 0.0) {
            const double xa = numerics::find_root([&](double xx) { return sys.radial_rate(at(xx)); }, x, x_new);
            const State<N> ya = at(xa);
            const double ra = sys.radius(ya);
            if (rate0 < 0.0 && ra < cfg.collision_radius && sys.radius(y) >= cfg.collision_radius) {
                const double xc = numerics::find_root(
                    [&](double xx) { return sys.radius(at(xx)) - cfg.collision_radius; }, x, xa);
                consider({EventKind::Collision, xc, true});
            }
            const PhaseState sa = sys.phase(xa, ya);
            if (norm(sa.v) < cfg.brake_speed && ra > 0.0 &&
                std::abs(potential(problem, sa.q) - E0) < cfg.brake_energy_tol * std::max(1.0, std::abs(E0))) {
                brake = PendingEvent{EventKind::Brake, xa, cfg.stop_at_brake};
                consider(*brake);
            }
        }
        if (sys.radius(step.y) < cfg.collision_radius) {
            const double xc = numerics::find_root(
                [&](double xx) { return sys.radius(at(xx)) - cfg.collision_radius; }, x, x_new);
            consider({EventKind::Collision, xc, true});
        }
        if (sys.radius(step.y) > cfg.escape_radius) {
            const double xe = numerics::find_root(
                [&](double xx) { return sys.radius(at(xx)) - cfg.escape_radius; }, x, x_new);
            consider({EventKind::Escape, xe, true});
        }

        const double x_stop = terminal ? terminal->x : x_new;
        const double t_stop = sys.time(x_stop, at(x_stop));

        if (grid) {
            for (;;) {
                const double tg = t0 + static_cast<double>(grid_index) * cfg.output_interval;
                if (tg > t_stop) break;
                if (!terminal && last && tg > t_stop - 1e-9 * cfg.output_interval) break;
                double xg = tg;
                if constexpr (System::fictitious) {
                    xg = numerics::find_root([&](double xx) { return sys.time(xx, at(xx)) - tg; }, x, x_stop);
                }
                record(xg, at(xg));
                ++grid_index;
                if (samples.size() >= cfg.max_samples) break;
            }
        }

        if (brake && !brake->terminal && (!terminal || brake->x < terminal->x)) {
            events.push_back({EventKind::Brake, sys.time(brake->x, at(brake->x)), sys.phase(brake->x, at(brake->x))});
        }

        if (terminal) {
            const State<N> ye = at(terminal->x);
            const PhaseState se = sys.phase(terminal->x, ye);
            record(terminal->x, ye);
            events.push_back({terminal->kind, se.t, se});
            break;
        }

        if (samples.size() >= cfg.max_samples) {
            events.push_back({EventKind::SampleLimit, samples.back().t, samples.back()});
            break;
        }

        sys.commit(step.y);
        x = x_new;
        y = step.y;
        f = step.f;
        if (!grid || last) record(x, y);
        if (samples.size() >= cfg.max_samples && !last) {
            events.push_back({EventKind::SampleLimit, samples.back().t, samples.back()});
            break;
        }
        if (last) finished = true;

        const double factor = step.err == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(step.err, -0.2), 0.2, 10.0);
        h = std::min(h * factor, cfg.max_step);
    }

    const double budget = cfg.drift_budget_factor * cfg.rel_tol * std::max(1.0, stats.accepted_steps / 1000.0);
    return Trajectory(problem, std::move(samples), budget, std::move(events),
                      std::move(tau), stats);
}

void check_start(const PhaseState& state0, const IntegratorConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(state0.q.x) || !std::isfinite(state0.q.y) || !std::isfinite(state0.v.x) ||
        !std::isfinite(state0.v.y) || !std::isfinite(state0.t)) {
        throw DomainError("integrate: non-finite initial state");
    }
    if (!(norm(state0.q) > cfg.collision_radius)) {
        throw DomainError("integrate: initial radius inside the collision radius");
    }
}

}  // namespace

Trajectory integrate(const PowerLawProblem& problem, const PhaseState& state0, double t_final,
                     const IntegratorConfig& cfg) {
    check_start(state0, cfg);
    if (!(t_final > state0.t) || !std::isfinite(t_final)) throw DomainError("integrate: t_final must exceed t0");
    NewtonSystem sys{problem};
    return drive(problem, sys, NewtonSystem::pack(state0), state0.t, t_final, cfg);
}

Trajectory integrate_fictitious(const PowerLawProblem& problem, const PhaseState& state0, double tau_final,
                                const IntegratorConfig& cfg) {
    problem.require_sub_quadratic("integrate_fictitious");
    check_start(state0, cfg);
    if (!(tau_final > 0.0) || !std::isfinite(tau_final)) throw DomainError("integrate_fictitious: tau_final <= 0");

    const double alpha = problem.alpha();
    const double beta = 2.0 / (2.0 - alpha);
    const double gamma = 2.0 * beta - 2.0;
    const double E = energy(problem, state0);

    const std::complex<double> q0 = to_complex(state0.q);
    const std::complex<double> v0 = to_complex(state0.v);
    const double r0 = std::abs(q0);
    const double arg0 = std::arg(q0);
    const std::complex<double> Q0 = std::polar(std::pow(r0, 1.0 / beta), arg0 / beta);
    const std::complex<double> P0 = beta * std::pow(r0, alpha) * v0 * Q0 / q0;

    FoldingSystem sys{beta, gamma, beta * beta * E * gamma, arg0 / beta};
    const State<5> y0{Q0.real(), Q0.imag(), P0.real(), P0.imag(), state0.t};
    return drive(problem, sys, y0, 0.0, tau_final, cfg);
}

std::vector<Apsis> detect_apsides(const Trajectory& traj) {
    std::vector<Apsis> out;
    const auto samples = traj.samples();
    if (samples.size() < 2) return out;

    double r_lo = std::numeric_limits<double>::infinity();
    double r_hi = 0.0;
    for (const auto& s : samples) {
        const double r = norm(s.q);
        r_lo = std::min(r_lo, r);
        r_hi = std::max(r_hi, r);
    }
    if (r_hi - r_lo <= 1e-9 * r_hi) return out;

    const auto rate = [&](double t) {
        const PhaseState s = traj.state_at(t);
        return dot(s.q, s.v);
    };
    const auto push = [&](double t, bool rising) {
        const PhaseState s = traj.state_at(t);
        out.push_back({rising ? ApsisKind::Perihelion : ApsisKind::Apohelion, t, norm(s.q)});
    };
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double g0 = dot(samples[i].q, samples[i].v);
        const double g1 = dot(samples[i + 1].q, samples[i + 1].v);
        if (g0 * g1 < 0.0) {
            push(numerics::find_root(rate, samples[i].t, samples[i + 1].t), g0 < 0.0);
        } else if (g1 == 0.0 && i + 2 < samples.size()) {
            const double g2 = dot(samples[i + 2].q, samples[i + 2].v);
            if (g0 * g2 < 0.0) push(samples[i + 1].t, g0 < 0.0);
        }
    }
    return out;
}

}  // namespace plaw
