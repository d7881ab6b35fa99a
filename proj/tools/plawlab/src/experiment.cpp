#include "plawlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "plaw/conegeom.hpp"
#include "plaw/duality.hpp"
#include "plaw/errors.hpp"
#include "plaw/scatterlab.hpp"
#include "plawlab/io.hpp"
#include "plawlab/verify.hpp"

namespace plawlab {

using plaw::DomainError;
using json = nlohmann::ordered_json;

std::string_view to_string(Command c) {
    switch (c) {
        case Command::Simulate: return "simulate";
        case Command::Dualize: return "dualize";
        case Command::Geodesic: return "geodesic";
        case Command::Scatter: return "scatter";
        case Command::Starburst: return "starburst";
        case Command::Verify: return "verify";
    }
    return "unknown";
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError(message);
}

bool finite(double x) { return std::isfinite(x); }

plaw::CylinderKind cylinder_kind(const std::string& name) {
    if (name == "circle") return plaw::CylinderKind::Circle;
    if (name == "generator") return plaw::CylinderKind::Generator;
    if (name == "helix") return plaw::CylinderKind::Helix;
    throw DomainError("cylinder kind must be circle, generator or helix");
}

}  // namespace

void validate(const ExperimentSpec& s) {
    require(finite(s.alpha) && s.alpha > 0.0, "alpha must be positive");
    require(finite(s.mu), "mu must be finite");
    const bool sub_quadratic = s.alpha < 2.0;
    switch (s.command) {
        case Command::Simulate:
            s.integrator.validate();
            require(finite(s.q.x) && finite(s.q.y) && finite(s.v.x) && finite(s.v.y), "initial state must be finite");
            require(plaw::norm(s.q) > s.integrator.collision_radius, "initial radius inside the collision radius");
            if (s.fictitious) {
                require(sub_quadratic, "fictitious time requires 0 < alpha < 2");
                require(finite(s.tau_final) && s.tau_final > 0.0, "tau-final must be positive");
            } else {
                require(finite(s.t_final) && s.t_final > 0.0, "t-final must be positive");
            }
            break;
        case Command::Dualize:
            s.integrator.validate();
            require(sub_quadratic, "dualize requires 0 < alpha < 2");
            require(finite(s.energy), "energy must be finite");
            require(finite(s.J) && s.J != 0.0, "j must be non-zero");
            if (s.energy < 0.0) {
                require(s.mu > 0.0, "bounded orbits need mu > 0");
                require(finite(s.periods) && s.periods > 0.0, "periods must be positive");
            } else {
                require(s.energy > 0.0 || s.mu > 0.0, "no orbit at this energy");
                require(finite(s.t_final) && s.t_final > 0.0, "t-final must be positive");
            }
            break;
        case Command::Geodesic:
            if (!s.cylinder.empty()) {
                cylinder_kind(s.cylinder);
                require(s.mu > 0.0, "cylinder geodesics need mu > 0");
                require(s.r0 > 0.0 && s.t_span > 0.0 && s.samples >= 2, "need r0 > 0, t-span > 0, samples >= 2");
            } else {
                require(s.cone_c > 0.0 || s.alpha != 2.0, "alpha = 2 has no cone; use --cylinder");
                require(s.cone_c >= 0.0 && finite(s.cone_c), "c must be positive");
                require(s.p_star >= 0.0 && finite(s.p_star), "p-star must be non-negative");
                require(finite(s.s_min) && finite(s.s_max) && s.s_max > s.s_min, "need s-min < s-max");
                require(s.samples >= 2, "need at least two samples");
            }
            break;
        case Command::Scatter:
            require(sub_quadratic, "scatter requires 0 < alpha < 2");
            require(finite(s.energy) && s.energy > 0.0, "scatter requires energy > 0");
            for (double b : parse_grid(s.b_grid)) require(b > 0.0 && finite(b), "b grid values must be positive");
            break;
        case Command::Starburst:
            require(sub_quadratic, "starburst requires 0 < alpha < 2");
            require(s.mu > 0.0, "starburst requires mu > 0");
            require(finite(s.energy) && s.energy < 0.0, "starburst requires energy < 0");
            for (double J : parse_grid(s.j_list)) require(J != 0.0 && finite(J), "j values must be non-zero");
            break;
        case Command::Verify:
            break;
    }
}

namespace {

struct Artifacts {
    CsvTable table;
    json summary = json::object();
    std::string gnuplot_using;  ///< columns for the default plot
    std::string text;           ///< human readable summary lines
    int status = 0;
};

json spec_json(const ExperimentSpec& s) {
    json j;
    j["command"] = to_string(s.command);
    j["alpha"] = s.alpha;
    j["mu"] = s.mu;
    switch (s.command) {
        case Command::Simulate:
            j["q"] = {s.q.x, s.q.y};
            j["v"] = {s.v.x, s.v.y};
            if (s.fictitious) {
                j["tau_final"] = s.tau_final;
            } else {
                j["t_final"] = s.t_final;
            }
            break;
        case Command::Dualize:
            j["energy"] = s.energy;
            j["j"] = s.J;
            j["periods"] = s.periods;
            j["seed_branch"] = s.seed_branch;
            break;
        case Command::Geodesic:
            j["c"] = s.cone_c;
            j["p_star"] = s.p_star;
            j["theta_star"] = s.theta_star;
            j["s_range"] = {s.s_min, s.s_max};
            j["samples"] = s.samples;
            j["cylinder"] = s.cylinder;
            break;
        case Command::Scatter:
            j["energy"] = s.energy;
            j["b_grid"] = s.b_grid;
            j["mirror"] = s.mirror;
            break;
        case Command::Starburst:
            j["energy"] = s.energy;
            j["j_list"] = s.j_list;
            break;
        case Command::Verify:
            j["seed"] = s.seed;
            break;
    }
    const auto& c = s.integrator;
    j["integrator"] = {{"rel_tol", c.rel_tol},
                       {"abs_tol", c.abs_tol},
                       {"max_step", std::isfinite(c.max_step) ? json(c.max_step) : json("inf")},
                       {"collision_radius", c.collision_radius},
                       {"max_samples", c.max_samples},
                       {"output_interval", c.output_interval}};
    return j;
}

Artifacts simulate(const ExperimentSpec& s) {
    const plaw::PowerLawProblem problem(s.alpha, s.mu);
    const plaw::PhaseState start{s.q, s.v, 0.0};
    const plaw::Trajectory traj = s.fictitious ? plaw::integrate_fictitious(problem, start, s.tau_final, s.integrator)
                                               : plaw::integrate(problem, start, s.t_final, s.integrator);
    Artifacts a;
    a.table = trajectory_table(traj);
    a.gnuplot_using = "2:3";
    json events = json::array();
    std::ostringstream text;
    text << "samples = " << traj.size() << "\n";
    for (const auto& e : traj.events()) {
        events.push_back({{"kind", plaw::to_string(e.kind)}, {"t", e.t}});
        text << "event " << plaw::to_string(e.kind) << " at t = " << format_double(e.t) << "\n";
    }
    text << "energy drift = " << format_double(traj.energy_drift()) << "\n";
    text << "angular momentum drift = " << format_double(traj.angular_momentum_drift()) << "\n";
    a.summary = {{"samples", traj.size()},
                 {"accepted_steps", traj.stats().accepted_steps},
                 {"rejected_steps", traj.stats().rejected_steps},
                 {"events", events},
                 {"energy_drift", traj.energy_drift()},
                 {"angular_momentum_drift", traj.angular_momentum_drift()},
                 {"drift_budget", traj.drift_budget()}};
    a.text = text.str();
    return a;
}

Artifacts dualize(const ExperimentSpec& s) {
    const plaw::PowerLawProblem problem(s.alpha, s.mu);
    const plaw::PhaseState start = plaw::pericenter_state(problem, s.energy, s.J);
    const double t_end = s.energy < 0.0 ? s.periods * plaw::radial_period(problem, s.energy, s.J) : s.t_final;
    plaw::IntegratorConfig cfg = s.integrator;
    if (cfg.output_interval == 0.0) {
        const double per = s.energy < 0.0 ? t_end / s.periods : t_end;
        cfg.output_interval = per / 12000.0;
    }
    const plaw::Trajectory traj = plaw::integrate(problem, start, t_end, cfg);
    const plaw::DualityMap map(s.alpha, s.energy, s.mu);
    const plaw::PlaneCurve Q = plaw::transform_inverse(map, plaw::position_curve(traj), s.seed_branch);

    Artifacts a;
    a.table.header = {"tau", "X", "Y"};
    for (std::size_t i = 0; i < Q.size(); ++i) a.table.rows.push_back({Q.param[i], Q.points[i].real(), Q.points[i].imag()});
    a.gnuplot_using = "2:3";
    a.summary = {{"beta", map.beta()},
                 {"gamma", map.gamma()},
                 {"dual_energy", map.dual_energy()},
                 {"coefficient", map.dual_coefficient()},
                 {"samples", Q.size()}};
    if (s.check_dual_ode) {
        const double residual = plaw::dual_residual(map, Q);
        const double fitted = plaw::fit_dual_coefficient(map, Q);
        std::ostringstream text;
        if (s.alpha == 1.0) {
            text << "max |Q'' − 8EQ| = " << format_double(residual) << "\n";
        } else {
            text << "max |Q'' − C|Q|^(γ−2)Q| = " << format_double(residual) << "\n";
        }
        text << "C = " << format_double(map.dual_coefficient()) << ", fitted C = " << format_double(fitted)
             << ", E gamma / (mu alpha) = " << format_double(map.alternative_coefficient()) << "\n";
        a.text = text.str();
        a.summary["residual"] = residual;
        a.summary["fitted_coefficient"] = fitted;
        a.summary["alternative_coefficient"] = map.alternative_coefficient();
    }
    return a;
}

Artifacts geodesic(const ExperimentSpec& s) {
    Artifacts a;
    std::ostringstream text;
    if (!s.cylinder.empty()) {
        const plaw::PowerLawProblem problem(2.0, s.mu);
        plaw::CylinderParams params;
        params.r0 = s.r0;
        params.theta0 = s.theta_star;
        params.pitch = s.pitch;
        params.t_span = s.t_span;
        params.samples = s.samples;
        const auto states = plaw::cylinder_geodesics(s.mu, cylinder_kind(s.cylinder), params);
        const plaw::Trajectory traj(problem, states, 0.0);
        a.table = trajectory_table(traj);
        a.gnuplot_using = "2:3";
        text << "cylinder " << s.cylinder << ": J = " << format_double(traj.conserved().J)
             << ", E = " << format_double(traj.conserved().E) << "\n";
        a.summary = {{"kind", s.cylinder}, {"E", traj.conserved().E}, {"J", traj.conserved().J}};
    } else {
        const double c = s.cone_c > 0.0 ? s.cone_c : plaw::cone_parameter(s.alpha);
        const plaw::ConeGeometry geom(c);
        const auto trace = plaw::cone_geodesic_trace(geom, s.p_star, s.theta_star, s.s_min, s.s_max, s.samples);
        a.table.header = {"s", "rho", "theta", "x", "y"};
        for (const auto& p : trace) {
            const auto z = plaw::develop(p.point);
            a.table.rows.push_back({p.s, p.point.rho, p.point.theta, z.real(), z.imag()});
        }
        a.gnuplot_using = "4:5";
        const auto predicted = plaw::self_intersection_count(c);
        const long detected = plaw::count_trace_crossings(trace);
        text << "c = " << format_double(c) << "\n";
        text << "swept angle = " << format_double(plaw::swept_angle(trace))
             << " (pi/c = " << format_double(plaw::scattering_angle(c)) << ")\n";
        text << "self-intersections: predicted " << predicted.count << (predicted.degenerate ? " (degenerate)" : "")
             << ", detected " << detected << "\n";
        a.summary = {{"c", c},
                     {"swept_angle", plaw::swept_angle(trace)},
                     {"scattering_angle", plaw::scattering_angle(c)},
                     {"predicted_crossings", predicted.count},
                     {"degenerate", predicted.degenerate},
                     {"detected_crossings", detected}};
    }
    a.text = text.str();
    return a;
}

std::string_view coverage_name(plaw::Coverage c) {
    switch (c) {
        case plaw::Coverage::SubCircle: return "sub-circle";
        case plaw::Coverage::FullCircle: return "full-circle";
        case plaw::Coverage::MultiCover: return "multi-cover";
    }
    return "unknown";
}

Artifacts scatter(const ExperimentSpec& s) {
    const plaw::PowerLawProblem problem(s.alpha, s.mu);
    const std::vector<double> grid = parse_grid(s.b_grid);
    const plaw::BeamCoverage beam = plaw::beam_coverage(problem, s.energy, grid, s.threads);
    std::vector<plaw::ScatterRecord> rows;
    for (const auto& r : beam.table) {
        if (s.mirror || r.b > 0.0) rows.push_back(r);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.b < y.b; });
    Artifacts a;
    a.table = scatter_table(rows);
    a.gnuplot_using = "1:4";
    std::ostringstream text;
    text << "A = " << format_double(beam.A) << ", arc measure 2A = " << format_double(beam.arc_measure) << " ("
         << coverage_name(beam.coverage) << ")\n";
    text << "sup |f| = " << format_double(beam.sup_abs_deflection) << "\n";
    text << "max multiplicity = " << beam.max_multiplicity << " at direction " << format_double(beam.multi_direction)
         << "\n";
    a.text = text.str();
    a.summary = {{"A", beam.A},
                 {"arc_measure", beam.arc_measure},
                 {"coverage", coverage_name(beam.coverage)},
                 {"sup_abs_deflection", beam.sup_abs_deflection},
                 {"max_multiplicity", beam.max_multiplicity},
                 {"multi_direction", beam.multi_direction},
                 {"multi_b", beam.multi_b}};
    return a;
}

Artifacts starburst(const ExperimentSpec& s) {
    const plaw::PowerLawProblem problem(s.alpha, s.mu);
    const std::vector<double> Js = parse_grid(s.j_list);
    const plaw::StarburstStudy study = plaw::starburst_study(problem, s.energy, Js, s.threads);
    Artifacts a;
    a.table = starburst_table(study);
    a.gnuplot_using = "1:3";
    std::ostringstream text;
    text << "pi/c = " << format_double(study.limit) << "\n";
    text << "error decreasing: " << (study.error_decreasing ? "yes" : "no") << "\n";
    text << "scaling deviation = " << format_double(study.scaling_deviation) << "\n";
    a.text = text.str();
    a.summary = {{"limit", study.limit},
                 {"error_decreasing", study.error_decreasing},
                 {"scaling_deviation", study.scaling_deviation}};
    return a;
}

Artifacts verify(const ExperimentSpec& s) {
    const auto results = run_verify_suite(s.seed);
    Artifacts a;
    std::ostringstream text;
    json checks = json::array();
    bool all = true;
    for (const auto& r : results) {
        text << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  measured " << format_double(r.measured)
             << "  threshold " << format_double(r.threshold) << "\n";
        checks.push_back({{"name", r.name}, {"measured", r.measured}, {"threshold", r.threshold}, {"passed", r.passed}});
        all = all && r.passed;
    }
    a.text = text.str();
    a.summary = {{"checks", checks}, {"all_passed", all}};
    a.status = all ? 0 : 2;
    return a;
}

std::string gnuplot_script(const ExperimentSpec& s, const std::string& columns) {
    const std::string data = s.out_path.empty() ? "-" : s.out_path;
    std::ostringstream g;
    g << "set datafile separator ','\n";
    g << "set key autotitle columnhead\n";
    if (s.command == Command::Scatter) g << "set logscale x\n";
    if (s.command == Command::Starburst) g << "set logscale xy\n";
    if (s.command == Command::Simulate || s.command == Command::Dualize || s.command == Command::Geodesic) {
        g << "set size ratio -1\n";
    }
    g << "plot '" << data << "' using " << columns << " with lines\n";
    return g.str();
}

}  // namespace

int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
    validate(spec);
    Artifacts a;
    switch (spec.command) {
        case Command::Simulate: a = simulate(spec); break;
        case Command::Dualize: a = dualize(spec); break;
        case Command::Geodesic: a = geodesic(spec); break;
        case Command::Scatter: a = scatter(spec); break;
        case Command::Starburst: a = starburst(spec); break;
        case Command::Verify: a = verify(spec); break;
    }

    const bool has_table = !a.table.header.empty();
    if (has_table) {
        if (spec.out_path.empty()) {
            out << a.table.render();
        } else {
            write_atomic(spec.out_path, a.table.render());
        }
    }
    std::ostream& summary = has_table && spec.out_path.empty() ? err : out;
    summary << a.text;

    if (!spec.meta_path.empty()) {
        json meta;
        meta["tool"] = "plawlab";
        meta["version"] = "0.1.0";
        meta["spec"] = spec_json(spec);
        meta["summary"] = a.summary;
        if (has_table) meta["columns"] = a.table.header;
        write_atomic(spec.meta_path, meta.dump(2) + "\n");
    }
    if (!spec.gnuplot_path.empty() && has_table) {
        write_atomic(spec.gnuplot_path, gnuplot_script(spec, a.gnuplot_using));
    }
    return a.status;
}

}  // namespace plawlab
