#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>

#include "plaw/integrate.hpp"
#include "plaw/vec2.hpp"

namespace plawlab {

enum class Command { Simulate, Dualize, Geodesic, Scatter, Starburst, Verify };

std::string_view to_string(Command c);

/// Everything one invocation of the tool needs.
struct ExperimentSpec {
    Command command = Command::Simulate;

    double alpha = 1.0;
    double mu = 1.0;

    // simulate
    plaw::Vec2 q{1.0, 0.0};
    plaw::Vec2 v{0.0, 1.0};
    double t_final = 2.0 * std::numbers::pi;
    bool fictitious = false;
    double tau_final = 0.0;

    // dualize, scatter, starburst
    double energy = -0.5;
    double J = 0.5;
    double periods = 1.0;
    bool check_dual_ode = false;
    long seed_branch = 0;
    std::string b_grid = "log:1e-3:1e3:61";
    bool mirror = false;
    std::string j_list = "0.3,0.1,0.03,0.01";

    // geodesic
    double cone_c = 0.0;  ///< 0 derives c from alpha
    double p_star = 1.0;
    double theta_star = 0.0;
    double s_min = -100.0;
    double s_max = 100.0;
    std::size_t samples = 2001;
    std::string cylinder;  ///< circle, generator or helix selects the alpha = 2 case
    double pitch = 1.0;
    double r0 = 1.0;
    double t_span = 1.0;

    plaw::IntegratorConfig integrator{};

    std::string out_path;
    std::string meta_path;
    std::string gnuplot_path;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

/// Throws plaw::DomainError when a field violates the preconditions of the
/// module the command dispatches to.
void validate(const ExperimentSpec& spec);

/// Runs the command and writes its artifacts. Tables go to spec.out_path, or
/// to out when no path is given; summaries go to out when the table is in a
/// file and to err otherwise. Returns the process exit status.
int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace plawlab
