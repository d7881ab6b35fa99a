#include "plawlab/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plaw/errors.hpp"
#include "plawlab/experiment.hpp"
#include "plawlab/io.hpp"

namespace plawlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Flat key = value file; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw plaw::DomainError("cannot read config file " + path);
    std::vector<std::pair<std::string, std::string>> items;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw plaw::DomainError(path + ":" + std::to_string(number) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw plaw::DomainError(path + ":" + std::to_string(number) + ": empty key");
        std::replace(key.begin(), key.end(), '_', '-');
        items.emplace_back(std::move(key), std::move(value));
    }
    return items;
}

std::string config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return {};
}

bool given(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

const std::vector<std::string> command_names = {"simulate", "dualize", "geodesic", "scatter", "starburst", "verify"};

/// Appends config entries that the command line does not override.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    const std::string path = config_path(args);
    if (path.empty()) return args;
    const bool has_command = std::any_of(args.begin(), args.end(), [](const std::string& a) {
        return std::find(command_names.begin(), command_names.end(), a) != command_names.end();
    });
    std::vector<std::string> extra;
    for (const auto& [key, value] : read_config(path)) {
        if (key == "command") {
            if (!has_command) args.insert(args.begin(), value);
            continue;
        }
        if (given(args, key)) continue;
        if (value == "true") {
            extra.push_back("--" + key);
        } else if (value != "false") {
            extra.push_back("--" + key + "=" + value);
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

struct Bindings {
    ExperimentSpec spec;
    std::string q_text = "1,0";
    std::string v_text = "0,1";
};

void add_problem(CLI::App* sub, Bindings& b) {
    sub->add_option("--alpha", b.spec.alpha, "Exponent of V = -mu / r^alpha")->capture_default_str();
    sub->add_option("--mu", b.spec.mu, "Coupling; negative is repulsive")->capture_default_str();
}

void add_outputs(CLI::App* sub, Bindings& b) {
    sub->add_option("--out", b.spec.out_path, "CSV output file (default: standard output)");
    sub->add_option("--meta", b.spec.meta_path, "JSON metadata file");
    sub->add_option("--gnuplot", b.spec.gnuplot_path, "gnuplot script file");
}

void add_integrator(CLI::App* sub, Bindings& b) {
    auto& c = b.spec.integrator;
    sub->add_option("--rel-tol", c.rel_tol, "Relative tolerance")->capture_default_str();
    sub->add_option("--abs-tol", c.abs_tol, "Absolute tolerance")->capture_default_str();
    sub->add_option("--max-step", c.max_step, "Largest step");
    sub->add_option("--collision-radius", c.collision_radius, "Stop below this radius")->capture_default_str();
    sub->add_option("--escape-radius", c.escape_radius, "Stop above this radius");
    sub->add_option("--max-samples", c.max_samples, "Sample limit")->capture_default_str();
    sub->add_option("--output-interval", c.output_interval, "Uniform output spacing in t (0: every step)");
}

void add_threads(CLI::App* sub, Bindings& b) {
    sub->add_option("--threads", b.spec.threads, "Worker threads (0: hardware)")->capture_default_str();
}

void build(CLI::App& app, Bindings& b) {
    app.require_subcommand(1);
    app.add_option("--config", "Flat key = value file; command-line flags take precedence");

    auto* sim = app.add_subcommand("simulate", "Integrate one orbit and write its trajectory");
    add_problem(sim, b);
    sim->add_option("--q", b.q_text, "Initial position x,y")->capture_default_str();
    sim->add_option("--v", b.v_text, "Initial velocity vx,vy")->capture_default_str();
    sim->add_option("--t-final", b.spec.t_final, "Final Newtonian time")->capture_default_str();
    sim->add_flag("--fictitious", b.spec.fictitious, "Integrate in fictitious time");
    sim->add_option("--tau-final", b.spec.tau_final, "Final fictitious time");
    add_integrator(sim, b);
    add_outputs(sim, b);

    auto* dual = app.add_subcommand("dualize", "Map an orbit into the folding plane");
    add_problem(dual, b);
    dual->add_option("--energy", b.spec.energy, "Energy E")->capture_default_str();
    dual->add_option("--j", b.spec.J, "Angular momentum J")->capture_default_str();
    dual->add_option("--periods", b.spec.periods, "Radial periods of a bounded orbit")->capture_default_str();
    dual->add_option("--t-final", b.spec.t_final, "Time span of an unbounded orbit")->capture_default_str();
    dual->add_option("--seed-branch", b.spec.seed_branch, "Sheet of the first root")->capture_default_str();
    dual->add_flag("--check-dual-ode", b.spec.check_dual_ode, "Report the dual equation residual");
    add_integrator(dual, b);
    add_outputs(dual, b);

    auto* geo = app.add_subcommand("geodesic", "Trace a cone or cylinder geodesic");
    add_problem(geo, b);
    geo->add_option("--c", b.spec.cone_c, "Cone parameter (0: from alpha)")->capture_default_str();
    geo->add_option("--p-star", b.spec.p_star, "Distance of closest approach")->capture_default_str();
    geo->add_option("--theta-star", b.spec.theta_star, "Angle of closest approach")->capture_default_str();
    geo->add_option("--s-min", b.spec.s_min, "First arclength")->capture_default_str();
    geo->add_option("--s-max", b.spec.s_max, "Last arclength")->capture_default_str();
    geo->add_option("--samples", b.spec.samples, "Sample count")->capture_default_str();
    geo->add_option("--cylinder", b.spec.cylinder, "alpha = 2 orbit: circle, generator or helix");
    geo->add_option("--pitch", b.spec.pitch, "Helix slope")->capture_default_str();
    geo->add_option("--r0", b.spec.r0, "Initial radius of a cylinder orbit")->capture_default_str();
    geo->add_option("--t-span", b.spec.t_span, "Time span of a cylinder orbit")->capture_default_str();
    add_outputs(geo, b);

    auto* sc = app.add_subcommand("scatter", "Deflection over a beam of impact parameters");
    add_problem(sc, b);
    sc->add_option("--energy", b.spec.energy, "Energy E > 0");
    sc->add_option("--b-grid", b.spec.b_grid, "log:lo:hi:n, lin:lo:hi:n or a comma list")->capture_default_str();
    sc->add_flag("--mirror", b.spec.mirror, "Also write the b < 0 half");
    add_threads(sc, b);
    add_outputs(sc, b);

    auto* star = app.add_subcommand("starburst", "Lobe angles as J decreases at fixed E < 0");
    add_problem(star, b);
    star->add_option("--energy", b.spec.energy, "Energy E < 0")->capture_default_str();
    star->add_option("--j-list", b.spec.j_list, "Angular momenta")->capture_default_str();
    add_threads(star, b);
    add_outputs(star, b);

    auto* ver = app.add_subcommand("verify", "Run the randomised invariant suite");
    ver->add_option("--seed", b.spec.seed, "Generator seed")->capture_default_str();
    ver->add_option("--meta", b.spec.meta_path, "JSON metadata file");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();
}

Command command_of(const CLI::App& app) {
    const std::string name = app.get_subcommands().front()->get_name();
    for (std::size_t i = 0; i < command_names.size(); ++i) {
        if (command_names[i] == name) return static_cast<Command>(i);
    }
    throw plaw::DomainError("unknown command " + name);
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config(std::move(args));

        CLI::App app{"Power-law central force laboratory", "plawlab"};
        Bindings b;
        build(app, b);
        std::reverse(args.begin(), args.end());
        try {
            app.parse(args);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? exit_ok : exit_validation;
        }
        b.spec.command = command_of(app);
        if (b.spec.command == Command::Simulate) {
            b.spec.q = parse_vec2(b.q_text);
            b.spec.v = parse_vec2(b.v_text);
        }
        return run(b.spec, out, err);
    } catch (const plaw::DomainError& e) {
        err << "plawlab: invalid input: " << e.what() << "\n";
        return exit_validation;
    } catch (const plaw::NumericalError& e) {
        err << "plawlab: numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "plawlab: " << e.what() << "\n";
        return exit_numerical;
    }
}

}  // namespace plawlab
