#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "plaw/dynamics.hpp"

namespace plaw {

enum class EventKind {
    Collision,    ///< |q| fell below the collision radius
    Brake,        ///< velocity vanished on the Hill boundary
    Escape,       ///< |q| exceeded the escape radius
    SampleLimit,  ///< max_samples reached
};

std::string_view to_string(EventKind kind);

struct IntegrationStats {
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

struct Event {
    EventKind kind;
    double t;
    PhaseState state;
};

/// Time-ordered solution samples of one power-law problem.
///
/// Samples are states of Newton's equations, so between two of them the
/// motion is interpolated by the quintic Hermite polynomial matching
/// position, velocity and acceleration at both ends.
class Trajectory {
public:
    /// Throws DomainError if samples are empty or times not strictly increasing.
    Trajectory(PowerLawProblem problem, std::vector<PhaseState> samples, double drift_budget,
               std::vector<Event> events = {}, std::vector<double> fictitious_time = {},
               IntegrationStats stats = {});

    const PowerLawProblem& problem() const noexcept { return problem_; }
    std::span<const PhaseState> samples() const noexcept { return samples_; }
    std::span<const Event> events() const noexcept { return events_; }
    /// Conserved values of the first sample.
    const ConservedPair& conserved() const noexcept { return conserved_; }
    double drift_budget() const noexcept { return drift_budget_; }

    /// Fictitious time tau of each sample; empty for Newtonian-time runs.
    std::span<const double> fictitious_time() const noexcept { return tau_; }

    const IntegrationStats& stats() const noexcept { return stats_; }

    std::size_t size() const noexcept { return samples_.size(); }
    const PhaseState& front() const { return samples_.front(); }
    const PhaseState& back() const { return samples_.back(); }
    double t_begin() const { return samples_.front().t; }
    double t_end() const { return samples_.back().t; }

    bool has_event(EventKind kind) const;

    /// Interpolated state at time t in [t_begin, t_end].
    PhaseState state_at(double t) const;

    /// max |E_i - E_0| / |E_0| over samples (absolute when E_0 == 0).
    double energy_drift() const;
    /// max |J_i - J_0| over samples.
    double angular_momentum_drift() const;

    /// Polar angle of every sample, unwrapped so consecutive values differ by
    /// less than pi.
    std::vector<double> unwrapped_angles() const;

private:
    PowerLawProblem problem_;
    std::vector<PhaseState> samples_;
    std::vector<Event> events_;
    std::vector<double> tau_;
    ConservedPair conserved_;
    double drift_budget_;
    IntegrationStats stats_;
};

}  // namespace plaw
