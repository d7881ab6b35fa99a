#include "plaw/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plaw/errors.hpp"

namespace plaw {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Collision: return "collision";
        case EventKind::Brake: return "brake";
        case EventKind::Escape: return "escape";
        case EventKind::SampleLimit: return "sample-limit";
    }
    return "unknown";
}

Trajectory::Trajectory(PowerLawProblem problem, std::vector<PhaseState> samples, double drift_budget,
                       std::vector<Event> events, std::vector<double> fictitious_time, IntegrationStats stats)
    : problem_(problem),
      samples_(std::move(samples)),
      events_(std::move(events)),
      tau_(std::move(fictitious_time)),
      drift_budget_(drift_budget),
      stats_(stats) {
    if (samples_.empty()) throw DomainError("Trajectory: no samples");
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (!(samples_[i].t > samples_[i - 1].t)) throw DomainError("Trajectory: sample times not increasing");
    }
    if (!tau_.empty() && tau_.size() != samples_.size()) {
        throw DomainError("Trajectory: fictitious time grid does not match samples");
    }
    for (const auto& e : events_) {
        if (e.t < samples_.front().t || e.t > samples_.back().t) {
            throw DomainError("Trajectory: event outside the sampled time range");
        }
    }
    conserved_ = plaw::conserved(problem_, samples_.front());
}

bool Trajectory::has_event(EventKind kind) const {
    return std::any_of(events_.begin(), events_.end(), [kind](const Event& e) { return e.kind == kind; });
}

PhaseState Trajectory::state_at(double t) const {
    if (t < t_begin() || t > t_end()) throw DomainError("Trajectory::state_at: time outside sampled range");
    if (samples_.size() == 1) return samples_.front();
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](double value, const PhaseState& s) { return value < s.t; });
    if (it == samples_.end()) --it;
    if (it == samples_.begin()) ++it;
    const PhaseState& a = *(it - 1);
    const PhaseState& b = *it;
    if (t == a.t) return a;
    if (t == b.t) return b;

    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const Vec2 acc_a = acceleration(problem_, a.q);
    const Vec2 acc_b = acceleration(problem_, b.q);

    // Quintic Hermite basis on [0, 1]: values, first and second derivatives.
    const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double h3 = 0.5 * s3 - s4 + 0.5 * s5;
    const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h5 = 10 * s3 - 15 * s4 + 6 * s5;

    const double d0 = -30 * s2 + 60 * s3 - 30 * s4;
    const double d1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    const double d2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
    const double d3 = 1.5 * s2 - 4 * s3 + 2.5 * s4;
    const double d4 = -12 * s2 + 28 * s3 - 15 * s4;
    const double d5 = 30 * s2 - 60 * s3 + 30 * s4;

    PhaseState out;
    out.t = t;
    out.q = h0 * a.q + (h * h1) * a.v + (h * h * h2) * acc_a + (h * h * h3) * acc_b + (h * h4) * b.v + h5 * b.q;
    out.v = (d0 * a.q + (h * d1) * a.v + (h * h * d2) * acc_a + (h * h * d3) * acc_b + (h * d4) * b.v + d5 * b.q) / h;
    return out;
}

double Trajectory::energy_drift() const {
    const double scale = conserved_.E != 0.0 ? std::abs(conserved_.E) : 1.0;
    double worst = 0.0;
    for (const auto& s : samples_) worst = std::max(worst, std::abs(energy(problem_, s) - conserved_.E) / scale);
    return worst;
}

double Trajectory::angular_momentum_drift() const {
    double worst = 0.0;
    for (const auto& s : samples_) worst = std::max(worst, std::abs(angular_momentum(s) - conserved_.J));
    return worst;
}

std::vector<double> Trajectory::unwrapped_angles() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) {
        double a = polar_angle(s.q);
        if (!out.empty()) {
            const double prev = out.back();
            a += 2.0 * std::numbers::pi * std::round((prev - a) / (2.0 * std::numbers::pi));
        }
        out.push_back(a);
    }
    return out;
}

}  // namespace plaw
