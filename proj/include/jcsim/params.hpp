#pragma once

#include "jcsim/hilbert.hpp"

namespace jcsim {

// All rates and energies are angular frequencies in rad/us; time is in us,
// so rate * time is dimensionless.
struct SystemParams {
    double delta = 0.0;   // qubit detuning, eps - omega_R
    double g = 1.0;       // qubit-cavity coupling
    double kappa = 0.4;   // cavity relaxation
    double gamma1 = 0.5;  // qubit relaxation
    double f = 0.0;       // drive amplitude
    HilbertDims dims{};

    // Rates may be zero (the dissipation-free reduction is a valid dynamical
    // system); operations that need a unique steady state check positivity
    // themselves. Throws std::invalid_argument.
    void validate() const;
};

// Drive envelope f(t). The step form is f(t) = amplitude * theta(t - t_on).
struct DriveProtocol {
    enum class Kind { constant, step };

    Kind kind = Kind::constant;
    double amplitude = 0.0;
    double t_on = 0.0;

    double at(double t) const {
        if (kind == Kind::constant) return amplitude;
        return t < t_on ? 0.0 : amplitude;
    }

    static DriveProtocol constant_drive(double amp) { return {Kind::constant, amp, 0.0}; }
    static DriveProtocol step_drive(double amp, double t_on = 0.0) {
        return {Kind::step, amp, t_on};
    }
};

}  // namespace jcsim
