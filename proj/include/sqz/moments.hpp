#pragma once

#include "sqz/fock.hpp"
#include "sqz/protocol.hpp"

namespace sqz {

/// Gaussian-sector state: (<a>, <a†a>, <a²>). The dynamics of these moments
/// close exactly for a quadratic Hamiltonian with linear jump operators.
struct MomentState {
    cd m1{0.0, 0.0};
    double n = 0.0;
    cd s{0.0, 0.0};
};

/// "Literal" evolves the moments exactly as generated by the master equation
/// with a static bath phase; "corotating" works in the frame rotating with
/// the cavity, where the free rotation terms drop and the bath inhomogeneity
/// is constant. Unitary strokes are the identity on corotating-frame moments.
enum class BathFrame { Literal, Corotating };

MomentState from_density(const DensityState& st);

/// Non-selective energy measurement on moments: (m1, n, s) -> (0, n, 0).
MomentState measure_project(const MomentState& st);

struct MomentDeriv {
    cd m1{0.0, 0.0};
    double n = 0.0;
    cd s{0.0, 0.0};
};

/// Moment closure of the master equation.
///   literal:    ṁ1 = (-iω - γ/2) m1;  ṅ = γ(N - n);  ṡ = (-2iω - γ) s + γM
///   corotating: ṁ1 = -(γ/2) m1;       ṅ = γ(N - n);  ṡ = -γ (s - M)
/// bath == nullptr gives the closed-system part only.
MomentDeriv moment_rhs(const MomentState& st, double omega, const BathSpec* bath,
                       BathFrame frame = BathFrame::Literal);

/// Fixed point of the literal-frame flow: (0, N, γM/(γ + 2iω)).
MomentState steady_state(double omega, const BathSpec& bath);

/// |s - m1²|² - ñ(ñ+1) with ñ = n - |m1|²; physical states have this <= 0
/// (up to numerical noise).
double physicality_defect(const MomentState& st);

}  // namespace sqz
