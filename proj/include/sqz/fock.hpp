#pragma once

#include "sqz/types.hpp"

namespace sqz {

/// Dense density matrix on the truncated Fock space |0>..|dim-1>.
struct DensityState {
    int dim = 0;
    CMat rho;
};

CMat ladder(int dim);         // a
CMat ladder_dagger(int dim);  // a†
CMat number_operator(int dim);

/// a cosh r + a† e^{i phi} sinh r (the squeezed jump operator S a S†).
CMat squeezed_ladder(int dim, double r, double phi);

/// S(xi) = exp[(xi* a² - xi a†²)/2], xi = r e^{i phi}.
CMat squeeze_operator(int dim, double r, double phi);

/// D(alpha) = exp(alpha a† - alpha* a).
CMat displacement_operator(int dim, cd alpha);

DensityState vacuum(int dim);
DensityState thermal_state(int dim, double nbar);

/// S(xi) rho_th(nbar) S†(xi).
DensityState squeezed_thermal_state(int dim, double nbar, double r, double phi);

cd expect(const CMat& op, const DensityState& st);

/// Non-selective energy measurement: zero the Fock-basis off-diagonals.
DensityState dephase_energy_basis(const DensityState& st);

/// Smallest power of two >= 8 (nmean + 1).
int default_dim(double nmean);

/// Occupation in the top dim/8 levels (truncation-health indicator).
double tail_mass(const DensityState& st);

}  // namespace sqz
