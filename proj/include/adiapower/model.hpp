#pragma once

#include <complex>

namespace adiapower {

/// Amplitude loss rates of the two coils plus the work-extraction rate at the
/// drain, all in s^-1. These act on amplitudes, so energies decay at twice
/// these rates.
struct LossModel {
    double gamma_S = 0.0;
    double gamma_D = 0.0;
    double gamma_W = 0.0;

    /// Throws std::domain_error unless all rates are finite and >= 0.
    void validate() const;

    bool lossless() const { return gamma_S == 0.0 && gamma_D == 0.0 && gamma_W == 0.0; }
};

/// Integrated state of the two coupled coils: complex mode amplitudes
/// normalized so |a|^2 is the stored energy, plus running time integrals of
/// those energies (used by the efficiency functionals).
struct CoilPair {
    std::complex<double> a_S{1.0, 0.0};
    std::complex<double> a_D{0.0, 0.0};
    double acc_S = 0.0;
    double acc_D = 0.0;

    double energy_S() const { return std::norm(a_S); }
    double energy_D() const { return std::norm(a_D); }
    double total_energy() const { return energy_S() + energy_D(); }
};

/// Lumped-element description of a single coil.
struct CoilPhysical {
    double L; // inductance, H
    double C; // capacitance, F
};

/// Angular resonant frequency 1/sqrt(LC) in rad/s.
/// Throws std::domain_error for nonpositive L or C.
double resonant_frequency(const CoilPhysical& coil);

/// Coupling rate M * sqrt(omega_S * omega_D / (L_S * L_D)) in s^-1.
/// Throws std::domain_error when inputs are nonpositive or M violates the
/// passivity bound 0 <= M <= sqrt(L_S * L_D).
double coupling_from_mutual(double M, double L_S, double L_D,
                            double omega_S, double omega_D);

} // namespace adiapower
