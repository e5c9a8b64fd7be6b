#pragma once

#include <string>

#include "hfs/constants.hpp"

namespace hfs {

// Wafer-level 2DEG parameters (from Shubnikov-de Haas characterisation,
// taken as inputs).
struct Material2DEG {
    double n_s = 2.24e15;          // carriers per m^2
    double mu_e = 25.0;            // m^2/(V s)
    double m_star_ratio = 0.039;   // m*/m_e
    double well_thickness = 30e-9; // m
    double well_depth = 120e-9;    // m, below surface

    void validate() const;
};

struct TransportQuantities {
    double k_F;          // 1/m
    double v_F;          // m/s
    double E_F;          // J
    double l_e;          // m
    double zeta_N;       // m
    double temperature;  // K
};

struct RegimeClassification {
    bool is_clean = false;
    bool is_ballistic = false;
    double reference_length = 0.0;  // m
};

// k_F = sqrt(2 pi n_s), spin degeneracy 2.
double fermi_wavevector(double n_s);

// v_F = hbar k_F / m*
double fermi_velocity(double k_F, double m_star_ratio);

// E_F = hbar^2 k_F^2 / (2 m*)
double fermi_energy(double k_F, double m_star_ratio);

// l_e = hbar mu_e sqrt(2 pi n_s) / e
double mean_free_path(double mu_e, double n_s);

// zeta_N = hbar v_F / (2 pi k_B T)
double coherence_length(double v_F, double temperature);

// Number of occupied hard-wall subbands for a channel of width w_c:
// floor(k_F w_c / pi).
int max_modes(double k_F, double w_c);

// Clean limit: l_e > zeta_N (strict). Ballistic: l_e >= factor * reference.
RegimeClassification classify_regime(double l_e, double zeta_N,
                                     double reference_length,
                                     double ballistic_factor = 3.0);

TransportQuantities derive_transport(const Material2DEG& m, double temperature);

}  // namespace hfs
