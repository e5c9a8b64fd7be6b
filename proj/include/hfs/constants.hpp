#pragma once

#include <cmath>
#include <stdexcept>

namespace hfs {

// CODATA-2018 values, SI units throughout.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;       // J s
    double e_charge = 1.602176634e-19;   // C
    double k_B = 1.380649e-23;           // J/K
    double m_e = 9.1093837015e-31;       // kg
    double g_q = 7.748091729e-5;         // S, conductance quantum 2e^2/h

    double planck() const { return 2.0 * M_PI * hbar; }

    // g_q must agree with 2e^2/h; the tabulated decimal is truncated at
    // ~1e-10 relative, so the consistency gate sits at 1e-9.
    void validate() const {
        if (!(hbar > 0 && e_charge > 0 && k_B > 0 && m_e > 0 && g_q > 0))
            throw std::domain_error("PhysicalConstants: all constants must be positive");
        const double gq_derived = 2.0 * e_charge * e_charge / planck();
        if (std::abs(g_q - gq_derived) > 1e-9 * gq_derived)
            throw std::domain_error("PhysicalConstants: g_q inconsistent with 2e^2/h");
    }
};

inline const PhysicalConstants& constants() {
    static const PhysicalConstants c{};
    return c;
}

}  // namespace hfs
