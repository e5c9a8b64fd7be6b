#include "hfs/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace hfs {

void Material2DEG::validate() const {
    if (!(n_s > 0)) throw std::domain_error("Material2DEG: n_s must be positive");
    if (!(mu_e > 0)) throw std::domain_error("Material2DEG: mu_e must be positive");
    if (!(m_star_ratio > 0 && m_star_ratio < 1))
        throw std::domain_error("Material2DEG: m_star_ratio must be in (0, 1)");
}

double fermi_wavevector(double n_s) {
    if (!(n_s > 0)) throw std::domain_error("fermi_wavevector: n_s must be positive");
    return std::sqrt(2.0 * M_PI * n_s);
}

double fermi_velocity(double k_F, double m_star_ratio) {
    if (!(m_star_ratio > 0))
        throw std::domain_error("fermi_velocity: m_star_ratio must be positive");
    if (k_F < 0) throw std::domain_error("fermi_velocity: k_F must be nonnegative");
    const auto& c = constants();
    return c.hbar * k_F / (m_star_ratio * c.m_e);
}

double fermi_energy(double k_F, double m_star_ratio) {
    if (!(m_star_ratio > 0))
        throw std::domain_error("fermi_energy: m_star_ratio must be positive");
    const auto& c = constants();
    return c.hbar * c.hbar * k_F * k_F / (2.0 * m_star_ratio * c.m_e);
}

double mean_free_path(double mu_e, double n_s) {
    if (!(mu_e > 0)) throw std::domain_error("mean_free_path: mu_e must be positive");
    if (!(n_s > 0)) throw std::domain_error("mean_free_path: n_s must be positive");
    const auto& c = constants();
    return c.hbar * mu_e * std::sqrt(2.0 * M_PI * n_s) / c.e_charge;
}

double coherence_length(double v_F, double temperature) {
    if (!(temperature > 0))
        throw std::domain_error("coherence_length: temperature must be positive");
    const auto& c = constants();
    return c.hbar * v_F / (2.0 * M_PI * c.k_B * temperature);
}

int max_modes(double k_F, double w_c) {
    if (!(w_c > 0)) throw std::domain_error("max_modes: width must be positive");
    if (k_F <= 0) return 0;
    return static_cast<int>(std::floor(k_F * w_c / M_PI));
}

RegimeClassification classify_regime(double l_e, double zeta_N,
                                     double reference_length,
                                     double ballistic_factor) {
    if (!(l_e > 0 && zeta_N > 0 && reference_length > 0))
        throw std::domain_error("classify_regime: lengths must be positive");
    RegimeClassification r;
    r.is_clean = l_e > zeta_N;
    r.is_ballistic = l_e >= ballistic_factor * reference_length;
    r.reference_length = reference_length;
    return r;
}

TransportQuantities derive_transport(const Material2DEG& m, double temperature) {
    m.validate();
    TransportQuantities q{};
    q.k_F = fermi_wavevector(m.n_s);
    q.v_F = fermi_velocity(q.k_F, m.m_star_ratio);
    q.E_F = fermi_energy(q.k_F, m.m_star_ratio);
    q.l_e = mean_free_path(m.mu_e, m.n_s);
    q.zeta_N = coherence_length(q.v_F, temperature);
    q.temperature = temperature;
    return q;
}

}  // namespace hfs
