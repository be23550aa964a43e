#pragma once

#include <string>
#include <string_view>

namespace qmod {

/// Which rate sets the time unit of a figure. Internal math never rescales.
enum class TimeUnit { Gamma, Lambda, Absolute };

std::string_view to_string(TimeUnit unit);
TimeUnit parse_time_unit(std::string_view text);

/// Physical parameters of the modulated qubit in a Lorentzian reservoir.
///
/// gamma and lambda are the coupling strength and spectral width of the
/// reservoir, delta and omega_mod the modulation amplitude and frequency of
/// the transition, and (theta, phi) the Bloch angles of the initial pure state
/// cos(theta/2)|e> + sin(theta/2) e^{i phi}|g>.
struct ModelParams {
    double gamma = 1.0;
    double lambda = 1.0;
    double delta = 0.0;
    double omega_mod = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    TimeUnit unit = TimeUnit::Absolute;

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    bool unmodulated() const { return delta == 0.0 && omega_mod == 0.0; }

    /// Rate that defines one unit of dimensionless time for `unit`.
    double time_scale() const;

    /// One-line key=value rendering with 17 significant digits.
    std::string describe() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Phase (delta/Omega) sin(Omega t); continuous limit delta*t at Omega = 0.
double modulation_phase(const ModelParams& p, double t);

/// d/dt of modulation_phase: delta cos(Omega t).
double modulation_phase_rate(const ModelParams& p, double t);

} // namespace qmod
