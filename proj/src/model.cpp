#include "qmod/model.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "qmod/errors.hpp"

namespace qmod {

std::string_view to_string(TimeUnit unit)
{
    switch (unit) {
    case TimeUnit::Gamma: return "gamma";
    case TimeUnit::Lambda: return "lambda";
    case TimeUnit::Absolute: return "absolute";
    }
    return "absolute";
}

TimeUnit parse_time_unit(std::string_view text)
{
    if (text == "gamma") return TimeUnit::Gamma;
    if (text == "lambda") return TimeUnit::Lambda;
    if (text == "absolute") return TimeUnit::Absolute;
    throw ValidationError("units", "expected gamma, lambda or absolute, got '" + std::string(text) + "'");
}

void ModelParams::validate() const
{
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(gamma) || gamma <= 0.0) throw ValidationError("gamma", "must be > 0");
    if (!finite(lambda) || lambda <= 0.0) throw ValidationError("lambda", "must be > 0");
    if (!finite(delta) || delta < 0.0) throw ValidationError("delta", "must be >= 0");
    if (!finite(omega_mod) || omega_mod < 0.0) throw ValidationError("omega", "must be >= 0");
    if (!finite(theta) || theta < 0.0 || theta > std::numbers::pi)
        throw ValidationError("theta", "must lie in [0, pi]");
    if (!finite(phi) || phi < 0.0 || phi >= 2.0 * std::numbers::pi)
        throw ValidationError("phi", "must lie in [0, 2 pi)");
}

double ModelParams::time_scale() const
{
    switch (unit) {
    case TimeUnit::Gamma: return gamma;
    case TimeUnit::Lambda: return lambda;
    case TimeUnit::Absolute: return 1.0;
    }
    return 1.0;
}

std::string ModelParams::describe() const
{
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "gamma=%.17g lambda=%.17g delta=%.17g omega=%.17g theta=%.17g phi=%.17g units=%s",
                  gamma, lambda, delta, omega_mod, theta, phi, std::string(to_string(unit)).c_str());
    return buf;
}

double modulation_phase(const ModelParams& p, double t)
{
    const double x = p.omega_mod * t;
    // delta * t * sin(x)/x, evaluated without cancellation for small x
    const double sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return p.delta * t * sinc;
}

double modulation_phase_rate(const ModelParams& p, double t)
{
    return p.delta * std::cos(p.omega_mod * t);
}

} // namespace qmod
