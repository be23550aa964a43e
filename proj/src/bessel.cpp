#include "qmod/bessel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "qmod/errors.hpp"

namespace qmod::bessel {

namespace {

constexpr double kSeriesLimit = 12.0;

double series(int n, double x)
{
    // sum_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!)
    const double half = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= n; ++i)
        term *= half / i;
    const double q = -half * half;
    double sum = term;
    double peak = std::abs(term);
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * (k + n));
        sum += term;
        peak = std::max(peak, std::abs(term));
        if (std::abs(term) < 1e-18 * peak)
            break;
    }
    return sum;
}

double miller(int n, double x)
{
    // x > 0. Start well above both n and x so the seed error decays away.
    const double big = std::max<double>(n, x);
    int start = static_cast<int>(big + 30.0 + std::sqrt(60.0 * big));
    start += start % 2;

    double j_next = 0.0;
    double j_cur = 1e-300;
    double result = 0.0;
    double norm = 0.0;
    for (int k = start; k > 0; --k) {
        const double j_prev = 2.0 * k / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if (std::abs(j_cur) > 1e250) {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
        // j_cur now holds J_{k-1}
        if (k - 1 == n)
            result = j_cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0)
            norm += 2.0 * j_cur;
    }
    norm += j_cur; // J_0 + 2 (J_2 + J_4 + ...) = 1
    return result / norm;
}

constexpr std::array<double, 4> kTabulatedZeros = {2.40483, 3.83170, 5.13562, 6.38016};

double bisect(int n, double lo, double hi)
{
    double f_lo = bessel_j(n, lo);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = bessel_j(n, mid);
        if (f_mid == 0.0)
            return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double bessel_j(int n, double x)
{
    if (n < 0)
        throw DomainError("bessel_j: order must be non-negative");
    if (!std::isfinite(x))
        throw DomainError("bessel_j: argument must be finite");

    const double sign = (x < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
    const double ax = std::abs(x);
    if (ax == 0.0)
        return n == 0 ? 1.0 : 0.0;
    const double value = ax <= kSeriesLimit ? series(n, ax) : miller(n, ax);
    return sign * value;
}

double first_zero(int n)
{
    if (n < 0)
        throw DomainError("first_zero: order must be non-negative");
    if (n < static_cast<int>(kTabulatedZeros.size())) {
        const double guess = kTabulatedZeros[static_cast<std::size_t>(n)];
        return bisect(n, guess - 1e-4, guess + 1e-4);
    }
    // J_n > 0 on (0, j_{n,1}); the first zero lies beyond n. Walk in steps
    // shorter than the zero spacing (~pi) until the sign flips.
    double lo = n;
    double hi = n + 5.0;
    while (bessel_j(n, hi) > 0.0) {
        lo = hi;
        hi += 1.0;
    }
    return bisect(n, lo, hi);
}

double jacobi_anger_residual(double ratio, double t, double omega, int n_max)
{
    if (n_max < 1)
        throw DomainError("jacobi_anger_residual: n_max must be >= 1");
    using namespace std::complex_literals;
    const double angle = omega * t;
    const std::complex<double> lhs = std::exp(1i * ratio * std::sin(angle));

    // sin(a) = cos(a - pi/2), so the cosine form of the expansion applies
    // with a shifted angle.
    const double shifted = angle - 0.5 * std::numbers::pi;
    std::complex<double> rhs = bessel_j(0, ratio);
    std::complex<double> i_pow = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        i_pow *= 1i;
        rhs += 2.0 * i_pow * bessel_j(n, ratio) * std::cos(n * shifted);
    }
    return std::abs(lhs - rhs);
}

BesselZeroTable zero_table(int max_order)
{
    BesselZeroTable table;
    for (int n = 0; n <= max_order; ++n)
        table.entries.emplace_back(n, first_zero(n));
    return table;
}

} // namespace qmod::bessel
