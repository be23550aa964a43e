#pragma once

#include <utility>
#include <vector>

namespace qmod::bessel {

/// J_n(x) for integer n >= 0. Ascending series for |x| <= 12, Miller
/// backward recurrence above. Throws DomainError for non-finite x or n < 0.
double bessel_j(int n, double x);

/// First positive zero j_{n,1} of J_n.
/// n <= 3 starts from the tabulated constants; larger n brackets and bisects.
double first_zero(int n);

/// |exp(i r sin(wt)) - [J_0(r) + 2 sum_{n=1}^{n_max} i^n J_n(r) cos(n w t)]|
double jacobi_anger_residual(double ratio, double t, double omega, int n_max);

struct BesselZeroTable {
    /// (order, first positive zero)
    std::vector<std::pair<int, double>> entries;
};

/// Zeros j_{0,1} .. j_{max_order,1}.
BesselZeroTable zero_table(int max_order = 3);

} // namespace qmod::bessel
