/*
   Copyright 2026 The opercalc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPERCALC_ODE_HPP
#define OPERCALC_ODE_HPP

#include <vector>

#include "matrix.hpp"

namespace opercalc {

/// Formal fundamental solution of s' + A s = 0 at z0: returns the m x m
/// series matrix Psi with Psi(z0) = I and Psi' = -A Psi through order N-1.
/// Coefficients follow the recurrence C_{k+1} = -(sum_j A_j C_{k-j})/(k+1).
inline SeriesMatrix series_solve_linear_ode(const RfMatrix& A, const Rational& z0, int N) {
    if (A.rows() != A.cols()) fail(Errc::MalformedInput, "connection matrix must be square");
    if (N < 0) fail(Errc::MalformedInput, "negative truncation order");
    int m = A.rows();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (!A.at(i, j).regular_at(z0))
                fail(Errc::PoleAtBasePoint, "connection entry has a pole at the base point");

    int aorder = std::max(N - 1, 0);
    SeriesMatrix As = expand_at(A, z0, aorder);
    std::vector<QMatrix> acoef(static_cast<size_t>(aorder) + 1);
    for (int k = 0; k <= aorder; ++k) acoef[static_cast<size_t>(k)] = series_coefficient(As, k);

    std::vector<QMatrix> c(static_cast<size_t>(N) + 1, QMatrix(m, m));
    c[0] = QMatrix::identity(m);
    for (int k = 0; k + 1 <= N; ++k) {
        QMatrix acc(m, m);
        for (int j = 0; j <= std::min(k, aorder); ++j) acc = acc + acoef[static_cast<size_t>(j)] * c[static_cast<size_t>(k - j)];
        c[static_cast<size_t>(k) + 1] = Rational(-1, static_cast<long long>(k) + 1) * acc;
    }

    SeriesMatrix psi(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            std::vector<Rational> coeffs(static_cast<size_t>(N) + 1);
            for (int k = 0; k <= N; ++k) coeffs[static_cast<size_t>(k)] = c[static_cast<size_t>(k)].at(i, j);
            psi.at(i, j) = TruncatedSeries(z0, N, std::move(coeffs));
        }
    return psi;
}

} // namespace opercalc

#endif
