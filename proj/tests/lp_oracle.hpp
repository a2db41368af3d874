#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace testutil {

// Exact feasibility of { x : A x >= b, x >= lo } by a phase-one simplex with
// Bland's rule. Independent of the elimination code under test.
inline bool lp_feasible(const std::vector<std::vector<mpq_class>>& a, const std::vector<mpq_class>& b,
                        const mpq_class& lo)
{
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    // columns: y (n), surplus (m), artificial (m), rhs
    const std::size_t cols = n + 2 * m + 1;
    std::vector<std::vector<mpq_class>> t(m, std::vector<mpq_class>(cols, 0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        mpq_class rhs = b[i];
        for (std::size_t j = 0; j < n; ++j)
            rhs -= a[i][j] * lo;
        mpq_class sign = rhs < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j)
            t[i][j] = sign * a[i][j];
        t[i][n + i] = -sign;
        t[i][n + m + i] = 1;
        t[i][cols - 1] = sign * rhs;
        basis[i] = n + m + i;
    }
    // reduced costs of sum(artificial)
    std::vector<mpq_class> z(cols, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (j < n + m || j == cols - 1)
                z[j] += t[i][j];
    for (;;) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < n + 2 * m; ++j)
            if (z[j] > 0) {
                enter = j;
                break;
            }
        if (enter == cols)
            break;
        std::size_t leave = m;
        mpq_class best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0)
                continue;
            mpq_class ratio = t[i][cols - 1] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m)
            break; // cannot happen in phase one: objective is bounded below
        mpq_class piv = t[leave][enter];
        for (auto& v : t[leave])
            v /= piv;
        for (std::size_t i = 0; i < m; ++i)
            if (i != leave && t[i][enter] != 0) {
                mpq_class f = t[i][enter];
                for (std::size_t j = 0; j < cols; ++j)
                    t[i][j] -= f * t[leave][j];
            }
        mpq_class f = z[enter];
        for (std::size_t j = 0; j < cols; ++j)
            z[j] -= f * t[leave][j];
        basis[leave] = enter;
    }
    return z[cols - 1] == 0;
}

} // namespace testutil
