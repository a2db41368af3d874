#pragma once

#include "gwrd/aux_model.hpp"
#include "gwrd/pmf.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testutil {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng) { return double(rng() >> 11) * 0x1.0p-53; }

inline std::size_t below(Rng& rng, std::size_t n) { return std::size_t(rng() % n); }

// Normalized weights; each entry is zeroed with probability `sparsity`.
inline std::vector<double> random_simplex(Rng& rng, std::size_t n, double sparsity = 0.0)
{
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& x : w) {
        x = uniform(rng) < sparsity ? 0.0 : -std::log(1.0 - uniform(rng));
        sum += x;
    }
    if (sum == 0.0) {
        w[below(rng, n)] = 1.0;
        return w;
    }
    for (auto& x : w)
        x /= sum;
    return w;
}

inline gwrd::JointPmf random_pmf(Rng& rng, const std::vector<gwrd::Role>& roles,
                                 const std::vector<std::size_t>& cards, double sparsity = 0.0)
{
    std::vector<gwrd::FiniteAlphabet> alph;
    std::size_t total = 1;
    for (std::size_t c : cards) {
        alph.push_back(gwrd::FiniteAlphabet::indexed(c));
        total *= c;
    }
    return gwrd::JointPmf(roles, alph, random_simplex(rng, total, sparsity));
}

inline gwrd::JointSourcePmf random_source(Rng& rng, std::size_t n1, std::size_t n2,
                                          std::size_t m1, std::size_t m2, double sparsity = 0.0)
{
    using gwrd::FiniteAlphabet;
    return gwrd::JointSourcePmf(FiniteAlphabet::indexed(n1), FiniteAlphabet::indexed(n2),
                                FiniteAlphabet::indexed(m1), FiniteAlphabet::indexed(m2),
                                random_simplex(rng, n1 * n2 * m1 * m2, sparsity));
}

inline gwrd::AuxChannel random_channel(Rng& rng, std::size_t n1, std::size_t n2, std::size_t k0,
                                       std::size_t k1, double sparsity = 0.0)
{
    std::vector<double> cond;
    for (std::size_t r = 0; r < n1 * n2; ++r) {
        auto row = random_simplex(rng, k0 * k1, sparsity);
        cond.insert(cond.end(), row.begin(), row.end());
    }
    return gwrd::AuxChannel(n1, n2, gwrd::FiniteAlphabet::indexed(k0),
                            gwrd::FiniteAlphabet::indexed(k1), std::move(cond));
}

// Source whose Y2 is a noisy function of Y1 only.
inline gwrd::JointSourcePmf random_degraded_source(Rng& rng, std::size_t n1, std::size_t n2,
                                                   std::size_t m1, std::size_t m2)
{
    auto base = random_simplex(rng, n1 * n2 * m1, 0.2);
    std::vector<double> probs(n1 * n2 * m1 * m2, 0.0);
    std::vector<std::vector<double>> w(m1);
    for (auto& row : w)
        row = random_simplex(rng, m2, 0.3);
    for (std::size_t a = 0; a < n1 * n2; ++a)
        for (std::size_t y1 = 0; y1 < m1; ++y1)
            for (std::size_t y2 = 0; y2 < m2; ++y2)
                probs[(a * m1 + y1) * m2 + y2] = base[a * m1 + y1] * w[y1][y2];
    using gwrd::FiniteAlphabet;
    return gwrd::JointSourcePmf(FiniteAlphabet::indexed(n1), FiniteAlphabet::indexed(n2),
                                FiniteAlphabet::indexed(m1), FiniteAlphabet::indexed(m2),
                                std::move(probs));
}

} // namespace testutil
