#pragma once

#include "gwrd/aux_model.hpp"
#include "gwrd/pmf.hpp"
#include "gwrd/region.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gwrd {

enum class SearchMode { deterministic_enum, random_stochastic, local_search };

std::string_view search_mode_name(SearchMode m);
SearchMode parse_search_mode(std::string_view s);

struct SearchConfig {
    // 0 picks |S1||S2| + 2.
    std::size_t u0_card = 0;
    std::size_t u1_card = 0;
    SearchMode mode = SearchMode::random_stochastic;
    std::size_t samples = 1000;
    std::size_t restarts = 4;
    // Perturbation steps per local-search restart.
    std::size_t steps = 200;
    std::uint64_t seed = 1;
    std::uint64_t enum_cutoff = 1000000;
};

// Cardinalities after applying the defaults.
std::size_t effective_u0_card(const JointSourcePmf& source, const SearchConfig& cfg);
std::size_t effective_u1_card(const JointSourcePmf& source, const SearchConfig& cfg);

using Weights = std::array<double, 3>;

struct FrontierPoint {
    Weights weights{};
    double value = 0.0;
    RateDistortionPoint point;
    std::string channel_id;
    std::optional<AuxChannel> channel;
};

// Number of (f0, f1) map pairs, saturating at UINT64_MAX.
std::uint64_t deterministic_channel_count(std::size_t cells, std::size_t u0_card, std::size_t u1_card);

// The index-th pair in lexicographic order: f0 is the more significant half,
// and within a map the cell (s1, s2) = (0, 0) is the most significant digit.
AuxChannel deterministic_channel_at(std::size_t s1_card, std::size_t s2_card, std::size_t u0_card,
                                    std::size_t u1_card, std::uint64_t index);

// Calls f on every deterministic channel in lexicographic order. Throws
// std::length_error when the count exceeds cfg.enum_cutoff.
void enumerate_deterministic_channels(const JointSourcePmf& source, const SearchConfig& cfg,
                                      const std::function<void(const AuxChannel&)>& f);

struct LpSolution {
    double value = std::numeric_limits<double>::infinity();
    std::array<double, 3> rates{};
};

// min w.R over R >= 0 meeting the bounds; R2 = 0 for sr and R1 = 0 for sc.
// Solved by enumerating vertices of at most seven constraints.
LpSolution min_weighted_rates(const RateBounds& b, const Weights& w);

// Channels tried before any sampled ones, e.g. a documented channel.
using SeedChannels = std::vector<AuxChannel>;

FrontierPoint min_weighted_rate(const JointSourcePmf& source, const DistortionMeasure& d,
                                double d_max, const Weights& w, Variant variant,
                                const SearchConfig& cfg, const SeedChannels& seeds = {});

// One point per weight, in grid order. Throws std::runtime_error when no
// searched channel meets d_max.
std::vector<FrontierPoint> trace_frontier(const JointSourcePmf& source, const DistortionMeasure& d,
                                          double d_max, const std::vector<Weights>& grid,
                                          Variant variant, const SearchConfig& cfg,
                                          const SeedChannels& seeds = {});

// Lower convex envelope of the points (x[i], y[i]) evaluated at every x[i].
// x must be strictly increasing; infinite y marks an infeasible target and is
// left out of the hull. Targets left of the first finite point stay infinite.
std::vector<double> lower_convex_envelope(const std::vector<double>& x, const std::vector<double>& y);

struct ClaimedBound {
    Weights weights{};
    double value = 0.0;
};

struct ConverseEntry {
    ClaimedBound claim;
    double best = std::numeric_limits<double>::infinity();
    std::string channel_id;
    bool violated = false;
};

struct ConverseReport {
    std::vector<ConverseEntry> entries;
    std::uint64_t channels = 0;
    bool enumerated = false;
    bool any_violation() const;
};

// Samples cfg.samples random channels plus every deterministic channel when
// their count is within cfg.enum_cutoff. A claim is violated when some
// feasible channel reaches below value - 1e-9.
ConverseReport converse_sample_check(const JointSourcePmf& source, const DistortionMeasure& d,
                                     double d_max, const std::vector<ClaimedBound>& claims,
                                     Variant variant, const SearchConfig& cfg);

// Random channel with the given output cardinalities: Dirichlet(1) rows for
// even stream indices, a random deterministic map for odd ones.
AuxChannel random_channel(std::size_t s1_card, std::size_t s2_card, std::size_t u0_card,
                          std::size_t u1_card, std::uint64_t seed, std::uint64_t index);

} // namespace gwrd
