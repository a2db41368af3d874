#include "gwrd/search.hpp"

#include "gwrd/parallel.hpp"
#include "gwrd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <limits>
#include <stdexcept>

namespace gwrd {

std::string_view search_mode_name(SearchMode m)
{
    switch (m) {
    case SearchMode::deterministic_enum: return "deterministic_enum";
    case SearchMode::random_stochastic: return "random_stochastic";
    case SearchMode::local_search: return "local_search";
    }
    return "?";
}

SearchMode parse_search_mode(std::string_view s)
{
    for (auto m : {SearchMode::deterministic_enum, SearchMode::random_stochastic, SearchMode::local_search})
        if (s == search_mode_name(m))
            return m;
    if (s == "enum" || s == "deterministic")
        return SearchMode::deterministic_enum;
    if (s == "random" || s == "sampled")
        return SearchMode::random_stochastic;
    if (s == "local")
        return SearchMode::local_search;
    throw std::invalid_argument("unknown search mode '" + std::string(s) + "'");
}

std::size_t effective_u0_card(const JointSourcePmf& source, const SearchConfig& cfg)
{
    return cfg.u0_card ? cfg.u0_card : source.card(Role::S1) * source.card(Role::S2) + 2;
}

std::size_t effective_u1_card(const JointSourcePmf& source, const SearchConfig& cfg)
{
    return cfg.u1_card ? cfg.u1_card : source.card(Role::S1) * source.card(Role::S2) + 2;
}

std::uint64_t deterministic_channel_count(std::size_t cells, std::size_t u0_card, std::size_t u1_card)
{
    constexpr std::uint64_t kMax = ~std::uint64_t(0);
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < cells; ++i)
        for (std::uint64_t base : {std::uint64_t(u0_card), std::uint64_t(u1_card)}) {
            if (base == 0)
                return 0;
            if (n > kMax / base)
                return kMax;
            n *= base;
        }
    return n;
}

AuxChannel deterministic_channel_at(std::size_t s1_card, std::size_t s2_card, std::size_t u0_card,
                                    std::size_t u1_card, std::uint64_t index)
{
    const std::size_t cells = s1_card * s2_card;
    std::vector<std::size_t> f0(cells), f1(cells);
    for (std::size_t c = cells; c-- > 0;) {
        f1[c] = std::size_t(index % u1_card);
        index /= u1_card;
    }
    for (std::size_t c = cells; c-- > 0;) {
        f0[c] = std::size_t(index % u0_card);
        index /= u0_card;
    }
    return AuxChannel::deterministic(s1_card, s2_card, FiniteAlphabet::indexed(u0_card),
                                     FiniteAlphabet::indexed(u1_card), f0, f1);
}

void enumerate_deterministic_channels(const JointSourcePmf& source, const SearchConfig& cfg,
                                      const std::function<void(const AuxChannel&)>& f)
{
    const std::size_t n1 = source.card(Role::S1), n2 = source.card(Role::S2);
    const std::size_t k0 = effective_u0_card(source, cfg), k1 = effective_u1_card(source, cfg);
    const std::uint64_t count = deterministic_channel_count(n1 * n2, k0, k1);
    if (count > cfg.enum_cutoff)
        throw std::length_error("deterministic enumeration needs " + std::to_string(count) +
                                " channels, above the cutoff " + std::to_string(cfg.enum_cutoff));
    for (std::uint64_t i = 0; i < count; ++i)
        f(deterministic_channel_at(n1, n2, k0, k1, i));
}

LpSolution min_weighted_rates(const RateBounds& b, const Weights& w)
{
    struct Row {
        std::array<double, 3> a;
        double rhs;
    };
    std::vector<Row> rows{{{1, 0, 0}, 0}, {{0, 1, 0}, 0}, {{0, 0, 1}, 0}};
    if (b.variant == Variant::sr)
        rows.push_back({{0, 0, -1}, 0});
    if (b.variant == Variant::sc)
        rows.push_back({{0, -1, 0}, 0});
    if (b.b_r0)
        rows.push_back({{1, 0, 0}, *b.b_r0});
    if (b.b_r0_r1)
        rows.push_back({{1, 1, 0}, *b.b_r0_r1});
    if (b.b_r0_r2)
        rows.push_back({{1, 0, 1}, *b.b_r0_r2});
    if (b.b_sum)
        rows.push_back({{1, 1, 1}, *b.b_sum});

    auto det3 = [](const std::array<double, 3>& x, const std::array<double, 3>& y,
                   const std::array<double, 3>& z) {
        return x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0]) +
               x[2] * (y[0] * z[1] - y[1] * z[0]);
    };
    LpSolution best;
    const std::size_t m = rows.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                const auto &ri = rows[i], &rj = rows[j], &rk = rows[k];
                double det = det3(ri.a, rj.a, rk.a);
                if (std::abs(det) < 1e-12)
                    continue;
                std::array<double, 3> r{};
                for (std::size_t c = 0; c < 3; ++c) {
                    auto col = [&](const Row& row) {
                        auto a = row.a;
                        a[c] = row.rhs;
                        return a;
                    };
                    r[c] = det3(col(ri), col(rj), col(rk)) / det;
                }
                bool feasible = true;
                for (const auto& row : rows) {
                    double lhs = row.a[0] * r[0] + row.a[1] * r[1] + row.a[2] * r[2];
                    if (lhs < row.rhs - 1e-9 * (1.0 + std::abs(row.rhs))) {
                        feasible = false;
                        break;
                    }
                }
                if (!feasible)
                    continue;
                for (auto& x : r)
                    if (std::abs(x) < 1e-15)
                        x = 0.0;
                double value = w[0] * r[0] + w[1] * r[1] + w[2] * r[2];
                if (value < best.value) {
                    best.value = value;
                    best.rates = r;
                }
            }
    return best;
}

AuxChannel random_channel(std::size_t s1_card, std::size_t s2_card, std::size_t u0_card,
                          std::size_t u1_card, std::uint64_t seed, std::uint64_t index)
{
    Rng rng(stream_seed(seed, index));
    const std::size_t cells = s1_card * s2_card;
    if (index % 2 == 1) {
        std::vector<std::size_t> f0(cells), f1(cells);
        for (std::size_t c = 0; c < cells; ++c) {
            f0[c] = std::size_t(uniform_below(rng, u0_card));
            f1[c] = std::size_t(uniform_below(rng, u1_card));
        }
        return AuxChannel::deterministic(s1_card, s2_card, FiniteAlphabet::indexed(u0_card),
                                         FiniteAlphabet::indexed(u1_card), f0, f1);
    }
    const std::size_t cols = u0_card * u1_card;
    std::vector<double> cond(cells * cols);
    for (std::size_t c = 0; c < cells; ++c) {
        double sum = 0.0;
        for (std::size_t j = 0; j < cols; ++j)
            sum += cond[c * cols + j] = -std::log1p(-uniform01(rng));
        if (sum <= 0.0) {
            cond[c * cols] = sum = 1.0;
        }
        for (std::size_t j = 0; j < cols; ++j)
            cond[c * cols + j] /= sum;
    }
    return AuxChannel(s1_card, s2_card, FiniteAlphabet::indexed(u0_card),
                      FiniteAlphabet::indexed(u1_card), std::move(cond));
}

namespace {

struct Evaluation {
    double d1 = 0.0;
    RateBounds bounds;
};

Evaluation evaluate(const JointSourcePmf& source, const AuxChannel& chan, const DistortionMeasure& d,
                    Variant variant)
{
    const VarSet phi_vars{Role::S1, Role::S2, Role::Y1, Role::U0, Role::U1};
    double d1 = optimal_phi(extension_marginal(source, chan, phi_vars), d).distortion;
    return {d1, bounds_for(variant, ExtensionInfo(source, chan))};
}

bool feasible(double d1, double d_max) { return d1 <= d_max + 1e-12; }

struct Best {
    double value = std::numeric_limits<double>::infinity();
    LpSolution sol;
    double d1 = 0.0;
    std::uint64_t index = 0;
    bool found = false;
};

// Candidates are produced by index; the reduction keeps the first index
// reaching the minimum, so the result does not depend on the thread count.
using Generator = std::function<AuxChannel(std::uint64_t)>;

constexpr std::uint64_t kBlock = 64;

std::vector<Best> reduce(const JointSourcePmf& source, const DistortionMeasure& d, double d_max,
                         const std::vector<Weights>& grid, Variant variant, std::uint64_t count,
                         const Generator& gen)
{
    const std::uint64_t blocks = (count + kBlock - 1) / kBlock;
    std::vector<std::vector<Best>> partial(blocks, std::vector<Best>(grid.size()));
    parallel_for(std::size_t(blocks), [&](std::size_t blk) {
        auto& mine = partial[blk];
        const std::uint64_t end = std::min(count, (blk + 1) * kBlock);
        for (std::uint64_t i = blk * kBlock; i < end; ++i) {
            auto ev = evaluate(source, gen(i), d, variant);
            if (!feasible(ev.d1, d_max))
                continue;
            for (std::size_t w = 0; w < grid.size(); ++w) {
                auto sol = min_weighted_rates(ev.bounds, grid[w]);
                if (!mine[w].found || sol.value < mine[w].value)
                    mine[w] = {sol.value, sol, ev.d1, i, true};
            }
        }
    });
    std::vector<Best> out(grid.size());
    for (const auto& blk : partial)
        for (std::size_t w = 0; w < grid.size(); ++w)
            if (blk[w].found && (!out[w].found || blk[w].value < out[w].value))
                out[w] = blk[w];
    return out;
}

// Lexicographic on (distortion excess, value).
bool improves(double d1, double value, double best_d1, double best_value, double d_max)
{
    double ex = std::max(0.0, d1 - d_max), best_ex = std::max(0.0, best_d1 - d_max);
    if (!feasible(d1, d_max) || !feasible(best_d1, d_max)) {
        if (ex != best_ex)
            return ex < best_ex;
    }
    return value < best_value;
}

AuxChannel perturb(const AuxChannel& chan, Rng& rng)
{
    const std::size_t cells = chan.rows(), cols = chan.cols();
    std::vector<double> cond = chan.table();
    const std::size_t c = std::size_t(uniform_below(rng, cells));
    double* row = cond.data() + c * cols;
    if (uniform01(rng) < 0.5) {
        std::fill(row, row + cols, 0.0);
        row[uniform_below(rng, cols)] = 1.0;
    } else {
        const double eps = 1.0 - uniform01(rng);
        std::vector<double> dir(cols);
        double sum = 0.0;
        for (auto& x : dir)
            sum += x = -std::log1p(-uniform01(rng));
        double total = 0.0;
        for (std::size_t j = 0; j < cols; ++j)
            total += row[j] = (1.0 - eps) * row[j] + eps * dir[j] / sum;
        for (std::size_t j = 0; j < cols; ++j)
            row[j] /= total;
    }
    return AuxChannel(chan.s1_card(), chan.s2_card(), chan.u0_alphabet(), chan.u1_alphabet(),
                      std::move(cond));
}

AuxChannel local_search(const JointSourcePmf& source, const DistortionMeasure& d, double d_max,
                        const Weights& w, Variant variant, const SearchConfig& cfg,
                        std::size_t k0, std::size_t k1, std::uint64_t stream)
{
    const std::uint64_t seed = stream_seed(cfg.seed, stream);
    AuxChannel cur = random_channel(source.card(Role::S1), source.card(Role::S2), k0, k1, seed, 0);
    auto ev = evaluate(source, cur, d, variant);
    double cur_d1 = ev.d1, cur_value = min_weighted_rates(ev.bounds, w).value;
    Rng rng(seed);
    for (std::size_t s = 0; s < cfg.steps; ++s) {
        AuxChannel next = perturb(cur, rng);
        auto e = evaluate(source, next, d, variant);
        double v = min_weighted_rates(e.bounds, w).value;
        if (improves(e.d1, v, cur_d1, cur_value, d_max)) {
            cur = std::move(next);
            cur_d1 = e.d1;
            cur_value = v;
        }
    }
    return cur;
}

std::vector<FrontierPoint> to_frontier(const std::vector<Best>& best, const std::vector<Weights>& grid,
                                       const Generator& gen)
{
    std::vector<FrontierPoint> out;
    for (std::size_t w = 0; w < grid.size(); ++w) {
        if (!best[w].found)
            throw std::runtime_error("no feasible channel meets the distortion target");
        const auto& b = best[w];
        FrontierPoint fp;
        fp.weights = grid[w];
        fp.point = {b.sol.rates[0], b.sol.rates[1], b.sol.rates[2], b.d1};
        fp.value = grid[w][0] * fp.point.r0 + grid[w][1] * fp.point.r1 + grid[w][2] * fp.point.r2;
        fp.channel = gen(b.index);
        fp.channel_id = fp.channel->serialize();
        out.push_back(std::move(fp));
    }
    return out;
}

void check_weights(const std::vector<Weights>& grid)
{
    if (grid.empty())
        throw std::invalid_argument("weight grid is empty");
    for (const auto& w : grid) {
        if (!(w[0] >= 0 && w[1] >= 0 && w[2] >= 0) || w[0] + w[1] + w[2] <= 0)
            throw std::invalid_argument("weights must be nonnegative and not all zero");
    }
}

} // namespace

std::vector<FrontierPoint> trace_frontier(const JointSourcePmf& source, const DistortionMeasure& d,
                                          double d_max, const std::vector<Weights>& grid,
                                          Variant variant, const SearchConfig& cfg,
                                          const SeedChannels& seeds)
{
    check_weights(grid);
    const std::size_t n1 = source.card(Role::S1), n2 = source.card(Role::S2);
    const std::size_t k0 = effective_u0_card(source, cfg), k1 = effective_u1_card(source, cfg);
    for (const auto& s : seeds)
        if (s.s1_card() != n1 || s.s2_card() != n2)
            throw std::invalid_argument("seed channel shape does not match the source");
    const std::uint64_t ns = seeds.size();

    Generator gen;
    std::uint64_t count = 0;
    switch (cfg.mode) {
    case SearchMode::deterministic_enum: {
        const std::uint64_t total = deterministic_channel_count(n1 * n2, k0, k1);
        if (total > cfg.enum_cutoff)
            throw std::length_error("deterministic enumeration needs " + std::to_string(total) +
                                    " channels, above the cutoff " + std::to_string(cfg.enum_cutoff));
        count = ns + total;
        gen = [&, ns](std::uint64_t i) {
            return i < ns ? seeds[i] : deterministic_channel_at(n1, n2, k0, k1, i - ns);
        };
        break;
    }
    case SearchMode::random_stochastic: {
        count = ns + 1 + cfg.samples;
        gen = [&, ns](std::uint64_t i) {
            if (i < ns)
                return seeds[i];
            if (i == ns)
                return AuxChannel::constant(n1, n2);
            return random_channel(n1, n2, k0, k1, cfg.seed, i - ns - 1);
        };
        break;
    }
    case SearchMode::local_search: {
        const std::size_t runs = grid.size() * cfg.restarts;
        auto finals = std::make_shared<std::vector<std::optional<AuxChannel>>>(runs);
        parallel_for(runs, [&](std::size_t r) {
            (*finals)[r] = local_search(source, d, d_max, grid[r / cfg.restarts], variant, cfg, k0, k1, r);
        });
        count = ns + 1 + runs;
        gen = [&, ns, finals](std::uint64_t i) {
            if (i < ns)
                return seeds[i];
            if (i == ns)
                return AuxChannel::constant(n1, n2);
            return *(*finals)[i - ns - 1];
        };
        break;
    }
    }
    return to_frontier(reduce(source, d, d_max, grid, variant, count, gen), grid, gen);
}

std::vector<double> lower_convex_envelope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("envelope needs one value per target");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("envelope targets must be strictly increasing");
    std::vector<std::size_t> hull;
    auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        return (x[a] - x[o]) * (y[b] - y[o]) - (y[a] - y[o]) * (x[b] - x[o]);
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(y[i]))
            continue;
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0)
            hull.pop_back();
        hull.push_back(i);
    }
    std::vector<double> out(x.size(), std::numeric_limits<double>::infinity());
    if (hull.empty())
        return out;
    std::size_t seg = 0;
    for (std::size_t i = hull.front(); i < x.size(); ++i) {
        while (seg + 1 < hull.size() && hull[seg + 1] <= i)
            ++seg;
        if (seg + 1 == hull.size()) {
            // right of the last hull point the best value is carried forward
            out[i] = y[hull[seg]];
            continue;
        }
        const std::size_t a = hull[seg], b = hull[seg + 1];
        const double t = (x[i] - x[a]) / (x[b] - x[a]);
        out[i] = i == a ? y[a] : (1.0 - t) * y[a] + t * y[b];
    }
    return out;
}

FrontierPoint min_weighted_rate(const JointSourcePmf& source, const DistortionMeasure& d,
                                double d_max, const Weights& w, Variant variant,
                                const SearchConfig& cfg, const SeedChannels& seeds)
{
    return trace_frontier(source, d, d_max, {w}, variant, cfg, seeds).front();
}

bool ConverseReport::any_violation() const
{
    return std::any_of(entries.begin(), entries.end(), [](const ConverseEntry& e) { return e.violated; });
}

ConverseReport converse_sample_check(const JointSourcePmf& source, const DistortionMeasure& d,
                                     double d_max, const std::vector<ClaimedBound>& claims,
                                     Variant variant, const SearchConfig& cfg)
{
    std::vector<Weights> grid;
    for (const auto& c : claims)
        grid.push_back(c.weights);
    check_weights(grid);
    const std::size_t n1 = source.card(Role::S1), n2 = source.card(Role::S2);
    const std::size_t k0 = effective_u0_card(source, cfg), k1 = effective_u1_card(source, cfg);
    const std::uint64_t total = deterministic_channel_count(n1 * n2, k0, k1);
    const bool enumerate = total <= cfg.enum_cutoff;
    const std::uint64_t ns = cfg.samples;

    Generator gen = [&, ns](std::uint64_t i) {
        return i < ns ? random_channel(n1, n2, k0, k1, cfg.seed, i)
                      : deterministic_channel_at(n1, n2, k0, k1, i - ns);
    };
    const std::uint64_t count = ns + (enumerate ? total : 0);
    auto best = reduce(source, d, d_max, grid, variant, count, gen);

    ConverseReport rep;
    rep.channels = count;
    rep.enumerated = enumerate;
    for (std::size_t w = 0; w < claims.size(); ++w) {
        ConverseEntry e;
        e.claim = claims[w];
        if (best[w].found) {
            e.best = best[w].value;
            e.channel_id = gen(best[w].index).serialize();
            e.violated = e.best < claims[w].value - 1e-9;
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

} // namespace gwrd
