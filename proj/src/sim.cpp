#include "gwrd/sim.hpp"

#include "gwrd/parallel.hpp"
#include "gwrd/region.hpp"
#include "gwrd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gwrd {

void SchemeParams::validate() const
{
    constexpr double tol = 1e-9;
    struct Check {
        bool ok;
        const char* what;
    };
    const Check checks[] = {
        {t0 >= -tol && t1 >= -tol, "codebook rates must be nonnegative"},
        {std::abs(t0 - (t00 + t0p)) <= tol, "t0 = t00 + t0p"},
        {std::abs(t1 - (t10 + t11)) <= tol, "t1 = t10 + t11"},
        {rb00 >= -tol && rb00 <= t00 + tol, "0 <= rb00 <= t00"},
        {rb01 >= -tol && rb01 <= t0p + tol, "0 <= rb01 <= t0p"},
        {rb02 >= -tol && rb02 <= t0p + tol, "0 <= rb02 <= t0p"},
        {rb10 >= -tol && rb10 <= t10 + tol, "0 <= rb10 <= t10"},
        {rb11 >= -tol && rb11 <= t11 + tol, "0 <= rb11 <= t11"},
    };
    for (const auto& c : checks)
        if (!c.ok)
            throw std::invalid_argument(std::string("scheme parameters violate ") + c.what);
}

SchemeParams derive_params(const JointSourcePmf& source, const AuxChannel& chan, const SimConfig& cfg)
{
    const auto c = achievability_constants(ExtensionInfo(source, chan));
    const double m = cfg.rate_margin;
    const double ia = c.at(kCa), ib = c.at(kCb), i1 = c.at(kC1), i2 = c.at(kC2), id = c.at(kCd);
    auto covering = [m](double i, const char* name) {
        if (i <= 0.0)
            return 0.0;
        if (i + m < 0.0)
            throw std::invalid_argument(std::string("covering rate ") + name + " + margin is negative");
        return i + m;
    };
    SchemeParams p;
    p.t0 = covering(ia, "I(V0;S1S2)");
    p.t1 = covering(ib, "I(U1;S1S2|V0)");
    const double p1 = std::max(0.0, i1 - m), p2 = std::max(0.0, i2 - m), pd = std::max(0.0, id - m);
    p.t00 = p.rb00 = std::min(p.t0, std::max(0.0, p.t0 - std::max(p1, p2)));
    p.t0p = p.t0 - p.t00;
    p.rb01 = std::max(0.0, p.t0p - p1);
    p.rb02 = std::max(0.0, p.t0p - p2);
    p.t10 = p.rb10 = 0.0;
    p.t11 = p.t1;
    p.rb11 = std::max(0.0, p.t11 - pd);
    p.validate();
    return p;
}

std::uint64_t codebook_size(std::size_t n, double rate)
{
    const double e = double(n) * std::max(0.0, rate);
    if (e >= 62.0)
        return std::numeric_limits<std::uint64_t>::max();
    const double v = std::exp2(e);
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9)
        return std::max<std::uint64_t>(1, std::uint64_t(r));
    return std::max<std::uint64_t>(1, std::uint64_t(std::ceil(v)));
}

CodebookSizes codebook_sizes(const SchemeParams& p, std::size_t n)
{
    CodebookSizes s;
    s.n00 = codebook_size(n, p.t00);
    s.n0p = codebook_size(n, p.t0p);
    s.n10 = codebook_size(n, p.t10);
    s.n11 = codebook_size(n, p.t11);
    s.b00 = codebook_size(n, p.rb00);
    s.b01 = codebook_size(n, p.rb01);
    s.b02 = codebook_size(n, p.rb02);
    s.b10 = codebook_size(n, p.rb10);
    s.b11 = codebook_size(n, p.rb11);
    return s;
}

void check_budget(const CodebookSizes& s, std::size_t n, std::uint64_t budget)
{
    auto mul = [](std::uint64_t a, std::uint64_t b) {
        return (a && b > std::numeric_limits<std::uint64_t>::max() / a) ? std::numeric_limits<std::uint64_t>::max()
                                                                        : a * b;
    };
    const std::uint64_t n0 = mul(s.n00, s.n0p), n1 = mul(s.n10, s.n11);
    const std::uint64_t words = n0 > std::numeric_limits<std::uint64_t>::max() - n1
                                    ? std::numeric_limits<std::uint64_t>::max()
                                    : n0 + n1;
    const std::uint64_t need = mul(words, n);
    const std::uint64_t index_limit = std::numeric_limits<std::uint32_t>::max();
    if (need > budget || n0 > index_limit || n1 > index_limit)
        throw BudgetError("codebooks need " + std::to_string(need) + " symbols (n=" + std::to_string(n) +
                          ", v0 words " + std::to_string(n0) + ", u1 words per v0 word " +
                          std::to_string(n1) + "), budget " + std::to_string(budget));
}

SchemeModel::SchemeModel(const JointSourcePmf& source, const AuxChannel& chan)
    : s1_card(source.card(Role::S1)),
      s2_card(source.card(Role::S2)),
      y1_card(source.card(Role::Y1)),
      y2_card(source.card(Role::Y2)),
      u0_card(chan.u0_alphabet().size()),
      u1_card(chan.u1_alphabet().size()),
      v0_card(u0_card * s2_card)
{
    if (chan.s1_card() != s1_card || chan.s2_card() != s2_card)
        throw std::invalid_argument("channel shape does not match the source");
    if (std::max({s1_card, s2_card, y1_card, y2_card, u0_card, u1_card, v0_card}) >
        std::numeric_limits<Symbol>::max())
        throw std::invalid_argument("alphabet too large for the simulator");
    p_s1s2v0.assign(s1_card * s2_card * v0_card, 0.0);
    p_s1s2v0u1.assign(s1_card * s2_card * v0_card * u1_card, 0.0);
    p_v0u1y1.assign(v0_card * u1_card * y1_card, 0.0);
    p_v0y2.assign(v0_card * y2_card, 0.0);
    std::vector<double> p_v0(v0_card, 0.0), p_v0u1(v0_card * u1_card, 0.0);
    double acc = 0.0;
    for (const auto& a : source.support()) {
        atoms.push_back({Symbol(a.s1), Symbol(a.s2), Symbol(a.y1), Symbol(a.y2)});
        acc += a.p;
        atom_cdf.push_back(acc);
        for (std::size_t u0 = 0; u0 < u0_card; ++u0)
            for (std::size_t u1 = 0; u1 < u1_card; ++u1) {
                const double q = a.p * chan(a.s1, a.s2, u0, u1);
                if (q <= 0.0)
                    continue;
                const std::size_t v0 = u0 * s2_card + a.s2;
                p_s1s2v0[(a.s1 * s2_card + a.s2) * v0_card + v0] += q;
                p_s1s2v0u1[((a.s1 * s2_card + a.s2) * v0_card + v0) * u1_card + u1] += q;
                p_v0u1y1[(v0 * u1_card + u1) * y1_card + a.y1] += q;
                p_v0y2[v0 * y2_card + a.y2] += q;
                p_v0[v0] += q;
                p_v0u1[v0 * u1_card + u1] += q;
            }
    }
    acc = 0.0;
    for (double p : p_v0)
        v0_cdf.push_back(acc += p);
    u1_cdf.assign(v0_card, {});
    for (std::size_t v = 0; v < v0_card; ++v) {
        acc = 0.0;
        for (std::size_t u1 = 0; u1 < u1_card; ++u1)
            u1_cdf[v].push_back(acc += p_v0u1[v * u1_card + u1]);
    }
}

namespace {

std::size_t draw(const std::vector<double>& cdf, Rng& rng)
{
    const double total = cdf.back();
    if (total <= 0.0)
        return 0;
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t i = std::size_t(it - cdf.begin());
    if (i >= cdf.size())
        i = cdf.size() - 1;
    return i;
}

void fill_bins(std::vector<std::uint32_t>& map, std::vector<std::vector<std::uint32_t>>& inv, std::uint64_t items,
               std::uint64_t bins, std::uint64_t seed)
{
    Rng rng(seed);
    map.resize(items);
    inv.assign(bins, {});
    for (std::uint64_t k = 0; k < items; ++k) {
        map[k] = std::uint32_t(uniform_below(rng, bins));
        inv[map[k]].push_back(std::uint32_t(k));
    }
}

constexpr double kTypTol = 1e-12;

} // namespace

Codebooks::Codebooks(const SchemeModel& model, const SchemeParams& params, std::size_t n, std::uint64_t seed,
                     std::uint64_t budget)
    : model_(&model), n_(n), seed_(seed), sizes_(codebook_sizes(params, n))
{
    check_budget(sizes_, n, budget);
    v0_.resize(sizes_.n0() * n);
    Rng rng(stream_seed(seed, 0));
    for (auto& s : v0_)
        s = Symbol(draw(model.v0_cdf, rng));
    fill_bins(w00, bin00, sizes_.n00, sizes_.b00, stream_seed(seed, 1));
    fill_bins(w01, bin01, sizes_.n0p, sizes_.b01, stream_seed(seed, 2));
    fill_bins(w02, bin02, sizes_.n0p, sizes_.b02, stream_seed(seed, 3));
    fill_bins(w10, bin10, sizes_.n10, sizes_.b10, stream_seed(seed, 4));
    fill_bins(w11, bin11, sizes_.n11, sizes_.b11, stream_seed(seed, 5));
}

void Codebooks::u1_word(std::uint64_t k0, std::uint64_t k1, Symbol* out) const
{
    const Symbol* v0 = v0_word(k0);
    if (model_->u1_card == 1) {
        std::fill(out, out + n_, Symbol(0));
        return;
    }
    Rng rng(stream_seed(stream_seed(stream_seed(seed_, 6), k0), k1));
    for (std::size_t i = 0; i < n_; ++i)
        out[i] = Symbol(draw(model_->u1_cdf[v0[i]], rng));
}

double type_distance(const std::vector<double>& ref, const std::vector<std::uint32_t>& letters)
{
    thread_local std::vector<std::uint32_t> counts;
    thread_local std::vector<std::uint32_t> touched;
    if (counts.size() < ref.size())
        counts.assign(ref.size(), 0);
    touched.clear();
    bool outside = false;
    for (auto x : letters) {
        if (ref[x] <= 0.0)
            outside = true;
        if (counts[x]++ == 0)
            touched.push_back(x);
    }
    double dist = 0.0, covered = 0.0;
    const double n = double(letters.size());
    for (auto x : touched) {
        dist += std::abs(counts[x] / n - ref[x]);
        covered += ref[x];
        counts[x] = 0;
    }
    if (outside)
        return 2.0;
    return 0.5 * (dist + std::max(0.0, 1.0 - covered));
}

std::optional<Messages> encode(const std::vector<Symbol>& s1, const std::vector<Symbol>& s2,
                               const Codebooks& books, const SchemeModel& model, double typ_delta)
{
    const std::size_t n = books.n();
    if (s1.size() != n || s2.size() != n)
        throw std::invalid_argument("source block length does not match the codebooks");
    const auto& sz = books.sizes();
    std::vector<std::uint32_t> letters(n);
    std::vector<std::uint32_t> base(n);
    for (std::size_t i = 0; i < n; ++i)
        base[i] = std::uint32_t((s1[i] * model.s2_card + s2[i]) * model.v0_card);

    std::optional<std::uint64_t> k0;
    for (std::uint64_t k = 0; k < sz.n0() && !k0; ++k) {
        const Symbol* v = books.v0_word(k);
        for (std::size_t i = 0; i < n; ++i)
            letters[i] = base[i] + v[i];
        if (type_distance(model.p_s1s2v0, letters) <= typ_delta + kTypTol)
            k0 = k;
    }
    if (!k0)
        return std::nullopt;

    const Symbol* v = books.v0_word(*k0);
    std::vector<Symbol> u1(n);
    std::optional<std::uint64_t> k1;
    for (std::uint64_t k = 0; k < sz.n1() && !k1; ++k) {
        books.u1_word(*k0, k, u1.data());
        for (std::size_t i = 0; i < n; ++i)
            letters[i] = std::uint32_t((base[i] + v[i]) * model.u1_card + u1[i]);
        if (type_distance(model.p_s1s2v0u1, letters) <= typ_delta + kTypTol)
            k1 = k;
    }
    if (!k1)
        return std::nullopt;

    const std::uint64_t k00 = *k0 / sz.n0p, k0p = *k0 % sz.n0p;
    const std::uint64_t k10 = *k1 / sz.n11, k11 = *k1 % sz.n11;
    Messages m;
    m.k0 = *k0;
    m.k1 = *k1;
    m.w00 = books.w00[k00];
    m.w01 = books.w01[k0p];
    m.w02 = books.w02[k0p];
    m.w10 = books.w10[k10];
    m.w11 = books.w11[k11];
    return m;
}

Decoded1 decode1(const Messages& m, const std::vector<Symbol>& y1, const Codebooks& books,
                 const SchemeModel& model, const ReconstructionRule& phi, double typ_delta)
{
    const std::size_t n = books.n();
    if (y1.size() != n)
        throw std::invalid_argument("side information length does not match the codebooks");
    std::vector<std::uint32_t> letters(n);
    std::vector<Symbol> u1(n), best_u1;
    std::uint64_t found = 0, best_k0 = 0;
    for (auto k00 : books.bin00.at(m.w00))
        for (auto k0p : books.bin01.at(m.w01)) {
            const std::uint64_t k0 = books.k0(k00, k0p);
            const Symbol* v = books.v0_word(k0);
            for (auto k10 : books.bin10.at(m.w10))
                for (auto k11 : books.bin11.at(m.w11)) {
                    books.u1_word(k0, books.k1(k10, k11), u1.data());
                    for (std::size_t i = 0; i < n; ++i)
                        letters[i] = std::uint32_t((v[i] * model.u1_card + u1[i]) * model.y1_card + y1[i]);
                    if (type_distance(model.p_v0u1y1, letters) <= typ_delta + kTypTol) {
                        if (found++ == 0) {
                            best_k0 = k0;
                            best_u1 = u1;
                        }
                    }
                }
        }
    Decoded1 out;
    if (found != 1) {
        out.status = found ? DecodeStatus::ambiguous : DecodeStatus::not_found;
        return out;
    }
    out.status = DecodeStatus::ok;
    const Symbol* v = books.v0_word(best_k0);
    out.s2_hat.resize(n);
    out.s1_hat.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t u0 = v[i] / model.s2_card, s2 = v[i] % model.s2_card;
        out.s2_hat[i] = Symbol(s2);
        out.s1_hat[i] = Symbol(phi(y1[i], u0, best_u1[i], s2));
    }
    return out;
}

Decoded2 decode2(const Messages& m, const std::vector<Symbol>& y2, const Codebooks& books,
                 const SchemeModel& model, double typ_delta)
{
    const std::size_t n = books.n();
    if (y2.size() != n)
        throw std::invalid_argument("side information length does not match the codebooks");
    std::vector<std::uint32_t> letters(n);
    std::uint64_t found = 0, best_k0 = 0;
    for (auto k00 : books.bin00.at(m.w00))
        for (auto k0p : books.bin02.at(m.w02)) {
            const std::uint64_t k0 = books.k0(k00, k0p);
            const Symbol* v = books.v0_word(k0);
            for (std::size_t i = 0; i < n; ++i)
                letters[i] = std::uint32_t(v[i] * model.y2_card + y2[i]);
            if (type_distance(model.p_v0y2, letters) <= typ_delta + kTypTol && found++ == 0)
                best_k0 = k0;
        }
    Decoded2 out;
    if (found != 1) {
        out.status = found ? DecodeStatus::ambiguous : DecodeStatus::not_found;
        return out;
    }
    out.status = DecodeStatus::ok;
    const Symbol* v = books.v0_word(best_k0);
    out.s2_hat.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.s2_hat[i] = Symbol(v[i] % model.s2_card);
    return out;
}

namespace {

struct TrialOutcome {
    bool encoded = false;
    DecodeStatus d1 = DecodeStatus::not_found, d2 = DecodeStatus::not_found;
    bool s2_ok1 = false, s2_ok2 = false;
    double distortion = 0.0;
};

constexpr std::uint64_t kFixedBookStream = 0xb00c;

} // namespace

SimResult run_trials(const JointSourcePmf& source, const AuxChannel& chan, const ReconstructionRule& phi,
                     const DistortionMeasure& d, const SimConfig& cfg)
{
    return run_trials(source, chan, phi, d, cfg, derive_params(source, chan, cfg));
}

SimResult run_trials(const JointSourcePmf& source, const AuxChannel& chan, const ReconstructionRule& phi,
                     const DistortionMeasure& d, const SimConfig& cfg, const SchemeParams& params)
{
    if (cfg.n < 1 || cfg.trials < 1 || !(cfg.typ_delta >= 0.0))
        throw std::invalid_argument("simulation needs n >= 1, trials >= 1 and typ_delta >= 0");
    params.validate();
    const SchemeModel model(source, chan);
    if (phi.y1_card() != model.y1_card || phi.u0_card() != model.u0_card || phi.u1_card() != model.u1_card ||
        phi.s2_card() != model.s2_card)
        throw std::invalid_argument("reconstruction rule shape does not match the channel");
    if (d.s1_card() != model.s1_card)
        throw std::invalid_argument("distortion measure shape does not match S1");
    check_budget(codebook_sizes(params, cfg.n), cfg.n, cfg.memory_budget);

    std::optional<Codebooks> fixed;
    if (cfg.fixed_codebook)
        fixed.emplace(model, params, cfg.n, stream_seed(cfg.seed, kFixedBookStream), cfg.memory_budget);

    const std::size_t n = cfg.n;
    std::vector<TrialOutcome> out(cfg.trials);
    parallel_for(cfg.trials, [&](std::size_t t) {
        const std::uint64_t trial_seed = stream_seed(cfg.seed, t);
        Rng rng(stream_seed(trial_seed, 0));
        std::vector<Symbol> s1(n), s2(n), y1(n), y2(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = model.atoms[draw(model.atom_cdf, rng)];
            s1[i] = a.s1;
            s2[i] = a.s2;
            y1[i] = a.y1;
            y2[i] = a.y2;
        }
        std::optional<Codebooks> own;
        if (!fixed)
            own.emplace(model, params, n, stream_seed(trial_seed, 1), cfg.memory_budget);
        const Codebooks& books = fixed ? *fixed : *own;

        auto& o = out[t];
        auto msg = encode(s1, s2, books, model, cfg.typ_delta);
        if (!msg)
            return;
        o.encoded = true;
        auto r1 = decode1(*msg, y1, books, model, phi, cfg.typ_delta);
        auto r2 = decode2(*msg, y2, books, model, cfg.typ_delta);
        o.d1 = r1.status;
        o.d2 = r2.status;
        if (r1.status == DecodeStatus::ok) {
            o.s2_ok1 = r1.s2_hat == s2;
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                sum += d(s1[i], r1.s1_hat[i]);
            o.distortion = sum / double(n);
        }
        if (r2.status == DecodeStatus::ok)
            o.s2_ok2 = r2.s2_hat == s2;
    });

    SimResult r;
    r.n = n;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    r.r0 = params.r0();
    r.r1 = params.r1();
    r.r2 = params.r2();
    std::size_t errors = 0;
    double dist = 0.0;
    for (const auto& o : out) {
        if (!o.encoded) {
            ++r.encode_failures;
            ++errors;
            continue;
        }
        const bool ok1 = o.d1 == DecodeStatus::ok, ok2 = o.d2 == DecodeStatus::ok;
        r.decode1_failures += !ok1;
        r.decode2_failures += !ok2;
        r.decode1_ambiguous += o.d1 == DecodeStatus::ambiguous;
        r.decode2_ambiguous += o.d2 == DecodeStatus::ambiguous;
        if ((ok1 && !o.s2_ok1) || (ok2 && !o.s2_ok2))
            ++r.s2_mismatches;
        if (ok1) {
            ++r.distortion_trials;
            dist += o.distortion;
        }
        if (ok1 && ok2) {
            ++r.both_decoded;
            r.both_s2_correct += o.s2_ok1 && o.s2_ok2;
        }
        if (!(ok1 && ok2 && o.s2_ok1 && o.s2_ok2))
            ++errors;
    }
    r.p_e = double(errors) / double(cfg.trials);
    r.avg_d1 = r.distortion_trials ? dist / double(r.distortion_trials) : 0.0;
    return r;
}

} // namespace gwrd
