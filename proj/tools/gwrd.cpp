#include "gwrd/corpus.hpp"
#include "gwrd/fme.hpp"
#include "gwrd/format.hpp"
#include "gwrd/region.hpp"
#include "gwrd/search.hpp"
#include "gwrd/sim.hpp"
#include "gwrd/source_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

using namespace gwrd;

namespace {

enum ExitCode { kOk = 0, kMismatch = 1, kUsage = 2, kRefused = 3 };

// A file path when one exists, otherwise a builtin name.
SourceSpec load_source(const std::string& arg)
{
    if (std::filesystem::is_regular_file(arg))
        return load_source_spec(arg);
    try {
        return spec_from_builtin(builtin_source(arg));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("'" + arg + "' is neither a readable file nor a builtin source (" + e.what() +
                                    ")");
    }
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw std::runtime_error("cannot write '" + path + "'");
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        parts.push_back(cur);
    if (!s.empty() && s.back() == sep)
        parts.emplace_back();
    return parts;
}

double parse_double(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw std::invalid_argument("bad number '" + s + "' in " + what);
    return v;
}

std::vector<Weights> parse_grid(const std::string& text)
{
    std::vector<Weights> grid;
    for (const auto& triple : split(text, ';')) {
        auto parts = split(triple, ',');
        if (parts.size() != 3)
            throw std::invalid_argument("weights grid entries are w0,w1,w2 triples separated by ';'");
        grid.push_back({parse_double(parts[0], "--weights-grid"), parse_double(parts[1], "--weights-grid"),
                        parse_double(parts[2], "--weights-grid")});
    }
    return grid;
}

// Columns w0,w1,w2 and value (or value_bits), as written by `region`.
std::vector<FrontierClaim> read_frontier(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument(path + ": empty frontier file");
    const auto header = split(line, ',');
    auto col = [&](std::initializer_list<const char*> names) {
        for (const char* n : names)
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == n)
                    return i;
        throw std::invalid_argument(path + ": header lacks column " + *names.begin());
    };
    const std::size_t c0 = col({"w0"}), c1 = col({"w1"}), c2 = col({"w2"}), cv = col({"value", "value_bits"});
    std::vector<FrontierClaim> out;
    for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        const std::string where = path + ":" + std::to_string(lineno);
        if (f.size() != header.size())
            throw std::invalid_argument(where + ": expected " + std::to_string(header.size()) + " fields");
        out.push_back({{parse_double(f[c0], where), parse_double(f[c1], where), parse_double(f[c2], where)},
                       parse_double(f[cv], where)});
    }
    if (out.empty())
        throw std::invalid_argument(path + ": no frontier rows");
    return out;
}

std::string info_report(const SourceSpec& spec)
{
    const ExtensionInfo src(spec.source.pmf());
    const VarSet S1{Role::S1}, S2{Role::S2}, Y1{Role::Y1}, Y2{Role::Y2}, U0{Role::U0}, U1{Role::U1};
    std::ostringstream out;
    auto row = [&](const std::string& name, double v) { out << name << ',' << fmt17(v) << '\n'; };
    out << "quantity,value\n";
    row("H(S1,S2)", src.H(S1 | S2));
    row("H(S2|Y1)", src.H(S2, Y1));
    row("H(S2|Y2)", src.H(S2, Y2));
    row("H(S1,S2|Y1)", src.H(S1 | S2, Y1));
    row("H(S1,S2|Y2)", src.H(S1 | S2, Y2));
    if (spec.aux) {
        const auto ext = extend_with_aux(spec.source, *spec.aux);
        const ExtensionInfo info(ext);
        row("I(U0,U1;S1|S2,Y1)", info.I(U0 | U1, S1, S2 | Y1));
        row("I(U0;S1|S2,Y2)", info.I(U0, S1, S2 | Y2));
        row("I(U1;S1|U0,S2,Y1)", info.I(U1, S1, U0 | S2 | Y1));
        const auto b = theorem1_bounds(info);
        row("bound R0+R1", *b.b_r0_r1);
        row("bound R0+R2", *b.b_r0_r2);
        row("bound R0+R1+R2", *b.b_sum);
        row("D1 (optimal phi)", optimal_phi(ext, spec.distortion_or_hamming()).distortion);
        for (const auto& [name, v] : achievability_constants(info))
            row(name, v);
    }
    return out.str();
}

std::string frontier_csv(const std::vector<FrontierPoint>& pts)
{
    std::ostringstream out;
    out << "w0,w1,w2,value_bits,r0,r1,r2,d1,channel_serialized\n";
    for (const auto& p : pts)
        out << fmt17(p.weights[0]) << ',' << fmt17(p.weights[1]) << ',' << fmt17(p.weights[2]) << ','
            << fmt17(p.value) << ',' << fmt17(p.point.r0) << ',' << fmt17(p.point.r1) << ','
            << fmt17(p.point.r2) << ',' << fmt17(p.point.d1) << ',' << p.channel_id << '\n';
    return out.str();
}

// One row per (target, weight); envelope_bits allows time sharing across targets.
std::string sweep_csv(const std::vector<double>& targets, const std::vector<Weights>& grid,
                      const std::vector<std::vector<double>>& values)
{
    std::vector<std::vector<double>> env;
    for (std::size_t w = 0; w < grid.size(); ++w) {
        std::vector<double> col;
        for (const auto& row : values)
            col.push_back(row[w]);
        env.push_back(lower_convex_envelope(targets, col));
    }
    std::ostringstream out;
    out << "d1_target,w0,w1,w2,value_bits,envelope_bits\n";
    for (std::size_t t = 0; t < targets.size(); ++t)
        for (std::size_t w = 0; w < grid.size(); ++w)
            out << fmt17(targets[t]) << ',' << fmt17(grid[w][0]) << ',' << fmt17(grid[w][1]) << ','
                << fmt17(grid[w][2]) << ',' << fmt17(values[t][w]) << ',' << fmt17(env[w][t]) << '\n';
    return out.str();
}

std::string sim_csv(const SimResult& r)
{
    std::ostringstream out;
    out << "n,trials,seed,r0,r1,r2,p_e,avg_d1,encode_failures,decode1_failures,decode2_failures\n";
    out << r.n << ',' << r.trials << ',' << r.seed << ',' << fmt17(r.r0) << ',' << fmt17(r.r1) << ','
        << fmt17(r.r2) << ',' << fmt17(r.p_e) << ',' << fmt17(r.avg_d1) << ',' << r.encode_failures << ','
        << r.decode1_failures << ',' << r.decode2_failures << '\n';
    return out.str();
}

std::string verify_report(const ClaimReport& r)
{
    std::ostringstream out;
    auto w = [](const Weights& x) { return fmt17(x[0]) + "," + fmt17(x[1]) + "," + fmt17(x[2]); };
    out << "claim " << r.claim << " on " << r.source << " (variant " << variant_name(r.variant) << ", D1 <= "
        << fmt17(r.d_max) << ")\n";
    out << "documented channel D1 " << fmt17(r.documented_d1) << '\n';
    for (const auto& f : r.achievability)
        out << "achievability w=(" << w(f.claim.weights) << ") claimed " << fmt17(f.claim.value) << " computed "
            << fmt17(f.achieved) << ' ' << (f.match ? "MATCH" : "MISMATCH") << '\n';
    for (const auto& f : r.suboptimal)
        out << "u0-constant w=(" << w(f.claim.weights) << ") claimed " << fmt17(f.claim.value) << " computed "
            << fmt17(f.achieved) << ' ' << (f.match ? "MATCH" : "MISMATCH") << '\n';
    for (const auto& e : r.converse.entries)
        out << "converse w=(" << w(e.claim.weights) << ") claimed " << fmt17(e.claim.value) << " best sampled "
            << fmt17(e.best) << ' ' << (e.violated ? "VIOLATED" : "ok") << '\n';
    out << "converse channels " << r.converse.channels << (r.converse.enumerated ? " (with enumeration)" : "")
        << '\n';
    out << "achievability " << (r.achievability_pass() ? "PASS" : "FAIL") << '\n';
    out << "converse probe " << (r.converse_pass() ? "PASS" : "FAIL") << '\n';
    return out.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rate-distortion regions for Gray-Wyner coding with side information"};
    app.require_subcommand(1);
    std::function<int()> run;

    std::string src_arg, out_path;

    auto* info = app.add_subcommand("info", "Entropy and information quantities of a source");
    info->add_option("source", src_arg, "JSON source file or builtin (example1, example2, bs-lossless:<p>)")
        ->required();
    info->callback([&] { run = [&] { emit("", info_report(load_source(src_arg))); return int(kOk); }; });

    std::string variant = "gw", mode = "random", grid_text, sweep_text;
    double d1 = 0.0;
    SearchConfig scfg;
    auto* region = app.add_subcommand("region", "Trace the weighted-sum-rate frontier");
    region->add_option("source", src_arg, "JSON source file or builtin")->required();
    region->add_option("--variant", variant, "gw, sr or sc")->capture_default_str();
    region->add_option("--d1", d1, "Distortion target at receiver 1")->capture_default_str();
    region->add_option("--u0-card", scfg.u0_card, "|U0| (0: |S1||S2|+2)")->capture_default_str();
    region->add_option("--u1-card", scfg.u1_card, "|U1| (0: |S1||S2|+2)")->capture_default_str();
    region->add_option("--mode", mode, "enum, random or local")->capture_default_str();
    region->add_option("--samples", scfg.samples, "Random channels")->capture_default_str();
    region->add_option("--restarts", scfg.restarts, "Local-search restarts")->capture_default_str();
    region->add_option("--steps", scfg.steps, "Local-search steps per restart")->capture_default_str();
    region->add_option("--seed", scfg.seed, "Master seed")->capture_default_str();
    region->add_option("--weights-grid", grid_text, "w0,w1,w2;w0,w1,w2;... (default depends on variant)");
    region->add_option("--d1-sweep", sweep_text,
                       "Increasing targets t1,t2,...: per-target values and their lower convex envelope")
        ->excludes("--d1");
    region->add_option("--out", out_path, "Output CSV (default stdout)");
    region->callback([&] {
        run = [&] {
            const auto spec = load_source(src_arg);
            const Variant v = parse_variant(variant);
            scfg.mode = parse_search_mode(mode);
            std::vector<Weights> grid;
            if (!grid_text.empty())
                grid = parse_grid(grid_text);
            else if (v == Variant::sr)
                grid = {{1, 0, 0}, {1, 1, 0}};
            else if (v == Variant::sc)
                grid = {{1, 0, 0}, {1, 0, 1}};
            else
                grid = {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}};
            SeedChannels seeds;
            if (spec.aux)
                seeds.push_back(*spec.aux);
            if (!sweep_text.empty()) {
                std::vector<double> targets;
                for (const auto& t : split(sweep_text, ','))
                    targets.push_back(parse_double(t, "--d1-sweep"));
                std::vector<std::vector<double>> values;
                bool any = false;
                for (double t : targets) {
                    std::vector<double> row(grid.size(), std::numeric_limits<double>::infinity());
                    try {
                        const auto pts =
                            trace_frontier(spec.source, spec.distortion_or_hamming(), t, grid, v, scfg, seeds);
                        for (std::size_t w = 0; w < grid.size(); ++w)
                            row[w] = pts[w].value;
                        any = true;
                    } catch (const std::runtime_error&) {
                    }
                    values.push_back(std::move(row));
                }
                if (!any)
                    throw std::runtime_error("no feasible channel meets any distortion target");
                emit(out_path, sweep_csv(targets, grid, values));
                return int(kOk);
            }
            const auto pts = trace_frontier(spec.source, spec.distortion_or_hamming(), d1, grid, v, scfg, seeds);
            emit(out_path, frontier_csv(pts));
            return int(kOk);
        };
    });

    std::string builtin, system_path, keep = "R0,R1,R2";
    bool exact_rates = false;
    auto* fme = app.add_subcommand("fme", "Project a linear system by Fourier-Motzkin elimination");
    auto* b_opt = fme->add_option("--builtin", builtin, "Builtin system (achievability)");
    auto* s_opt = fme->add_option("--system", system_path, "JSON system file");
    b_opt->excludes(s_opt);
    fme->add_option("--keep", keep, "Comma-separated variables to keep")->capture_default_str();
    fme->add_option("--out", out_path, "Output JSON (default stdout)");
    fme->add_flag("--exact-rate-relations", exact_rates, "Use equalities for the message rates (builtin only)");
    fme->callback([&] {
        run = [&] {
            LinearSystem sys;
            if (!builtin.empty()) {
                if (builtin != "achievability")
                    throw std::invalid_argument("unknown builtin system '" + builtin + "' (achievability)");
                AchievabilityOptions opts;
                opts.exact_rate_relations = exact_rates;
                sys = build_achievability_system(opts);
            } else if (!system_path.empty()) {
                std::ifstream in(system_path);
                if (!in)
                    throw std::invalid_argument("cannot open '" + system_path + "'");
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(in);
                } catch (const nlohmann::json::parse_error& e) {
                    throw std::invalid_argument(system_path + ": " + e.what());
                }
                sys = system_from_json(j);
            } else {
                throw std::invalid_argument("fme needs --builtin or --system");
            }
            std::set<std::string> kept;
            for (const auto& name : split(keep, ',')) {
                if (std::find(sys.vars.begin(), sys.vars.end(), name) == sys.vars.end())
                    throw std::invalid_argument("unknown variable '" + name + "' in --keep");
                kept.insert(name);
            }
            emit(out_path, system_to_json(canonicalize(project(sys, kept))).dump(2) + "\n");
            return int(kOk);
        };
    });

    SimConfig sim;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo run of the double-binning scheme");
    simulate->add_option("source", src_arg, "JSON source file with aux, or builtin")->required();
    simulate->add_option("--n", sim.n, "Block length")->capture_default_str();
    simulate->add_option("--trials", sim.trials, "Trials")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
    simulate->add_option("--margin", sim.rate_margin, "Rate margin in bits")->capture_default_str();
    simulate->add_option("--typ-delta", sim.typ_delta, "Typicality threshold (total variation)")
        ->capture_default_str();
    simulate->add_option("--budget", sim.memory_budget, "Codebook symbol budget")->capture_default_str();
    simulate->add_flag("--fixed-codebook", sim.fixed_codebook, "One codebook for all trials");
    simulate->add_option("--out", out_path, "Output CSV (default stdout)");
    simulate->callback([&] {
        run = [&] {
            const auto spec = load_source(src_arg);
            if (!spec.aux)
                throw std::invalid_argument("simulate needs an auxiliary channel (\"aux\" in the source file)");
            const auto d = spec.distortion_or_hamming();
            const auto phi = optimal_phi(extend_with_aux(spec.source, *spec.aux), d).rule;
            emit(out_path, sim_csv(run_trials(spec.source, *spec.aux, phi, d, sim)));
            return int(kOk);
        };
    });

    std::string claim, frontier_path;
    SearchConfig vcfg;
    vcfg.samples = 10000;
    vcfg.seed = 7;
    auto* verify = app.add_subcommand("verify", "Check a documented frontier and probe for counterexamples");
    verify->add_option("--claim", claim, "claim1 or claim2")->required();
    verify->add_option("--samples", vcfg.samples, "Sampled channels for the converse probe")->capture_default_str();
    verify->add_option("--seed", vcfg.seed, "Master seed")->capture_default_str();
    verify->add_option("--u0-card", vcfg.u0_card, "|U0| (0: |S1||S2|+2)")->capture_default_str();
    verify->add_option("--u1-card", vcfg.u1_card, "|U1| (0: |S1||S2|+2)")->capture_default_str();
    verify->add_option("--frontier", frontier_path, "CSV frontier to check instead of the documented one");
    verify->callback([&] {
        run = [&] {
            const auto report = frontier_path.empty() ? verify_claim(claim, vcfg)
                                                      : verify_claim(claim, vcfg, read_frontier(frontier_path));
            emit("", verify_report(report));
            return int(report.pass() ? kOk : kMismatch);
        };
    });

    std::string export_name;
    auto* exp = app.add_subcommand("export", "Write a builtin source as a JSON source file");
    exp->add_option("name", export_name, "example1, example2 or bs-lossless:<p>")->required();
    exp->add_option("--out", out_path, "Output JSON (default stdout)");
    exp->callback([&] {
        run = [&] {
            emit(out_path, source_spec_to_json(spec_from_builtin(builtin_source(export_name))).dump(2) + "\n");
            return int(kOk);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        return run();
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRefused;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRefused;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}
