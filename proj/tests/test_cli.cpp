#include "doctest.h"

#include "gwrd/corpus.hpp"
#include "gwrd/fme.hpp"
#include "gwrd/search.hpp"
#include "gwrd/source_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

using namespace gwrd;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run gwrd_run(const std::string& args, const std::string& env = "")
{
    const std::string cmd = env + (env.empty() ? "" : " ") + GWRD_CLI_PATH + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0)
        r.out.append(buf, got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("gwrd_cli_" + std::to_string(getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::vector<std::vector<std::string>> csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ','))
            f.push_back(cell);
        rows.push_back(f);
    }
    return rows;
}

const char* kLossyToy = R"({
  "alphabets": {"S1": ["a", "b"], "S2": [0], "Y1": [0], "Y2": [0]},
  "probs": [
    {"s1": "a", "s2": 0, "y1": 0, "y2": 0, "p": 0.5},
    {"s1": "b", "s2": 0, "y1": 0, "y2": 0, "p": 0.5}
  ]
})";

} // namespace

TEST_CASE("cli info")
{
    auto r = gwrd_run("info example1");
    CHECK(r.code == 0);
    CHECK(r.out.find("H(S1,S2|Y1),2\n") != std::string::npos);
    r = gwrd_run("info example2");
    CHECK(r.code == 0);
    CHECK(r.out.find("H(S1,S2|Y1),1\n") != std::string::npos);

    const auto bad = scratch() / "short.json";
    write(bad, R"({"alphabets": {"S1": [0, 1], "S2": [0], "Y1": [0], "Y2": [0]},
"probs": [{"s1": 0, "s2": 0, "y1": 0, "y2": 0, "p": 0.5},
          {"s1": 1, "s2": 0, "y1": 0, "y2": 0, "p": 0.48}]})");
    r = gwrd_run("info " + bad.string());
    CHECK(r.code == 2);
    CHECK(r.out.find("deficit 0.02") != std::string::npos);

    const auto broken = scratch() / "broken.json";
    write(broken, "{\n  \"alphabets\": {\n    \"S1\": [0, 1]\n    \"S2\": [0]\n}");
    r = gwrd_run("info " + broken.string());
    CHECK(r.code == 2);
    CHECK(r.out.find("line 4") != std::string::npos);

    r = gwrd_run("info no-such-source");
    CHECK(r.code == 2);
    r = gwrd_run("");
    CHECK(r.code == 2);
    r = gwrd_run("frobnicate");
    CHECK(r.code == 2);
}

TEST_CASE("cli export round trip")
{
    const auto path = scratch() / "ex1.json";
    auto r = gwrd_run("export example1 --out " + path.string());
    REQUIRE(r.code == 0);
    auto spec = load_source_spec(path.string());
    auto ex = build_example1();
    CHECK(spec.source.pmf().probs().size() == ex.source.pmf().probs().size());
    for (std::size_t i = 0; i < spec.source.pmf().size(); ++i)
        CHECK(spec.source.pmf().probs()[i] == ex.source.pmf().probs()[i]);
    REQUIRE(spec.aux);
    CHECK(spec.aux->table() == ex.documented_channel->table());
    CHECK(gwrd_run("info " + path.string()).out == gwrd_run("info example1").out);
    CHECK(source_spec_to_json(spec) == nlohmann::json::parse(slurp(path)));
}

TEST_CASE("cli region")
{
    auto r = gwrd_run("region example1 --variant sr --samples 50");
    REQUIRE(r.code == 0);
    auto rows = csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"w0", "w1", "w2", "value_bits", "r0", "r1", "r2", "d1",
                                              "channel_serialized"});
    CHECK(rows[1][0] == "1");
    CHECK(rows[1][1] == "0");
    CHECK(std::strtod(rows[1][3].c_str(), nullptr) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rows[2][1] == "1");
    CHECK(std::strtod(rows[2][3].c_str(), nullptr) == doctest::Approx(2.0).epsilon(1e-12));

    r = gwrd_run("region example2 --variant sc --samples 50 --weights-grid 1,0,0");
    REQUIRE(r.code == 0);
    rows = csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::strtod(rows[1][3].c_str(), nullptr) == doctest::Approx(1.0).epsilon(1e-12));

    const auto toy = scratch() / "toy.json";
    write(toy, kLossyToy);
    r = gwrd_run("region " + toy.string() + " --d1 0.1 --u0-card 1 --u1-card 1 --samples 20");
    CHECK(r.code == 2);
    CHECK(r.out.find("no feasible channel") != std::string::npos);
    r = gwrd_run("region " + toy.string() + " --d1 0.5 --u0-card 1 --u1-card 1 --samples 20");
    CHECK(r.code == 0);
    r = gwrd_run("region example1 --variant xx");
    CHECK(r.code == 2);
    r = gwrd_run("region example1 --weights-grid 1,0");
    CHECK(r.code == 2);
}

TEST_CASE("cli region distortion sweep")
{
    auto r = gwrd_run("region example1 --variant sr --samples 200 --u1-card 1 --d1-sweep 0,0.05,0.1,0.2");
    REQUIRE(r.code == 0);
    auto rows = csv(r.out);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == std::vector<std::string>{"d1_target", "w0", "w1", "w2", "value_bits", "envelope_bits"});
    CHECK(rows[1][4] == "1");
    CHECK(rows[2][4] == "2");
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::strtod(rows[i][5].c_str(), nullptr) <= std::strtod(rows[i][4].c_str(), nullptr));

    const auto toy = scratch() / "toy_sweep.json";
    write(toy, kLossyToy);
    r = gwrd_run("region " + toy.string() + " --u0-card 1 --u1-card 1 --samples 5 --weights-grid 1,1,1 --d1-sweep 0.1,0.5");
    REQUIRE(r.code == 0);
    rows = csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][4] == "inf");
    CHECK(rows[1][5] == "inf");
    CHECK(rows[2][4] == rows[2][5]);

    CHECK(gwrd_run("region " + toy.string() + " --u0-card 1 --u1-card 1 --d1-sweep 0,0.1").code == 2);
    CHECK(gwrd_run("region example1 --d1-sweep 0.2,0.1").code == 2);
    CHECK(gwrd_run("region example1 --d1 0 --d1-sweep 0,0.1").code == 2);
}

TEST_CASE("cli region csv round-trips the in-memory frontier")
{
    const auto out = scratch() / "front.csv";
    REQUIRE(gwrd_run("region bs-lossless:0.2 --samples 40 --seed 3 --out " + out.string()).code == 0);
    auto ns = build_bs_lossless(0.2);
    SearchConfig cfg;
    cfg.samples = 40;
    cfg.seed = 3;
    const std::vector<Weights> grid{{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}};
    auto pts = trace_frontier(ns.source, DistortionMeasure::hamming(ns.source.alphabet(Role::S1)), 0.0, grid,
                              Variant::gw, cfg, {*ns.documented_channel});
    auto rows = csv(slurp(out));
    REQUIRE(rows.size() == pts.size() + 1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& f = rows[i + 1];
        CHECK(std::strtod(f[3].c_str(), nullptr) == pts[i].value);
        CHECK(std::strtod(f[4].c_str(), nullptr) == pts[i].point.r0);
        CHECK(std::strtod(f[5].c_str(), nullptr) == pts[i].point.r1);
        CHECK(std::strtod(f[6].c_str(), nullptr) == pts[i].point.r2);
        CHECK(std::strtod(f[7].c_str(), nullptr) == pts[i].point.d1);
        CHECK(f[8] == pts[i].channel_id);
    }
}

TEST_CASE("cli fme")
{
    auto r = gwrd_run("fme --builtin achievability --keep R0,R1,R2");
    REQUIRE(r.code == 0);
    auto sys = system_from_json(nlohmann::json::parse(r.out));
    CHECK(sys.rows.size() >= 3);
    CHECK(sys.rows.size() <= 6);
    bool found = false;
    for (const auto& row : sys.rows) {
        if (row.coeffs.size() != 2 || row.coeffs.count("R0") != 1 || row.coeffs.count("R1") != 1)
            continue;
        if (row.coeffs.at("R0") != 1 || row.coeffs.at("R1") != 1)
            continue;
        const auto& t = row.rhs.terms();
        found = row.rhs.constant() == 0 && t.size() == 4 && t.at(kCa) == 1 && t.at(kCb) == 1 && t.at(kC1) == -1 &&
                t.at(kCd) == -1;
        if (found)
            break;
    }
    CHECK(found);

    auto base = build_achievability_system();
    std::string all;
    for (const auto& v : base.vars)
        all += (all.empty() ? "" : ",") + v;
    r = gwrd_run("fme --builtin achievability --keep " + all);
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out) == system_to_json(canonicalize(base)));

    r = gwrd_run("fme --builtin achievability --keep R0,R7");
    CHECK(r.code == 2);
    CHECK(r.out.find("R7") != std::string::npos);
    CHECK(gwrd_run("fme --builtin nope").code == 2);

    r = gwrd_run("fme --builtin achievability --exact-rate-relations");
    REQUIRE(r.code == 0);
    CHECK(system_from_json(nlohmann::json::parse(r.out)).rows.size() == 8);
}

TEST_CASE("cli fme on a numeric system file")
{
    LinearSystem sys;
    sys.vars = {"x", "y", "z"};
    auto row = [](std::map<std::string, Rational> c, Rational rhs) {
        LinearInequality q;
        for (auto& [k, v] : c)
            q.coeffs[k] = v;
        q.rhs = SymbolicAffine(rhs);
        return q;
    };
    sys.rows = {row({{"x", 1}, {"y", 1}}, 1), row({{"y", -1}, {"z", 1}}, Rational(1, 2)),
                row({{"x", -1}}, -3), row({{"z", -1}, {"y", 2}}, 0), row({{"y", 1}}, 0)};
    const auto in = scratch() / "sys.json";
    const auto out = scratch() / "proj.json";
    write(in, system_to_json(sys).dump());
    REQUIRE(gwrd_run("fme --system " + in.string() + " --keep x,z --out " + out.string()).code == 0);
    const auto got = nlohmann::json::parse(slurp(out));
    CHECK(got == system_to_json(canonicalize(project(sys, {"x", "z"}))));
    // reading the output back and projecting again changes nothing
    const auto again = scratch() / "proj2.json";
    REQUIRE(gwrd_run("fme --system " + out.string() + " --keep x,z --out " + again.string()).code == 0);
    CHECK(nlohmann::json::parse(slurp(again)) == got);
}

TEST_CASE("cli simulate")
{
    const std::string args = "simulate bs-lossless:0.25 --n 8 --trials 60 --seed 2";
    auto a = gwrd_run(args);
    REQUIRE(a.code == 0);
    auto rows = csv(a.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"n", "trials", "seed", "r0", "r1", "r2", "p_e", "avg_d1",
                                              "encode_failures", "decode1_failures", "decode2_failures"});
    CHECK(rows[1][0] == "8");
    CHECK(rows[1][1] == "60");
    CHECK(rows[1][3] == "1.25");
    CHECK(gwrd_run(args).out == a.out);

    auto r = gwrd_run("simulate example2 --n 10 --budget 1000000");
    CHECK(r.code == 3);
    CHECK(r.out.find("codebooks need 59637770 symbols") != std::string::npos);

    const auto toy = scratch() / "noaux.json";
    write(toy, kLossyToy);
    CHECK(gwrd_run("simulate " + toy.string()).code == 2);
}

TEST_CASE("cli verify")
{
    auto r = gwrd_run("verify --claim claim1 --samples 300");
    CHECK(r.code == 0);
    CHECK(r.out.find("achievability PASS") != std::string::npos);
    CHECK(r.out.find("converse probe PASS") != std::string::npos);
    r = gwrd_run("verify --claim claim2 --samples 300");
    CHECK(r.code == 0);

    const auto tampered = scratch() / "tampered.csv";
    write(tampered, "w0,w1,w2,value\n1,0,0,0.9\n1,1,0,2\n");
    r = gwrd_run("verify --claim claim1 --samples 300 --frontier " + tampered.string());
    CHECK(r.code == 1);
    CHECK(r.out.find("MISMATCH") != std::string::npos);
    CHECK(r.out.find("converse probe PASS") != std::string::npos);

    // a region CSV is accepted as a frontier file
    const auto front = scratch() / "ex1front.csv";
    REQUIRE(gwrd_run("region example1 --variant sr --samples 20 --out " + front.string()).code == 0);
    CHECK(gwrd_run("verify --claim claim1 --samples 100 --frontier " + front.string()).code == 0);

    CHECK(gwrd_run("verify --claim claim9").code == 2);
    CHECK(gwrd_run("verify").code == 2);
}

TEST_CASE("cli output does not depend on the worker count")
{
    for (const std::string args : {"info example1", "region example2 --variant sc --samples 60 --mode local --steps 20",
                                   "simulate bs-lossless:0.25 --n 8 --trials 40",
                                   "verify --claim claim2 --samples 200", "fme --builtin achievability"}) {
        CAPTURE(args);
        auto one = gwrd_run(args, "GWRD_THREADS=1");
        auto four = gwrd_run(args, "GWRD_THREADS=4");
        CHECK(one.code == 0);
        CHECK(one.out == four.out);
    }
}
