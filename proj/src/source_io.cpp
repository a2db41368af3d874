#include "gwrd/source_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gwrd {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw std::invalid_argument(where + ": " + what);
}

std::string label_of(const json& v, const std::string& where)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned())
        return v.dump();
    fail(where, "labels must be strings or integers");
}

const json& member(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object())
        fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        fail(where, std::string("missing \"") + key + "\"");
    return *it;
}

FiniteAlphabet alphabet_from(const json& arr, const std::string& where)
{
    if (!arr.is_array() || arr.empty())
        fail(where, "expected a non-empty array of labels");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < arr.size(); ++i)
        labels.push_back(label_of(arr[i], where + "[" + std::to_string(i) + "]"));
    try {
        return FiniteAlphabet(std::move(labels));
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
}

std::size_t index_in(const FiniteAlphabet& a, const json& v, const std::string& where)
{
    const std::string label = label_of(v, where);
    try {
        return a.index_of(label);
    } catch (const std::invalid_argument&) {
        fail(where, "unknown symbol '" + label + "'");
    }
}

double number(const json& v, const std::string& where)
{
    if (!v.is_number())
        fail(where, "expected a number");
    return v.get<double>();
}

json labels_json(const FiniteAlphabet& a) { return json(a.symbols()); }

} // namespace

DistortionMeasure SourceSpec::distortion_or_hamming() const
{
    return distortion ? *distortion : DistortionMeasure::hamming(source.alphabet(Role::S1));
}

SourceSpec source_spec_from_json(const json& j)
{
    const json& alph = member(j, "alphabets", "$");
    const FiniteAlphabet s1 = alphabet_from(member(alph, "S1", "$.alphabets"), "$.alphabets.S1");
    const FiniteAlphabet s2 = alphabet_from(member(alph, "S2", "$.alphabets"), "$.alphabets.S2");
    const FiniteAlphabet y1 = alphabet_from(member(alph, "Y1", "$.alphabets"), "$.alphabets.Y1");
    const FiniteAlphabet y2 = alphabet_from(member(alph, "Y2", "$.alphabets"), "$.alphabets.Y2");

    const json& probs = member(j, "probs", "$");
    if (!probs.is_array())
        fail("$.probs", "expected an array");
    const std::size_t n2 = s2.size(), m1 = y1.size(), m2 = y2.size();
    std::vector<double> table(s1.size() * n2 * m1 * m2, 0.0);
    std::vector<bool> seen(table.size(), false);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const std::string where = "$.probs[" + std::to_string(i) + "]";
        const json& e = probs[i];
        const std::size_t a = index_in(s1, member(e, "s1", where), where + ".s1");
        const std::size_t b = index_in(s2, member(e, "s2", where), where + ".s2");
        const std::size_t c = index_in(y1, member(e, "y1", where), where + ".y1");
        const std::size_t d = index_in(y2, member(e, "y2", where), where + ".y2");
        const std::size_t k = ((a * n2 + b) * m1 + c) * m2 + d;
        if (seen[k])
            fail(where, "atom listed twice");
        seen[k] = true;
        table[k] = number(member(e, "p", where), where + ".p");
    }
    std::optional<JointSourcePmf> source;
    try {
        source.emplace(s1, s2, y1, y2, std::move(table));
    } catch (const std::invalid_argument& e) {
        fail("$.probs", e.what());
    }

    SourceSpec spec{std::move(*source), std::nullopt, std::nullopt};

    if (auto it = j.find("distortion"); it != j.end() && !it->is_null()) {
        const FiniteAlphabet shat = alphabet_from(member(*it, "alphabet", "$.distortion"), "$.distortion.alphabet");
        const json& rows = member(*it, "table", "$.distortion");
        if (!rows.is_object())
            fail("$.distortion.table", "expected an object keyed by S1 labels");
        std::vector<double> d(s1.size() * shat.size(), 0.0);
        std::vector<bool> have(s1.size(), false);
        for (const auto& [key, row] : rows.items()) {
            const std::string where = "$.distortion.table." + key;
            const std::size_t a = index_in(s1, json(key), where);
            if (!row.is_array() || row.size() != shat.size())
                fail(where, "expected " + std::to_string(shat.size()) + " values");
            for (std::size_t c = 0; c < shat.size(); ++c)
                d[a * shat.size() + c] = number(row[c], where + "[" + std::to_string(c) + "]");
            have[a] = true;
        }
        for (std::size_t a = 0; a < s1.size(); ++a)
            if (!have[a])
                fail("$.distortion.table", "no row for S1 symbol '" + s1.label(a) + "'");
        try {
            spec.distortion.emplace(s1.size(), shat, std::move(d));
        } catch (const std::invalid_argument& e) {
            fail("$.distortion", e.what());
        }
    }

    if (auto it = j.find("aux"); it != j.end() && !it->is_null()) {
        const FiniteAlphabet u0 = alphabet_from(member(*it, "u0", "$.aux"), "$.aux.u0");
        const FiniteAlphabet u1 = alphabet_from(member(*it, "u1", "$.aux"), "$.aux.u1");
        const json& rows = member(*it, "table", "$.aux");
        if (!rows.is_array())
            fail("$.aux.table", "expected an array");
        const std::size_t cols = u0.size() * u1.size();
        std::vector<double> cond(s1.size() * n2 * cols, 0.0);
        std::vector<bool> have(cond.size(), false);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string where = "$.aux.table[" + std::to_string(i) + "]";
            const json& e = rows[i];
            const std::size_t a = index_in(s1, member(e, "s1", where), where + ".s1");
            const std::size_t b = index_in(s2, member(e, "s2", where), where + ".s2");
            const std::size_t c = index_in(u0, member(e, "u0", where), where + ".u0");
            const std::size_t d = index_in(u1, member(e, "u1", where), where + ".u1");
            const std::size_t k = (a * n2 + b) * cols + c * u1.size() + d;
            if (have[k])
                fail(where, "entry listed twice");
            have[k] = true;
            cond[k] = number(member(e, "p", where), where + ".p");
        }
        try {
            spec.aux.emplace(s1.size(), n2, u0, u1, std::move(cond));
        } catch (const std::invalid_argument& e) {
            fail("$.aux", e.what());
        }
    }
    return spec;
}

SourceSpec parse_source_spec(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw std::invalid_argument("line " + std::to_string(line) + ", column " + std::to_string(col) +
                                    ": malformed JSON (" + e.what() + ")");
    }
    return source_spec_from_json(j);
}

SourceSpec load_source_spec(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_source_spec(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

json source_spec_to_json(const SourceSpec& spec)
{
    const auto& src = spec.source;
    const auto &s1 = src.alphabet(Role::S1), &s2 = src.alphabet(Role::S2), &y1 = src.alphabet(Role::Y1),
               &y2 = src.alphabet(Role::Y2);
    json j;
    j["alphabets"] = {{"S1", labels_json(s1)}, {"S2", labels_json(s2)}, {"Y1", labels_json(y1)}, {"Y2", labels_json(y2)}};
    json probs = json::array();
    for (const auto& a : src.support())
        probs.push_back({{"s1", s1.label(a.s1)}, {"s2", s2.label(a.s2)}, {"y1", y1.label(a.y1)},
                         {"y2", y2.label(a.y2)}, {"p", a.p}});
    j["probs"] = std::move(probs);

    if (spec.distortion) {
        const auto& d = *spec.distortion;
        json rows = json::object();
        for (std::size_t a = 0; a < s1.size(); ++a) {
            json row = json::array();
            for (std::size_t c = 0; c < d.reconstruction().size(); ++c)
                row.push_back(d(a, c));
            rows[s1.label(a)] = std::move(row);
        }
        j["distortion"] = {{"alphabet", labels_json(d.reconstruction())}, {"table", std::move(rows)}};
    }
    if (spec.aux) {
        const auto& ch = *spec.aux;
        json rows = json::array();
        for (std::size_t a = 0; a < ch.s1_card(); ++a)
            for (std::size_t b = 0; b < ch.s2_card(); ++b)
                for (std::size_t c = 0; c < ch.u0_alphabet().size(); ++c)
                    for (std::size_t d = 0; d < ch.u1_alphabet().size(); ++d)
                        if (double p = ch(a, b, c, d); p > 0.0)
                            rows.push_back({{"s1", s1.label(a)}, {"s2", s2.label(b)},
                                            {"u0", ch.u0_alphabet().label(c)},
                                            {"u1", ch.u1_alphabet().label(d)}, {"p", p}});
        j["aux"] = {{"u0", labels_json(ch.u0_alphabet())}, {"u1", labels_json(ch.u1_alphabet())},
                    {"table", std::move(rows)}};
    }
    return j;
}

SourceSpec spec_from_builtin(const NamedSource& ns)
{
    return SourceSpec{ns.source, DistortionMeasure::hamming(ns.source.alphabet(Role::S1)), ns.documented_channel};
}

} // namespace gwrd
