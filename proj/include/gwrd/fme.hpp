#pragma once

#include <gmpxx.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace gwrd {

using Rational = mpq_class;
using ConstValues = std::map<std::string, Rational>;

// "p/q" (always with a denominator).
std::string rational_to_string(const Rational& q);
// Accepts "p/q", "p" and JSON integers.
Rational parse_rational(const std::string& s);
Rational rational_from_double(double x);

// constant + sum of coefficient * named constant; no zero coefficients stored.
class SymbolicAffine {
public:
    SymbolicAffine() = default;
    explicit SymbolicAffine(Rational c) : constant_(std::move(c)) {}
    static SymbolicAffine term(const std::string& name, const Rational& coef = 1);

    const Rational& constant() const { return constant_; }
    const std::map<std::string, Rational>& terms() const { return terms_; }
    bool is_constant() const { return terms_.empty(); }

    SymbolicAffine& operator+=(const SymbolicAffine& o);
    SymbolicAffine& operator-=(const SymbolicAffine& o);
    SymbolicAffine& operator*=(const Rational& f);
    friend SymbolicAffine operator+(SymbolicAffine a, const SymbolicAffine& b) { return a += b; }
    friend SymbolicAffine operator-(SymbolicAffine a, const SymbolicAffine& b) { return a -= b; }
    friend SymbolicAffine operator*(SymbolicAffine a, const Rational& f) { return a *= f; }
    bool operator==(const SymbolicAffine& o) const;

    // Throws std::invalid_argument naming the first missing constant.
    Rational evaluate(const ConstValues& values) const;

    // Sign facts that hold for every assignment with the listed constants >= 0.
    bool provably_nonneg(const std::set<std::string>& nonneg) const;
    bool provably_nonpos(const std::set<std::string>& nonneg) const;

    std::string to_string() const;

private:
    Rational constant_ = 0;
    std::map<std::string, Rational> terms_;
};

using CoeffMap = std::map<std::string, Rational>;

// sum coeffs[v] * v >= rhs (or = rhs when held as an equality).
struct LinearInequality {
    CoeffMap coeffs;
    SymbolicAffine rhs;

    bool operator==(const LinearInequality& o) const { return coeffs == o.coeffs && rhs == o.rhs; }
    std::string to_string(const char* sense = ">=") const;
};

struct LinearSystem {
    std::vector<std::string> vars;
    std::vector<std::string> consts;
    std::set<std::string> assume_nonneg;
    // Further affine expressions in the constants known to be >= 0.
    std::vector<SymbolicAffine> assume_nonneg_exprs;
    std::vector<LinearInequality> rows;
    std::vector<LinearInequality> equalities;

    // Throws when a row names an undeclared variable or constant.
    void validate() const;
    std::string to_string() const;
};

// Names of the five constants of the achievability system.
inline const std::string kCa = "I(V0;S1S2)";
inline const std::string kCb = "I(U1;S1S2|V0)";
inline const std::string kC1 = "I(V0;Y1)";
inline const std::string kC2 = "I(V0;Y2)";
inline const std::string kCd = "I(U1;Y1|V0)";

struct AchievabilityOptions {
    // Rj = sum of its bin rates instead of Rj >= sum.
    bool exact_rate_relations = false;
    // Declare I(V0;S1S2) - I(V0;Yj) >= 0 and I(U1;S1S2|V0) - I(U1;Y1|V0) >= 0.
    bool markov_assumptions = true;
};

// Variables are declared in elimination order, then R0, R1, R2.
LinearSystem build_achievability_system(const AchievabilityOptions& opts = {});

// One elimination step: substitution through an equality when var occurs in
// one, otherwise Fourier-Motzkin pairing. An absent var is a no-op apart
// from dropping its declaration.
LinearSystem eliminate(const LinearSystem& sys, const std::string& var);

// Positive scaling to coprime integer coefficients, exact duplicates,
// coefficient-wise dominated rows and vacuous rows removed. Row order is kept.
LinearSystem canonicalize(const LinearSystem& sys);

struct ProjectOptions {
    std::vector<std::string> order; // empty: declaration order
    bool chernikov = true;
};

LinearSystem project(const LinearSystem& sys, const std::set<std::string>& keep,
                     const ProjectOptions& opts = {});

LinearSystem instantiate(const LinearSystem& sys, const ConstValues& values);

// Point must assign every declared variable; rows may fall short by tol.
bool satisfies(const LinearSystem& sys, const std::map<std::string, Rational>& point,
               const ConstValues& values = {}, const Rational& tol = 0);

nlohmann::json system_to_json(const LinearSystem& sys);
LinearSystem system_from_json(const nlohmann::json& j);

} // namespace gwrd
