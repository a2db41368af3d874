#include "gwrd/fme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace gwrd {

std::string rational_to_string(const Rational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& s)
{
    auto bad = [&] { return std::invalid_argument("bad rational '" + s + "'"); };
    std::string t = s;
    if (t.empty())
        throw bad();
    auto slash = t.find('/');
    std::string num = t.substr(0, slash), den = slash == std::string::npos ? "1" : t.substr(slash + 1);
    auto integral = [](const std::string& x) {
        std::size_t i = (!x.empty() && (x[0] == '-' || x[0] == '+')) ? 1 : 0;
        if (i == x.size())
            return false;
        for (; i < x.size(); ++i)
            if (x[i] < '0' || x[i] > '9')
                return false;
        return true;
    };
    if (!integral(num) || !integral(den))
        throw bad();
    mpz_class n(num[0] == '+' ? num.substr(1) : num), d(den[0] == '+' ? den.substr(1) : den);
    if (d == 0)
        throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational rational_from_double(double x)
{
    if (!std::isfinite(x))
        throw std::invalid_argument("non-finite value cannot become a rational");
    return Rational(x);
}

SymbolicAffine SymbolicAffine::term(const std::string& name, const Rational& coef)
{
    SymbolicAffine a;
    if (coef != 0)
        a.terms_[name] = coef;
    return a;
}

SymbolicAffine& SymbolicAffine::operator+=(const SymbolicAffine& o)
{
    constant_ += o.constant_;
    for (const auto& [k, v] : o.terms_) {
        auto& slot = terms_[k];
        slot += v;
        if (slot == 0)
            terms_.erase(k);
    }
    return *this;
}

SymbolicAffine& SymbolicAffine::operator-=(const SymbolicAffine& o)
{
    constant_ -= o.constant_;
    for (const auto& [k, v] : o.terms_) {
        auto& slot = terms_[k];
        slot -= v;
        if (slot == 0)
            terms_.erase(k);
    }
    return *this;
}

SymbolicAffine& SymbolicAffine::operator*=(const Rational& f)
{
    constant_ *= f;
    if (f == 0)
        terms_.clear();
    for (auto& [k, v] : terms_)
        v *= f;
    return *this;
}

bool SymbolicAffine::operator==(const SymbolicAffine& o) const
{
    return constant_ == o.constant_ && terms_ == o.terms_;
}

Rational SymbolicAffine::evaluate(const ConstValues& values) const
{
    Rational out = constant_;
    for (const auto& [k, v] : terms_) {
        auto it = values.find(k);
        if (it == values.end())
            throw std::invalid_argument("no value for constant " + k);
        out += v * it->second;
    }
    return out;
}

bool SymbolicAffine::provably_nonneg(const std::set<std::string>& nonneg) const
{
    if (constant_ < 0)
        return false;
    for (const auto& [k, v] : terms_)
        if (v < 0 || !nonneg.count(k))
            return false;
    return true;
}

bool SymbolicAffine::provably_nonpos(const std::set<std::string>& nonneg) const
{
    if (constant_ > 0)
        return false;
    for (const auto& [k, v] : terms_)
        if (v > 0 || !nonneg.count(k))
            return false;
    return true;
}

namespace {

void append_term(std::string& out, const Rational& c, const std::string& name)
{
    if (out.empty()) {
        if (c < 0)
            out += "-";
    } else {
        out += c < 0 ? " - " : " + ";
    }
    Rational a = abs(c);
    if (a != 1 || name.empty())
        out += a.get_str() + (name.empty() ? "" : "*");
    out += name;
}

} // namespace

std::string SymbolicAffine::to_string() const
{
    std::string out;
    if (constant_ != 0 || terms_.empty())
        append_term(out, constant_, "");
    for (const auto& [k, v] : terms_)
        append_term(out, v, k);
    return out;
}

std::string LinearInequality::to_string(const char* sense) const
{
    std::string lhs;
    for (const auto& [k, v] : coeffs)
        append_term(lhs, v, k);
    if (lhs.empty())
        lhs = "0";
    return lhs + " " + sense + " " + rhs.to_string();
}

void LinearSystem::validate() const
{
    std::set<std::string> v(vars.begin(), vars.end()), c(consts.begin(), consts.end());
    if (v.size() != vars.size())
        throw std::invalid_argument("duplicate variable declaration");
    if (c.size() != consts.size())
        throw std::invalid_argument("duplicate constant declaration");
    for (const auto& name : assume_nonneg)
        if (!c.count(name))
            throw std::invalid_argument("assumption on undeclared constant " + name);
    auto check = [&](const LinearInequality& r) {
        for (const auto& [k, coef] : r.coeffs)
            if (!v.count(k))
                throw std::invalid_argument("undeclared variable " + k);
        for (const auto& [k, coef] : r.rhs.terms())
            if (!c.count(k))
                throw std::invalid_argument("undeclared constant " + k);
    };
    for (const auto& r : rows)
        check(r);
    for (const auto& r : equalities)
        check(r);
    for (const auto& e : assume_nonneg_exprs)
        for (const auto& [k, coef] : e.terms())
            if (!c.count(k))
                throw std::invalid_argument("assumption on undeclared constant " + k);
}

std::string LinearSystem::to_string() const
{
    std::ostringstream os;
    for (const auto& r : equalities)
        os << r.to_string("=") << "\n";
    for (const auto& r : rows)
        os << r.to_string() << "\n";
    return os.str();
}

namespace {

LinearInequality row(std::initializer_list<std::pair<const char*, int>> coeffs, SymbolicAffine rhs)
{
    LinearInequality r;
    for (auto [k, v] : coeffs)
        if (v != 0)
            r.coeffs[k] = v;
    r.rhs = std::move(rhs);
    return r;
}

SymbolicAffine zero() { return SymbolicAffine(); }
SymbolicAffine neg(const std::string& c) { return SymbolicAffine::term(c, -1); }

} // namespace

LinearSystem build_achievability_system(const AchievabilityOptions& opts)
{
    LinearSystem s;
    s.vars = {"T00", "T0p", "T10", "T11", "T0", "T1", "Rt00", "Rt01", "Rt02", "Rt10", "Rt11",
              "R0", "R1", "R2"};
    s.consts = {kCa, kCb, kC1, kC2, kCd};
    s.assume_nonneg = {s.consts.begin(), s.consts.end()};

    s.equalities.push_back(row({{"T0", 1}, {"T00", -1}, {"T0p", -1}}, zero()));
    s.equalities.push_back(row({{"T1", 1}, {"T10", -1}, {"T11", -1}}, zero()));

    const std::pair<const char*, const char*> bins[] = {
        {"Rt00", "T00"}, {"Rt01", "T0p"}, {"Rt02", "T0p"}, {"Rt10", "T10"}, {"Rt11", "T11"}};
    for (auto [r, t] : bins) {
        s.rows.push_back(row({{r, 1}}, zero()));
        s.rows.push_back(row({{t, 1}, {r, -1}}, zero()));
    }
    // covering
    s.rows.push_back(row({{"T0", 1}}, SymbolicAffine::term(kCa)));
    s.rows.push_back(row({{"T1", 1}}, SymbolicAffine::term(kCb)));
    // packing, as -(...) >= -c
    s.rows.push_back(row({{"T00", -1}, {"Rt00", 1}, {"T0p", -1}, {"Rt01", 1}}, neg(kC1)));
    s.rows.push_back(row({{"T00", -1}, {"Rt00", 1}, {"T0p", -1}, {"Rt02", 1}}, neg(kC2)));
    s.rows.push_back(row({{"T10", -1}, {"Rt10", 1}, {"T11", -1}, {"Rt11", 1}}, neg(kCd)));

    auto rel = {row({{"R0", 1}, {"Rt00", -1}, {"Rt10", -1}}, zero()),
                row({{"R1", 1}, {"Rt01", -1}, {"Rt11", -1}}, zero()),
                row({{"R2", 1}, {"Rt02", -1}}, zero())};
    for (const auto& r : rel)
        (opts.exact_rate_relations ? s.equalities : s.rows).push_back(r);
    if (opts.markov_assumptions)
        s.assume_nonneg_exprs = {SymbolicAffine::term(kCa) - SymbolicAffine::term(kC1),
                                 SymbolicAffine::term(kCa) - SymbolicAffine::term(kC2),
                                 SymbolicAffine::term(kCb) - SymbolicAffine::term(kCd)};
    return s;
}

namespace {

// r - f * e, applied to coefficients and right-hand side.
LinearInequality combine(const LinearInequality& r, const LinearInequality& e, const Rational& f)
{
    LinearInequality out = r;
    for (const auto& [k, v] : e.coeffs) {
        auto& slot = out.coeffs[k];
        slot -= f * v;
        if (slot == 0)
            out.coeffs.erase(k);
    }
    out.rhs -= e.rhs * f;
    return out;
}

Rational coeff_of(const LinearInequality& r, const std::string& var)
{
    auto it = r.coeffs.find(var);
    return it == r.coeffs.end() ? Rational(0) : it->second;
}

void drop_var(LinearSystem& s, const std::string& var)
{
    s.vars.erase(std::remove(s.vars.begin(), s.vars.end(), var), s.vars.end());
}

// Row with the set of input rows it was derived from.
struct Tracked {
    LinearInequality ineq;
    std::vector<std::uint64_t> hist;

    std::size_t popcount() const
    {
        std::size_t n = 0;
        for (auto w : hist)
            n += std::size_t(std::popcount(w));
        return n;
    }
};

std::vector<std::uint64_t> unite(const std::vector<std::uint64_t>& a,
                                 const std::vector<std::uint64_t>& b)
{
    std::vector<std::uint64_t> out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] |= a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        out[i] |= b[i];
    return out;
}

void substitute(LinearSystem& s, std::vector<Tracked>* tracked, std::size_t eq_index,
                const std::string& var)
{
    LinearInequality e = s.equalities[eq_index];
    s.equalities.erase(s.equalities.begin() + std::ptrdiff_t(eq_index));
    const Rational a = coeff_of(e, var);
    for (auto& other : s.equalities) {
        Rational c = coeff_of(other, var);
        if (c != 0)
            other = combine(other, e, c / a);
    }
    auto apply = [&](LinearInequality& r) {
        Rational c = coeff_of(r, var);
        if (c != 0)
            r = combine(r, e, c / a);
    };
    if (tracked)
        for (auto& t : *tracked)
            apply(t.ineq);
    else
        for (auto& r : s.rows)
            apply(r);
    drop_var(s, var);
}

std::vector<Tracked> fme_step(const std::vector<Tracked>& rows, const std::string& var)
{
    std::vector<Tracked> out;
    std::vector<const Tracked*> lower, upper;
    for (const auto& t : rows) {
        Rational c = coeff_of(t.ineq, var);
        if (c > 0)
            lower.push_back(&t);
        else if (c < 0)
            upper.push_back(&t);
        else
            out.push_back(t);
    }
    for (const Tracked* l : lower) {
        const Rational cl = coeff_of(l->ineq, var);
        for (const Tracked* u : upper) {
            const Rational cu = -coeff_of(u->ineq, var);
            // cu * l + cl * u cancels var
            LinearInequality r;
            for (const auto& [k, v] : l->ineq.coeffs)
                r.coeffs[k] += cu * v;
            for (const auto& [k, v] : u->ineq.coeffs)
                r.coeffs[k] += cl * v;
            for (auto it = r.coeffs.begin(); it != r.coeffs.end();)
                it = it->second == 0 ? r.coeffs.erase(it) : std::next(it);
            r.rhs = l->ineq.rhs * cu + u->ineq.rhs * cl;
            out.push_back({std::move(r), unite(l->hist, u->hist)});
        }
    }
    return out;
}

void normalize(LinearInequality& r)
{
    for (auto it = r.coeffs.begin(); it != r.coeffs.end();)
        it = it->second == 0 ? r.coeffs.erase(it) : std::next(it);
    if (r.coeffs.empty())
        return;
    mpz_class l = 1, g = 0;
    for (const auto& [k, v] : r.coeffs)
        l = lcm(l, v.get_den());
    for (const auto& [k, v] : r.coeffs)
        g = gcd(g, mpz_class(v.get_num() * (l / v.get_den())));
    Rational f(l, g);
    f.canonicalize();
    for (auto& [k, v] : r.coeffs)
        v *= f;
    r.rhs *= f;
}

// Decides sign facts that hold for every assignment of the constants
// meeting the declared assumptions (named constants >= 0, extra affine
// expressions >= 0). With extra expressions the question is a Farkas
// certificate search, settled by eliminating the multipliers.
class SignOracle {
public:
    SignOracle(const std::set<std::string>& names, const std::vector<SymbolicAffine>& exprs)
        : names_(names), exprs_(exprs)
    {
    }

    bool nonneg(const SymbolicAffine& e) const
    {
        if (e.provably_nonneg(names_))
            return true;
        if (exprs_.empty())
            return false;
        auto key = e.to_string();
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        bool v = certificate(e);
        cache_.emplace(std::move(key), v);
        return v;
    }
    bool nonpos(const SymbolicAffine& e) const { return nonneg(e * Rational(-1)); }

private:
    bool certificate(const SymbolicAffine& e) const;

    const std::set<std::string>& names_;
    const std::vector<SymbolicAffine>& exprs_;
    mutable std::map<std::string, bool> cache_;
};

// Single variable with coefficient 1 and a provably nonnegative bound.
const std::string* nonneg_var(const LinearInequality& r, const SignOracle& sign)
{
    if (r.coeffs.size() == 1 && r.coeffs.begin()->second == 1 && sign.nonneg(r.rhs))
        return &r.coeffs.begin()->first;
    return nullptr;
}

// Pair-sum dominance is quadratic per row; skipped on large intermediate systems.
constexpr std::size_t kPairCheckLimit = 64;

void canonicalize_rows(std::vector<Tracked>& rows, const SignOracle& sign)
{
    for (auto& t : rows)
        normalize(t.ineq);

    std::vector<Tracked> kept;
    for (auto& t : rows) {
        if (t.ineq.coeffs.empty() && sign.nonpos(t.ineq.rhs))
            continue;
        auto dup = std::find_if(kept.begin(), kept.end(),
                                [&](const Tracked& k) { return k.ineq == t.ineq; });
        if (dup != kept.end()) {
            if (t.popcount() < dup->popcount())
                dup->hist = t.hist;
            continue;
        }
        kept.push_back(std::move(t));
    }

    // r is dominated by b (another row, or the sum of two) when r.coeffs -
    // b.coeffs is nonnegative and only touches variables bounded below by
    // zero in other rows, and r.rhs <= b.rhs.
    const std::size_t n = kept.size();
    std::vector<bool> alive(n, true);
    std::map<std::string, int> support;
    std::vector<const std::string*> nn(n);
    for (std::size_t i = 0; i < n; ++i)
        if ((nn[i] = nonneg_var(kept[i].ineq, sign)))
            ++support[*nn[i]];
    auto dominated = [&](std::size_t r, const LinearInequality& b) {
        const auto& a = kept[r].ineq;
        auto sup = [&](const std::string& k) {
            int c = support.count(k) ? support.at(k) : 0;
            if (nn[r] && *nn[r] == k)
                --c;
            return c > 0;
        };
        for (const auto& [k, v] : a.coeffs) {
            Rational d = v - coeff_of(b, k);
            if (d < 0 || (d > 0 && !sup(k)))
                return false;
        }
        for (const auto& [k, v] : b.coeffs)
            if (!a.coeffs.count(k) && (v > 0 || !sup(k)))
                return false;
        return sign.nonpos(a.rhs - b.rhs);
    };
    auto kill = [&](std::size_t r) {
        alive[r] = false;
        if (nn[r] && --support[*nn[r]] == 0)
            support.erase(*nn[r]);
    };
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n && alive[r]; ++s)
            if (s != r && alive[s] && dominated(r, kept[s].ineq))
                kill(r);
    if (std::size_t(std::count(alive.begin(), alive.end(), true)) <= kPairCheckLimit) {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = 0; s < n && alive[r]; ++s)
                for (std::size_t t = s + 1; t < n && alive[r] && alive[s]; ++t) {
                    if (s == r || t == r || !alive[t])
                        continue;
                    LinearInequality sum = kept[s].ineq;
                    for (const auto& [k, v] : kept[t].ineq.coeffs) {
                        auto& slot = sum.coeffs[k];
                        slot += v;
                        if (slot == 0)
                            sum.coeffs.erase(k);
                    }
                    sum.rhs += kept[t].ineq.rhs;
                    if (dominated(r, sum))
                        kill(r);
                }
    }
    rows.clear();
    for (std::size_t i = 0; i < n; ++i)
        if (alive[i])
            rows.push_back(std::move(kept[i]));
}

std::vector<Tracked> track(const std::vector<LinearInequality>& rows)
{
    std::vector<Tracked> out;
    const std::size_t words = (rows.size() + 63) / 64;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Tracked t{rows[i], std::vector<std::uint64_t>(words, 0)};
        t.hist[i / 64] |= std::uint64_t(1) << (i % 64);
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<LinearInequality> untrack(std::vector<Tracked>&& rows)
{
    std::vector<LinearInequality> out;
    out.reserve(rows.size());
    for (auto& t : rows)
        out.push_back(std::move(t.ineq));
    return out;
}

} // namespace

LinearSystem eliminate(const LinearSystem& sys, const std::string& var)
{
    LinearSystem s = sys;
    for (std::size_t i = 0; i < s.equalities.size(); ++i)
        if (coeff_of(s.equalities[i], var) != 0) {
            substitute(s, nullptr, i, var);
            return s;
        }
    s.rows = untrack(fme_step(track(s.rows), var));
    drop_var(s, var);
    return s;
}

LinearSystem canonicalize(const LinearSystem& sys)
{
    LinearSystem s = sys;
    auto rows = track(s.rows);
    canonicalize_rows(rows, SignOracle(s.assume_nonneg, s.assume_nonneg_exprs));
    s.rows = untrack(std::move(rows));
    for (auto& e : s.equalities)
        normalize(e);
    return s;
}

LinearSystem project(const LinearSystem& sys, const std::set<std::string>& keep,
                     const ProjectOptions& opts)
{
    sys.validate();
    for (const auto& k : keep)
        if (std::find(sys.vars.begin(), sys.vars.end(), k) == sys.vars.end())
            throw std::invalid_argument("unknown variable " + k + " in keep set");
    std::vector<std::string> order;
    for (const auto& v : opts.order.empty() ? sys.vars : opts.order) {
        if (std::find(sys.vars.begin(), sys.vars.end(), v) == sys.vars.end())
            throw std::invalid_argument("unknown variable " + v + " in elimination order");
        if (!keep.count(v))
            order.push_back(v);
    }
    for (const auto& v : sys.vars)
        if (!keep.count(v) && std::find(order.begin(), order.end(), v) == order.end())
            order.push_back(v);

    LinearSystem s = sys;
    // Gaussian step: each equality removes its latest-eliminated variable.
    for (;;) {
        std::size_t eq = 0, pos = order.size();
        for (; eq < s.equalities.size() && pos == order.size(); ++eq)
            for (std::size_t p = order.size(); p-- > 0;)
                if (coeff_of(s.equalities[eq], order[p]) != 0) {
                    pos = p;
                    break;
                }
        if (pos == order.size())
            break;
        substitute(s, nullptr, eq - 1, order[pos]);
        order.erase(order.begin() + std::ptrdiff_t(pos));
    }

    const SignOracle sign(s.assume_nonneg, s.assume_nonneg_exprs);
    auto rows = track(s.rows);
    canonicalize_rows(rows, sign);
    std::size_t k = 0;
    for (const auto& var : order) {
        rows = fme_step(rows, var);
        ++k;
        drop_var(s, var);
        if (opts.chernikov)
            rows.erase(std::remove_if(rows.begin(), rows.end(),
                                      [k](const Tracked& t) { return t.popcount() > k + 1; }),
                       rows.end());
        canonicalize_rows(rows, sign);
    }
    s.rows = untrack(std::move(rows));
    for (auto& e : s.equalities)
        normalize(e);
    return s;
}

namespace {

bool SignOracle::certificate(const SymbolicAffine& e) const
{
    // e = slack + sum_g lambda_g * g with slack, lambda >= 0
    std::vector<SymbolicAffine> gens;
    for (const auto& n : names_)
        gens.push_back(SymbolicAffine::term(n));
    gens.insert(gens.end(), exprs_.begin(), exprs_.end());

    LinearSystem f;
    std::set<std::string> names;
    for (const auto& [k, v] : e.terms())
        names.insert(k);
    for (std::size_t g = 0; g < gens.size(); ++g) {
        f.vars.push_back("l" + std::to_string(g));
        for (const auto& [k, v] : gens[g].terms())
            names.insert(k);
    }
    f.vars.push_back("slack");
    for (const auto& v : f.vars) {
        LinearInequality r;
        r.coeffs[v] = 1;
        f.rows.push_back(r);
    }
    for (const auto& k : names) {
        LinearInequality eq;
        for (std::size_t g = 0; g < gens.size(); ++g) {
            auto it = gens[g].terms().find(k);
            if (it != gens[g].terms().end())
                eq.coeffs[f.vars[g]] = it->second;
        }
        auto it = e.terms().find(k);
        eq.rhs = SymbolicAffine(it == e.terms().end() ? Rational(0) : it->second);
        f.equalities.push_back(eq);
    }
    LinearInequality ceq;
    for (std::size_t g = 0; g < gens.size(); ++g)
        if (gens[g].constant() != 0)
            ceq.coeffs[f.vars[g]] = gens[g].constant();
    ceq.coeffs["slack"] = 1;
    ceq.rhs = SymbolicAffine(e.constant());
    f.equalities.push_back(ceq);

    LinearSystem p = project(f, {});
    for (const auto& eq : p.equalities)
        if (eq.rhs.constant() != 0)
            return false;
    return p.rows.empty();
}

} // namespace

LinearSystem instantiate(const LinearSystem& sys, const ConstValues& values)
{
    LinearSystem s = sys;
    for (const auto& c : s.consts)
        if (!values.count(c))
            throw std::invalid_argument("no value for constant " + c);
    auto sub = [&](LinearInequality& r) { r.rhs = SymbolicAffine(r.rhs.evaluate(values)); };
    for (auto& r : s.rows)
        sub(r);
    for (auto& r : s.equalities)
        sub(r);
    s.consts.clear();
    s.assume_nonneg.clear();
    s.assume_nonneg_exprs.clear();
    return s;
}

bool satisfies(const LinearSystem& sys, const std::map<std::string, Rational>& point,
               const ConstValues& values, const Rational& tol)
{
    auto lhs = [&](const LinearInequality& r) {
        Rational v = 0;
        for (const auto& [k, c] : r.coeffs) {
            auto it = point.find(k);
            if (it == point.end())
                throw std::invalid_argument("no value for variable " + k);
            v += c * it->second;
        }
        return v;
    };
    for (const auto& r : sys.rows)
        if (lhs(r) < r.rhs.evaluate(values) - tol)
            return false;
    for (const auto& r : sys.equalities)
        if (abs(lhs(r) - r.rhs.evaluate(values)) > tol)
            return false;
    return true;
}

namespace {

using nlohmann::json;

json affine_to_json(const SymbolicAffine& a)
{
    json terms = json::object();
    for (const auto& [k, v] : a.terms())
        terms[k] = rational_to_string(v);
    return {{"const", rational_to_string(a.constant())}, {"terms", terms}};
}

json row_to_json(const LinearInequality& r)
{
    json coeffs = json::object();
    for (const auto& [k, v] : r.coeffs)
        coeffs[k] = rational_to_string(v);
    return {{"coeffs", coeffs}, {"rhs", affine_to_json(r.rhs)}};
}

Rational rational_from_json(const json& j)
{
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(mpz_class(std::to_string(j.get<long long>())));
    throw std::invalid_argument("rationals must be \"p/q\" strings or integers");
}

SymbolicAffine affine_from_json(const json& j)
{
    SymbolicAffine a;
    if (j.contains("const"))
        a = SymbolicAffine(rational_from_json(j.at("const")));
    if (j.contains("terms"))
        for (const auto& [k, v] : j.at("terms").items())
            a += SymbolicAffine::term(k, rational_from_json(v));
    return a;
}

LinearInequality row_from_json(const json& j)
{
    LinearInequality r;
    if (j.contains("coeffs"))
        for (const auto& [k, v] : j.at("coeffs").items()) {
            Rational q = rational_from_json(v);
            if (q != 0)
                r.coeffs[k] = q;
        }
    if (j.contains("rhs"))
        r.rhs = affine_from_json(j.at("rhs"));
    return r;
}

} // namespace

json system_to_json(const LinearSystem& sys)
{
    json rows = json::array(), eqs = json::array();
    for (const auto& r : sys.rows)
        rows.push_back(row_to_json(r));
    for (const auto& r : sys.equalities)
        eqs.push_back(row_to_json(r));
    json j = {{"vars", sys.vars},
              {"consts", sys.consts},
              {"assume_nonneg", std::vector<std::string>(sys.assume_nonneg.begin(),
                                                          sys.assume_nonneg.end())},
              {"rows", rows}};
    if (!sys.equalities.empty())
        j["equalities"] = eqs;
    if (!sys.assume_nonneg_exprs.empty()) {
        json ex = json::array();
        for (const auto& e : sys.assume_nonneg_exprs)
            ex.push_back(affine_to_json(e));
        j["assume_nonneg_exprs"] = ex;
    }
    return j;
}

LinearSystem system_from_json(const json& j)
{
    LinearSystem s;
    try {
        s.vars = j.at("vars").get<std::vector<std::string>>();
        if (j.contains("consts"))
            s.consts = j.at("consts").get<std::vector<std::string>>();
        if (j.contains("assume_nonneg"))
            for (const auto& c : j.at("assume_nonneg"))
                s.assume_nonneg.insert(c.get<std::string>());
        for (const auto& r : j.at("rows"))
            s.rows.push_back(row_from_json(r));
        if (j.contains("equalities"))
            for (const auto& r : j.at("equalities"))
                s.equalities.push_back(row_from_json(r));
        if (j.contains("assume_nonneg_exprs"))
            for (const auto& e : j.at("assume_nonneg_exprs"))
                s.assume_nonneg_exprs.push_back(affine_from_json(e));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed system: ") + e.what());
    }
    s.validate();
    return s;
}

} // namespace gwrd
