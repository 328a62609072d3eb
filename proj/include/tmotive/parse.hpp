#ifndef TMOTIVE_PARSE_HPP
#define TMOTIVE_PARSE_HPP

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "diffalg.hpp"

namespace tmotive {

/**
 * Recursive descent over
 *   expr   := ['-'] term (('+' | '-') term)*
 *   term   := factor (('*' | '/') factor)*
 *   factor := atom ['^' ['-'] integer]
 *   atom   := integer | name | name '(' integer ',' integer ')' | '(' expr ')'
 * with values supplied by a policy: from_int, atom(name), call(name, i, j),
 * add, sub, mul, div, pow. Integers are reduced mod p.
 */
template <class Policy>
class ExprParser {
  public:
    using Value = typename Policy::Value;

    ExprParser(const Policy& pol, std::string text, int line, int col0)
        : pol_(pol), s_(std::move(text)), line_(line), col0_(col0) {}

    Value parse() {
        Value v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_, col0_ + static_cast<int>(pos_), msg);
    }

  private:
    const Policy& pol_;
    std::string s_;
    std::size_t pos_ = 0;
    int line_, col0_;

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    long long integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        if (pos_ - start > 18) fail("integer too large");
        return std::stoll(s_.substr(start, pos_ - start));
    }

    template <class F>
    Value guarded(F&& f, std::size_t at) {
        try {
            return f();
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            pos_ = at;
            fail(e.what());
        }
    }

    Value expr() {
        bool neg = eat('-');
        Value v = term();
        if (neg) v = pol_.sub(pol_.from_int(0), v);
        while (true) {
            std::size_t at = pos_;
            if (eat('+')) {
                Value w = term();
                v = guarded([&] { return pol_.add(v, w); }, at);
            } else if (eat('-')) {
                Value w = term();
                v = guarded([&] { return pol_.sub(v, w); }, at);
            } else {
                return v;
            }
        }
    }
    Value term() {
        Value v = factor();
        while (true) {
            skip();
            std::size_t at = pos_;
            if (eat('*')) {
                Value w = factor();
                v = guarded([&] { return pol_.mul(v, w); }, at);
            } else if (eat('/')) {
                Value w = factor();
                v = guarded([&] { return pol_.div(v, w); }, at);
            } else {
                return v;
            }
        }
    }
    Value factor() {
        Value v = atom();
        skip();
        std::size_t at = pos_;
        if (eat('^')) {
            bool neg = eat('-');
            long long k = integer();
            v = guarded([&] { return pol_.pow(v, neg ? -k : k); }, at);
        }
        return v;
    }
    Value atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Value v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return pol_.from_int(integer());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            skip();
            if (pos_ < s_.size() && s_[pos_] == '(' && pol_.callable(name)) {
                ++pos_;
                long long i = integer();
                if (!eat(',')) fail("expected ','");
                long long j = integer();
                if (!eat(')')) fail("expected ')'");
                return guarded([&] { return pol_.call(name, i, j); }, start);
            }
            auto v = pol_.atom(name);
            if (!v) {
                pos_ = start;
                fail("unknown name '" + name + "'");
            }
            return *v;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

// Rational functions in one variable; extra names map to fixed values.
struct RatFuncPolicy {
    using Value = RatFunc;
    Field F;
    std::vector<std::pair<std::string, RatFunc>> names;

    RatFunc from_int(long long n) const { return RatFunc::constant(F, F->from_int(n)); }
    std::optional<RatFunc> atom(const std::string& name) const {
        if (name == "g") return RatFunc::constant(F, F->generator());
        for (const auto& [k, v] : names)
            if (k == name) return v;
        return std::nullopt;
    }
    bool callable(const std::string&) const { return false; }
    RatFunc call(const std::string&, long long, long long) const { throw PreconditionViolated("no calls"); }
    RatFunc add(const RatFunc& a, const RatFunc& b) const { return a + b; }
    RatFunc sub(const RatFunc& a, const RatFunc& b) const { return a - b; }
    RatFunc mul(const RatFunc& a, const RatFunc& b) const { return a * b; }
    RatFunc div(const RatFunc& a, const RatFunc& b) const {
        if (b.is_zero()) throw DivisionByZeroWithinPrecision("division by zero");
        return a / b;
    }
    RatFunc pow(const RatFunc& a, long long k) const {
        if (k < 0 && a.is_zero()) throw DivisionByZeroWithinPrecision("zero to a negative power");
        return a.pow(k);
    }
};

// Element of F_q(t) written in t.
inline RatFunc parse_ratfunc_t(const Field& F, const std::string& s, int line = 1, int col = 1) {
    RatFuncPolicy pol{F, {{"t", RatFunc::variable(F)}}};
    return ExprParser<RatFuncPolicy>(pol, s, line, col).parse();
}

// Element of K written in w and theta = w^(q^D).
inline ExactCoef parse_coef(const FieldSpec& spec, const std::string& s, int line = 1, int col = 1) {
    Field F = spec.field();
    RatFuncPolicy pol{F, {{"w", RatFunc::variable(F)}, {"theta", ExactCoef::theta(spec).value()}}};
    return ExactCoef(spec, ExprParser<RatFuncPolicy>(pol, s, line, col).parse());
}

// tau-polynomials over K, e.g. "theta + g*tau^2".
struct TauPolicy {
    using Value = KTau;
    FieldSpec spec;

    KTau scalar(const ExactCoef& c) const { return make_tau_poly(spec, {c}); }
    KTau from_int(long long n) const { return scalar(ExactCoef::constant(spec, spec.field()->from_int(n))); }
    std::optional<KTau> atom(const std::string& name) const {
        if (name == "tau") return make_tau_poly(spec, {ExactCoef::zero(spec), ExactCoef::one(spec)});
        if (name == "g") return scalar(ExactCoef::constant(spec, spec.field()->generator()));
        if (name == "w") return scalar(ExactCoef::w(spec));
        if (name == "theta") return scalar(ExactCoef::theta(spec));
        return std::nullopt;
    }
    bool callable(const std::string&) const { return false; }
    KTau call(const std::string&, long long, long long) const { throw PreconditionViolated("no calls"); }
    KTau add(const KTau& a, const KTau& b) const { return a + b; }
    KTau sub(const KTau& a, const KTau& b) const { return a - b; }
    KTau mul(const KTau& a, const KTau& b) const { return a * b; }
    KTau div(const KTau& a, const KTau& b) const {
        if (b.degree() != 0) throw PreconditionViolated("division by a non-scalar tau-polynomial");
        return a * scalar(b.coeff(0).inverse());
    }
    KTau pow(const KTau& a, long long k) const {
        if (k < 0) {
            if (a.degree() != 0) throw PreconditionViolated("negative power of a non-scalar");
            return scalar(a.coeff(0).pow(k));
        }
        KTau r = from_int(1);
        for (long long i = 0; i < k; ++i) r = r * a;
        return r;
    }
};

inline KTau parse_tau_poly(const FieldSpec& spec, const std::string& s, int line = 1, int col = 1) {
    TauPolicy pol{spec};
    return ExprParser<TauPolicy>(pol, s, line, col).parse();
}

/**
 * Degree one differential polynomials over F_q(t) in variables dLXh(i,j)
 * (Xh(i,j) for L = 0). Products or quotients of two non-constant factors are
 * rejected.
 */
struct LinDiffPolicy {
    using Value = LinDiffPoly;
    Field F;

    static bool constant_only(const LinDiffPoly& a) { return a.terms().empty(); }
    LinDiffPoly from_int(long long n) const {
        LinDiffPoly p(F);
        p.add_constant(RatFunc::constant(F, F->from_int(n)));
        return p;
    }
    LinDiffPoly scalar(const RatFunc& f) const {
        LinDiffPoly p(F);
        p.add_constant(f);
        return p;
    }
    std::optional<LinDiffPoly> atom(const std::string& name) const {
        if (name == "t") return scalar(RatFunc::variable(F));
        if (name == "g") return scalar(RatFunc::constant(F, F->generator()));
        return std::nullopt;
    }
    static std::optional<std::size_t> order_of(const std::string& name) {
        std::size_t x = name.find('X');
        if (x == std::string::npos || x + 1 >= name.size()) return std::nullopt;
        std::string head = name.substr(0, x), tail = name.substr(x + 1);
        auto digits = [](const std::string& s) {
            return !s.empty() && s.size() < 10 &&
                   std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        };
        if (!digits(tail)) return std::nullopt;
        if (head.empty()) return 0;
        if (head[0] != 'd' || !digits(head.substr(1))) return std::nullopt;
        return static_cast<std::size_t>(std::stoul(head.substr(1)));
    }
    bool callable(const std::string& name) const { return order_of(name).has_value(); }
    LinDiffPoly call(const std::string& name, long long i, long long j) const {
        if (i < 1 || j < 1) throw PreconditionViolated("matrix positions start at 1");
        std::size_t h = std::stoul(name.substr(name.find('X') + 1));
        return LinDiffPoly::var(F, {h, static_cast<std::size_t>(i), static_cast<std::size_t>(j), *order_of(name)},
                                RatFunc::constant(F, 1));
    }
    LinDiffPoly add(const LinDiffPoly& a, const LinDiffPoly& b) const { return a + b; }
    LinDiffPoly sub(const LinDiffPoly& a, const LinDiffPoly& b) const { return a - b; }
    LinDiffPoly mul(const LinDiffPoly& a, const LinDiffPoly& b) const {
        if (constant_only(a)) return b.scale(a.constant());
        if (constant_only(b)) return a.scale(b.constant());
        throw PreconditionViolated("only degree one differential polynomials are supported");
    }
    LinDiffPoly div(const LinDiffPoly& a, const LinDiffPoly& b) const {
        if (!constant_only(b)) throw PreconditionViolated("division by a differential variable");
        if (b.constant().is_zero()) throw DivisionByZeroWithinPrecision("division by zero");
        return a.scale(RatFunc::constant(F, 1) / b.constant());
    }
    LinDiffPoly pow(const LinDiffPoly& a, long long k) const {
        if (constant_only(a)) return scalar(a.constant().pow(k));
        if (k == 1) return a;
        throw PreconditionViolated("only degree one differential polynomials are supported");
    }
};

inline LinDiffPoly parse_lin_diff_poly(const Field& F, const std::string& s, int line = 1, int col = 1) {
    LinDiffPolicy pol{F};
    return ExprParser<LinDiffPolicy>(pol, s, line, col).parse();
}

// A (u, alpha) pair; u absent means u = Log(alpha).
struct PairSpec {
    std::optional<RamSeries> u;
    ExactCoef alpha;
};

struct ModuleDef {
    FieldSpec spec;
    DrinfeldModule rho;
    bool auto_periods = false;
    std::vector<RamSeries> periods;
    std::vector<KTau> endos;
    std::vector<PairSpec> pairs;
};

/**
 * Module files hold "key = value" lines; '#' starts a comment. Keys:
 *   p, e, m, D        field data, q = p^e, constants F_{q^m}, w^(q^D) = theta
 *   r                 rank (optional, checked against the kappas)
 *   kappa<i>          coefficient of tau^i, an expression in w, theta, g
 *   periods = auto    periods of theta + tau^r from the Carlitz period of F_{q^r}
 *   period<i>         a period in series text
 *   endo              an endomorphism as a tau-polynomial (repeatable)
 *   alpha             alpha with u = Log(alpha) (repeatable)
 *   pair              <u series text> | <alpha expression> (repeatable)
 */
inline ModuleDef parse_module(std::istream& in) {
    struct Entry {
        std::string key, value;
        int line, col;
    };
    std::vector<Entry> entries;
    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
        std::string s = raw.substr(0, raw.find('#'));
        if (s.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError(line, static_cast<int>(s.find_first_not_of(" \t")) + 1, "expected 'key = value'");
        auto trim = [](const std::string& x, std::size_t& lead) {
            std::size_t a = x.find_first_not_of(" \t\r"), b = x.find_last_not_of(" \t\r");
            lead = a == std::string::npos ? 0 : a;
            return a == std::string::npos ? std::string() : x.substr(a, b - a + 1);
        };
        std::size_t kl = 0, vl = 0;
        std::string key = trim(s.substr(0, eq), kl), value = trim(s.substr(eq + 1), vl);
        if (key.empty()) throw ParseError(line, 1, "missing key");
        if (value.empty()) throw ParseError(line, static_cast<int>(eq) + 2, "missing value for '" + key + "'");
        entries.push_back({key, value, line, static_cast<int>(eq + 1 + vl) + 1});
    }

    ModuleDef def;
    std::optional<long> rank;
    bool have_p = false;
    auto number = [](const Entry& en, long lo, long hi) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(en.value, &used);
        } catch (const std::exception&) {
            throw ParseError(en.line, en.col, "expected an integer for '" + en.key + "'");
        }
        if (used != en.value.size()) throw ParseError(en.line, en.col + static_cast<int>(used), "trailing characters");
        if (v < lo || v > hi) throw ParseError(en.line, en.col, "'" + en.key + "' out of range");
        return v;
    };
    auto indexed = [](const std::string& key, const std::string& prefix) -> std::optional<long> {
        if (key.rfind(prefix, 0) != 0 || key.size() == prefix.size()) return std::nullopt;
        std::string rest = key.substr(prefix.size());
        if (!std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
            rest.size() > 4)
            return std::nullopt;
        return std::stol(rest);
    };

    // Field data first, so later values can be read in the right field.
    for (const auto& en : entries) {
        if (en.key == "p") {
            def.spec.p = static_cast<std::uint32_t>(number(en, 2, 65521));
            for (std::uint32_t d = 2; d * d <= def.spec.p; ++d)
                if (def.spec.p % d == 0) throw ParseError(en.line, en.col, "p must be prime");
            have_p = true;
        } else if (en.key == "e") {
            def.spec.e = static_cast<std::uint32_t>(number(en, 1, 30));
        } else if (en.key == "m") {
            def.spec.m = static_cast<std::uint32_t>(number(en, 1, 30));
        } else if (en.key == "D") {
            def.spec.D = static_cast<std::uint32_t>(number(en, 0, 8));
        } else if (en.key == "r") {
            rank = number(en, 1, 16);
        }
    }
    if (!have_p) throw ParseError(1, 1, "missing 'p'");
    try {
        def.spec.field();
    } catch (const Error& e) {
        throw ParseError(1, 1, std::string("field not supported: ") + e.what());
    }
    const Field F = def.spec.field();

    std::vector<std::optional<ExactCoef>> kappa;
    std::vector<std::optional<RamSeries>> periods;
    auto put = [](auto& vec, long i, auto value, const Entry& en) {
        if (i < 1) throw ParseError(en.line, 1, "indices start at 1");
        if (vec.size() < static_cast<std::size_t>(i)) vec.resize(static_cast<std::size_t>(i));
        if (vec[static_cast<std::size_t>(i - 1)]) throw ParseError(en.line, 1, "duplicate '" + en.key + "'");
        vec[static_cast<std::size_t>(i - 1)] = value;
    };
    auto series = [&](const std::string& text, const Entry& en, int col) {
        try {
            RamSeries s = RamSeries::from_text(F, text);
            return s;
        } catch (const ParseError& pe) {
            throw ParseError(en.line, col + pe.column() - 1, pe.what());
        }
    };
    for (const auto& en : entries) {
        if (en.key == "p" || en.key == "e" || en.key == "m" || en.key == "D" || en.key == "r") continue;
        if (auto i = indexed(en.key, "kappa")) {
            put(kappa, *i, parse_coef(def.spec, en.value, en.line, en.col), en);
        } else if (auto i2 = indexed(en.key, "period")) {
            put(periods, *i2, series(en.value, en, en.col), en);
        } else if (en.key == "periods") {
            if (en.value != "auto") throw ParseError(en.line, en.col, "expected 'auto'");
            def.auto_periods = true;
        } else if (en.key == "endo") {
            def.endos.push_back(parse_tau_poly(def.spec, en.value, en.line, en.col));
        } else if (en.key == "alpha") {
            def.pairs.push_back({std::nullopt, parse_coef(def.spec, en.value, en.line, en.col)});
        } else if (en.key == "pair") {
            std::size_t bar = en.value.find('|');
            if (bar == std::string::npos) throw ParseError(en.line, en.col, "expected '<u> | <alpha>'");
            std::string u = en.value.substr(0, bar);
            u = u.substr(0, u.find_last_not_of(" \t") + 1);
            std::size_t a0 = en.value.find_first_not_of(" \t", bar + 1);
            if (a0 == std::string::npos) throw ParseError(en.line, en.col + static_cast<int>(bar) + 1, "missing alpha");
            def.pairs.push_back({series(u, en, en.col),
                                 parse_coef(def.spec, en.value.substr(a0), en.line, en.col + static_cast<int>(a0))});
        } else {
            throw ParseError(en.line, 1, "unknown key '" + en.key + "'");
        }
    }
    if (kappa.empty()) throw ParseError(1, 1, "no kappa given");
    std::vector<ExactCoef> k;
    for (const auto& c : kappa) k.push_back(c ? *c : ExactCoef::zero(def.spec));
    if (k.back().is_zero()) throw ParseError(1, 1, "leading kappa must be nonzero");
    if (rank && static_cast<std::size_t>(*rank) != k.size())
        throw ParseError(1, 1, "r = " + std::to_string(*rank) + " but kappa" + std::to_string(k.size()) + " is the top term");
    def.rho = DrinfeldModule(def.spec, k);
    if (def.auto_periods && !periods.empty()) throw ParseError(1, 1, "both 'periods = auto' and explicit periods");
    for (std::size_t i = 0; i < periods.size(); ++i) {
        if (!periods[i]) throw ParseError(1, 1, "period" + std::to_string(i + 1) + " missing");
        def.periods.push_back(*periods[i]);
    }
    if (!def.auto_periods && !def.periods.empty() && def.periods.size() != k.size())
        throw ParseError(1, 1, "need exactly r periods");
    return def;
}

inline ModuleDef parse_module_string(const std::string& s) {
    std::istringstream in(s);
    return parse_module(in);
}

inline ModuleDef load_module(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, 0, "cannot open '" + path + "'");
    return parse_module(in);
}

/**
 * Ramification used for automatic periods of theta + tau^r: vartheta^(q^r - 1) = theta.
 */
inline int auto_ramification(const DrinfeldModule& rho) {
    return static_cast<int>(ExactCoef::pow_ll(rho.spec.q(), static_cast<unsigned>(rho.rank())) - 1);
}

/**
 * Periods omega^i pi of theta + tau^r for i = 0..r-1, where pi is the Carlitz
 * period of F_{q^r} and omega generates F_{q^r}. Needs r | m.
 */
inline std::vector<RamSeries> auto_periods(const DrinfeldModule& rho, long precision) {
    const FieldSpec& s = rho.spec;
    int r = rho.rank();
    for (int i = 1; i < r; ++i)
        if (!rho.k(i).is_zero()) throw PreconditionViolated("automatic periods need rho_t = theta + c tau^r");
    if (!(rho.k(r) == ExactCoef::one(s))) throw PreconditionViolated("automatic periods need kappa_r = 1");
    if (s.m % static_cast<std::uint32_t>(r) != 0) throw PreconditionViolated("automatic periods need r | m");
    if (s.D != 0) throw PreconditionViolated("automatic periods need D = 0");
    const Field F = s.field();
    long qr = ExactCoef::pow_ll(s.q(), static_cast<unsigned>(r));
    RamSeries pi = carlitz_period(F, qr, auto_ramification(rho), precision);
    // omega: a generator of the multiplicative group of F_{q^r} inside F.
    Elem g = F->primitive();
    Elem omega = F->pow(g, static_cast<long long>((F->size() - 1) / static_cast<std::uint64_t>(qr - 1)));
    std::vector<RamSeries> out;
    Elem c = 1;
    for (int i = 0; i < r; ++i, c = F->mul(c, omega)) out.push_back(pi.scale(c));
    return out;
}

// F_q(t) matrices as JSON-ready strings "(num)/(den)" or "poly".
inline std::string ratfunc_text(const RatFunc& f) { return f.to_string("t"); }

}  // namespace tmotive

#endif
