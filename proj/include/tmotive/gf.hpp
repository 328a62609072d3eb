#ifndef TMOTIVE_GF_HPP
#define TMOTIVE_GF_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace tmotive {

using Elem = std::uint32_t;

/**
 * The finite field F_{p^k}, built on a primitive modulus.
 *
 * Elements are stored in vector form: the integer whose base-p digits are the
 * coefficients of the residue polynomial in the generator g (lowest digit is
 * the constant term). Multiplication goes through log/antilog tables and
 * addition for odd p through a Zech table, so every operation is O(1).
 *
 * The modulus is the lexicographically smallest monic primitive polynomial of
 * degree k, which makes the field a function of p^k alone.
 */
class GaloisField {
  public:
    GaloisField(std::uint32_t p, std::uint32_t k) : p_(p), k_(k) {
        if (p < 2 || k < 1) throw PreconditionViolated("field characteristic and degree must be positive");
        for (std::uint32_t d = 2; d * d <= p; ++d)
            if (p % d == 0) throw PreconditionViolated("characteristic must be prime");
        std::uint64_t size = 1;
        for (std::uint32_t i = 0; i < k; ++i) {
            size *= p;
            if (size > (1u << 24)) throw PreconditionViolated("field too large for table arithmetic");
        }
        size_ = static_cast<std::uint32_t>(size);
        order_ = size_ - 1;
        build_tables();
    }

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t k() const noexcept { return k_; }
    std::uint32_t size() const noexcept { return size_; }
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    Elem zero() const noexcept { return 0; }
    Elem one() const noexcept { return 1; }
    // The residue class of x; equals one() when k == 1.
    Elem generator() const noexcept { return k_ == 1 ? primitive_ : p_; }
    Elem primitive() const noexcept { return primitive_; }

    Elem from_int(long long v) const noexcept {
        long long r = v % static_cast<long long>(p_);
        if (r < 0) r += p_;
        return static_cast<Elem>(r);
    }

    Elem add(Elem a, Elem b) const noexcept {
        if (p_ == 2) return a ^ b;
        if (a == 0) return b;
        if (b == 0) return a;
        std::uint32_t la = log_[a], lb = log_[b];
        std::uint32_t d = lb >= la ? lb - la : lb + order_ - la;
        std::int64_t z = zech_[d];
        if (z < 0) return 0;
        return exp_[(la + static_cast<std::uint32_t>(z)) % order_];
    }
    Elem neg(Elem a) const noexcept {
        if (p_ == 2 || a == 0) return a;
        return exp_[(log_[a] + order_ / 2) % order_];
    }
    Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const noexcept {
        if (a == 0 || b == 0) return 0;
        std::uint32_t s = log_[a] + log_[b];
        if (s >= order_) s -= order_;
        return exp_[s];
    }
    Elem inv(Elem a) const {
        if (a == 0) throw DivisionByZeroWithinPrecision("inverse of zero in F_" + std::to_string(size_));
        return exp_[(order_ - log_[a]) % order_];
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, long long e) const {
        if (a == 0) {
            if (e == 0) return 1;
            if (e < 0) throw DivisionByZeroWithinPrecision("negative power of zero");
            return 0;
        }
        long long m = static_cast<long long>(log_[a]) * (e % static_cast<long long>(order_));
        m %= static_cast<long long>(order_);
        if (m < 0) m += order_;
        return exp_[static_cast<std::uint32_t>(m)];
    }
    // a^(p^j) for any integer j; negative j applies the inverse Frobenius.
    Elem frob(Elem a, long long j) const noexcept {
        if (a == 0) return 0;
        long long jj = j % static_cast<long long>(k_);
        if (jj < 0) jj += k_;
        std::uint64_t l = log_[a];
        for (long long i = 0; i < jj; ++i) l = (l * p_) % order_;
        return exp_[static_cast<std::uint32_t>(l)];
    }
    // log_g(a) relative to the table generator; a must be nonzero.
    std::uint32_t log(Elem a) const {
        if (a == 0) throw PreconditionViolated("log of zero");
        return log_[a];
    }
    Elem exp(std::uint64_t i) const noexcept { return exp_[i % order_]; }

    // True when a lies in the subfield F_{p^d}.
    bool in_subfield(Elem a, std::uint32_t d) const noexcept { return frob(a, d) == a; }

    // Base-p digits of a, constant term first.
    std::vector<std::uint32_t> digits(Elem a) const {
        std::vector<std::uint32_t> out(k_);
        for (std::uint32_t i = 0; i < k_; ++i) {
            out[i] = a % p_;
            a /= p_;
        }
        return out;
    }

    std::string to_string(Elem a) const {
        if (a == 0) return "0";
        if (k_ == 1) return std::to_string(a);
        auto d = digits(a);
        std::string out;
        for (std::uint32_t i = k_; i-- > 0;) {
            if (d[i] == 0) continue;
            if (!out.empty()) out += "+";
            if (i == 0) {
                out += std::to_string(d[i]);
                continue;
            }
            if (d[i] != 1) out += std::to_string(d[i]) + "*";
            out += "g";
            if (i > 1) out += "^" + std::to_string(i);
        }
        return out.size() > 1 && out.find('+') != std::string::npos ? "(" + out + ")" : out;
    }

  private:
    std::uint32_t p_, k_, size_ = 0, order_ = 0;
    Elem primitive_ = 1;
    std::vector<std::uint32_t> modulus_;
    std::vector<Elem> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<std::int64_t> zech_;

    Elem digit_add(Elem a, Elem b) const {
        Elem out = 0, scale = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            out += ((a % p_ + b % p_) % p_) * scale;
            a /= p_;
            b /= p_;
            scale *= p_;
        }
        return out;
    }

    // Multiply the vector-form element a by x modulo the monic polynomial mod.
    Elem times_x(Elem a, const std::vector<std::uint32_t>& mod) const {
        auto d = digits(a);
        std::uint32_t top = d[k_ - 1];
        Elem out = 0, scale = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            std::uint32_t v = i == 0 ? 0 : d[i - 1];
            v = (v + (p_ - (top * mod[i]) % p_)) % p_;
            out += v * scale;
            scale *= p_;
        }
        return out;
    }

    void build_tables() {
        exp_.assign(order_, 0);
        log_.assign(size_, 0);
        if (k_ == 1) {
            modulus_ = {0, 1};
            for (Elem c = 1; c < p_ || p_ == 2; ++c) {
                std::uint64_t x = 1;
                std::uint32_t ord = 0;
                do {
                    x = (x * c) % p_;
                    ++ord;
                } while (x != 1);
                if (ord == order_) {
                    primitive_ = c;
                    break;
                }
                if (p_ == 2) break;
            }
            std::uint64_t x = 1;
            for (std::uint32_t i = 0; i < order_; ++i) {
                exp_[i] = static_cast<Elem>(x);
                log_[x] = i;
                x = (x * primitive_) % p_;
            }
        } else {
            // Candidates x^k + c_{k-1}x^{k-1} + ... + c_0 ordered by the integer sum c_i p^i.
            std::vector<std::uint32_t> mod(k_ + 1, 0);
            mod[k_] = 1;
            for (std::uint32_t code = 1; code < size_; ++code) {
                std::uint32_t c = code;
                for (std::uint32_t i = 0; i < k_; ++i) {
                    mod[i] = c % p_;
                    c /= p_;
                }
                if (mod[0] == 0) continue;
                Elem x = 1;
                std::uint32_t ord = 0;
                do {
                    x = times_x(x, mod);
                    ++ord;
                } while (x != 1 && ord <= order_);
                if (ord == order_) break;
                mod.assign(k_ + 1, 0);
                mod[k_] = 1;
            }
            modulus_ = mod;
            primitive_ = p_;
            Elem x = 1;
            for (std::uint32_t i = 0; i < order_; ++i) {
                exp_[i] = x;
                log_[x] = i;
                x = times_x(x, modulus_);
            }
        }
        if (p_ != 2) {
            zech_.assign(order_, -1);
            for (std::uint32_t i = 0; i < order_; ++i) {
                Elem s = digit_add(1, exp_[i]);
                zech_[i] = s == 0 ? -1 : static_cast<std::int64_t>(log_[s]);
            }
        }
    }
};

using Field = std::shared_ptr<const GaloisField>;

// Shared, cached instance of F_{p^k}.
inline Field galois_field(std::uint32_t p, std::uint32_t k) {
    static std::mutex mutex;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, Field> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(p, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto f = std::make_shared<const GaloisField>(p, k);
    cache.emplace(key, f);
    return f;
}

/**
 * Shape of the base field: q = p^e, constants F_{q^m}, and twist depth D.
 * Exact coefficients live in F_{q^m}(w) with theta = w^(q^D).
 */
struct FieldSpec {
    std::uint32_t p = 2;
    std::uint32_t e = 1;
    std::uint32_t m = 1;
    std::uint32_t D = 0;

    long long q() const {
        long long v = 1;
        for (std::uint32_t i = 0; i < e; ++i) v *= p;
        return v;
    }
    Field field() const { return galois_field(p, e * m); }
    bool operator==(const FieldSpec&) const = default;
};

// Element of a finite field with value semantics, mainly for generic linear algebra.
struct Fq {
    const GaloisField* F = nullptr;
    Elem v = 0;

    friend Fq operator+(Fq a, Fq b) { return {a.F, a.F->add(a.v, b.v)}; }
    friend Fq operator-(Fq a, Fq b) { return {a.F, a.F->sub(a.v, b.v)}; }
    friend Fq operator*(Fq a, Fq b) { return {a.F, a.F->mul(a.v, b.v)}; }
    friend Fq operator/(Fq a, Fq b) { return {a.F, a.F->div(a.v, b.v)}; }
    Fq operator-() const { return {F, F->neg(v)}; }
    bool is_zero() const { return v == 0; }
    friend bool operator==(Fq a, Fq b) { return a.v == b.v; }
};

}  // namespace tmotive

#endif
