#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>

#include "mlcake/errors.hpp"

namespace mlcake {

// Exact rational scalar backed by GMP. Always kept canonical:
// denominator > 0 and gcd(|num|, den) == 1.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}     // NOLINT: implicit by design
    Rational(int n) : q_(n) {}      // NOLINT
    Rational(long num, long den) {
        if (den == 0) throw validation_error("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    // Parses "p", "-p" or "p/q" with integer p, q and q != 0.
    static Rational parse(const std::string& text);

    const mpq_class& raw() const { return q_; }
    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }

    // Canonical form; omits the denominator when it is 1.
    std::string str() const {
        return q_.get_den() == 1 ? q_.get_num().get_str() : q_.get_str();
    }
    double to_double() const { return q_.get_d(); }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sgn(q_) == 0; }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw validation_error("rational division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_cmp(a.q_.get_mpq_t(), b.q_.get_mpq_t()) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = mpq_cmp(a.q_.get_mpq_t(), b.q_.get_mpq_t());
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

  private:
    mpq_class q_;
};

inline Rational Rational::parse(const std::string& text) {
    if (text.empty()) throw validation_error("empty rational literal");
    std::size_t pos = text[0] == '-' ? 1 : 0;
    if (pos == text.size()) throw validation_error("bad rational literal: " + text);
    bool seen_slash = false;
    for (std::size_t i = pos; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '/' && !seen_slash && i > pos && i + 1 < text.size()) {
            seen_slash = true;
            continue;
        }
        if (c < '0' || c > '9') throw validation_error("bad rational literal: " + text);
    }
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw validation_error("bad rational literal: " + text);
    if (q.get_den() == 0) throw validation_error("rational with zero denominator: " + text);
    q.canonicalize();
    return Rational(std::move(q));
}

inline Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational midpoint(const Rational& a, const Rational& b) { return (a + b) / 2; }

inline std::string to_string(const Rational& a) { return a.str(); }

} // namespace mlcake
