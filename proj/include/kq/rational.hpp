#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/functional/hash.hpp>

#include <compare>
#include <stdexcept>
#include <string>

namespace kq {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational in lowest terms. Denominator is always positive and zero is
// 0/1, so equality is structural and ordering is cross-multiplication.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }
    bool is_positive() const { return num_ > 0; }

    Rational operator-() const { return Rational(raw_tag{}, -num_, den_); }

    Rational operator+(const Rational& o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
        return Rational(num_ * o.den_, den_ * o.num_);
    }

    Rational reciprocal() const {
        if (num_ == 0) throw std::domain_error("Rational: reciprocal of zero");
        return Rational(den_, num_);
    }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    // Largest integer <= value.
    BigInt floor() const {
        BigInt q = num_ / den_;
        if (num_ < 0 && q * den_ != num_) --q;
        return q;
    }

    bool in_unit_interval() const {
        return num_ > 0 && num_ < den_;
    }

    // Trace representation: "num/den" in lowest terms, integers as "n/1".
    std::string str() const { return num_.str() + "/" + den_.str(); }

    // Accepts "num/den" and bare integers "n".
    static Rational parse(const std::string& text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Rational(BigInt(text));
            BigInt n(text.substr(0, slash));
            BigInt d(text.substr(slash + 1));
            if (d <= 0) throw std::invalid_argument("non-positive denominator");
            return Rational(std::move(n), std::move(d));
        } catch (const std::exception&) {
            throw std::invalid_argument("Rational: cannot parse '" + text + "'");
        }
    }

    friend std::size_t hash_value(const Rational& r) {
        std::size_t h = boost::hash<BigInt>{}(r.num_);
        boost::hash_combine(h, boost::hash<BigInt>{}(r.den_));
        return h;
    }

private:
    struct raw_tag {};
    Rational(raw_tag, BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {}

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;
};

inline Rational midpoint(const Rational& a, const Rational& b) {
    return (a + b) / Rational(2);
}

struct RationalHash {
    std::size_t operator()(const Rational& r) const { return hash_value(r); }
};

} // namespace kq
