#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace morrey {

/// Exact rational scalar used for space parameters and dyadic weight
/// exponents. Keeping exponents exact avoids drift when many weights
/// 2^{x} are multiplied; the conversion to double happens once, at the
/// final exp2. Denominator 0 encodes +infinity (used for q = inf and
/// p = inf in the l_p scale).
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(long long n) : num_(n), den_(1) {}

    Rational(long long n, long long d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        const long long g = std::gcd(n < 0 ? -n : n, d);
        num_ = g ? n / g : n;
        den_ = g ? d / g : d;
    }

    static constexpr Rational infinity() {
        Rational r;
        r.num_ = 1;
        r.den_ = 0;
        return r;
    }

    [[nodiscard]] constexpr bool is_infinite() const { return den_ == 0; }
    [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }
    [[nodiscard]] constexpr long long num() const { return num_; }
    [[nodiscard]] constexpr long long den() const { return den_; }

    [[nodiscard]] double to_double() const {
        if (is_infinite()) return std::numeric_limits<double>::infinity();
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    [[nodiscard]] Rational reciprocal() const {
        if (is_infinite()) return Rational(0);
        if (num_ == 0) return infinity();
        return Rational(den_, num_);
    }

    friend Rational operator-(const Rational& a) {
        if (a.is_infinite()) throw std::domain_error("Rational: -inf unsupported");
        return make(-a.num_, a.den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        const Wide n = Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_;
        return reduce(n, Wide(a.den_) * b.den_);
    }

    friend Rational operator-(const Rational& a, const Rational& b) {
        if (b.is_infinite()) throw std::domain_error("Rational: x - inf");
        if (a.is_infinite()) return infinity();
        const Wide n = Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_;
        return reduce(n, Wide(a.den_) * b.den_);
    }

    friend Rational operator*(const Rational& a, const Rational& b) {
        if (a.is_infinite() || b.is_infinite()) {
            if (a.num_ == 0 || b.num_ == 0) throw std::domain_error("Rational: 0 * inf");
            if ((a.num_ < 0) || (b.num_ < 0)) throw std::domain_error("Rational: neg * inf");
            return infinity();
        }
        return reduce(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
    }

    friend Rational operator/(const Rational& a, const Rational& b) {
        return a * b.reciprocal();
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    friend bool operator<(const Rational& a, const Rational& b) {
        if (a.is_infinite()) return false;
        if (b.is_infinite()) return true;
        return Wide(a.num_) * b.den_ < Wide(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// Accepts "3/4", "-2", "0.4", "1.25e0" is NOT accepted (no exponents),
    /// and "inf". Decimal strings convert exactly (mantissa / 10^k).
    static Rational parse(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");
        if (s == "inf" || s == "Inf" || s == "INF") return infinity();
        const auto slash = s.find('/');
        if (slash != std::string_view::npos) {
            const long long n = parse_ll(s.substr(0, slash));
            const long long d = parse_ll(s.substr(slash + 1));
            return Rational(n, d);
        }
        const auto dot = s.find('.');
        if (dot == std::string_view::npos) return Rational(parse_ll(s));
        bool neg = false;
        std::string_view t = s;
        if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
            neg = t[0] == '-';
            t.remove_prefix(1);
        }
        const auto dot2 = t.find('.');
        std::string digits(t.substr(0, dot2));
        digits += t.substr(dot2 + 1);
        long long den = 1;
        for (size_t i = 0; i < t.size() - dot2 - 1; ++i) {
            if (den > std::numeric_limits<long long>::max() / 10)
                throw std::overflow_error("Rational::parse: too many decimals");
            den *= 10;
        }
        const long long n = parse_ll(digits);
        return Rational(neg ? -n : n, den);
    }

    /// Best rational approximation with bounded denominator (continued
    /// fractions); empty if nothing within rel_tol. Used to accept plain
    /// JSON floats in configs.
    static std::optional<Rational> from_double(double x, long long max_den = 1000000000,
                                               double rel_tol = 1e-12) {
        if (std::isinf(x) && x > 0) return infinity();
        if (!std::isfinite(x)) return std::nullopt;
        const bool neg = x < 0;
        double v = neg ? -x : x;
        long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        double frac = v;
        for (int it = 0; it < 64; ++it) {
            const double fl = std::floor(frac);
            if (fl > static_cast<double>(std::numeric_limits<long long>::max() / 4)) break;
            const long long a = static_cast<long long>(fl);
            const long long p2 = a * p1 + p0;
            const long long q2 = a * q1 + q0;
            if (q2 > max_den || q2 < 0 || p2 < 0) break;
            p0 = p1; q0 = q1; p1 = p2; q1 = q2;
            const double approx = static_cast<double>(p1) / static_cast<double>(q1);
            const double err = std::abs(approx - v);
            if (err <= rel_tol * std::max(1.0, v)) {
                return Rational(neg ? -p1 : p1, q1);
            }
            const double rem = frac - fl;
            if (rem < 1e-18) break;
            frac = 1.0 / rem;
        }
        return std::nullopt;
    }

    [[nodiscard]] std::string str() const {
        if (is_infinite()) return "inf";
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    using Wide = __int128;

    static Rational make(long long n, long long d) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        return r;
    }

    static Rational reduce(Wide n, Wide d) {
        if (d < 0) { n = -n; d = -d; }
        Wide a = n < 0 ? -n : n, b = d;
        while (b) { const Wide t = a % b; a = b; b = t; }
        if (a) { n /= a; d /= a; }
        constexpr Wide lo = std::numeric_limits<long long>::min();
        constexpr Wide hi = std::numeric_limits<long long>::max();
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("Rational: overflow after reduction");
        return make(static_cast<long long>(n), static_cast<long long>(d));
    }

    static long long parse_ll(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("Rational::parse: bad integer");
        size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
        if (i == s.size()) throw std::invalid_argument("Rational::parse: bad integer");
        long long v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw std::invalid_argument("Rational::parse: bad digit");
            if (v > (std::numeric_limits<long long>::max() - 9) / 10)
                throw std::overflow_error("Rational::parse: integer overflow");
            v = v * 10 + (s[i] - '0');
        }
        return s[0] == '-' ? -v : v;
    }

    long long num_;
    long long den_;
};

/// 2^x for a rational exponent. Integer exponents go through ldexp and are
/// exact; everything else is a single exp2 rounding.
inline double pow2(const Rational& x) {
    if (x.is_infinite()) return std::numeric_limits<double>::infinity();
    if (x.is_integer() && x.num() > -1070 && x.num() < 1024)
        return std::ldexp(1.0, static_cast<int>(x.num()));
    return std::exp2(x.to_double());
}

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace morrey
