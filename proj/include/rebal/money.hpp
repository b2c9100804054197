#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>

#include "rebal/errors.hpp"

namespace rebal {

/// Fixed-point USD notional with 1e-6 resolution.
///
/// All engine cash amounts are held as an integer count of micro-USD so that
/// additions, subtractions and comparisons are exact. Conversions from
/// floating point round half to even at the sixth decimal.
class Usd {
public:
    static constexpr std::int64_t kScale = 1'000'000;

    constexpr Usd() = default;

    static constexpr Usd from_micros(std::int64_t m) {
        Usd u;
        u.micros_ = m;
        return u;
    }

    static Usd from_value(double v) {
        double scaled = v * static_cast<double>(kScale);
        if (!std::isfinite(scaled) || std::fabs(scaled) > 9.0e18) {
            fail(ErrorCategory::validation, "usd amount out of range: " + std::to_string(v));
        }
        return from_micros(std::llrint(scaled));  // FE_TONEAREST: half to even
    }

    constexpr std::int64_t micros() const { return micros_; }
    double value() const { return static_cast<double>(micros_) / kScale; }

    constexpr bool is_zero() const { return micros_ == 0; }
    constexpr bool is_negative() const { return micros_ < 0; }
    constexpr int sign() const { return micros_ < 0 ? -1 : (micros_ > 0 ? 1 : 0); }

    constexpr Usd abs() const { return from_micros(micros_ < 0 ? -micros_ : micros_); }

    constexpr Usd operator-() const { return from_micros(-micros_); }
    constexpr Usd operator+(Usd o) const { return from_micros(micros_ + o.micros_); }
    constexpr Usd operator-(Usd o) const { return from_micros(micros_ - o.micros_); }
    Usd& operator+=(Usd o) { micros_ += o.micros_; return *this; }
    Usd& operator-=(Usd o) { micros_ -= o.micros_; return *this; }

    constexpr auto operator<=>(const Usd&) const = default;

    /// Multiply by a dimensionless factor, rounding half to even.
    Usd scaled(double factor) const { return from_value(value() * factor); }

    /// floor(|this| / |divisor|); divisor must be nonzero.
    std::int64_t div_floor_abs(Usd divisor) const {
        if (divisor.micros_ == 0) {
            fail(ErrorCategory::validation, "division by zero usd amount");
        }
        std::int64_t a = micros_ < 0 ? -micros_ : micros_;
        std::int64_t b = divisor.micros_ < 0 ? -divisor.micros_ : divisor.micros_;
        return a / b;
    }

    /// this / n rounded half to even at 1e-6, n > 0.
    Usd div_round(std::int64_t n) const {
        if (n <= 0) {
            fail(ErrorCategory::validation, "order count must be positive");
        }
        std::int64_t q = micros_ / n;
        std::int64_t r = micros_ % n;
        if (r < 0) {  // floor division
            q -= 1;
            r += n;
        }
        std::int64_t twice = 2 * r;
        if (twice > n || (twice == n && (q % 2 != 0))) {
            q += 1;
        }
        return from_micros(q);
    }

    /// Exact decimal rendering, trailing fractional zeros trimmed.
    std::string to_string() const {
        std::int64_t m = micros_;
        bool neg = m < 0;
        std::uint64_t a = neg ? static_cast<std::uint64_t>(-(m + 1)) + 1 : static_cast<std::uint64_t>(m);
        std::uint64_t whole = a / kScale;
        std::uint64_t frac = a % kScale;
        std::string out = neg ? "-" : "";
        out += std::to_string(whole);
        if (frac != 0) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "%06llu", static_cast<unsigned long long>(frac));
            std::string f(buf);
            while (!f.empty() && f.back() == '0') f.pop_back();
            out += '.';
            out += f;
        }
        return out;
    }

private:
    std::int64_t micros_ = 0;
};

inline Usd min(Usd a, Usd b) { return a < b ? a : b; }
inline Usd max(Usd a, Usd b) { return a < b ? b : a; }

}  // namespace rebal
