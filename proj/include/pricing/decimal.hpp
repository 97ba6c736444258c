#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pricing {

/// Exact fixed-point decimal with four fractional digits.
///
/// Prices and usage-limit values are summed and compared without ever going
/// through binary floating point, so 15.99 + 50 is exactly 65.99. Storage is a
/// 128-bit integer count of 1/10000 units, which comfortably holds the
/// 1e17-sized "effectively unlimited" sentinels found in real pricings.
class Decimal {
public:
    static constexpr int kMaxFractionDigits = 4;

    constexpr Decimal() = default;

    static Decimal from_int(std::int64_t whole);

    /// Parses `[+-]digits[.digits][(e|E)[+-]digits]`. Returns nullopt on
    /// malformed input, on more than four significant fractional digits, or on
    /// magnitudes beyond 1e30.
    static std::optional<Decimal> parse(std::string_view text);

    /// Canonical rendering: no exponent, no trailing fractional zeros.
    std::string to_string() const;
    double to_double() const;

    /// Number of significant fractional digits (0..4).
    int fraction_digits() const;

    bool is_zero() const { return units_ == 0; }
    bool is_negative() const { return units_ < 0; }

    friend Decimal operator+(Decimal a, Decimal b);
    Decimal& operator+=(Decimal other);

    friend bool operator==(Decimal a, Decimal b) { return a.units_ == b.units_; }
    friend std::strong_ordering operator<=>(Decimal a, Decimal b)
    {
        if (a.units_ < b.units_) return std::strong_ordering::less;
        if (a.units_ > b.units_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    explicit constexpr Decimal(__int128 units) : units_(units) {}

    __int128 units_ = 0;
};

}  // namespace pricing
