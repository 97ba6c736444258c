#include "pricing/decimal.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace pricing {

namespace {

constexpr __int128 kScale = 10000;

__int128 pow10(int exponent)
{
    __int128 result = 1;
    for (int i = 0; i < exponent; ++i) result *= 10;
    return result;
}

// 1e30 in fixed-point units.
const __int128 kMagnitudeLimit = pow10(34);

}  // namespace

Decimal Decimal::from_int(std::int64_t whole)
{
    return Decimal(static_cast<__int128>(whole) * kScale);
}

std::optional<Decimal> Decimal::parse(std::string_view text)
{
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }

    std::string digits;  // integer and fractional digits, no point
    int fraction = 0;
    bool seen_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        digits.push_back(text[pos++]);
        seen_digit = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            digits.push_back(text[pos++]);
            ++fraction;
            seen_digit = true;
        }
    }
    if (!seen_digit) return std::nullopt;

    int exponent = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        std::string_view rest = text.substr(pos);
        if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
        auto [end, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
        if (ec != std::errc() || end == rest.data()) return std::nullopt;
        pos = text.size() - static_cast<std::size_t>(rest.data() + rest.size() - end);
    }
    if (pos != text.size()) return std::nullopt;

    // value = digits * 10^(exponent - fraction); scaled = value * 10^4
    int shift = exponent - fraction + kMaxFractionDigits;

    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
    if (digits.empty()) return Decimal();

    while (shift < 0) {
        if (digits.back() != '0') return std::nullopt;  // more than four fractional digits
        digits.pop_back();
        ++shift;
    }
    if (static_cast<int>(digits.size()) + shift > 35) return std::nullopt;

    __int128 units = 0;
    for (char c : digits) units = units * 10 + (c - '0');
    units *= pow10(shift);
    if (units > kMagnitudeLimit) return std::nullopt;
    return Decimal(negative ? -units : units);
}

std::string Decimal::to_string() const
{
    __int128 magnitude = units_ < 0 ? -units_ : units_;
    __int128 whole = magnitude / kScale;
    auto frac = static_cast<int>(magnitude % kScale);

    std::string out;
    if (whole == 0) {
        out = "0";
    } else {
        while (whole > 0) {
            out.push_back(static_cast<char>('0' + static_cast<int>(whole % 10)));
            whole /= 10;
        }
        std::reverse(out.begin(), out.end());
    }
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, static_cast<std::size_t>(kMaxFractionDigits) - digits.size(), '0');
        while (digits.back() == '0') digits.pop_back();
        out += '.' + digits;
    }
    if (units_ < 0) out.insert(0, 1, '-');
    return out;
}

double Decimal::to_double() const
{
    return std::strtod(to_string().c_str(), nullptr);
}

int Decimal::fraction_digits() const
{
    auto frac = static_cast<int>((units_ < 0 ? -units_ : units_) % kScale);
    if (frac == 0) return 0;
    int digits = kMaxFractionDigits;
    while (frac % 10 == 0) {
        frac /= 10;
        --digits;
    }
    return digits;
}

Decimal operator+(Decimal a, Decimal b)
{
    __int128 sum = a.units_ + b.units_;
    if (sum > kMagnitudeLimit * 10 || sum < -kMagnitudeLimit * 10)
        throw std::overflow_error("decimal overflow");
    return Decimal(sum);
}

Decimal& Decimal::operator+=(Decimal other)
{
    *this = *this + other;
    return *this;
}

}  // namespace pricing
