#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spectrade {

using BigInt = boost::multiprecision::cpp_int;

// All money amounts and coordinates are exact rationals. Every comparison and
// every settlement figure is computed without rounding; decimal rounding only
// happens at the printing boundary.
using Rational = boost::multiprecision::cpp_rational;
using Money = Rational;

inline BigInt pow10(unsigned exp) {
    BigInt r = 1;
    for (unsigned i = 0; i < exp; ++i) r *= 10;
    return r;
}

// cpp_int's string constructor treats a leading zero as a C octal literal,
// so digit runs like "0891" must be stripped before conversion.
inline BigInt digits_to_bigint(const std::string& digits) {
    std::size_t first = digits.find_first_not_of('0');
    if (first == std::string::npos) return 0;
    return BigInt(first == 0 ? digits : digits.substr(first));
}

// Parses "[+-]digits[.digits]" exactly. Returns nullopt on any other shape;
// never loses precision.
inline std::optional<Rational> parse_decimal(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        pos = 1;
    }
    std::string int_part, frac_part;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
        int_part.push_back(text[pos++]);
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
            frac_part.push_back(text[pos++]);
        if (frac_part.empty()) return std::nullopt;
    }
    if (pos != text.size() || int_part.empty()) return std::nullopt;
    BigInt numerator = digits_to_bigint(int_part);
    BigInt denominator = 1;
    if (!frac_part.empty()) {
        denominator = pow10(static_cast<unsigned>(frac_part.size()));
        numerator = numerator * denominator + digits_to_bigint(frac_part);
    }
    if (negative) numerator = -numerator;
    return Rational(numerator, denominator);
}

// Renders a rational whose denominator has only factors 2 and 5 as the
// shortest exact decimal ("3", "0.51", "12.5"). Throws otherwise; callers use
// it for values that were parsed from decimals and only scaled by powers of
// ten, so the throw indicates a programming error.
inline std::string format_decimal_exact(const Rational& value) {
    BigInt num = numerator(value);
    BigInt den = denominator(value);
    unsigned twos = 0, fives = 0;
    BigInt d = den;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1)
        throw std::invalid_argument("format_decimal_exact: " + value.str() +
                                    " has no finite decimal form");
    unsigned places = twos > fives ? twos : fives;
    BigInt scaled = num * pow10(places) / den;
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.str();
    if (digits.size() <= places)
        digits.insert(0, places - digits.size() + 1, '0');
    std::string out;
    if (negative) out.push_back('-');
    out += digits.substr(0, digits.size() - places);
    if (places > 0) {
        std::string frac = digits.substr(digits.size() - places);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
    }
    return out;
}

// Fixed-point rendering with the given number of places, rounding half away
// from zero. Used for metric output only.
inline std::string format_decimal(const Rational& value, unsigned places) {
    BigInt num = numerator(value);
    BigInt den = denominator(value);
    bool negative = num < 0;
    if (negative) num = -num;
    BigInt scaled_num = num * pow10(places);
    BigInt quotient = scaled_num / den;
    BigInt remainder = scaled_num % den;
    if (remainder * 2 >= den) ++quotient;
    std::string digits = quotient.str();
    if (digits.size() <= places)
        digits.insert(0, places - digits.size() + 1, '0');
    std::string out;
    if (negative && quotient != 0) out.push_back('-');
    out += digits.substr(0, digits.size() - places);
    if (places > 0) {
        out.push_back('.');
        out += digits.substr(digits.size() - places);
    }
    return out;
}

// Like format_decimal but with trailing fractional zeros removed, so whole
// numbers print as "82" rather than "82.000000".
inline std::string format_decimal_trimmed(const Rational& value, unsigned places) {
    std::string out = format_decimal(value, places);
    if (out.find('.') == std::string::npos) return out;
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
    return out;
}

}  // namespace spectrade
