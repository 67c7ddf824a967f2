#include "mskel/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace mskel {

std::string Rational::to_decimal(int places) const {
    if (places < 0) throw std::invalid_argument("Rational::to_decimal: negative places");
    bool negative = num_ < 0;
    i128 n = negative ? -i128(num_) : i128(num_);
    i128 d = den_;

    i128 whole = n / d;
    i128 rem = n % d;
    std::string digits;
    digits.reserve(static_cast<std::size_t>(places));
    for (int i = 0; i < places; ++i) {
        rem *= 10;
        digits.push_back(static_cast<char>('0' + static_cast<int>(rem / d)));
        rem %= d;
    }
    // Round half up on the remaining tail.
    if (2 * rem >= d) {
        int i = places - 1;
        for (; i >= 0; --i) {
            if (digits[static_cast<std::size_t>(i)] != '9') {
                ++digits[static_cast<std::size_t>(i)];
                break;
            }
            digits[static_cast<std::size_t>(i)] = '0';
        }
        if (i < 0) ++whole;
    }

    std::string out;
    if (negative && (whole != 0 || digits.find_first_not_of('0') != std::string::npos)) {
        out.push_back('-');
    }
    // whole fits in 64 bits: |num/den| <= |num|.
    out += std::to_string(static_cast<std::int64_t>(whole));
    if (places > 0) {
        out.push_back('.');
        out += digits;
    }
    return out;
}

Rational Rational::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("Rational::parse: empty string");
    std::size_t slash = text.find('/');
    auto parse_int = [](const std::string& s) {
        if (s.empty()) throw std::invalid_argument("Rational::parse: empty component");
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("Rational::parse: not an integer: " + s);
        }
        if (pos != s.size()) {
            throw std::invalid_argument("Rational::parse: trailing characters in: " + s);
        }
        return static_cast<std::int64_t>(v);
    };
    if (slash == std::string::npos) {
        return Rational(parse_int(text));
    }
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

}  // namespace mskel
