#include "anarchy/scalar.hpp"

#include "anarchy/errors.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace anarchy {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational parse_scalar(const std::string& text) {
    std::string s = text;
    // trim
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) throw ValidationError("empty scalar");

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string p = s.substr(0, slash), q = s.substr(slash + 1);
        bool neg = false;
        if (!p.empty() && (p[0] == '-' || p[0] == '+')) {
            neg = p[0] == '-';
            p.erase(p.begin());
        }
        if (!all_digits(p) || !all_digits(q))
            throw ValidationError("bad fraction: " + text);
        Integer num(p), den(q);
        if (den == 0) throw ValidationError("zero denominator: " + text);
        Rational r(num, den);
        return neg ? Rational(-r) : r;
    }

    bool neg = false;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        neg = s[i] == '-';
        ++i;
    }
    std::string int_part, frac_part, exp_part;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) int_part += s[i++];
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) frac_part += s[i++];
    }
    long exp10 = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        std::string es;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) es += s[i++];
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) es += s[i++];
        if (es.empty() || es == "-" || es == "+")
            throw ValidationError("bad exponent: " + text);
        exp10 = std::strtol(es.c_str(), nullptr, 10);
        exp_part = es;
    }
    if (i != s.size() || (int_part.empty() && frac_part.empty()))
        throw ValidationError("bad scalar: " + text);

    Integer mantissa(int_part.empty() ? "0" : int_part);
    for (char c : frac_part) {
        mantissa *= 10;
        mantissa += c - '0';
    }
    long shift = exp10 - static_cast<long>(frac_part.size());
    Rational r(mantissa);
    if (shift > 0)
        r *= Rational(pow10(static_cast<unsigned>(shift)));
    else if (shift < 0)
        r /= Rational(pow10(static_cast<unsigned>(-shift)));
    return neg ? Rational(-r) : r;
}

std::string format_scalar(const Rational& value) {
    if (denominator(value) == 1) return numerator(value).str();
    return numerator(value).str() + "/" + denominator(value).str();
}

std::string format_decimal(const Rational& value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", to_double(value));
    return buf;
}

double to_double(const Rational& value) {
    return value.convert_to<double>();
}

Integer pow10(unsigned digits) {
    Integer r = 1;
    for (unsigned k = 0; k < digits; ++k) r *= 10;
    return r;
}

} // namespace anarchy
