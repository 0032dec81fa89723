#include "bfactory/rational.hpp"

namespace bfactory {

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rational(BigInt(std::string(text)));
        }
        BigInt num{std::string(text.substr(0, slash))};
        BigInt den{std::string(text.substr(slash + 1))};
        if (den == 0) {
            throw ParseError("rational with zero denominator: " + std::string(text));
        }
        // Integer operands are canonical, so the division normalizes.
        return Rational(num) / Rational(den);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed rational: " + std::string(text));
    }
}

std::string to_string(const Rational& q) { return q.str(); }

BigInt floor(const Rational& q) {
    BigInt n = numerator(q);
    BigInt d = denominator(q);  // > 0 by invariant
    if (n >= 0) return n / d;
    return -((-n + d - 1) / d);
}

}  // namespace bfactory
