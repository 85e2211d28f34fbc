#include "causal_affects/rational.hpp"

#include <cctype>

#include "causal_affects/errors.hpp"

namespace causal_affects {

Rational parse_rational(const std::string& text) {
    auto bad = [&] { return Error(ErrorCode::InvalidInput, "not a rational: \"" + text + "\""); };
    if (text.empty()) throw bad();
    std::size_t slash = text.find('/');
    auto digits_ok = [](const std::string& s, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && !s.empty() && s[0] == '-') i = 1;
        if (i >= s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    std::string num = text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
    mpz_class d(den);
    if (d == 0) throw bad();
    Rational r(mpz_class(num), d);
    r.canonicalize();
    return r;
}

std::string rational_to_string(const Rational& value) {
    Rational v = value;
    v.canonicalize();
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

}  // namespace causal_affects
