#include <gradcode/rational.hpp>

#include <gradcode/errors.hpp>

#include <cctype>

namespace gradcode {

BigInt rat_floor(const Rat& r) {
    BigInt p = rat_num(r), q = rat_den(r);
    BigInt d = p / q;
    if (p < 0 && d * q != p) --d;
    return d;
}

BigInt rat_ceil(const Rat& r) { return -rat_floor(-r); }

Rat parse_rational(const std::string& text) {
    if (text.empty()) throw ConfigError("empty rational literal");
    auto bad = [&] { throw ConfigError("cannot parse rational '" + text + "'"); };
    auto digits_only = [&](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    std::string body = text;
    bool neg = false;
    if (body[0] == '+' || body[0] == '-') {
        neg = body[0] == '-';
        body = body.substr(1);
    }
    Rat value;
    if (auto slash = body.find('/'); slash != std::string::npos) {
        std::string p = body.substr(0, slash), q = body.substr(slash + 1);
        if (!digits_only(p) || !digits_only(q)) bad();
        BigInt den(q);
        if (den == 0) throw ConfigError("zero denominator in '" + text + "'");
        value = Rat(BigInt(p), den);
    } else if (auto dot = body.find('.'); dot != std::string::npos) {
        std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!digits_only(ip) || (!fp.empty() && !digits_only(fp))) bad();
        BigInt scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        value = Rat(BigInt(ip) * scale + (fp.empty() ? BigInt(0) : BigInt(fp)), scale);
    } else {
        if (!digits_only(body)) bad();
        value = Rat(BigInt(body));
    }
    return neg ? -value : value;
}

std::string rat_str(const Rat& r) {
    std::string out = rat_num(r).str();
    if (rat_den(r) != 1) out += "/" + rat_den(r).str();
    return out;
}

double rat_double(const Rat& r) { return r.convert_to<double>(); }

BigInt binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt acc = 1;
    for (long long i = 1; i <= k; ++i) {
        acc *= n - k + i;
        acc /= i;
    }
    return acc;
}

long long binomial_ll(long long n, long long k) {
    BigInt b = binomial(n, k);
    if (b > std::numeric_limits<long long>::max())
        throw ConfigError("binomial coefficient too large");
    return b.convert_to<long long>();
}

}  // namespace gradcode
