#include "nld/rational.hpp"

#include "nld/errors.hpp"

#include <algorithm>

namespace nld {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (!s.empty() && s.front() == '+') s.erase(s.begin());
    if (s.empty()) throw ParseError("empty rational");
    auto valid = [](const std::string& part) {
        std::size_t i = (!part.empty() && part[0] == '-') ? 1 : 0;
        if (i == part.size()) return false;
        return std::all_of(part.begin() + static_cast<std::ptrdiff_t>(i), part.end(),
                           [](unsigned char c) { return std::isdigit(c); });
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!valid(s)) throw ParseError("not a rational: '" + s + "'");
        return Rational(Integer(s));
    }
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!valid(num) || !valid(den)) throw ParseError("not a rational: '" + s + "'");
    Integer d(den);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(Integer(num), d);
}

std::string to_string(const Rational& q) { return q.str(); }
std::string to_string(const Integer& z) { return z.str(); }

Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

Integer lcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::lcm(a, b);
}

void reduce_by_gcd(std::span<Integer> v) {
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, x);
    if (g <= 1) return;
    for (auto& x : v) x /= g;
}

std::vector<Integer> to_primitive_integers(std::span<const Rational> v) {
    Integer den = 1;
    for (const auto& q : v) den = lcm(den, denominator_of(q));
    std::vector<Integer> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(numerator_of(q) * (den / denominator_of(q)));
    reduce_by_gcd(out);
    return out;
}

std::size_t exact_rank(std::vector<std::vector<Integer>> rows) {
    // Bareiss elimination; rows are consumed.
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    std::size_t rank = 0;
    Integer prev = 1;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            for (std::size_t k = c + 1; k < cols; ++k) {
                rows[r][k] = (rows[r][k] * rows[rank][c] - rows[rank][k] * rows[r][c]) / prev;
            }
            rows[r][c] = 0;
        }
        prev = rows[rank][c];
        ++rank;
    }
    return rank;
}

}  // namespace nld
