#include "nld/inequality.hpp"

#include "nld/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <sstream>

namespace nld {

namespace {

std::shared_ptr<const MultisetIndex> shared_index(const Scenario& s, Space space) {
    return std::make_shared<const MultisetIndex>(s, space);
}

}  // namespace

SymmetricInequality::SymmetricInequality(Scenario scenario, Space space, Rational constant,
                                         std::vector<Rational> coeffs)
    : scenario_(scenario), space_(space), constant_(std::move(constant)),
      coeffs_(std::move(coeffs)), index_(shared_index(scenario, space)) {
    if (space == Space::Probability)
        throw InvalidArgument("symmetric inequalities live in a correlator space");
    if (coeffs_.size() != index_->size())
        throw DimensionMismatch("inequality has " + std::to_string(coeffs_.size()) +
                                " coefficients, space has " + std::to_string(index_->size()) +
                                " classes");
}

SymmetricInequality SymmetricInequality::two_setting(int parties, Rational constant,
                                                     const std::vector<Rational>& by_l) {
    if (by_l.size() != static_cast<std::size_t>(parties + 1))
        throw DimensionMismatch("two-setting inequality needs n+1 coefficients");
    return SymmetricInequality(Scenario(parties, 2), Space::FullCorrelation, std::move(constant),
                               by_l);
}

Rational SymmetricInequality::coefficient(const SettingCounts& counts) const {
    return coeffs_[index_->find(counts)];
}

bool SymmetricInequality::is_full_body() const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (!index_->is_full_body(i) && coeffs_[i] != 0) return false;
    return true;
}

SymmetricInequality SymmetricInequality::normalized() const {
    std::vector<Rational> all;
    all.reserve(coeffs_.size() + 1);
    all.push_back(constant_);
    all.insert(all.end(), coeffs_.begin(), coeffs_.end());
    auto ints = to_primitive_integers(all);
    std::vector<Rational> c;
    c.reserve(coeffs_.size());
    for (std::size_t i = 1; i < ints.size(); ++i) c.emplace_back(ints[i]);
    return SymmetricInequality(scenario_, space_, Rational(ints[0]), std::move(c));
}

SymmetricInequality SymmetricInequality::with_constant(Rational c) const {
    SymmetricInequality out = *this;
    out.constant_ = std::move(c);
    return out;
}

SymmetricInequality SymmetricInequality::in_space(Space space) const {
    if (space == space_) return *this;
    MultisetIndex target(scenario_, space);
    std::vector<Rational> c(target.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        if (!index_->is_full_body(i) && space == Space::FullCorrelation)
            throw DimensionMismatch("inequality has marginal terms");
        c[target.find(index_->counts(i))] = coeffs_[i];
    }
    return SymmetricInequality(scenario_, space, constant_, std::move(c));
}

std::vector<Rational> SymmetricInequality::expression() const {
    std::vector<Rational> e(coeffs_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = -coeffs_[i];
    return e;
}

std::string multiset_label(const SettingTuple& ascending) {
    SettingTuple digits = ascending;
    if (std::find(digits.begin(), digits.end(), 0) != digits.end())
        std::sort(digits.rbegin(), digits.rend());
    std::string out = "(";
    for (int d : digits) out += std::to_string(d);
    return out + ")";
}

std::string SymmetricInequality::to_text() const {
    std::ostringstream os;
    os << (constant_ >= 0 ? "+" : "") << to_string(constant_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const auto& c = coeffs_[i];
        if (c == 0) continue;
        os << ' ';
        if (c == 1)
            os << "+ ";
        else if (c == -1)
            os << "- ";
        else
            os << (c > 0 ? "+" : "") << to_string(c) << ' ';
        os << multiset_label(index_->settings_list(i));
    }
    return os.str();
}

SymmetricInequality parse_inequality(std::string_view text, std::optional<int> settings) {
    struct Term {
        Rational coeff;
        SettingTuple digits;
    };
    std::vector<Term> terms;
    Rational constant = 0;
    std::optional<Rational> upper;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto read_number = [&]() -> std::optional<Rational> {
        std::size_t start = i;
        while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) ||
                                   text[i] == '/'))
            ++i;
        if (start == i) return std::nullopt;
        return parse_rational(text.substr(start, i - start));
    };
    int parties = -1;
    int max_digit = 0;
    bool has_zero = false;
    while (true) {
        skip();
        if (i >= text.size()) break;
        if (text.substr(i, 2) == ">=") {
            i += 2;
            skip();
            auto rhs = read_number();
            if (!rhs || *rhs != 0) throw ParseError("expected '>= 0'");
            continue;
        }
        if (text.substr(i, 2) == "<=") {
            i += 2;
            skip();
            int sign = 1;
            if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
                sign = text[i] == '-' ? -1 : 1;
                ++i;
                skip();
            }
            auto rhs = read_number();
            if (!rhs) throw ParseError("expected bound after '<='");
            upper = *rhs * sign;
            continue;
        }
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip();
        }
        auto number = read_number();
        skip();
        if (i < text.size() && text[i] == '(') {
            ++i;
            SettingTuple digits;
            while (i < text.size() && text[i] != ')') {
                char ch = text[i++];
                if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') continue;
                if (!std::isdigit(static_cast<unsigned char>(ch)))
                    throw ParseError("bad character in multiset");
                digits.push_back(ch - '0');
            }
            if (i >= text.size()) throw ParseError("unterminated multiset");
            ++i;
            if (parties < 0) parties = static_cast<int>(digits.size());
            if (parties != static_cast<int>(digits.size()))
                throw ParseError("multisets of different sizes");
            for (int d : digits) {
                max_digit = std::max(max_digit, d);
                has_zero = has_zero || d == 0;
            }
            terms.push_back({Rational(sign) * number.value_or(Rational(1)), digits});
        } else {
            if (!number) throw ParseError("unexpected token in inequality near position " +
                                          std::to_string(i));
            constant += Rational(sign) * *number;
        }
    }
    if (parties < 2) throw ParseError("inequality has no terms");
    const int m = settings.value_or(std::max(2, max_digit));
    Scenario s(parties, m);
    Space space = has_zero ? Space::WithMarginals : Space::FullCorrelation;
    MultisetIndex index(s, space);
    std::vector<Rational> coeffs(index.size());
    for (const auto& t : terms) {
        if (std::any_of(t.digits.begin(), t.digits.end(), [&](int d) { return d > m; }))
            throw ParseError("setting exceeds scenario");
        coeffs[index.class_of_tuple(t.digits)] += t.coeff;
    }
    if (upper) {
        // sum c (mu) <= B  <=>  B - sum c (mu) >= 0
        for (auto& c : coeffs) c = -c;
        constant = *upper - constant;
    }
    return SymmetricInequality(s, space, constant, std::move(coeffs));
}

std::vector<Rational> expand_symmetric(const SymmetricInequality& ineq) {
    const auto& idx = ineq.index();
    const auto& classes = idx.tuple_classes();
    std::vector<Rational> out(classes.size());
    for (std::size_t t = 0; t < classes.size(); ++t) out[t] = ineq.coeffs()[classes[t]];
    return out;
}

Rational evaluate(const SymmetricInequality& ineq, const Behavior& b,
                  MarginalConvention convention) {
    if (ineq.scenario() != b.scenario()) throw DimensionMismatch("scenario mismatch");
    const auto& idx = ineq.index();
    const auto& classes = idx.tuple_classes();
    Rational value = ineq.constant();
    if (b.space() == ineq.space()) {
        auto e = b.entries();
        for (std::size_t t = 0; t < classes.size(); ++t) {
            const auto& c = ineq.coeffs()[classes[t]];
            if (c != 0) value += c * e[t];
        }
        return value;
    }
    for (std::size_t t = 0; t < classes.size(); ++t) {
        const auto& c = ineq.coeffs()[classes[t]];
        if (c == 0) continue;
        value += c * b.correlator(tuple_at(ineq.scenario(), ineq.space(), t), convention);
    }
    return value;
}

}  // namespace nld
