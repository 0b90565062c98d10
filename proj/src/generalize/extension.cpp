#include "nld/errors.hpp"
#include "nld/generalize.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace nld {

namespace {

std::string party_name(int k) { return std::string(1, static_cast<char>('A' + k)); }

bool is_added(const ExtensionRule& r, int k, int x) {
    return k >= r.base.parties || x > r.base.settings;
}

void check_scenarios(const Scenario& base, const Scenario& target) {
    if (target.parties < base.parties || target.settings < base.settings)
        throw InvalidArgument("extension rule: target scenario must contain the base scenario");
    if (target.parties > 26) throw InvalidArgument("extension rule: at most 26 parties");
}

}  // namespace

ExtensionRule ExtensionRule::trivial(const Scenario& base, const Scenario& target) {
    check_scenarios(base, target);
    ExtensionRule r{base, target, {}};
    r.sources.assign(target.parties, std::vector<SettingSource>(target.settings));
    for (int k = 0; k < target.parties; ++k)
        for (int x = 1; x <= target.settings; ++x)
            if (is_added(r, k, x)) r.sources[k][x - 1].kind = SettingSource::Kind::Trivial;
    return r;
}

ExtensionRule ExtensionRule::copy(const Scenario& base, const Scenario& target, const std::vector<int>& from) {
    check_scenarios(base, target);
    if (target.parties != base.parties) throw InvalidArgument("copy rule: added parties have nothing to copy");
    if (from.size() != static_cast<std::size_t>(target.settings - base.settings))
        throw InvalidArgument("copy rule: one source per added setting expected");
    ExtensionRule r{base, target, {}};
    r.sources.assign(target.parties, std::vector<SettingSource>(target.settings));
    for (int k = 0; k < target.parties; ++k)
        for (std::size_t i = 0; i < from.size(); ++i)
            r.sources[k][base.settings + i] = {SettingSource::Kind::Copy, from[i], false};
    r.validate();
    return r;
}

void ExtensionRule::validate() const {
    check_scenarios(base, target);
    if (sources.size() != static_cast<std::size_t>(target.parties))
        throw InvalidArgument("extension rule: one entry per target party expected");
    for (int k = 0; k < target.parties; ++k) {
        if (sources[k].size() != static_cast<std::size_t>(target.settings))
            throw InvalidArgument("extension rule: one entry per target setting expected");
        for (int x = 1; x <= target.settings; ++x) {
            const auto& s = sources[k][x - 1];
            const std::string where = party_name(k) + std::to_string(x);
            if (!is_added(*this, k, x)) {
                if (s.kind != SettingSource::Kind::Keep)
                    throw InvalidArgument("extension rule: " + where + " exists in the base scenario");
                continue;
            }
            switch (s.kind) {
                case SettingSource::Kind::Keep:
                    throw InvalidArgument("extension rule: added setting " + where + " is not mapped");
                case SettingSource::Kind::Trivial: break;
                case SettingSource::Kind::Copy:
                    if (k >= base.parties)
                        throw InvalidArgument("extension rule: added party " + party_name(k) + " can only be trivial");
                    if (s.setting < 1 || s.setting > base.settings)
                        throw InvalidArgument("extension rule: " + where + " copies undefined setting " +
                                              std::to_string(s.setting));
                    break;
            }
        }
    }
}

std::pair<SettingTuple, int> ExtensionRule::substitute(const SettingTuple& t) const {
    if (t.size() != static_cast<std::size_t>(target.parties))
        throw DimensionMismatch("substitute: tuple has wrong length");
    SettingTuple out(base.parties, 0);
    int sign = 1;
    for (int k = 0; k < target.parties; ++k) {
        const int x = t[k];
        if (x < 0 || x > target.settings) throw InvalidArgument("substitute: setting out of range");
        int y = 0;
        if (x != 0) {
            const auto& s = sources[k][x - 1];
            switch (s.kind) {
                case SettingSource::Kind::Keep: y = x; break;
                case SettingSource::Kind::Trivial: y = 0; break;
                case SettingSource::Kind::Copy:
                    y = s.setting;
                    if (s.flip) sign = -sign;
                    break;
            }
        }
        if (k < base.parties) out[k] = y;
    }
    return {out, sign};
}

bool ExtensionRule::party_uniform() const {
    if (target.parties != base.parties) return false;
    for (const auto& p : sources)
        if (p != sources.front()) return false;
    return true;
}

std::string ExtensionRule::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k < target.parties; ++k)
        for (int x = 1; x <= target.settings; ++x) {
            const auto& s = sources[k][x - 1];
            if (s.kind == SettingSource::Kind::Keep) continue;
            if (!first) os << ',';
            first = false;
            os << party_name(k) << x << '=';
            if (s.kind == SettingSource::Kind::Trivial)
                os << '1';
            else
                os << (s.flip ? "-" : "") << party_name(k) << s.setting;
        }
    return os.str();
}

ExtensionRule parse_extension_rule(std::string_view text, const Scenario& base, const Scenario& target) {
    check_scenarios(base, target);
    ExtensionRule r{base, target, {}};
    r.sources.assign(target.parties, std::vector<SettingSource>(target.settings));
    std::vector<std::vector<bool>> seen(target.parties, std::vector<bool>(target.settings, false));

    std::string clean;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) clean += c;
    if (clean.empty()) throw ParseError("extension rule: empty");

    auto fail = [&](const std::string& item, const std::string& why) {
        throw ParseError("extension rule: '" + item + "': " + why);
    };
    std::size_t pos = 0;
    while (pos <= clean.size()) {
        std::size_t end = clean.find(',', pos);
        if (end == std::string::npos) end = clean.size();
        const std::string item = clean.substr(pos, end - pos);
        pos = end + 1;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) fail(item, "expected <party><setting>=<source>");
        const std::string lhs = item.substr(0, eq), rhs = item.substr(eq + 1);
        if (!std::isupper(static_cast<unsigned char>(lhs[0]))) fail(item, "party letter expected");
        const int k = lhs[0] - 'A';
        if (k >= target.parties) throw InvalidArgument("extension rule: no party " + lhs.substr(0, 1));

        std::vector<int> settings;
        if (lhs.size() == 1) {
            if (k < base.parties) fail(item, "only added parties can be mapped as a whole");
            for (int x = 1; x <= target.settings; ++x) settings.push_back(x);
        } else {
            int x = 0;
            for (std::size_t i = 1; i < lhs.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(lhs[i]))) fail(item, "setting number expected");
                x = 10 * x + (lhs[i] - '0');
            }
            if (x < 1 || x > target.settings)
                throw InvalidArgument("extension rule: undefined setting " + lhs);
            if (!is_added(r, k, x)) throw InvalidArgument("extension rule: " + lhs + " exists in the base scenario");
            settings.push_back(x);
        }

        SettingSource src;
        if (rhs == "1" || rhs == "+1") {
            src.kind = SettingSource::Kind::Trivial;
        } else {
            std::string_view v = rhs;
            if (!v.empty() && (v[0] == '-' || v[0] == '+')) {
                src.flip = v[0] == '-';
                v.remove_prefix(1);
            }
            if (v.size() < 2 || v[0] != lhs[0]) fail(item, "a copy must name a setting of the same party");
            int y = 0;
            for (std::size_t i = 1; i < v.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(v[i]))) fail(item, "setting number expected");
                y = 10 * y + (v[i] - '0');
            }
            src.kind = SettingSource::Kind::Copy;
            src.setting = y;
        }
        for (int x : settings) {
            if (seen[k][x - 1]) fail(item, "mapped twice");
            seen[k][x - 1] = true;
            r.sources[k][x - 1] = src;
        }
        if (end == clean.size()) break;
    }
    r.validate();
    return r;
}

Behavior extend_behavior(const Behavior& b1, const ExtensionRule& rule) {
    rule.validate();
    if (b1.space() != Space::WithMarginals)
        throw InvalidArgument("extend_behavior: behavior must include marginals");
    if (!(b1.scenario() == rule.base)) throw DimensionMismatch("extend_behavior: behavior is not in the base scenario");
    const std::size_t dim = space_dimension(rule.target, Space::WithMarginals);
    std::vector<Rational> e(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto [t, sign] = rule.substitute(tuple_at(rule.target, Space::WithMarginals, i));
        bool trivial = true;
        for (int x : t) trivial = trivial && x == 0;
        e[i] = trivial ? Rational(sign) : sign * b1.correlator(t);
    }
    return Behavior(rule.target, Space::WithMarginals, std::move(e));
}

QuantumConfig extend_config(const QuantumConfig& c1, const ExtensionRule& rule) {
    rule.validate();
    if (c1.parties != rule.base.parties || c1.settings != rule.base.settings)
        throw DimensionMismatch("extend_config: configuration is not in the base scenario");
    if (rule.target.parties != rule.base.parties)
        throw InvalidArgument("extend_config: added parties need a state");
    QuantumConfig out = c1;
    out.settings = rule.target.settings;
    for (int k = 0; k < out.parties; ++k) {
        out.observables[k].resize(out.settings);
        for (int x = rule.base.settings + 1; x <= rule.target.settings; ++x) {
            const auto& s = rule.sources[k][x - 1];
            if (s.kind == SettingSource::Kind::Trivial)
                out.observables[k][x - 1] = pauli::identity();
            else
                out.observables[k][x - 1] = (s.flip ? -1.0 : 1.0) * c1.observables[k][s.setting - 1];
        }
    }
    return out;
}

std::vector<Behavior> saturating_behaviors(const SymmetricInequality& ineq, const HybridModel& model) {
    if (!(ineq.scenario() == model.scenario())) throw DimensionMismatch("saturating_behaviors: scenario mismatch");
    const SymmetricInequality in = ineq.space() == model.space() ? ineq : ineq.in_space(model.space());
    const auto values = vertex_values(in, model);
    std::vector<Behavior> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0) throw InvalidArgument("saturating_behaviors: inequality is violated by a model vertex");
        if (values[i] == 0) out.push_back(model.behavior(i));
    }
    if (out.empty()) throw InvalidArgument("saturating_behaviors: no vertex saturates the inequality (bound not tight)");
    return out;
}

SymmetricInequality reduce_inequality(const SymmetricInequality& b2, const ExtensionRule& rule) {
    rule.validate();
    if (!(b2.scenario() == rule.target)) throw DimensionMismatch("reduce_inequality: inequality is not in the target scenario");
    if (b2.space() == Space::Probability) throw InvalidArgument("reduce_inequality: correlator inequality expected");
    const auto coeffs = expand_symmetric(b2);
    const Scenario& s1 = rule.base;
    std::vector<Rational> reduced(space_dimension(s1, Space::WithMarginals));
    Rational constant = b2.constant();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        const auto [t, sign] = rule.substitute(tuple_at(b2.scenario(), b2.space(), i));
        bool trivial = true;
        for (int x : t) trivial = trivial && x == 0;
        if (trivial)
            constant += sign * coeffs[i];
        else
            reduced[tuple_index(s1, Space::WithMarginals, t)] += sign * coeffs[i];
    }
    const MultisetIndex index(s1, Space::WithMarginals);
    std::vector<std::optional<Rational>> by_class(index.size());
    const auto& classes = index.tuple_classes();
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        auto& c = by_class[classes[i]];
        if (!c)
            c = reduced[i];
        else if (*c != reduced[i])
            throw InvalidArgument("reduce_inequality: reduced inequality is not party symmetric");
    }
    std::vector<Rational> out(index.size());
    bool marginals = false;
    for (std::size_t mu = 0; mu < index.size(); ++mu) {
        out[mu] = *by_class[mu];
        marginals = marginals || (!index.is_full_body(mu) && out[mu] != 0);
    }
    SymmetricInequality result(s1, Space::WithMarginals, constant, std::move(out));
    return marginals ? result : result.in_space(Space::FullCorrelation);
}

}  // namespace nld
