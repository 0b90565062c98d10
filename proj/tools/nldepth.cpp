// nldepth: facet catalogs, bounds, noise robustness, the F_n family and generalizations.
#include "nld/acceptance.hpp"
#include "nld/errors.hpp"
#include "nld/family.hpp"
#include "nld/generalize.hpp"
#include "nld/json_io.hpp"
#include "nld/lp.hpp"
#include "nld/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

using nlohmann::json;
using namespace nld;

namespace {

enum ExitCode {
    kOk = 0,
    kOther = 1,
    kUsage = 2,
    kParse = 3,
    kIo = 4,
    kCap = 5,
    kInvalid = 6,
    kDimension = 7,
    kLp = 8,
    kNotFull = 9,
    kVerifyFailed = 10,
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Globals {
    int jobs = 1;
    std::uint64_t seed = 1;
    std::string out;
    std::string command_line;
};

/// Reproduction record embedded in every output.
class RunManifest {
public:
    RunManifest(const Globals& g, std::string subcommand)
        : j_{{"command", g.command_line}, {"subcommand", std::move(subcommand)}, {"started", utc_now()},
             {"seeds", {g.seed}}, {"jobs", g.jobs}, {"inputs", json::array()}} {}

    void set(const std::string& key, json value) { j_[key] = std::move(value); }
    void add_input(const std::string& path, const std::string& content) {
        j_["inputs"].push_back({{"path", path}, {"sha256", sha256_hex(content)}});
    }
    /// Stamps the finish time and the hash of the payload (everything but the manifest).
    json finish(const std::string& payload) {
        j_["finished"] = utc_now();
        j_["content_sha256"] = sha256_hex(payload);
        return j_;
    }

private:
    json j_;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(g.out, std::ios::binary);
    if (!os) throw IoError("cannot write " + g.out);
    os << text;
    if (!text.empty() && text.back() != '\n') os << '\n';
}

void emit_json(const Globals& g, json payload, RunManifest& manifest) {
    json out = json::object();
    out["manifest"] = manifest.finish(payload.dump());
    out.update(payload);
    emit(g, out.dump(2));
}

std::string text_manifest(RunManifest& manifest, const std::string& body) {
    std::string s;
    std::istringstream lines(manifest.finish(body).dump(2));
    for (std::string line; std::getline(lines, line);) s += "# " + line + "\n";
    return s + body;
}

/// Inequality records from a catalog file ({"inequalities": [...]}), a single inequality
/// object, or plain text with one inequality per line.
std::vector<InequalityRecord> load_records(const std::string& path, RunManifest& manifest) {
    const std::string content = read_file(path);
    manifest.add_input(path, content);
    std::vector<InequalityRecord> out;
    json j = json::parse(content, nullptr, false);
    if (!j.is_discarded()) {
        const std::string model = j.value("model", std::string());
        if (j.is_object() && j.contains("inequalities")) {
            for (const auto& e : j["inequalities"]) {
                auto r = record_from_json(e);
                if (r.model.empty()) r.model = model;
                out.push_back(std::move(r));
            }
        } else if (j.is_array()) {
            for (const auto& e : j) out.push_back(record_from_json(e));
        } else {
            out.push_back(record_from_json(j));
        }
        return out;
    }
    std::istringstream lines(content);
    for (std::string line; std::getline(lines, line);) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back({parse_inequality(line), {}, {}});
    }
    if (out.empty()) throw ParseError(path + ": no inequalities");
    return out;
}

std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const int n = std::stoi(text);
            return {n, n};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::logic_error&) {
        throw ParseError("bad range '" + text + "', expected N or A..B");
    }
}

std::string model_label(const std::string& text) {
    return to_string(parse_cardinality_tuple(text));
}

// ---- facets ----

struct FacetsArgs {
    int n = 4;
    std::string model;
    std::string format = "json";
    bool lift = true;
    std::string convention = "trivial-setting";
};

int run_facets(const Globals& g, const FacetsArgs& a) {
    RunManifest manifest(g, "facets");
    const auto h = parse_cardinality_tuple(a.model);
    validate_cardinality_tuple(a.n, h);
    FacetOptions opts;
    opts.compute_lift = a.lift;
    opts.model.jobs = g.jobs;
    opts.model.convention = parse_convention(a.convention);
    const auto catalog = enumerate_facets(Scenario(a.n, 2), h, opts);
    manifest.set("scenario", {{"n", a.n}, {"m", 2}});
    manifest.set("model", to_string(h));
    manifest.set("convention", a.convention);

    if (a.format == "text") {
        std::ostringstream os;
        os << to_string(h) << " model, " << a.n << " parties: " << catalog.size() << " inequalities\n";
        for (std::size_t i = 0; i < catalog.size(); ++i)
            os << i + 1 << ": " << catalog[i].inequality.to_text() << " >= 0\n";
        emit(g, text_manifest(manifest, os.str()));
        return kOk;
    }
    json list = json::array();
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const auto& e = catalog[i];
        InequalityRecord rec{e.inequality, {}, to_string(h)};
        rec.bounds.classical = e.inequality.constant();
        json r = to_json(rec);
        r["index"] = i + 1;
        r["orbit_size"] = e.orbit_size;
        r["projected_rank"] = e.projected_rank;
        r["projected_dim"] = e.projected_dim;
        if (e.lift)
            r["lift"] = {{"facet", e.lift->facet}, {"rank", e.lift->rank}, {"needed", e.lift->needed},
                         {"saturating", e.lift->saturating}};
        list.push_back(std::move(r));
    }
    emit_json(g, {{"model", to_string(h)}, {"n", a.n}, {"count", catalog.size()}, {"inequalities", std::move(list)}},
              manifest);
    return kOk;
}

// ---- bounds ----

struct BoundsArgs {
    std::string in;
    std::string model;
    std::string convention = "trivial-setting";
    int restarts = 20;
    bool full_ns = false;
};

int run_bounds(const Globals& g, const BoundsArgs& a) {
    RunManifest manifest(g, "bounds");
    auto records = load_records(a.in, manifest);
    ModelOptions mo;
    mo.jobs = g.jobs;
    mo.convention = parse_convention(a.convention);
    std::map<std::string, std::shared_ptr<HybridModel>> models;
    for (auto& r : records) {
        const std::string label = a.model.empty() ? r.model : model_label(a.model);
        if (!label.empty()) {
            const auto h = parse_cardinality_tuple(label);
            const auto& s = r.inequality.scenario();
            auto& m = models[label + " " + std::to_string(s.parties) + " " + std::to_string(s.settings) + " " +
                             std::string(to_string(r.inequality.space()))];
            if (!m)
                m = std::make_shared<HybridModel>(
                    extremal_behaviors(r.inequality.scenario(), h, r.inequality.space(), mo));
            r.model = label;
            r.bounds.classical = classical_bound(r.inequality, *m);
        }
        r.bounds.nosignaling = a.full_ns ? nosignaling_bound_full(r.inequality) : nosignaling_bound(r.inequality);
    }
    std::vector<double> q(records.size());
    parallel_for(records.size(), g.jobs, [&](std::size_t i) {
        SeesawOptions so;
        so.restarts = a.restarts;
        so.seed = g.seed + i;
        q[i] = seesaw_max(records[i].inequality, std::nullopt, so).value;
    });
    json list = json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].bounds.quantum_lb = q[i];
        list.push_back(to_json(records[i]));
    }
    manifest.set("tolerances", {{"seesaw_tol", SeesawOptions{}.tol}, {"restarts", a.restarts}});
    emit_json(g, {{"inequalities", std::move(list)}}, manifest);
    return kOk;
}

// ---- robustness ----

struct RobustnessArgs {
    std::string in;
    int grid = 21;
    double threshold = 1e-6;
    double width = 1e-4;
    int restarts = 20;
    std::string csv;
    std::string format = "json";
};

int run_robustness(const Globals& g, const RobustnessArgs& a) {
    RunManifest manifest(g, "robustness");
    const auto records = load_records(a.in, manifest);
    RobustnessOptions ro;
    ro.grid = a.grid;
    ro.threshold = a.threshold;
    ro.width = a.width;
    ro.seesaw.restarts = a.restarts;
    ro.seesaw.seed = g.seed;
    std::vector<CriticalInterval> iv(records.size());
    parallel_for(records.size(), g.jobs, [&](std::size_t i) { iv[i] = critical_interval(records[i].inequality, ro); });
    manifest.set("tolerances", {{"grid", a.grid}, {"threshold", a.threshold}, {"width", a.width}, {"restarts", a.restarts}});

    if (!a.csv.empty()) {
        std::ofstream os(a.csv);
        if (!os) throw IoError("cannot write " + a.csv);
        os << "index,p,violation\n" << std::setprecision(12);
        for (std::size_t i = 0; i < iv.size(); ++i)
            for (const auto& [p, v] : iv[i].samples) os << i + 1 << ',' << p << ',' << v << '\n';
    }
    if (a.format == "text") {
        std::ostringstream os;
        os << std::fixed << std::setprecision(6);
        for (std::size_t i = 0; i < iv.size(); ++i) {
            os << i + 1 << ": ";
            if (iv[i].empty)
                os << "empty";
            else
                os << "[" << iv[i].p0 << ", " << iv[i].p1 << "]";
            os << "  " << records[i].inequality.to_text() << '\n';
        }
        emit(g, text_manifest(manifest, os.str()));
        return kOk;
    }
    json list = json::array();
    for (std::size_t i = 0; i < iv.size(); ++i) {
        json r = to_json(records[i].inequality);
        if (iv[i].empty)
            r["interval"] = "empty";
        else
            r["interval"] = {iv[i].p0, iv[i].p1};
        r["reruns"] = iv[i].reruns;
        list.push_back(std::move(r));
    }
    emit_json(g, {{"inequalities", std::move(list)}}, manifest);
    return kOk;
}

// ---- family ----

struct FamilyArgs {
    std::string n = "3..8";
    int verify_up_to = 16;
    std::string format = "text";
};

int run_family(const Globals& g, const FamilyArgs& a) {
    RunManifest manifest(g, "family");
    const auto [lo, hi] = parse_range(a.n);
    if (lo < 3 || hi < lo) throw InvalidArgument("family: need 3 <= n, got " + a.n);
    RobustnessOptions ro;
    ro.seesaw.seed = g.seed;
    ro.seesaw.jobs = g.jobs;
    json rows = json::array();
    std::ostringstream os;
    os << std::setw(3) << "n" << std::setw(12) << "classical" << std::setw(22) << "(k,m) verified" << std::setw(18)
       << "quantum" << std::setw(12) << "threshold" << '\n';
    for (int n = lo; n <= hi; ++n) {
        const auto f = family_inequality(n);
        // bound checked over all splits with k, m >= 2
        bool verified = true;
        for (int k = 2; n - k >= 2; ++k) verified = verified && gamma_bound(k, n - k) == f.bound;
        std::string range = n < 4 ? "none (n < 4)" : n > a.verify_up_to ? "skipped" : verified ? "all k,m>=2" : "FAILED";
        json row = {{"n", n}, {"classical", f.bound}, {"verified", range}};
        os << std::setw(3) << n << std::setw(12) << f.bound << std::setw(22) << range;
        if (n <= 8) {
            const double q = family_quantum(n).value;
            row["quantum"] = q;
            os << std::setw(18) << std::fixed << std::setprecision(9) << q;
        } else {
            os << std::setw(18) << "-";
        }
        if (n <= 8) {
            const auto ci = critical_interval(f.inequality(), ro);
            if (ci.empty) {
                row["threshold"] = "empty";
                os << std::setw(12) << "empty";
            } else {
                row["threshold"] = ci.p0;
                os << std::setw(12) << std::setprecision(6) << ci.p0;
            }
        }
        os << '\n';
        rows.push_back(std::move(row));
    }
    if (a.format == "json")
        emit_json(g, {{"family", std::move(rows)}}, manifest);
    else
        emit(g, text_manifest(manifest, os.str()));
    return kOk;
}

// ---- generalize ----

struct GeneralizeArgs {
    std::string base = "svetlichny";
    std::string rule;
    std::string model = "2,1";
    int settings = 0;
    bool full_space = false;
    std::string convention = std::string(to_string(kGeneralizationConvention));
};

int run_generalize(const Globals& g, const GeneralizeArgs& a) {
    RunManifest manifest(g, "generalize");
    SymmetricInequality base = parse_inequality("+4 + (111) - (112) - (122) + (222)");
    if (a.base != "svetlichny") {
        const auto recs = load_records(a.base, manifest);
        if (recs.size() != 1) throw InvalidArgument("generalize: base file must hold exactly one inequality");
        base = recs.front().inequality;
    }
    const Scenario s1 = base.scenario();
    const Scenario s2(s1.parties, a.settings ? a.settings : s1.settings + 1);
    const auto rule = parse_extension_rule(a.rule, s1, s2);
    const auto h = parse_cardinality_tuple(a.model);
    ModelOptions mo;
    mo.convention = parse_convention(a.convention);
    mo.jobs = g.jobs;
    const auto model = std::make_shared<const HybridModel>(extremal_behaviors(s2, h, Space::WithMarginals, mo));
    const GeneralizationLp lp(base, rule, model, !a.full_space);
    const auto res = lp.solve(random_direction(lp.dimension(), g.seed));
    manifest.set("scenario", {{"n", s2.parties}, {"m", s2.settings}});
    manifest.set("model", to_string(h));
    manifest.set("rule", rule.to_string());
    manifest.set("convention", a.convention);
    manifest.set("symmetric", !a.full_space);

    json out = {{"base", to_json(base)}, {"rule", rule.to_string()}, {"rounds", res.rounds}, {"columns", res.columns}};
    if (res.inequality) {
        InequalityRecord rec{*res.inequality, {}, to_string(h)};
        rec.bounds.classical = res.inequality->constant();
        out["inequality"] = to_json(rec);
        out["canonical"] = canonicalize(*res.inequality).to_text();
        try {
            out["reduced"] = reduce_inequality(*res.inequality, rule).to_text();
        } catch (const InvalidArgument& e) {
            out["reduced"] = nullptr;
        }
    } else {
        json c = json::array();
        for (const auto& v : res.tuple_coefficients) c.push_back(to_string(v));
        out["constant"] = to_string(res.constant);
        out["tuple_coefficients"] = std::move(c);
    }
    emit_json(g, out, manifest);
    return kOk;
}

// ---- verify ----

struct VerifyArgs {
    bool all = false;
    std::vector<int> only;
    int generalization_seeds = 100;
    bool verbose = false;
};

int run_verify(const Globals& g, const VerifyArgs& a) {
    if (!a.all && a.only.empty()) throw InvalidArgument("verify: pass --all or --only");
    AcceptanceOptions opts;
    opts.jobs = g.jobs;
    opts.seed = g.seed;
    opts.generalization_seeds = a.generalization_seeds;
    AcceptanceSuite suite(opts);
    using Fn = CriterionResult (AcceptanceSuite::*)();
    const Fn fns[] = {&AcceptanceSuite::catalog_counts, &AcceptanceSuite::svetlichny, &AcceptanceSuite::robustness,
                      &AcceptanceSuite::family,         &AcceptanceSuite::states,     &AcceptanceSuite::generalizations,
                      &AcceptanceSuite::properties};
    int failed = 0;
    for (int id = 1; id <= 7; ++id) {
        if (!a.all && std::find(a.only.begin(), a.only.end(), id) == a.only.end()) continue;
        const auto r = (suite.*fns[id - 1])();
        std::cout << format_result(r) << std::endl;
        if (a.verbose || !r.passed)
            for (const auto& d : r.details) std::cout << "    " << d << '\n';
        failed += !r.passed;
    }
    return failed ? kVerifyFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocality depth: hybrid-model Bell inequalities"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    for (int i = 0; i < argc; ++i) g.command_line += (i ? " " : "") + std::string(argv[i]);
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "seed for every stochastic stage");
    app.add_option("-o,--out", g.out, "output file (default stdout)");

    FacetsArgs fa;
    auto* facets = app.add_subcommand("facets", "enumerate symmetric facet inequalities of a hybrid model");
    facets->add_option("--n", fa.n, "number of parties")->required()->check(CLI::Range(2, 8));
    facets->add_option("--model", fa.model, "cardinality tuple, e.g. 2,2,1")->required();
    facets->add_option("--format", fa.format)->check(CLI::IsMember({"json", "text"}));
    facets->add_option("--convention", fa.convention)
        ->check(CLI::IsMember({"uniform-average", "partner-setting-one", "trivial-setting"}));
    facets->add_flag("!--no-lift", fa.lift, "skip the full-space facet certificate");

    BoundsArgs ba;
    auto* bounds = app.add_subcommand("bounds", "classical, no-signaling and seesaw bounds");
    bounds->add_option("--in", ba.in, "inequality or catalog file")->required();
    bounds->add_option("--model", ba.model, "model for the classical bound (default: from the file)");
    bounds->add_option("--convention", ba.convention)
        ->check(CLI::IsMember({"uniform-average", "partner-setting-one", "trivial-setting"}));
    bounds->add_option("--restarts", ba.restarts)->check(CLI::PositiveNumber);
    bounds->add_flag("--full-ns", ba.full_ns, "solve the no-signaling LP over full probability tables");

    RobustnessArgs ra;
    auto* robustness = app.add_subcommand("robustness", "critical noise interval against a noisy GHZ state");
    robustness->add_option("--in", ra.in, "inequality or catalog file")->required();
    robustness->add_option("--grid", ra.grid)->check(CLI::Range(3, 100001));
    robustness->add_option("--threshold", ra.threshold)->check(CLI::PositiveNumber);
    robustness->add_option("--width", ra.width)->check(CLI::PositiveNumber);
    robustness->add_option("--restarts", ra.restarts)->check(CLI::PositiveNumber);
    robustness->add_option("--csv", ra.csv, "write (p, violation) samples here");
    robustness->add_option("--format", ra.format)->check(CLI::IsMember({"json", "text"}));

    FamilyArgs fma;
    auto* family = app.add_subcommand("family", "table for the F_n family");
    family->add_option("--n", fma.n, "N or A..B");
    family->add_option("--format", fma.format)->check(CLI::IsMember({"json", "text"}));

    GeneralizeArgs ga;
    auto* generalize = app.add_subcommand("generalize", "extend an inequality to more settings by LP");
    generalize->add_option("--base", ga.base, "'svetlichny' or an inequality file");
    generalize->add_option("--rule", ga.rule, "e.g. A3=1,B3=1,C3=1 or A3=A1,B3=B1,C3=C1")->required();
    generalize->add_option("--model", ga.model, "cardinality tuple of the target model");
    generalize->add_option("--settings", ga.settings, "target settings (default base + 1)");
    generalize->add_option("--convention", ga.convention)
        ->check(CLI::IsMember({"uniform-average", "partner-setting-one", "trivial-setting"}));
    generalize->add_flag("--full-space", ga.full_space, "solve over all coefficients, not only symmetric ones");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    verify->add_flag("--all", va.all);
    verify->add_option("--only", va.only, "criterion ids")->check(CLI::Range(1, 7));
    verify->add_option("--generalization-seeds", va.generalization_seeds)->check(CLI::PositiveNumber);
    verify->add_flag("-v,--verbose", va.verbose);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*facets) return run_facets(g, fa);
        if (*bounds) return run_bounds(g, ba);
        if (*robustness) return run_robustness(g, ra);
        if (*family) return run_family(g, fma);
        if (*generalize) return run_generalize(g, ga);
        if (*verify) return run_verify(g, va);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return kCap;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kInvalid;
    } catch (const DimensionMismatch& e) {
        std::cerr << "dimension mismatch: " << e.what() << '\n';
        return kDimension;
    } catch (const LpError& e) {
        std::cerr << "lp error: " << e.what() << '\n';
        return kLp;
    } catch (const NotFullDimensional& e) {
        std::cerr << "not full-dimensional: " << e.what() << '\n';
        return kNotFull;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kUsage;
}
