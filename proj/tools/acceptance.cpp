// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
#include "nld/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"nonlocality depth acceptance run"};
    nld::AcceptanceOptions opts;
    bool strict = false, verbose = false;
    std::vector<int> only;
    app.add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", opts.seed, "base seed");
    app.add_option("--generalization-seeds", opts.generalization_seeds, "LP directions per rule")->check(CLI::PositiveNumber);
    app.add_option("--only", only, "criterion ids to run")->check(CLI::Range(1, 7));
    app.add_flag("--strict", strict, "exit 1 if any criterion fails");
    app.add_flag("-v,--verbose", verbose, "print per-item details");
    CLI11_PARSE(app, argc, argv);

    nld::AcceptanceSuite suite(opts);
    using Fn = nld::CriterionResult (nld::AcceptanceSuite::*)();
    const Fn fns[] = {&nld::AcceptanceSuite::catalog_counts, &nld::AcceptanceSuite::svetlichny,
                      &nld::AcceptanceSuite::robustness,     &nld::AcceptanceSuite::family,
                      &nld::AcceptanceSuite::states,         &nld::AcceptanceSuite::generalizations,
                      &nld::AcceptanceSuite::properties};
    int failed = 0;
    for (int id = 1; id <= 7; ++id) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        nld::CriterionResult r;
        try {
            r = (suite.*fns[id - 1])();
        } catch (const std::exception& e) {
            r.id = id;
            r.title = "criterion " + std::to_string(id);
            r.summary = std::string("error: ") + e.what();
        }
        std::cout << nld::format_result(r) << std::endl;
        if (verbose || !r.passed)
            for (const auto& d : r.details) std::cout << "    " << d << '\n';
        failed += !r.passed;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << '\n';
    return strict && failed ? 1 : 0;
}
