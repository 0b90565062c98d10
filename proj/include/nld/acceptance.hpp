#pragma once

#include "nld/cpt.hpp"
#include "nld/quantum.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace nld {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string summary;               ///< one line
    std::vector<std::string> details;  ///< per-item lines, printed indented
    double seconds = 0;
};

struct AcceptanceOptions {
    int jobs = 1;
    std::uint64_t seed = 1;
    int generalization_seeds = 100;
    int seesaw_restarts = 8;
};

/// Runs the acceptance criteria. Catalogs and robustness results are computed once and
/// shared between criteria.
class AcceptanceSuite {
public:
    explicit AcceptanceSuite(AcceptanceOptions options = {});

    CriterionResult catalog_counts();   // 1
    CriterionResult svetlichny();       // 2
    CriterionResult robustness();       // 3
    CriterionResult family();           // 4
    CriterionResult states();           // 5
    CriterionResult generalizations();  // 6
    CriterionResult properties();       // 7

    std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {});

    const std::vector<CatalogEntry>& catalog(int n, const CardinalityTuple& h);
    const std::vector<CriticalInterval>& intervals(int n, const CardinalityTuple& h);

private:
    AcceptanceOptions options_;
    std::map<std::pair<int, CardinalityTuple>, std::vector<CatalogEntry>> catalogs_;
    std::map<std::pair<int, CardinalityTuple>, std::vector<CriticalInterval>> intervals_;
};

/// "PASS [1] title: summary (1.2 s)"
std::string format_result(const CriterionResult& r);

}  // namespace nld
