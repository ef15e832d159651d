#pragma once

#include <set>

#include "lpt/sweep.hpp"

namespace lpt {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double runtime_s = 0.0;
    nlohmann::json details;  // measured values backing the verdict
};

struct VerifyOptions {
    std::set<int> criteria;  // empty: run all 10
    int threads = 0;
    /// Negative control: flips the sign of L1 in the perturbative splits.
    /// Exact references are assembly independent, so a healthy suite must
    /// catch the injected error.
    bool mutate_l1_sign = false;
};

/// Runs the acceptance criteria and returns one result per criterion, in id
/// order. Failures are results, not exceptions.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& options = {});

/// Machine-readable report: one entry per criterion.
nlohmann::json to_report(const std::vector<CriterionResult>& results);

}  // namespace lpt
