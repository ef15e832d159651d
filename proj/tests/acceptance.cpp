// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Criterion ids on the command line select
// a subset.
#include <cstdio>
#include <cstdlib>

#include "lpt/verify.hpp"

int main(int argc, char** argv) {
    lpt::VerifyOptions options;
    for (int i = 1; i < argc; ++i) options.criteria.insert(std::atoi(argv[i]));

    const auto results = lpt::run_acceptance(options);
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d (%s): %.1f s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.runtime_s);
        if (!r.pass) std::printf("        details: %s\n", r.details.dump().c_str());
        all_pass = all_pass && r.pass;
    }
    std::printf("%s\n", all_pass ? "acceptance: all criteria passed" : "acceptance: FAILURES");
    return all_pass ? 0 : 1;
}
