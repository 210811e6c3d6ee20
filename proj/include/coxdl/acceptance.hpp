#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coxdl {

struct AcceptOptions {
    bool full = true;          // quick profile trims sample sizes only
    unsigned threads = 1;
    std::string cache_dir;     // empty: no persistent cache
    std::uint64_t seed = 20240501;
    std::vector<int> only;     // empty: all criteria
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string note;                 // shown on the summary line when set
    std::vector<std::string> lines;   // one per checked item
    double seconds = 0;
};

std::vector<CriterionResult> run_acceptance(const AcceptOptions& opt);

}  // namespace coxdl
