// One line per acceptance criterion; exit status is nonzero if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "coxdl/acceptance.hpp"

int main(int argc, char** argv) {
    coxdl::AcceptOptions opt;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--quick") opt.full = false;
        else if (a == "--verbose") continue;
        else opt.only.push_back(std::atoi(a.c_str()));
    }
    bool verbose = false;
    for (int i = 1; i < argc; ++i) verbose = verbose || std::string(argv[i]) == "--verbose";
    if (const char* t = std::getenv("COXDL_THREADS")) opt.threads = unsigned(std::atoi(t));
    bool all = true;
    for (auto& r : coxdl::run_acceptance(opt)) {
        all = all && r.pass;
        std::printf("[%s] criterion %2d: %s%s%s%s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                    r.note.empty() ? "" : " (", r.note.c_str(), r.note.empty() ? "" : ")", r.seconds);
        if (verbose || !r.pass)
            for (auto& l : r.lines) std::printf("         %s\n", l.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
