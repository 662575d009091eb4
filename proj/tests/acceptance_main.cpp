// Acceptance runner: prints one pass/fail line per criterion and exits nonzero
// when any criterion fails.  Optional arguments select criteria by number;
// --details lists every check.

#include "modelspace/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    std::vector<int> only;
    bool details = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--details") == 0) details = true;
        else only.push_back(std::stoi(argv[i]));
    }
    const auto start = std::chrono::steady_clock::now();
    int failed = 0;
    for (int id = 1; id <= modelspace::kCriteriaCount; ++id) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto r = modelspace::run_criterion(id);
        std::cout << modelspace::format_result(r) << "\n";
        if (details) std::cout << modelspace::format_details(r);
        std::cout.flush();
        if (!r.passed()) ++failed;
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d failed; total %.1f s\n", failed, total);
    return failed == 0 ? 0 : 1;
}
