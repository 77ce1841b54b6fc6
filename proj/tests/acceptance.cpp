#include "stadlab/study.hpp"
#include <cstdio>
int main() {
    const auto results = stadlab::acceptance("acceptance_out");
    bool all = true;
    for (const auto& r : results) {
        const char* status = !r.ran ? "NOT-RUN" : (r.passed ? "PASS" : "FAIL");
        all = all && r.ran && r.passed;
        std::printf("[%s] criterion %2d (%s): %s\n", status, r.id, r.name.c_str(), r.detail.c_str());
    }
    std::printf("acceptance: %s\n", all ? "ALL PASS" : "FAILURES PRESENT");
    return all ? 0 : 1;
}
