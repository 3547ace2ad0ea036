// Acceptance gate: one pass/fail line per shipped guarantee.
//
//   acceptance [--only N]... [--threads N]
//
// --only restricts the run to the listed criterion numbers (1-based, in the
// canonical order reported by the library); --threads caps the worker count
// (0 = hardware concurrency). Exit status 0 iff every executed criterion
// passed.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "lambdasim/checks.hpp"

namespace {

int parse_int_arg(const char* flag, const char* value) {
    if (value == nullptr) {
        std::fprintf(stderr, "error: %s expects an integer argument\n", flag);
        std::exit(2);
    }
    char* end = nullptr;
    const long v = std::strtol(value, &end, 10);
    if (end == value || *end != '\0') {
        std::fprintf(stderr, "error: %s expects an integer, got '%s'\n", flag, value);
        std::exit(2);
    }
    return static_cast<int>(v);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> only;
    int threads = 0;

    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0) {
            only.push_back(parse_int_arg("--only", i + 1 < argc ? argv[i + 1] : nullptr));
            ++i;
        } else if (std::strcmp(argv[i], "--threads") == 0) {
            threads = parse_int_arg("--threads", i + 1 < argc ? argv[i + 1] : nullptr);
            ++i;
        } else {
            std::fprintf(stderr, "usage: %s [--only N]... [--threads N]\n", argv[0]);
            return 2;
        }
    }

    int passed = 0, failed = 0;
    const auto report = [&](const lambdasim::checks::CheckResult& r) {
        (r.pass ? passed : failed) += 1;
        std::printf("[%s] %s (%.2f s): %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.elapsed_s, r.detail.c_str());
        std::fflush(stdout);
    };

    lambdasim::checks::run_acceptance(only, threads, report);

    std::printf("%d passed, %d failed\n", passed, failed);
    return failed == 0 ? 0 : 1;
}
