#include <chrono>
#include <cstdio>
#include <exception>

#include "criteria.hpp"

namespace {

struct Criterion {
    int id;
    const char* name;
    acceptance::Verdict (*check)();
};

constexpr Criterion kCriteria[] = {
    {1, "mgf identity", acceptance::mgf_identity},
    {2, "conditional transform", acceptance::conditional_transform},
    {3, "laplace round trip", acceptance::laplace_round_trip},
    {4, "trivariate density", acceptance::trivariate_density},
    {5, "filter correctness", acceptance::filter_correctness},
    {6, "complete-market reductions", acceptance::complete_market},
    {7, "indifference-price structure", acceptance::indifference_structure},
    {8, "cumulants", acceptance::cumulant_checks},
    {9, "determinism", acceptance::determinism},
};

}  // namespace

int main() {
    int failures = 0;
    for (const auto& c : kCriteria) {
        const auto start = std::chrono::steady_clock::now();
        acceptance::Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s [%d] %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    v.detail.c_str());
        std::fflush(stdout);
        if (!v.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
