#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hqn/verify.hpp"

using hqn::Check;
using hqn::SuiteResult;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::vector<std::pair<std::string, int>> suites;  // (suite, n)
    std::function<bool(const std::string&)> select;
};

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

const SuiteResult& cached(const std::string& suite, int n) {
    static std::map<std::pair<std::string, int>, SuiteResult> cache;
    auto key = std::make_pair(suite, n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, hqn::run_suite(suite, n)).first;
    return it->second;
}

}  // namespace

int main() {
    const auto all = [](const std::string&) { return true; };
    const std::vector<Criterion> criteria = {
        {1, "group and chart core", {{"group", 2}, {"group", 3}}, all},
        {2, "reduced equation vs orbital data", {{"reduction", 2}, {"reduction", 3}}, all},
        {3, "Killing volume ratio constancy", {{"killing", 2}}, all},
        {4, "mean curvature of bisector, fan, horosphere", {{"minimality", 2}}, all},
        {5, "elliptic/loxodromic h=0 curves", {{"growth", 2}, {"growth", 3}}, all},
        {6, "special loxodromic family", {{"family", 2}}, all},
        {7, "parabolic limits and foliation certificate", {{"foliation", 2}},
         [](const std::string& s) { return s.rfind("parabolic n=2 m=1", 0) == 0; }},
        {8, "special parabolic first integral and terminal rho", {{"foliation", 2}},
         [](const std::string& s) { return s.rfind("special-parabolic", 0) == 0 && !contains(s, "fan"); }},
        {9, "fan lines stationary and invariant", {{"foliation", 2}},
         [](const std::string& s) { return contains(s, "fan"); }},
        {10, "explicit solutions", {{"explicit", 2}, {"explicit", 3}}, all},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::size_t count = 0;
        std::vector<std::string> bad;
        for (const auto& [suite, n] : c.suites) {
            for (const Check& k : cached(suite, n).checks) {
                if (!c.select(k.name)) continue;
                ++count;
                if (!k.pass) {
                    char buf[512];
                    std::snprintf(buf, sizeof buf, "%s n=%d: %s = %.3g (needs %s %.3g)", suite.c_str(), n,
                                  k.name.c_str(), k.value, k.relation.c_str(), k.bound);
                    bad.emplace_back(buf);
                }
            }
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = count > 0 && bad.empty();
        if (!pass) ++failed;
        std::printf("criterion %2d %s: %s (%zu checks, %.2fs)\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(), count,
                    secs);
        for (const auto& b : bad) std::printf("    failed: %s\n", b.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
