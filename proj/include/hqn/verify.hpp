#pragma once

#include <string>
#include <vector>

namespace hqn {

// One measured quantity against its bound. `relation` is "<", "<=" or ">".
struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    std::string relation = "<";
    bool pass = false;
};

Check make_check(std::string name, double value, double bound, std::string relation = "<");

struct SuiteResult {
    std::string suite;
    int n = 2;
    std::vector<Check> checks;
    bool pass() const;
};

// group, reduction, killing, minimality, growth, family, foliation, explicit.
const std::vector<std::string>& suite_names();

// Runs one suite (or "all") in dimension n. Throws DomainError for an unknown suite.
std::vector<SuiteResult> run_suites(const std::string& suite, int n, unsigned threads = 0);
SuiteResult run_suite(const std::string& suite, int n, unsigned threads = 0);

}  // namespace hqn
