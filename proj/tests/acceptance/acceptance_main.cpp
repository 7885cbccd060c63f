// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <exception>
#include <string>

#include "criteria.hpp"

int main(int argc, char** argv) {
  using namespace romanlens::acceptance;
  const std::string only = argc > 1 ? argv[1] : "";
  int failures = 0;
  for (const auto& c : all_criteria()) {
    if (!only.empty() && c.name.find(only) == std::string::npos) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds >= c.budget_seconds) {
      outcome.pass = false;
      outcome.detail += "; over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget";
    }
    std::printf("%s  %-28s %7.2fs  %s\n", outcome.pass ? "PASS" : "FAIL", c.name.c_str(), seconds,
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
