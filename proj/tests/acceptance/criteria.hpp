#pragma once

#include <string>
#include <vector>

namespace romanlens::acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;  // 0 means no runtime bound
  Outcome (*run)();
};

Outcome formula_oracles();
Outcome rassi_rope_fixture();
Outcome fast_swift_fixture();
Outcome structural_patching();
Outcome lens_consistency();
Outcome prompt_blocks();
Outcome end_to_end_smoke();
Outcome romanizer_round_trip();

const std::vector<Criterion>& all_criteria();

}  // namespace romanlens::acceptance
