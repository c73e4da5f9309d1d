#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace honeylat {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Run the numbered verification criteria (empty list = all); prints one
/// pass/fail line per criterion to os. Returns true when every selected
/// criterion passes.
bool run_acceptance(const std::vector<int>& which, std::ostream& os,
                    std::vector<CriterionResult>* results = nullptr);

}  // namespace honeylat
