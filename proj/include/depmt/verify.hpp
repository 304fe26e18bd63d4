#ifndef DEPMT_VERIFY_HPP_
#define DEPMT_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace depmt {

// Outcome of one oracle-comparison suite.
struct VerifyReport {
  std::string suite;
  int cases = 0;
  double max_deviation = 0.0;
  bool ok = false;
  std::vector<std::string> notes;
};

inline constexpr double kVerifyTolerance = 1e-9;

// score_sentence against the brute-force sentence oracle over every short
// string of a random normalized model.
VerifyReport verify_lm(std::uint64_t seed);

// score_translation against the brute-force transfer oracle on random
// instances, scoring both generated targets and perturbed ones.
VerifyReport verify_transfer(std::uint64_t seed);

// decode marginals (and the max-mode argmax) against the brute-force
// chain oracle on the bundled toy corpus.
VerifyReport verify_decode(std::uint64_t seed);

}  // namespace depmt

#endif  // DEPMT_VERIFY_HPP_
