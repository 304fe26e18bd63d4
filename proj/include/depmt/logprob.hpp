#ifndef DEPMT_LOGPROB_HPP_
#define DEPMT_LOGPROB_HPP_

#include <cmath>
#include <limits>

namespace depmt {

// Probabilities are accumulated in log space; zero is represented as -inf.

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline double log_from_prob(double p) { return p > 0.0 ? std::log(p) : kLogZero; }

inline double prob_from_log(double lp) {
  return lp == kLogZero ? 0.0 : std::exp(lp);
}

// log(e^a + e^b), stable for widely separated magnitudes.
inline double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

}  // namespace depmt

#endif  // DEPMT_LOGPROB_HPP_
