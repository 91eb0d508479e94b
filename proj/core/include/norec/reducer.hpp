#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>

#include "norec/testcase.hpp"

namespace norec {

class NotReproducible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReduceOptions {
  size_t maxReplays = 5000;
  std::chrono::milliseconds maxTime{60000};
};

struct ReduceStats {
  size_t replays = 0;
  size_t rounds = 0;
  size_t accepted = 0;
  bool budgetExhausted = false;
};

// Size measure the reducer minimizes: rendered text length, then the number
// of constants outside {NULL, 0, 1, '', 'a'}.
struct ReduceCost {
  size_t length = 0;
  size_t oddConstants = 0;
  bool operator<(const ReduceCost& o) const {
    return length != o.length ? length < o.length : oddConstants < o.oddConstants;
  }
};
ReduceCost testcase_cost(const TestCase& tc);
std::string render_testcase(const TestCase& tc);

// Shrinks `tc` while it keeps reproducing its verdict class on fresh
// executors. Throws NotReproducible when the initial replay does not
// reproduce. Returns a partial result when the budget runs out.
TestCase reduce(const TestCase& tc, const ExecutorFactory& factory, ReduceOptions options = {},
                ReduceStats* stats = nullptr);

}  // namespace norec
