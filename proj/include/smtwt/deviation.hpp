#pragma once

#include <optional>
#include <string>

#include "smtwt/model.hpp"

namespace smtwt {

/// Raised when a run beats the registered optimum / best-known value.
class NewBestError : public Error {
 public:
  NewBestError(Cost found, Cost best)
      : Error(ErrorKind::invariant, "found cost " + std::to_string(found) + " beats registered best " +
                                        std::to_string(best)),
        found_(found),
        best_(best) {}

  Cost found() const noexcept { return found_; }
  Cost best() const noexcept { return best_; }

 private:
  Cost found_;
  Cost best_;
};

/// Percent gap of `found` above `best`. Undefined (nullopt) when best is 0
/// and found is not; such runs are tallied separately by callers.
inline std::optional<double> deviation(Cost found, Cost best) {
  if (found < 0 || best < 0) throw usage_error("deviation: costs must be nonnegative");
  if (found < best) throw NewBestError(found, best);
  if (best == 0) return found == 0 ? std::optional<double>(0.0) : std::nullopt;
  return 100.0 * static_cast<double>(found - best) / static_cast<double>(best);
}

}  // namespace smtwt
