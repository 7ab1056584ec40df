#pragma once

#include <stdexcept>
#include <string>

namespace wilcfar {

// A reference window that cannot support estimation: zero variance,
// nonpositive samples where a positive-support model is required,
// everything trimmed away, or an empty post-truncation set.
class degenerate_reference_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative estimator failed to converge.
class fit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested exact distribution exceeds the configured support cap.
class resource_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wilcfar
