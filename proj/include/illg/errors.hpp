#pragma once

#include <stdexcept>
#include <string>

namespace illg {

// Field or parameter configuration outside the regime the closed forms cover.
class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// mu above a validity threshold; carries the threshold that was exceeded.
class ThresholdExceeded : public std::domain_error {
 public:
  ThresholdExceeded(const std::string& what, double mu, double threshold)
      : std::domain_error(what), mu_(mu), threshold_(threshold) {}
  double mu() const { return mu_; }
  double threshold() const { return threshold_; }

 private:
  double mu_;
  double threshold_;
};

// Point too close to a pole of the spherical chart.
class ChartError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// No switching plan exists for the requested field.
class InfeasiblePlan : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace illg
