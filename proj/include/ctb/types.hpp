#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ctb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Eigen::Index;

/// A labeled sample: a point in R^n together with its 0/1 label.
struct LabeledSample {
  Vec x;
  bool label = false;
};

/// Thrown when grid or cover enumeration would exceed its configured cap.
/// Carries the offending count so callers can report the feasibility frontier.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string what, double count)
      : std::runtime_error(std::move(what)), count_(count) {}
  double count() const { return count_; }

 private:
  double count_;
};

/// Thrown on malformed configuration (bad keys, out-of-range parameters).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctb
