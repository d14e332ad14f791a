#pragma once

#include <string>
#include <vector>

namespace ccmol {

// pointwise-sampled function of R with shape-preserving cubic interpolation
// inside the sampled range and constant continuation beyond either end
class TabulatedCurve {
 public:
  TabulatedCurve() = default;
  TabulatedCurve(std::vector<double> x, std::vector<double> y);

  double operator()(double r) const;

  const std::vector<double>& abscissae() const { return x_; }
  const std::vector<double>& ordinates() const { return y_; }

 private:
  std::vector<double> x_, y_;
  std::vector<double> slope_;  // endpoint derivatives, one per sample
};

// two-column text: x then y per line, '#' starts a comment, blank lines skip
TabulatedCurve loadTwoColumnCurve(const std::string& path);

// R-dependent electronic transition dipole moment between two labeled states
struct DipoleCurve {
  std::string upperLabel, lowerLabel;
  TabulatedCurve d;

  double operator()(double r) const { return d(r); }
};

}  // namespace ccmol
