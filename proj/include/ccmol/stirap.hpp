#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "ccmol/rovib.hpp"
#include "ccmol/tabulated.hpp"

namespace ccmol {

// quadrature grid shared by every level produced in one solve call
struct RadialGrid {
  std::vector<double> nodes, weights;
};

// one radial level of one electronic state; v counts nodes from the bottom
// of the well while alias, when negative, counts the same level down from
// the dissociation threshold with -1 the least bound; energy is relative to
// that threshold
struct RovibLevel {
  std::string stateLabel;
  int v = 0;
  int alias = 0;  // 0 until assigned by thresholdLevels
  int J = 0;
  double energy = 0.0;
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> wavefunction;
};

// energy range of wanted levels, relative to the dissociation threshold
struct EnergyWindow {
  double lo = std::numeric_limits<double>::lowest();
  double hi = 0.0;
};

// every level of the curve with centrifugal quantum number J inside the
// window; a window above the threshold yields an empty list
std::vector<RovibLevel> solveRovib(const std::function<double(double)>& v,
                                   const std::string& stateLabel, int J,
                                   double mu, const RovibParams& p,
                                   EnergyWindow window,
                                   const RadialMesh* mesh = nullptr);
std::vector<RovibLevel> solveRovib(const PotentialCurve& curve, int J,
                                   double mu, const RovibParams& p,
                                   EnergyWindow window,
                                   const RadialMesh* mesh = nullptr);

// the count least-bound levels, aliased -1, -2, ... from the threshold down
std::vector<RovibLevel> thresholdLevels(const std::function<double(double)>& v,
                                        const std::string& stateLabel, int ell,
                                        int count, double mu,
                                        const RovibParams& p,
                                        const RadialMesh* mesh = nullptr);
std::vector<RovibLevel> thresholdLevels(const PotentialCurve& curve, int ell,
                                        int count, double mu,
                                        const RovibParams& p,
                                        const RadialMesh* mesh = nullptr);

// <upper| d(R) |lower> by the shared-grid quadrature; both levels must have
// been solved on the same grid
double vibAvgDipole(const RovibLevel& upper, const RovibLevel& lower,
                    const std::function<double(double)>& d);

// level identity without its radial function, for reports
struct LevelTag {
  std::string stateLabel;
  int v = 0;
  int alias = 0;
  int J = 0;
  double energy = 0.0;
};

LevelTag tagOf(const RovibLevel& level);

// one two-photon route: initial, intermediate, and rovibrational ground
// level with both averaged moments; metric is exactly dUp * dDown
struct RamanPathway {
  LevelTag initial, intermediate, ground;
  double dUp = 0.0;
  double dDown = 0.0;
  double metric = 0.0;
};

// full (initial x intermediate) grid scored by |dUp * dDown|, descending
std::vector<RamanPathway> rankPathways(
    const std::vector<RovibLevel>& initials,
    const std::vector<RovibLevel>& intermediates, const RovibLevel& ground,
    const DipoleCurve& dUp, const DipoleCurve& dDown);

}  // namespace ccmol
