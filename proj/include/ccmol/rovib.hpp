#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "ccmol/potential.hpp"
#include "ccmol/propagator.hpp"

namespace ccmol {

struct RovibParams {
  double rMin = 0.0;
  double rMax = 0.0;
  double phaseStep = 0.15;
  double hMax = 5.0;
  double eCap = -1e-15;  // count levels strictly below this energy
  // skip levels below this energy; their indices are still accounted for
  double eFloor = std::numeric_limits<double>::lowest();
  bool richardson = true;
  bool keepWavefunctions = true;
};

// radial levels of one partial wave on one curve; wavefunctions are unit
// normalized against the mesh quadrature and start positive at small R;
// energies[i] belongs to vibrational index vFirst + i counted from the bottom
struct VibrationalBasis {
  RadialMesh mesh;
  std::vector<double> nodes;
  std::vector<double> weights;
  int ell = 0;
  int vFirst = 0;
  std::vector<double> energies;
  std::vector<std::vector<double>> wavefunctions;
};

VibrationalBasis solveVibrations(const std::function<double(double)>& v,
                                 double mu, int ell, const RovibParams& p);

// same solve on a caller-supplied mesh, so two curves can share one grid
VibrationalBasis solveVibrationsOnMesh(const std::function<double(double)>& v,
                                       double mu, int ell,
                                       const RovibParams& p,
                                       const RadialMesh& mesh);

// one mesh fine enough for every listed (curve, ell) pair at once, so levels
// of different electronic states share a grid and their moments need no
// interpolation
RadialMesh sharedVibrationMesh(
    const std::vector<std::pair<std::function<double(double)>, int>>& curves,
    double mu, const RovibParams& p);

// <v_a| d(R) |v_b>; both bases must live on the same mesh
double averagedMoment(const VibrationalBasis& a, int va,
                      const VibrationalBasis& b, int vb,
                      const std::function<double(double)>& d);

// closed-form spectrum of V = De[(1 - exp(-beta(r - re)))^2 - 1]
struct MorseSpectrum {
  double de = 0.0;
  double beta = 0.0;
  double re = 0.0;
  double mu = 0.0;

  double lambdaParameter() const;
  int levelCount() const;
  double energy(int v) const;
};

// zero-energy-limit scattering length of a single curve (s-wave unless ell
// is set); collisionEnergy fixes the tiny positive energy actually used
double scalarScatteringLength(const std::function<double(double)>& v,
                              double mu, double rMin, double rMax,
                              double collisionEnergy, double phaseStep = 0.15,
                              int ell = 0);

}  // namespace ccmol
