#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

// Electronic potential curves. A curve is a short-range expanded Morse
// oscillator blended into a -C6/R^6 - C8/R^8 dispersion tail by a tanh switch.
// All quantities are in atomic units (E_h, a0).

namespace ccmol {

struct SpectroscopicConstants {
  double Re = 0;      // equilibrium distance, a0
  double De = 0;      // well depth, E_h (positive)
  double springK = 0; // harmonic force constant V''(Re), E_h/a0^2
  double omegaE = 0;  // harmonic wavenumber as energy, E_h
  double Be = 0;      // rotational constant, E_h

  // relative deviation of omegaE from sqrt(springK/mu); mu in m_e
  double harmonicMismatch(double mu) const {
    return std::abs(std::sqrt(springK / mu) - omegaE) / omegaE;
  }
  // relative deviation of Be from 1/(2 mu Re^2); mu in m_e
  double rotationalMismatch(double mu) const {
    const double be = 1.0 / (2.0 * mu * Re * Re);
    return std::abs(be - Be) / be;
  }
};

struct DispersionTail {
  double C6 = 0;  // E_h a0^6
  double C8 = 0;  // E_h a0^8
  double operator()(double R) const {
    const double R2 = R * R, R6 = R2 * R2 * R2;
    return -C6 / R6 - C8 / (R6 * R2);
  }
  double secondDerivative(double R) const {
    const double R2 = R * R, R8 = R2 * R2 * R2 * R2;
    return -42.0 * C6 / R8 - 72.0 * C8 / (R8 * R2);
  }
};

// s(R) = (1 + tanh(2(R - Rc)/w))/2; the factor 2 puts s below 0.01 at Rc - 2w
struct SwitchingFunction {
  double Rc = 0;
  double w = 1;
  double operator()(double R) const { return 0.5 * (1.0 + std::tanh(2.0 * (R - Rc) / w)); }
};

// V(R) = De [(1 - exp(-beta(R) (R - Re)))^2 - 1] with
//   beta(R) = beta0 (1 + sum_i c_i y^i)                  for y >= 0,
//   beta(R) = beta0 (1 + gamma y^2 / (1 + (y/ys)^2))     for y < 0,
// where y = (R-Re)/(R+Re). beta0 is pinned to sqrt(k/2De) so Re, De and
// V''(Re) reproduce the spectroscopic constants exactly. The c_i shape only
// the outer branch and gamma morphs only the repulsive wall; each branch
// departs from beta0 at least quadratically in y, so V stays twice
// continuously differentiable at Re, and keeping the c_i off the wall keeps
// a tail fit from ever driving the inner exponent to unphysical values.
// wallSat stores ys; 0 disables the saturation (pure quadratic wall). A
// finite ys caps the wall exponent at beta0 (1 + gamma ys^2) deep inside,
// so a strongly reshaped wall still grows like a plain exponential there.
struct EmoShortRange {
  double Re = 0;
  double De = 0;
  double beta0 = 0;
  std::vector<double> betaCoeffs;  // c_1, c_2, ...
  double wallGamma = 0;
  double wallSat = 0;

  double beta(double R) const {
    const double y = (R - Re) / (R + Re);
    if (y < 0) {
      const double y2 = y * y;
      double bump = wallGamma * y2;
      if (wallSat > 0) bump /= 1.0 + y2 / (wallSat * wallSat);
      return beta0 * (1.0 + bump);
    }
    double poly = 1.0;
    double yp = 1.0;
    for (double c : betaCoeffs) {
      yp *= y;
      poly += c * yp;
    }
    return beta0 * poly;
  }
  double operator()(double R) const {
    const double u = std::exp(-beta(R) * (R - Re));
    return De * ((1.0 - u) * (1.0 - u) - 1.0);
  }
};

struct PotentialCurve {
  std::string label;
  EmoShortRange shortRange;
  DispersionTail tail;
  SwitchingFunction blend;
  double Rcut = 0;   // inner validity edge of the ab initio region
  double Rdisp = 0;  // radius beyond which the tail must carry the curve

  double operator()(double R) const {
    const double s = blend(R);
    return (1.0 - s) * shortRange(R) + s * tail(R);
  }
};

struct SpinSplittingFit {
  double A1 = 0, B1 = 0, R1 = 0;
  double A2 = 0, B2 = 0, R2 = 0;
};

EmoShortRange buildShortRange(const SpectroscopicConstants& sc,
                              const std::vector<double>& betaCoeffs,
                              double wallGamma, double wallSat = 0.0);

// Validates the blend: tail dominance beyond Rdisp (absolute 1e-10 E_h and
// fractional 1e-6) and no curvature spike above 5x the local scale inside the
// switching window. Throws ValidationError on failure.
PotentialCurve stitchPotential(const std::string& label, const EmoShortRange& shortRange,
                               const DispersionTail& tail, double Rcut, double Rdisp,
                               const SwitchingFunction* blendOverride = nullptr);

// Triplet splitting E(1(1)) - E(1(0-)) of the relativistic fit, in E_h.
double soSplitting(const SpinSplittingFit& fit, double R);

// Magnetic spin-spin coefficient -(gS/2)^2 alpha^2 / R^3, in E_h.
double dipoleDipoleLambda(double R, double gS, double alpha);

// Effective anisotropy lambda(R) entering H_ss = (2/3) lambda (3 S_Z^2 - S^2):
// half the fitted splitting plus the magnetic dipole-dipole part.
double lambdaTotal(const SpinSplittingFit& fit, double R, double gS, double alpha);

// Component curves about the triplet barycenter Va: {1(0-), 1(1)} energies.
struct TripletComponents {
  double V0minus;
  double V1;
};
TripletComponents tripletComponents(double Va, double lambda);

// Least-squares beta coefficients that bend the EMO outer branch onto a
// target curve over [Rlo, Rhi]. Used when constructing datasets; a
// singlet/triplet pair is typically fit to the dispersion tail shifted down
// resp. up by an exchange-like exponential so the two stitched curves keep
// their ordering all the way into the tail.
std::vector<double> fitBranchCoefficients(const SpectroscopicConstants& sc,
                                          const std::function<double(double)>& target,
                                          double Rlo, double Rhi, int nCoeffs);
std::vector<double> fitTailCoefficients(const SpectroscopicConstants& sc,
                                        const DispersionTail& tail, double Rlo, double Rhi,
                                        int nCoeffs);

struct WallTuneTarget {
  enum class Kind { BoundCount, ScatteringLength };
  Kind kind = Kind::BoundCount;
  double value = 0;  // desired count (integer-valued) or a in a0
};

// Re-tunes wallGamma so the single-channel zero-field property of the curve
// matches the target (count exactly, scattering length within 1 a0). Only the
// R < Re wall morphs. mu in m_e. Throws NumericalError with bracketing
// diagnostics when the target is unreachable.
PotentialCurve tuneInnerWall(const PotentialCurve& curve, double mu,
                             const WallTuneTarget& target);

}  // namespace ccmol
