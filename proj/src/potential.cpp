#include "ccmol/potential.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <sstream>

#include "ccmol/errors.hpp"

namespace ccmol {

EmoShortRange buildShortRange(const SpectroscopicConstants& sc,
                              const std::vector<double>& betaCoeffs, double wallGamma,
                              double wallSat) {
  if (sc.Re <= 0 || sc.De <= 0 || sc.springK <= 0)
    throw ValidationError("short-range constants must be positive: Re=" +
                          std::to_string(sc.Re) + " De=" + std::to_string(sc.De) +
                          " k=" + std::to_string(sc.springK));
  EmoShortRange emo;
  emo.Re = sc.Re;
  emo.De = sc.De;
  emo.beta0 = std::sqrt(sc.springK / (2.0 * sc.De));
  emo.betaCoeffs = betaCoeffs;
  emo.wallGamma = wallGamma;
  emo.wallSat = wallSat;
  if (wallGamma <= -1.0)
    throw ValidationError("wall scaling gamma must exceed -1, got " +
                          std::to_string(wallGamma));
  if (wallSat < 0.0)
    throw ValidationError("wall saturation scale must be non-negative, got " +
                          std::to_string(wallSat));
  return emo;
}

PotentialCurve stitchPotential(const std::string& label, const EmoShortRange& shortRange,
                               const DispersionTail& tail, double Rcut, double Rdisp,
                               const SwitchingFunction* blendOverride) {
  if (!(Rcut > 0) || !(Rdisp > Rcut))
    throw ValidationError(label + ": need 0 < Rcut < Rdisp, got Rcut=" +
                          std::to_string(Rcut) + " Rdisp=" + std::to_string(Rdisp));
  PotentialCurve curve;
  curve.label = label;
  curve.shortRange = shortRange;
  curve.tail = tail;
  curve.Rcut = Rcut;
  curve.Rdisp = Rdisp;
  if (blendOverride) {
    curve.blend = *blendOverride;
  } else {
    curve.blend.Rc = 0.5 * (Rcut + Rdisp);
    curve.blend.w = (Rdisp - Rcut) / 9.0;
  }

  // tail dominance beyond Rdisp
  for (double R = Rdisp; R <= Rdisp + 15.0; R += 0.25) {
    const double dv = std::abs(curve(R) - tail(R));
    if (dv > 1e-10 || dv > 1e-6 * std::abs(tail(R))) {
      std::ostringstream msg;
      msg << label << ": stitched curve strays from the dispersion tail at R=" << R
          << " by " << dv << " E_h";
      throw ValidationError(msg.str());
    }
  }

  // curvature spike scan across the switching window
  const double w = curve.blend.w, Rc = curve.blend.Rc;
  const double h = 1e-3;
  for (double R = Rc - 2.0 * w; R <= Rc + 2.0 * w; R += w / 50.0) {
    const double d2 = (curve(R + h) - 2.0 * curve(R) + curve(R - h)) / (h * h);
    const double d2s = (shortRange(R + h) - 2.0 * shortRange(R) + shortRange(R - h)) / (h * h);
    const double scale = std::max(std::abs(d2s), std::abs(tail.secondDerivative(R)));
    if (std::abs(d2) > 5.0 * scale + 1e-12) {
      std::ostringstream msg;
      msg << label << ": switching spike at R=" << R << ", |V''|=" << std::abs(d2)
          << " vs local scale " << scale;
      throw ValidationError(msg.str());
    }
  }
  return curve;
}

double soSplitting(const SpinSplittingFit& fit, double R) {
  return fit.A1 * std::exp(-fit.B1 * (R - fit.R1)) +
         fit.A2 * std::exp(-fit.B2 * (R - fit.R2));
}

double dipoleDipoleLambda(double R, double gS, double alpha) {
  const double g2 = 0.5 * gS;
  return -(g2 * g2) * alpha * alpha / (R * R * R);
}

double lambdaTotal(const SpinSplittingFit& fit, double R, double gS, double alpha) {
  return 0.5 * soSplitting(fit, R) + dipoleDipoleLambda(R, gS, alpha);
}

TripletComponents tripletComponents(double Va, double lambda) {
  // H_ss = (2/3) lambda (3 S_Z^2 - S^2) on S=1: Omega=0 shifts by -4/3 lambda,
  // |Omega|=1 by +2/3 lambda; barycenter (V0m + 2 V1)/3 recovers Va exactly
  return {Va - 4.0 / 3.0 * lambda, Va + 2.0 / 3.0 * lambda};
}

std::vector<double> fitBranchCoefficients(const SpectroscopicConstants& sc,
                                          const std::function<double(double)>& target,
                                          double Rlo, double Rhi, int nCoeffs) {
  if (nCoeffs < 1 || Rhi <= Rlo || Rlo <= sc.Re)
    throw ValidationError("branch fit needs Re < Rlo < Rhi and at least one coefficient");
  const double beta0 = std::sqrt(sc.springK / (2.0 * sc.De));
  const int nPts = 120;
  Eigen::MatrixXd A(nPts, nCoeffs);
  Eigen::VectorXd b(nPts);
  for (int i = 0; i < nPts; ++i) {
    const double R = Rlo + (Rhi - Rlo) * i / (nPts - 1.0);
    const double v = target(R);
    if (v <= -sc.De)
      throw ValidationError("fit target deeper than De inside the fit window");
    if (v >= 0.0)
      throw ValidationError("fit target non-negative inside the fit window");
    // invert the EMO form: u = 1 - sqrt(1 + V/De), phi = -ln u
    const double u = 1.0 - std::sqrt(1.0 + v / sc.De);
    const double phiTarget = -std::log(u);
    const double betaTarget = phiTarget / (R - sc.Re);
    const double y = (R - sc.Re) / (R + sc.Re);
    double yp = 1.0;
    for (int j = 0; j < nCoeffs; ++j) {
      yp *= y;
      A(i, j) = yp;
    }
    b(i) = betaTarget / beta0 - 1.0;
  }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  return std::vector<double>(c.data(), c.data() + c.size());
}

std::vector<double> fitTailCoefficients(const SpectroscopicConstants& sc,
                                        const DispersionTail& tail, double Rlo, double Rhi,
                                        int nCoeffs) {
  return fitBranchCoefficients(
      sc, [&tail](double R) { return tail(R); }, Rlo, Rhi, nCoeffs);
}

}  // namespace ccmol
