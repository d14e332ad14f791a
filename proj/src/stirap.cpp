#include "ccmol/stirap.hpp"

#include <algorithm>
#include <cmath>

#include "ccmol/errors.hpp"

namespace ccmol {

std::vector<RovibLevel> solveRovib(const std::function<double(double)>& v,
                                   const std::string& stateLabel, int J,
                                   double mu, const RovibParams& p,
                                   EnergyWindow window,
                                   const RadialMesh* mesh) {
  if (J < 0) throw ValidationError("centrifugal quantum number must be >= 0");
  RovibParams q = p;
  q.eFloor = std::max(p.eFloor, window.lo);
  q.eCap = std::min(p.eCap, window.hi);
  if (!(q.eCap > q.eFloor)) return {};
  const VibrationalBasis basis = mesh
                                     ? solveVibrationsOnMesh(v, mu, J, q, *mesh)
                                     : solveVibrations(v, mu, J, q);

  auto grid = std::make_shared<RadialGrid>();
  grid->nodes = basis.nodes;
  grid->weights = basis.weights;

  std::vector<RovibLevel> out(basis.energies.size());
  for (std::size_t i = 0; i < basis.energies.size(); ++i) {
    RovibLevel& lev = out[i];
    lev.stateLabel = stateLabel;
    lev.v = basis.vFirst + static_cast<int>(i);
    lev.J = J;
    lev.energy = basis.energies[i];
    lev.grid = grid;
    if (i < basis.wavefunctions.size())
      lev.wavefunction = basis.wavefunctions[i];
  }
  return out;
}

std::vector<RovibLevel> solveRovib(const PotentialCurve& curve, int J,
                                   double mu, const RovibParams& p,
                                   EnergyWindow window,
                                   const RadialMesh* mesh) {
  return solveRovib([&curve](double r) { return curve(r); }, curve.label, J,
                    mu, p, window, mesh);
}

std::vector<RovibLevel> thresholdLevels(const std::function<double(double)>& v,
                                        const std::string& stateLabel, int ell,
                                        int count, double mu,
                                        const RovibParams& p,
                                        const RadialMesh* mesh) {
  if (count <= 0) throw ValidationError("threshold level count must be positive");

  // energy-only pass to place the window floor just below level total-count
  RovibParams scan = p;
  scan.keepWavefunctions = false;
  scan.richardson = false;
  scan.eFloor = std::numeric_limits<double>::lowest();
  const VibrationalBasis probe =
      mesh ? solveVibrationsOnMesh(v, mu, ell, scan, *mesh)
           : solveVibrations(v, mu, ell, scan);
  const int total = static_cast<int>(probe.energies.size());
  if (total < count)
    throw ValidationError("curve holds fewer bound levels than requested");

  EnergyWindow window;
  if (total > count)
    window.lo =
        0.5 * (probe.energies[total - count - 1] + probe.energies[total - count]);
  std::vector<RovibLevel> out =
      solveRovib(v, stateLabel, ell, mu, p, window, mesh);
  if (static_cast<int>(out.size()) != count)
    throw NumericalError("threshold window failed to isolate the levels");
  for (int i = 0; i < count; ++i) out[i].alias = i - count;
  return out;
}

std::vector<RovibLevel> thresholdLevels(const PotentialCurve& curve, int ell,
                                        int count, double mu,
                                        const RovibParams& p,
                                        const RadialMesh* mesh) {
  return thresholdLevels([&curve](double r) { return curve(r); }, curve.label,
                         ell, count, mu, p, mesh);
}

double vibAvgDipole(const RovibLevel& upper, const RovibLevel& lower,
                    const std::function<double(double)>& d) {
  if (!upper.grid || !lower.grid)
    throw ValidationError("averaged dipole needs levels with grids attached");
  if (upper.grid != lower.grid && upper.grid->nodes != lower.grid->nodes)
    throw ValidationError("averaged dipole needs both levels on one grid");
  const std::vector<double>& nodes = upper.grid->nodes;
  const std::vector<double>& weights = upper.grid->weights;
  if (upper.wavefunction.size() != nodes.size() ||
      lower.wavefunction.size() != nodes.size())
    throw ValidationError("averaged dipole needs stored wavefunctions");
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    sum += weights[i] * upper.wavefunction[i] * d(nodes[i]) *
           lower.wavefunction[i];
  return sum;
}

LevelTag tagOf(const RovibLevel& level) {
  return LevelTag{level.stateLabel, level.v, level.alias, level.J,
                  level.energy};
}

std::vector<RamanPathway> rankPathways(
    const std::vector<RovibLevel>& initials,
    const std::vector<RovibLevel>& intermediates, const RovibLevel& ground,
    const DipoleCurve& dUp, const DipoleCurve& dDown) {
  std::vector<double> down(intermediates.size());
  for (std::size_t j = 0; j < intermediates.size(); ++j)
    down[j] = vibAvgDipole(intermediates[j], ground, dDown);

  std::vector<RamanPathway> out;
  out.reserve(initials.size() * intermediates.size());
  for (const RovibLevel& init : initials)
    for (std::size_t j = 0; j < intermediates.size(); ++j) {
      RamanPathway path;
      path.initial = tagOf(init);
      path.intermediate = tagOf(intermediates[j]);
      path.ground = tagOf(ground);
      path.dUp = vibAvgDipole(intermediates[j], init, dUp);
      path.dDown = down[j];
      path.metric = path.dUp * path.dDown;
      out.push_back(std::move(path));
    }

  std::sort(out.begin(), out.end(),
            [](const RamanPathway& a, const RamanPathway& b) {
              const double ma = std::abs(a.metric), mb = std::abs(b.metric);
              if (ma != mb) return ma > mb;
              if (a.intermediate.energy != b.intermediate.energy)
                return a.intermediate.energy < b.intermediate.energy;
              return a.initial.v < b.initial.v;
            });
  return out;
}

}  // namespace ccmol
