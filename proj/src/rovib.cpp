#include "ccmol/rovib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccmol/errors.hpp"

namespace ccmol {
namespace {

constexpr double kDecayBudget = kMeshDecayBudget;
constexpr double kShapeSlack = kMeshShapeSlack;
constexpr double kForbiddenRelax = kMeshForbiddenRelax;

// mesh plus cached effective potential at every sample of one curve
struct ScalarWorkspace {
  RadialMesh mesh;
  std::vector<double> veff;
  std::vector<double> q;
  std::vector<double> nodeR;             // mesh nodes, for horizon lookup
  std::vector<double> probeR, probeV;    // coarse log grid of the potential
  double twoMu = 0.0;
  double vMin = 0.0;

  // first mesh node past the decay horizon of energy e (-1 = full range)
  int stopNode(double e, double budget = kDecayBudget) const {
    const int np = static_cast<int>(probeR.size());
    int iT = np - 1;
    while (iT >= 0 && probeV[iT] > e) --iT;
    if (iT == np - 1) return -1;  // still classically allowed at rMax
    double acc = 0.0, kPrev = 0.0;
    for (int j = std::max(iT, 0) + 1; j < np; ++j) {
      const double kj = std::sqrt(twoMu * std::max(0.0, probeV[j] - e));
      acc += 0.5 * (kj + kPrev) * (probeR[j] - probeR[j - 1]);
      kPrev = kj;
      if (acc >= budget) {
        auto it = std::lower_bound(nodeR.begin(), nodeR.end(), probeR[j]);
        const int idx = static_cast<int>(it - nodeR.begin());
        if (idx >= static_cast<int>(nodeR.size()) - 1) return -1;
        return std::max(idx, 2);
      }
    }
    return -1;
  }

  void fill(double e) {
    const std::size_t n = veff.size();
    q.resize(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = twoMu * (veff[i] - e);
  }
  int count(double e) {
    fill(e);
    SweepOptions opt;
    opt.countNodes = true;
    opt.stopNode = stopNode(e);
    return scalarSweepOutward(q, mesh, opt).nodes;
  }
  ScalarSweep sweep(double e, SweepOptions opt) {
    fill(e);
    opt.stopNode = stopNode(e);
    return scalarSweepOutward(q, mesh, opt);
  }
};

double effectivePotential(const std::function<double(double)>& v, double mu,
                          int ell, double r) {
  return v(r) + ell * (ell + 1) / (2.0 * mu * r * r);
}

// one curve sampled on a fixed log grid; iMin marks the potential minimum
struct ProbeTable {
  std::vector<double> r, v;
  double vMin = 0.0;
  int iMin = 0;
};

constexpr int kProbeCount = 4000;

ProbeTable probeCurve(const std::function<double(double)>& v, double mu,
                      int ell, double rMin, double rMax) {
  ProbeTable t;
  t.r.resize(kProbeCount);
  t.v.resize(kProbeCount);
  t.vMin = std::numeric_limits<double>::max();
  const double logRatio = std::log(rMax / rMin);
  for (int i = 0; i < kProbeCount; ++i) {
    const double r = rMin * std::exp(logRatio * i / (kProbeCount - 1));
    const double ve = effectivePotential(v, mu, ell, r);
    t.r[i] = r;
    t.v[i] = ve;
    if (ve < t.vMin) {
      t.vMin = ve;
      t.iMin = i;
    }
  }
  return t;
}

// local wavenumber-squared bound the mesh must resolve; outside the minimum
// it ignores energies whose turning point lies more than the decay budget
// before r, because sweeps at those energies truncate and never get there
std::vector<double> phaseEnvelope(const ProbeTable& t, double twoMu,
                                  double eTop) {
  std::vector<double> env(kProbeCount);
  const double relax2 = kForbiddenRelax * kForbiddenRelax;
  for (int i = 0; i < kProbeCount; ++i) {
    const double vi = t.v[i];
    if (i <= t.iMin) {
      env[i] = twoMu * std::max(std::abs(vi - t.vMin), std::abs(vi - eTop));
      continue;
    }
    double forb = 0.0;
    for (int j = t.iMin; j < i; ++j) {
      const double a = twoMu * (vi - std::max(t.v[j], t.vMin));
      if (a <= forb) continue;
      const double span = kShapeSlack * kDecayBudget / (t.r[i] - t.r[j]);
      forb = std::max(forb, std::min(a, span * span));
    }
    const double osc = twoMu * std::max(0.0, eTop - vi);
    env[i] = std::max(osc, forb / relax2);
  }
  return env;
}

RadialMesh meshFromEnvelope(const std::vector<double>& probeR,
                            const std::vector<double>& env,
                            const RovibParams& p) {
  MeshParams mp;
  mp.rMin = p.rMin;
  mp.rMax = p.rMax;
  mp.phaseStep = p.phaseStep;
  mp.hMax = p.hMax;
  auto qEnv = [&](double r) {
    auto it = std::lower_bound(probeR.begin(), probeR.end(), r);
    int j = static_cast<int>(it - probeR.begin());
    const int lo = std::max(0, j - 1);
    const int hi = std::min(j, kProbeCount - 1);
    return std::max(env[lo], env[hi]);
  };
  return buildMesh(qEnv, mp);
}

void validateRange(double mu, const RovibParams& p) {
  if (!(mu > 0.0)) throw ValidationError("reduced mass must be positive");
  if (!(p.rMin > 0.0) || !(p.rMax > p.rMin))
    throw ValidationError("radial range must satisfy 0 < rMin < rMax");
}

ScalarWorkspace makeWorkspace(const std::function<double(double)>& v,
                              double mu, int ell, const RovibParams& p,
                              const RadialMesh* given) {
  validateRange(mu, p);

  ScalarWorkspace w;
  w.twoMu = 2.0 * mu;

  ProbeTable t = probeCurve(v, mu, ell, p.rMin, p.rMax);
  w.vMin = t.vMin;

  if (given) {
    w.mesh = *given;
  } else {
    w.mesh = meshFromEnvelope(t.r, phaseEnvelope(t, w.twoMu, p.eCap), p);
  }
  w.probeR = std::move(t.r);
  w.probeV = std::move(t.v);

  w.veff.resize(w.mesh.samples.size());
  for (std::size_t i = 0; i < w.mesh.samples.size(); ++i)
    w.veff[i] = effectivePotential(v, mu, ell, w.mesh.samples[i]);
  w.nodeR = w.mesh.nodes();
  return w;
}

// energies of every level in [eFloor, eCap) by bisection on the outward node
// count; indices below the floor are skipped but still counted, so the level
// written to energies[0] has vibrational index vFirst
std::vector<double> spectrumOn(ScalarWorkspace& w, double eFloor, double eCap,
                               int& vFirst) {
  const int total = w.count(eCap);
  int first = 0;
  if (eFloor > w.vMin) first = std::min(w.count(eFloor), total);
  vFirst = first;
  std::vector<double> energies(total - first);
  double floorE = first > 0 ? eFloor : w.vMin;
  for (int v = first; v < total; ++v) {
    double lo = floorE, hi = eCap;
    for (int iter = 0; iter < 90; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (hi - lo <= std::max(std::abs(mid) * 1e-15, 1e-18)) break;
      if (w.count(mid) >= v + 1) hi = mid;
      else lo = mid;
    }
    energies[v - first] = 0.5 * (lo + hi);
    floorE = lo;
  }
  return energies;
}

}  // namespace

RadialMesh sharedVibrationMesh(
    const std::vector<std::pair<std::function<double(double)>, int>>& curves,
    double mu, const RovibParams& p) {
  if (curves.empty())
    throw ValidationError("shared mesh needs at least one curve");
  validateRange(mu, p);
  const double twoMu = 2.0 * mu;
  std::vector<double> probeR, env;
  for (const auto& [fn, ell] : curves) {
    ProbeTable t = probeCurve(fn, mu, ell, p.rMin, p.rMax);
    std::vector<double> e = phaseEnvelope(t, twoMu, p.eCap);
    if (env.empty()) {
      probeR = std::move(t.r);
      env = std::move(e);
    } else {
      for (int i = 0; i < kProbeCount; ++i) env[i] = std::max(env[i], e[i]);
    }
  }
  return meshFromEnvelope(probeR, env, p);
}

VibrationalBasis solveVibrationsOnMesh(const std::function<double(double)>& v,
                                       double mu, int ell,
                                       const RovibParams& p,
                                       const RadialMesh& mesh) {
  ScalarWorkspace w = makeWorkspace(v, mu, ell, p, &mesh);
  VibrationalBasis basis;
  basis.mesh = w.mesh;
  basis.nodes = w.mesh.nodes();
  basis.weights = w.mesh.quadratureWeights();
  basis.ell = ell;
  basis.energies = spectrumOn(w, p.eFloor, p.eCap, basis.vFirst);

  if (p.keepWavefunctions) {
    SweepOptions opt;
    opt.storeRatios = true;
    for (double e : basis.energies) {
      const int stopN = w.stopNode(e, kReconstructBudget);
      ScalarSweep sw = w.sweep(e, opt);
      std::vector<double> u = scalarReconstruct(w.q, w.mesh, sw, 1.0, stopN);
      double norm = 0.0, peak = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        norm += basis.weights[i] * u[i] * u[i];
        peak = std::max(peak, std::abs(u[i]));
      }
      const double scale = 1.0 / std::sqrt(norm);
      double sign = 1.0;
      for (double ui : u)
        if (std::abs(ui) > 1e-6 * peak) {
          sign = ui > 0 ? 1.0 : -1.0;
          break;
        }
      for (double& ui : u) ui *= sign * scale;
      basis.wavefunctions.push_back(std::move(u));
    }
  }
  return basis;
}

VibrationalBasis solveVibrations(const std::function<double(double)>& v,
                                 double mu, int ell, const RovibParams& p) {
  ScalarWorkspace w = makeWorkspace(v, mu, ell, p, nullptr);
  VibrationalBasis basis = solveVibrationsOnMesh(v, mu, ell, p, w.mesh);
  if (!p.richardson) return basis;

  RovibParams ph = p;
  ph.phaseStep = 0.5 * p.phaseStep;
  ph.hMax = 0.5 * p.hMax;
  ph.richardson = false;
  ph.keepWavefunctions = false;
  ScalarWorkspace wh = makeWorkspace(v, mu, ell, ph, nullptr);
  int fineFirst = 0;
  const std::vector<double> fine = spectrumOn(wh, p.eFloor, p.eCap, fineFirst);

  // wavefunctions stay on the base mesh; energies gain the h^4 cancellation,
  // paired by absolute index in case the floor or cap counts moved by one
  for (std::size_t i = 0; i < basis.energies.size(); ++i) {
    const int j = basis.vFirst + static_cast<int>(i) - fineFirst;
    if (j < 0 || j >= static_cast<int>(fine.size())) continue;
    basis.energies[i] = (16.0 * fine[j] - basis.energies[i]) / 15.0;
  }
  return basis;
}

double averagedMoment(const VibrationalBasis& a, int va,
                      const VibrationalBasis& b, int vb,
                      const std::function<double(double)>& d) {
  if (a.nodes != b.nodes)
    throw ValidationError("averaged moment requires a shared mesh");
  if (va < 0 || va >= static_cast<int>(a.wavefunctions.size()) || vb < 0 ||
      vb >= static_cast<int>(b.wavefunctions.size()))
    throw ValidationError("vibrational index out of range");
  const std::vector<double>& ua = a.wavefunctions[va];
  const std::vector<double>& ub = b.wavefunctions[vb];
  double sum = 0.0;
  for (std::size_t i = 0; i < a.nodes.size(); ++i)
    sum += a.weights[i] * ua[i] * d(a.nodes[i]) * ub[i];
  return sum;
}

double MorseSpectrum::lambdaParameter() const {
  return std::sqrt(2.0 * mu * de) / beta;
}

int MorseSpectrum::levelCount() const {
  const double lam = lambdaParameter();
  if (lam <= 0.5) return 0;
  return static_cast<int>(std::floor(lam - 0.5)) + 1;
}

double MorseSpectrum::energy(int v) const {
  if (v < 0 || v >= levelCount())
    throw ValidationError("vibrational index outside the bound spectrum");
  const double x = lambdaParameter() - v - 0.5;
  return -beta * beta * x * x / (2.0 * mu);
}

double scalarScatteringLength(const std::function<double(double)>& v,
                              double mu, double rMin, double rMax,
                              double collisionEnergy, double phaseStep,
                              int ell) {
  if (!(collisionEnergy > 0.0))
    throw ValidationError("collision energy must be positive");
  ScalarWorkspace w = [&] {
    ScalarWorkspace ws;
    const double twoMu = 2.0 * mu;
    MeshParams mp;
    mp.rMin = rMin;
    mp.rMax = rMax;
    mp.phaseStep = phaseStep;
    auto qEnv = [&](double r) {
      return twoMu *
             (std::abs(effectivePotential(v, mu, ell, r)) + collisionEnergy);
    };
    ws.mesh = buildMesh(qEnv, mp);
    ws.twoMu = twoMu;
    ws.veff.resize(ws.mesh.samples.size());
    for (std::size_t i = 0; i < ws.mesh.samples.size(); ++i)
      ws.veff[i] = effectivePotential(v, mu, ell, ws.mesh.samples[i]);
    return ws;
  }();

  const ScalarSweep sw = w.sweep(collisionEnergy, SweepOptions{});
  const double k = std::sqrt(2.0 * mu * collisionEnergy);
  const double x = k * w.mesh.rMax;

  auto jl = [&](int l, double xx) {
    return l >= 0 ? std::sph_bessel(static_cast<unsigned>(l), xx)
                  : std::cos(xx) / xx;
  };
  auto yl = [&](int l, double xx) {
    return l >= 0 ? std::sph_neumann(static_cast<unsigned>(l), xx)
                  : std::sin(xx) / xx;
  };
  const double sqrtK = std::sqrt(k);
  const double f = x * jl(ell, x) / sqrtK;
  const double fp = sqrtK * (x * jl(ell - 1, x) - ell * jl(ell, x));
  const double g = -x * yl(ell, x) / sqrtK;
  const double gp = -sqrtK * (x * yl(ell - 1, x) - ell * yl(ell, x));

  const double y = sw.logDerivative;
  const double kMat = -(y * f - fp) / (y * g - gp);
  return -kMat / std::pow(k, 2 * ell + 1);
}

namespace {

double innerSolveEdge(const PotentialCurve& c) {
  // walk down the repulsive wall until the curve clears a fixed cap
  double r = c.shortRange.Re;
  while (r > 0.6 && c(r) < 0.25) r -= 0.02;
  return std::max(0.5, r - 0.1);
}

int wallCount(const PotentialCurve& c, double mu, double rMax) {
  RovibParams p;
  p.rMin = innerSolveEdge(c);
  p.rMax = rMax;
  p.richardson = false;
  p.keepWavefunctions = false;
  ScalarWorkspace w = makeWorkspace([&](double r) { return c(r); }, mu, 0, p,
                                    nullptr);
  return w.count(p.eCap);
}

double wallLength(const PotentialCurve& c, double mu) {
  return scalarScatteringLength([&](double r) { return c(r); }, mu,
                                innerSolveEdge(c), 2000.0, 1e-12);
}

}  // namespace

PotentialCurve tuneInnerWall(const PotentialCurve& curve, double mu,
                             const WallTuneTarget& target) {
  auto withGamma = [&](double g) {
    PotentialCurve c = curve;
    c.shortRange.wallGamma = g;
    return c;
  };

  if (target.kind == WallTuneTarget::Kind::BoundCount) {
    const int want = static_cast<int>(std::lround(target.value));
    // the count decreases as the wall steepens
    double lo = curve.shortRange.wallGamma, hi = lo;
    int cLo = wallCount(withGamma(lo), mu, 600.0);
    int cHi = cLo;
    for (int k = 0; k < 24 && cLo < want; ++k) cLo = wallCount(withGamma(lo -= 0.5), mu, 600.0);
    for (int k = 0; k < 24 && cHi > want; ++k) cHi = wallCount(withGamma(hi += 0.5), mu, 600.0);
    if (cLo < want || cHi > want)
      throw NumericalError("wall tuning cannot reach the requested level count");
    // land in the middle of the gamma window holding exactly `want` levels
    auto edge = [&](double a, double b, int above) {
      // a side has count >= above, b side has count < above
      for (int i = 0; i < 50; ++i) {
        const double m = 0.5 * (a + b);
        if (wallCount(withGamma(m), mu, 600.0) >= above) a = m;
        else b = m;
      }
      return 0.5 * (a + b);
    };
    const double left = cLo == want ? lo : edge(lo, hi, want);
    const double right = cHi == want ? hi : edge(lo, hi, want + 1);
    return withGamma(0.5 * (left + right));
  }

  // scattering-length target: scan for a sign change of a - target inside a
  // window of constant level count, then bisect; fine spans come first so the
  // crossing nearest the seed wall wins over steeper solutions further out
  const double g0 = curve.shortRange.wallGamma;
  for (double span : {1.0, 4.0, 16.0}) {
    const int nGrid = 65;
    // gamma <= -1 flips the sign of the wall exponent; stay clear of it
    const double gLo = std::max(g0 - span, -0.95), gHi = g0 + span;
    std::vector<double> gs(nGrid), as(nGrid);
    std::vector<int> cs(nGrid);
    for (int i = 0; i < nGrid; ++i) {
      gs[i] = gLo + (gHi - gLo) * i / (nGrid - 1);
      const PotentialCurve c = withGamma(gs[i]);
      cs[i] = wallCount(c, mu, 600.0);
      as[i] = wallLength(c, mu);
    }
    for (int i = 0; i + 1 < nGrid; ++i) {
      if (cs[i] != cs[i + 1]) continue;
      if ((as[i] - target.value) * (as[i + 1] - target.value) > 0.0) continue;
      double a = gs[i], b = gs[i + 1];
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        const double am = wallLength(withGamma(m), mu);
        if ((am - target.value) * (as[i] - target.value) > 0.0) a = m;
        else b = m;
      }
      const PotentialCurve tuned = withGamma(0.5 * (a + b));
      // a pole of a(gamma) also flips the sign; accept only a true crossing
      if (std::abs(wallLength(tuned, mu) - target.value) <= 1.0) return tuned;
    }
  }
  throw NumericalError("wall tuning found no scattering-length crossing");
}

}  // namespace ccmol
