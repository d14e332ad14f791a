#include "ccmol/ccengine.hpp"

#include <algorithm>
#include <cmath>

#include "ccmol/errors.hpp"

namespace ccmol {

FieldModel buildFieldModel(const CollisionSystem& sys, double B) {
  FieldModel fm;
  fm.field = B;
  fm.basis = enumerateChannels(sys.atomA, sys.atomB, B, sys.twoMtot, sys.ells,
                               sys.cst);
  if (fm.basis.entrance < 0)
    throw ValidationError("channel basis has no s-wave entrance channel");
  SpinProjectors pr = spinProjectors(fm.basis);
  fm.p0 = std::move(pr.P0);
  fm.p1 = std::move(pr.P1);
  fm.m = anisotropicCoupling(fm.basis);

  const int n = fm.basis.dim();
  fm.thresholds.resize(n);
  fm.lCent.resize(n);
  fm.entranceThreshold = fm.basis.channels[fm.basis.entrance].threshold;
  for (int i = 0; i < n; ++i) {
    const Channel& c = fm.basis.channels[i];
    fm.thresholds(i) = c.threshold - fm.entranceThreshold;
    fm.lCent(i) = static_cast<double>(c.ell) * (c.ell + 1);
  }
  if (fm.thresholds.minCoeff() < -1e-14)
    throw ValidationError("entrance channel is not the lowest threshold");
  return fm;
}

int RadialCache::decayStopNode(double e, double budget) const {
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

RadialCache buildRadialCache(const CollisionSystem& sys,
                             const EngineMeshParams& p) {
  if (!(p.rMin > 0.0) || !(p.rMax > p.rMin))
    throw ValidationError("radial range must satisfy 0 < rMin < rMax");
  if (p.eLo > 0.0 || p.eTop < 0.0 || p.thresholdSpread < 0.0)
    throw ValidationError("cache energy window must bracket zero");

  const double twoMu = 2.0 * sys.mu;
  int lMax = 0;
  for (int l : sys.ells) lMax = std::max(lMax, l);
  const double cent = static_cast<double>(lMax) * (lMax + 1);

  auto lam = [&](double r) {
    return lambdaTotal(sys.splitting, r, sys.cst.gS, sys.cst.alpha);
  };
  // most binding and largest-magnitude diagonal over channels and fields
  auto vLow = [&](double r) {
    return std::min(sys.singlet(r), sys.triplet(r)) - 2.0 * std::abs(lam(r));
  };
  auto vAbs = [&](double r) {
    const double vm =
        std::max(std::abs(sys.singlet(r)), std::abs(sys.triplet(r)));
    return twoMu * (vm + 2.0 * std::abs(lam(r)) + p.thresholdSpread +
                    std::max(std::abs(p.eLo), p.eTop)) +
           cent / (r * r);
  };

  const int np = 3000;
  std::vector<double> pr(np), pv(np), env(np);
  const double logRatio = std::log(p.rMax / p.rMin);
  int iMin = 0;
  for (int i = 0; i < np; ++i) {
    pr[i] = p.rMin * std::exp(logRatio * i / (np - 1));
    pv[i] = vLow(pr[i]);
    if (pv[i] < pv[iMin]) iMin = i;
  }

  // t-cap equivalent expressed through the phase criterion: an envelope of
  // qAbs/capRelax^2 yields h = sqrt(12 tCap / qAbs)
  const MeshParams mpDefaults;
  const double capRelax =
      std::sqrt(12.0 * mpDefaults.tCap) / p.phaseStep;
  const double relax2 = kMeshForbiddenRelax * kMeshForbiddenRelax;
  for (int i = 0; i < np; ++i) {
    const double qa = vAbs(pr[i]);
    const double osc = twoMu * std::max(0.0, p.eTop - pv[i]);
    if (i <= iMin) {
      // oscillation-resolving inside the well, decay-resolving on the wall
      env[i] = std::max({osc, qa / relax2, qa / (capRelax * capRelax)});
      continue;
    }
    double forb = 0.0;
    for (int j = iMin; j < i; ++j) {
      const double a = twoMu * (pv[i] - std::max(pv[j], p.eLo));
      if (a <= forb) continue;
      const double span =
          kMeshShapeSlack * kMeshDecayBudget / (pr[i] - pr[j]);
      forb = std::max(forb, std::min(a, span * span));
    }
    env[i] = std::max({osc, forb / relax2, qa / (capRelax * capRelax)});
  }

  MeshParams mp;
  mp.rMin = p.rMin;
  mp.rMax = p.rMax;
  mp.phaseStep = p.phaseStep;
  mp.hMax = p.hMax;
  auto qEnv = [&](double r) {
    auto it = std::lower_bound(pr.begin(), pr.end(), r);
    int j = static_cast<int>(it - pr.begin());
    const int lo = std::max(0, j - 1);
    const int hi = std::min(j, np - 1);
    return std::max(env[lo], env[hi]);
  };

  RadialCache rc;
  rc.mesh = buildMesh(qEnv, mp);
  rc.eLo = p.eLo;
  rc.eTop = p.eTop;
  rc.thresholdSpread = p.thresholdSpread;
  rc.probeR = pr;
  rc.probeV = pv;
  rc.twoMu = twoMu;
  rc.nodeR = rc.mesh.nodes();
  rc.weights = rc.mesh.quadratureWeights();
  const std::size_t ns = rc.mesh.samples.size();
  rc.vx.resize(ns);
  rc.va.resize(ns);
  rc.lam.resize(ns);
  rc.invR2.resize(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const double r = rc.mesh.samples[i];
    rc.vx[i] = sys.singlet(r);
    rc.va[i] = sys.triplet(r);
    rc.lam[i] = lam(r);
    rc.invR2[i] = 1.0 / (r * r);
  }
  return rc;
}

ChannelQ::ChannelQ(const CollisionSystem& sys, const FieldModel& fm,
                   const RadialCache& rc, double eRel)
    : fm_(fm), rc_(rc), twoMu_(2.0 * sys.mu) {
  const double slack = 1e-9 * std::max(std::abs(rc.eLo), rc.eTop) + 1e-300;
  if (eRel < rc.eLo - slack || eRel > rc.eTop + slack)
    throw ValidationError("energy outside the radial cache's window");
  if (fm.thresholds.maxCoeff() > rc.thresholdSpread * (1.0 + 1e-9) + 1e-300)
    throw ValidationError("field model spread exceeds the radial cache's");
  diagShift_ = twoMu_ * (fm.thresholds.array() - eRel).matrix();
}

int ChannelQ::dim() const { return fm_.basis.dim(); }

void ChannelQ::q(int sampleIndex, Eigen::MatrixXd& out) const {
  const double cx = twoMu_ * rc_.vx[sampleIndex];
  const double ca = twoMu_ * rc_.va[sampleIndex];
  const double cl = twoMu_ * rc_.lam[sampleIndex];
  out.noalias() = cx * fm_.p0;
  out.noalias() += ca * fm_.p1;
  out.noalias() += cl * fm_.m;
  out.diagonal() += diagShift_ + rc_.invR2[sampleIndex] * fm_.lCent;
}

namespace {

double riccatiJ(int l, double x) {
  return x * (l >= 0 ? std::sph_bessel(static_cast<unsigned>(l), x)
                     : std::cos(x) / x);
}
double riccatiY(int l, double x) {
  return x * (l >= 0 ? std::sph_neumann(static_cast<unsigned>(l), x)
                     : std::sin(x) / x);
}

}  // namespace

ScatterPoint scatterAt(const CollisionSystem& sys, const FieldModel& fm,
                       const RadialCache& rc, double eRel) {
  if (!(eRel > 0.0))
    throw ValidationError("collision energy must be positive");
  const int n = fm.basis.dim();
  ChannelQ src(sys, fm, rc, eRel);
  SweepOptions opt;
  const MatrixSweep sw = matrixSweepOutward(src, rc.mesh, opt);
  const double rEnd = rc.mesh.rMax;

  ScatterPoint out;
  out.field = fm.field;
  out.energy = eRel;

  Eigen::VectorXd f(n), fp(n), g(n), gp(n);
  for (int i = 0; i < n; ++i) {
    const double k2 = 2.0 * sys.mu * (eRel - fm.thresholds(i));
    const int l = fm.basis.channels[i].ell;
    if (k2 > 0.0) {
      const double k = std::sqrt(k2);
      const double x = k * rEnd;
      const double sk = std::sqrt(k);
      f(i) = riccatiJ(l, x) / sk;
      fp(i) = sk * (riccatiJ(l - 1, x) - l * riccatiJ(l, x) / x);
      g(i) = -riccatiY(l, x) / sk;
      gp(i) = -sk * (riccatiY(l - 1, x) - l * riccatiY(l, x) / x);
      out.openChannels.push_back(i);
    } else {
      // exponential pair normalized at the matching radius
      const double kap = std::sqrt(-k2);
      const double rt = std::sqrt(2.0 * kap);
      f(i) = 1.0 / rt;
      fp(i) = kap / rt;
      g(i) = 1.0 / rt;
      gp(i) = -kap / rt;
    }
  }
  out.openCount = static_cast<int>(out.openChannels.size());
  if (out.openCount == 0)
    throw NumericalError("no open channel at the requested energy");

  Eigen::MatrixXd a = sw.logDerivative * g.asDiagonal();
  a.diagonal() -= gp;
  Eigen::MatrixXd b = sw.logDerivative * f.asDiagonal();
  b.diagonal() -= fp;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::MatrixXd kFull = -lu.solve(b);

  const int no = out.openCount;
  Eigen::MatrixXd kOpen(no, no);
  for (int r = 0; r < no; ++r)
    for (int c = 0; c < no; ++c)
      kOpen(r, c) = kFull(out.openChannels[r], out.openChannels[c]);
  out.kAsymmetry = (kOpen - kOpen.transpose()).cwiseAbs().maxCoeff();
  kOpen = 0.5 * (kOpen + kOpen.transpose()).eval();
  out.kOpen = kOpen;

  const Eigen::MatrixXcd ik =
      std::complex<double>(0.0, 1.0) * kOpen.cast<std::complex<double>>();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(no, no);
  out.sOpen = (id + ik) * (id - ik).inverse();

  // entrance-channel scattering length with the Born tail beyond rMax
  int ent = 0;
  for (int r = 0; r < no; ++r)
    if (out.openChannels[r] == fm.basis.entrance) ent = r;
  const double kEnt = std::sqrt(2.0 * sys.mu * eRel);
  const double r3 = rEnd * rEnd * rEnd;
  const double tailBorn =
      2.0 * sys.mu *
      (sys.triplet.tail.C6 / (3.0 * r3) +
       sys.triplet.tail.C8 / (5.0 * r3 * rEnd * rEnd));
  out.scatteringLength = -kOpen(ent, ent) / kEnt - tailBorn;
  return out;
}

}  // namespace ccmol
