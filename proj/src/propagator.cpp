#include "ccmol/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ccmol/errors.hpp"

namespace ccmol {
namespace {

// probe table of the largest step the local wavelength allows
struct StepBudget {
  std::vector<double> r;
  std::vector<double> h;  // suffix-min applied: nondecreasing in r

  double allowed(double radius) const {
    auto it = std::lower_bound(r.begin(), r.end(), radius);
    const int n = static_cast<int>(r.size());
    int j = static_cast<int>(it - r.begin());
    const int lo = std::max(0, j - 1);
    const int hi = std::min(j, n - 1);
    return std::min(h[lo], h[hi]);
  }

  // smallest radius from which a sector of step hNew may start
  double doubleFrom(double hNew) const {
    auto it = std::lower_bound(h.begin(), h.end(), hNew);
    if (it == h.end()) return r.back() * (1.0 + 1e-12) + 1.0;
    return r[it - h.begin()];
  }
};

}  // namespace

RadialMesh buildMesh(const std::function<double(double)>& qEnvelope,
                     const MeshParams& p) {
  if (!(p.rMin > 0.0) || !(p.rMax > p.rMin))
    throw ValidationError("mesh range must satisfy 0 < rMin < rMax");
  if (!(p.phaseStep > 0.0) || !(p.tCap > 0.0) || p.tCap >= 1.0)
    throw ValidationError("mesh accuracy parameters out of range");

  const int np = std::max(p.probePoints, 16);
  StepBudget budget;
  budget.r.resize(np);
  budget.h.resize(np);
  const double logRatio = std::log(p.rMax / p.rMin);
  for (int i = 0; i < np; ++i) {
    const double radius = p.rMin * std::exp(logRatio * i / (np - 1));
    const double qa = std::max(std::abs(qEnvelope(radius)), 1e-300);
    const double hStep =
        std::min(p.phaseStep / std::sqrt(qa), std::sqrt(12.0 * p.tCap / qa));
    if (hStep < p.hMin)
      throw ValidationError("wavelength envelope at r=" + std::to_string(radius) +
                            " demands a step below hMin; the potential is " +
                            "likely unphysical at this radius");
    budget.r[i] = radius;
    budget.h[i] = std::min(hStep, p.hMax);
  }
  for (int i = np - 2; i >= 0; --i)
    budget.h[i] = std::min(budget.h[i], budget.h[i + 1]);

  RadialMesh mesh;
  mesh.rMin = p.rMin;
  double r = p.rMin;
  double h = budget.allowed(r);
  while (r < p.rMax * (1.0 - 1e-14)) {
    const double sectorEnd = std::min(budget.doubleFrom(2.0 * h), p.rMax);
    int steps = static_cast<int>(std::ceil((sectorEnd - r) / h - 1e-9));
    steps = std::max(steps, p.minSectorSteps);
    steps += steps & 1;
    mesh.sectors.push_back({r, h, steps});
    mesh.intervals += steps;
    r += steps * h;
    if (budget.allowed(r) >= 2.0 * h) h *= 2.0;
  }
  if (mesh.sectors.empty()) throw ValidationError("empty radial mesh");
  mesh.rMax = r;

  mesh.samples.reserve(mesh.intervals + mesh.sectors.size() + 2);
  for (std::size_t s = 0; s < mesh.sectors.size(); ++s) {
    const Sector& sec = mesh.sectors[s];
    if (s == 0) mesh.samples.push_back(sec.r0);
    else mesh.samples.push_back(sec.r0 + 0.5 * sec.h);
    for (int j = 1; j <= sec.steps; ++j)
      mesh.samples.push_back(sec.r0 + j * sec.h);
  }
  mesh.samples.push_back(mesh.rMax + mesh.sectors.back().h);
  return mesh;
}

std::vector<double> RadialMesh::nodes() const {
  std::vector<double> out;
  out.reserve(intervals + 1);
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    const Sector& sec = sectors[s];
    for (int j = (s == 0 ? 0 : 1); j <= sec.steps; ++j)
      out.push_back(sec.r0 + j * sec.h);
  }
  return out;
}

std::vector<double> RadialMesh::quadratureWeights() const {
  std::vector<double> w(intervals + 1, 0.0);
  int base = 0;
  for (const Sector& sec : sectors) {
    for (int j = 0; j <= sec.steps; ++j) {
      double c = (j == 0 || j == sec.steps) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      w[base + j] += c * sec.h / 3.0;
    }
    base += sec.steps;
  }
  return w;
}

namespace {

double scalarU(double q, double h) {
  const double t = h * h * q / 12.0;
  if (t >= 1.0) throw NumericalError("step exceeds local wavelength cap");
  return 12.0 / (1.0 - t) - 10.0;
}

}  // namespace

ScalarSweep scalarSweepOutward(const std::vector<double>& q,
                               const RadialMesh& mesh,
                               const SweepOptions& opt) {
  if (q.size() != mesh.samples.size())
    throw ValidationError("sample array does not match mesh");
  const int stop =
      (opt.stopNode >= 0 && opt.stopNode < mesh.intervals) ? opt.stopNode : -1;
  if (stop == 0) throw ValidationError("stop node must be past the wall");
  ScalarSweep out;
  if (opt.storeRatios) out.ratios.assign(mesh.intervals, 0.0);

  std::size_t cursor = 0;
  int gi = 0;             // global index of the sector's first interval
  double prevInv = 0.0;   // inverse of the latest produced ratio
  double lastRatio = 0.0;
  double qNode = 0.0;     // Q at the most recent node
  double qPrev = 0.0;     // Q at the node before it
  bool truncated = false;

  auto emit = [&](double ratio, int interval) {
    if (opt.countNodes && ratio < 0.0) ++out.nodes;
    if (opt.storeRatios) out.ratios[interval] = ratio;
    lastRatio = ratio;
    prevInv = 1.0 / ratio;
    return interval == stop - 1;  // true: caller finishes at node `stop`
  };

  for (std::size_t s = 0; s < mesh.sectors.size() && !truncated; ++s) {
    const Sector& sec = mesh.sectors[s];
    const double h = sec.h;
    int jStart = 1;
    if (s == 0) {
      qNode = q[cursor++];
      prevInv = 0.0;
    } else {
      // continue the previous sector two half-steps past the boundary, then
      // recast the spanned ratio in this sector's normalization
      const double hf = 0.5 * h;
      const double qb = qNode;
      const double ext1 = scalarU(qb, hf) - prevInv;
      const double qMid = q[cursor++];
      const double ext2 = scalarU(qMid, hf) - 1.0 / ext1;
      const double q1 = q[cursor++];
      const double tf1 = hf * hf * q1 / 12.0, tc1 = h * h * q1 / 12.0;
      const double tfb = hf * hf * qb / 12.0, tcb = h * h * qb / 12.0;
      const double rInit =
          (1.0 - tc1) / (1.0 - tf1) * ext2 * ext1 * (1.0 - tfb) / (1.0 - tcb);
      qPrev = qb;
      qNode = q1;
      if (emit(rInit, gi)) {
        out.extensionRatio = scalarU(qNode, h) - prevInv;
        truncated = true;
        break;
      }
      // the ratio for interval (1,2) also hangs off node 1
      if (emit(scalarU(qNode, h) - prevInv, gi + 1)) {
        out.extensionRatio = scalarU(q[cursor], h) - prevInv;
        truncated = true;
        break;
      }
      jStart = 2;
    }
    for (int j = jStart; j <= sec.steps; ++j) {
      qPrev = qNode;
      qNode = q[cursor++];
      // node j carries the ratio over (j, j+1); a sector's last node leaves
      // its outward interval to the next sector's join
      if (j <= sec.steps - 1 && emit(scalarU(qNode, h) - prevInv, gi + j)) {
        out.extensionRatio = scalarU(q[cursor], h) - prevInv;
        truncated = true;
        break;
      }
    }
    gi += sec.steps;
  }

  if (truncated) {
    out.logDerivative = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  const double h = mesh.sectors.back().h;
  out.extensionRatio = scalarU(qNode, h) - prevInv;
  const double qTrail = q[cursor++];
  const double tTrail = h * h * qTrail / 12.0;
  const double tPrev = h * h * qPrev / 12.0;
  const double tEnd = h * h * qNode / 12.0;
  out.logDerivative =
      0.5 / h *
      ((1.0 - 2.0 * tTrail) / (1.0 - tTrail) * out.extensionRatio -
       (1.0 - 2.0 * tPrev) / (1.0 - tPrev) / lastRatio) *
      (1.0 - tEnd);
  return out;
}

int negativeEigenvalues(const Eigen::MatrixXd& sym) {
  const int n = static_cast<int>(sym.rows());
  if (n == 1) return sym(0, 0) < 0.0 ? 1 : 0;
  Eigen::MatrixXd work = 0.5 * (sym + sym.transpose());
  Eigen::Tridiagonalization<Eigen::MatrixXd> tri(work);
  const Eigen::VectorXd diag = tri.diagonal();
  const Eigen::VectorXd sub = tri.subDiagonal();
  int count = 0;
  double d = diag(0);
  if (d < 0.0) ++count;
  for (int i = 1; i < n; ++i) {
    double den = d;
    if (std::abs(den) < 1e-300) den = den < 0.0 ? -1e-300 : 1e-300;
    d = diag(i) - sub(i - 1) * sub(i - 1) / den;
    if (d < 0.0) ++count;
  }
  return count;
}

namespace {

// reusable per-step state for the matrix sweep
struct MatrixKernel {
  int n;
  Eigen::MatrixXd id, t, a, u, r, prevInv, work, work2;
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;

  explicit MatrixKernel(int dim)
      : n(dim), id(Eigen::MatrixXd::Identity(dim, dim)) {
    t.resize(n, n); a.resize(n, n); u.resize(n, n); r.resize(n, n);
    prevInv = Eigen::MatrixXd::Zero(n, n);
    work.resize(n, n); work2.resize(n, n);
  }

  void formU(const Eigen::MatrixXd& q, double h) {
    t.noalias() = (h * h / 12.0) * q;
    a.noalias() = id - t;
    llt.compute(a);
    if (llt.info() != Eigen::Success)
      throw NumericalError("step exceeds local wavelength cap");
    u = 12.0 * id;
    llt.solveInPlace(u);
    u.diagonal().array() -= 10.0;
  }

  void invert(const Eigen::MatrixXd& m, Eigen::MatrixXd& into) {
    lu.compute(m);
    into = lu.solve(id);
  }
};

int inertia(Eigen::Tridiagonalization<Eigen::MatrixXd>& tri,
            Eigen::MatrixXd& work, const Eigen::MatrixXd& sym) {
  const int n = static_cast<int>(sym.rows());
  work = 0.5 * (sym + sym.transpose());
  tri.compute(work);
  const auto diag = tri.diagonal();
  const auto sub = tri.subDiagonal();
  int count = 0;
  double d = diag(0);
  if (d < 0.0) ++count;
  for (int i = 1; i < n; ++i) {
    double den = d;
    if (std::abs(den) < 1e-300) den = den < 0.0 ? -1e-300 : 1e-300;
    d = diag(i) - sub(i - 1) * sub(i - 1) / den;
    if (d < 0.0) ++count;
  }
  return count;
}

}  // namespace

MatrixSweep matrixSweepOutward(const MatrixQSource& src, const RadialMesh& mesh,
                               const SweepOptions& opt) {
  const int n = src.dim();
  const int stop =
      (opt.stopNode >= 0 && opt.stopNode < mesh.intervals) ? opt.stopNode : -1;
  if (stop == 0) throw ValidationError("stop node must be past the wall");
  MatrixSweep out;
  if (opt.storeRatios)
    out.ratios.assign(mesh.intervals, Eigen::MatrixXd());

  MatrixKernel k(n);
  Eigen::Tridiagonalization<Eigen::MatrixXd> tri(n);
  Eigen::MatrixXd qNode(n, n), qPrev(n, n), qTmp(n, n);
  Eigen::MatrixXd lastRatio(n, n), lastInv = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd ext1(n, n), ext2(n, n), rInit(n, n), symBuf(n, n);
  int cursor = 0;
  int gi = 0;
  bool truncated = false;

  auto emit = [&](const Eigen::MatrixXd& ratio, int interval) {
    if (opt.countNodes) out.nodes += inertia(tri, symBuf, ratio);
    if (opt.storeRatios) out.ratios[interval] = ratio;
    lastRatio = ratio;
    k.invert(lastRatio, lastInv);
    return interval == stop - 1;  // true: caller finishes at node `stop`
  };
  auto extendAt = [&](const Eigen::MatrixXd& qStop, double h) {
    k.formU(qStop, h);
    out.extensionRatio.noalias() = k.u - lastInv;
    truncated = true;
  };

  for (std::size_t s = 0; s < mesh.sectors.size() && !truncated; ++s) {
    const Sector& sec = mesh.sectors[s];
    const double h = sec.h;
    int jStart = 1;
    if (s == 0) {
      src.q(cursor++, qNode);
      lastInv.setZero();
    } else {
      const double hf = 0.5 * h;
      // fine-step extension across the boundary
      k.formU(qNode, hf);
      ext1.noalias() = k.u - lastInv;
      k.invert(ext1, k.work2);
      src.q(cursor++, qTmp);
      k.formU(qTmp, hf);
      ext2.noalias() = k.u - k.work2;

      qPrev = qNode;  // boundary-node Q
      src.q(cursor++, qTmp);  // first interior node of this sector

      // rInit = (I-Tc1)(I-Tf1)^-1 ext2 ext1 (I-Tfb)(I-Tcb)^-1
      k.work.noalias() = ext2 * ext1;
      k.t.noalias() = (hf * hf / 12.0) * qTmp;
      k.a.noalias() = k.id - k.t;
      k.llt.compute(k.a);
      k.llt.solveInPlace(k.work);
      k.t.noalias() = (h * h / 12.0) * qTmp;
      k.work2.noalias() = (k.id - k.t) * k.work;
      k.t.noalias() = (hf * hf / 12.0) * qPrev;
      k.work.noalias() = k.work2 * (k.id - k.t);
      k.t.noalias() = (h * h / 12.0) * qPrev;
      k.a.noalias() = k.id - k.t;
      k.llt.compute(k.a);
      // right-division by the symmetric factor via transposed solves
      k.work2 = k.work.transpose();
      k.llt.solveInPlace(k.work2);
      rInit.noalias() = 0.5 * (k.work2.transpose() + k.work2);
      qNode = qTmp;
      if (emit(rInit, gi)) {
        extendAt(qNode, h);
        break;
      }

      k.formU(qNode, h);
      k.work.noalias() = k.u - lastInv;
      if (emit(k.work, gi + 1)) {
        src.q(cursor, qTmp);
        extendAt(qTmp, h);
        break;
      }
      jStart = 2;
    }
    for (int j = jStart; j <= sec.steps && !truncated; ++j) {
      qPrev = qNode;
      src.q(cursor++, qNode);
      if (j <= sec.steps - 1) {
        k.formU(qNode, h);
        k.work.noalias() = k.u - lastInv;
        if (emit(k.work, gi + j)) {
          src.q(cursor, qTmp);
          extendAt(qTmp, h);
        }
      }
    }
    gi += sec.steps;
  }

  if (truncated) return out;

  const double h = mesh.sectors.back().h;
  k.formU(qNode, h);
  out.extensionRatio.noalias() = k.u - lastInv;

  src.q(cursor++, qTmp);  // trailing sample
  Eigen::MatrixXd tTrail = (h * h / 12.0) * qTmp;
  Eigen::MatrixXd tPrev = (h * h / 12.0) * qPrev;
  Eigen::MatrixXd tEnd = (h * h / 12.0) * qNode;

  Eigen::MatrixXd lhs = k.id - tTrail;
  Eigen::PartialPivLU<Eigen::MatrixXd> luT(lhs);
  Eigen::MatrixXd term1 = luT.solve(out.extensionRatio);
  term1 = (k.id - 2.0 * tTrail) * term1;

  lhs = k.id - tPrev;
  luT.compute(lhs);
  k.invert(lastRatio, lastInv);
  Eigen::MatrixXd term2 = luT.solve(lastInv);
  term2 = (k.id - 2.0 * tPrev) * term2;

  out.logDerivative = (0.5 / h) * ((term1 - term2) * (k.id - tEnd));
  return out;
}

namespace {

// sample index of node (sector s, local j >= 1); node (s, 0) is the previous
// sector's last node
struct SampleIndexer {
  std::vector<int> base;  // first sample index of each sector's own block

  explicit SampleIndexer(const RadialMesh& mesh) {
    int idx = 0;
    for (const Sector& sec : mesh.sectors) {
      base.push_back(idx);
      idx += sec.steps + 1;  // sector block: (node0 | mid) + nodes 1..steps
    }
  }

  int node(const RadialMesh& mesh, int s, int j) const {
    if (j == 0) {
      if (s == 0) return 0;
      return node(mesh, s - 1, mesh.sectors[s - 1].steps);
    }
    return s == 0 ? base[0] + j : base[s] + j;  // later sectors: mid then nodes
  }
};

}  // namespace

std::vector<double> scalarReconstruct(const std::vector<double>& q,
                                      const RadialMesh& mesh,
                                      const ScalarSweep& sweep, double fEnd,
                                      int endNode) {
  if (sweep.ratios.size() != static_cast<std::size_t>(mesh.intervals))
    throw ValidationError("reconstruction requires stored ratios");
  const int target = endNode < 0 ? mesh.intervals : endNode;
  if (target < 1 || target > mesh.intervals)
    throw ValidationError("reconstruction end node out of range");
  SampleIndexer ix(mesh);
  std::vector<double> psi(mesh.intervals + 1, 0.0);
  const int nSec = static_cast<int>(mesh.sectors.size());

  auto tOf = [&](int s, int j, double h) {
    return h * h * q[ix.node(mesh, s, j)] / 12.0;
  };

  double f = fEnd;
  bool seeded = false;
  int giEnd = mesh.intervals;  // global node index of the sector's last node
  for (int s = nSec - 1; s >= 0; --s) {
    const Sector& sec = mesh.sectors[s];
    const double h = sec.h;
    const int giBase = giEnd - sec.steps;
    if (giBase >= target) {  // whole sector past the seed: stays zero
      giEnd = giBase;
      continue;
    }
    const int jTop = seeded ? sec.steps : target - giBase;
    psi[giBase + jTop] = f / (1.0 - tOf(s, jTop, h));
    seeded = true;
    for (int j = jTop - 1; j >= (s == 0 ? 1 : 0); --j) {
      f /= sweep.ratios[giBase + j];
      psi[giBase + j] = f / (1.0 - tOf(s, j, h));
    }
    if (s > 0) f = psi[giBase] * (1.0 - tOf(s - 1, mesh.sectors[s - 1].steps,
                                            mesh.sectors[s - 1].h));
    giEnd = giBase;
  }
  psi[0] = 0.0;
  return psi;
}

std::vector<Eigen::VectorXd> matrixReconstruct(const MatrixQSource& src,
                                               const RadialMesh& mesh,
                                               const MatrixSweep& sweep,
                                               const Eigen::VectorXd& fEnd,
                                               int endNode) {
  if (sweep.ratios.size() != static_cast<std::size_t>(mesh.intervals))
    throw ValidationError("reconstruction requires stored ratios");
  const int target = endNode < 0 ? mesh.intervals : endNode;
  if (target < 1 || target > mesh.intervals)
    throw ValidationError("reconstruction end node out of range");
  const int n = src.dim();
  SampleIndexer ix(mesh);
  std::vector<Eigen::VectorXd> psi(mesh.intervals + 1,
                                   Eigen::VectorXd::Zero(n));
  Eigen::MatrixXd q(n, n), t(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

  auto psiFrom = [&](const Eigen::VectorXd& f, int s, int j,
                     double h) -> Eigen::VectorXd {
    src.q(ix.node(mesh, s, j), q);
    t.noalias() = id - (h * h / 12.0) * q;
    lu.compute(t);
    return lu.solve(f);
  };
  auto fFrom = [&](const Eigen::VectorXd& p, int s, int j, double h) {
    src.q(ix.node(mesh, s, j), q);
    t.noalias() = id - (h * h / 12.0) * q;
    return Eigen::VectorXd(t * p);
  };

  Eigen::VectorXd f = fEnd;
  bool seeded = false;
  const int nSec = static_cast<int>(mesh.sectors.size());
  int giEnd = mesh.intervals;
  for (int s = nSec - 1; s >= 0; --s) {
    const Sector& sec = mesh.sectors[s];
    const double h = sec.h;
    const int giBase = giEnd - sec.steps;
    if (giBase >= target) {  // whole sector past the seed: stays zero
      giEnd = giBase;
      continue;
    }
    const int jTop = seeded ? sec.steps : target - giBase;
    psi[giBase + jTop] = psiFrom(f, s, jTop, h);
    seeded = true;
    for (int j = jTop - 1; j >= (s == 0 ? 1 : 0); --j) {
      lu.compute(sweep.ratios[giBase + j]);
      f = lu.solve(f);
      psi[giBase + j] = psiFrom(f, s, j, h);
    }
    if (s > 0)
      f = fFrom(psi[giBase], s - 1, mesh.sectors[s - 1].steps,
                mesh.sectors[s - 1].h);
    giEnd = giBase;
  }
  psi[0].setZero();
  return psi;
}

}  // namespace ccmol
