#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace ccmol {

// one uniform-step sector; nodes at r0 + j*h for j = 0..steps
struct Sector {
  double r0 = 0.0;
  double h = 0.0;
  int steps = 0;
};

struct MeshParams {
  double rMin = 0.0;
  double rMax = 0.0;
  double phaseStep = 0.15;  // bound on |k|h per step, k = sqrt(|Q|)
  double hMax = 4.0;
  double hMin = 1e-6;
  double tCap = 0.45;  // hard bound on h^2|Q|/12, keeps 1 - T positive
  int probePoints = 6000;
  int minSectorSteps = 4;
};

// Piecewise-uniform radial mesh whose step doubles between consecutive
// sectors, so a sweep can cross every boundary without losing accuracy.
// The sample list holds every radius at which Q is needed, in sweep order:
// sector 0 emits nodes 0..n, each later sector emits the half-step point
// r0 + h/2 followed by nodes 1..n, and one trailing point rMax + hLast
// closes the list (used by the endpoint derivative).
struct RadialMesh {
  std::vector<Sector> sectors;
  double rMin = 0.0;
  double rMax = 0.0;  // actual outer node; may exceed the requested value
  int intervals = 0;
  std::vector<double> samples;

  std::vector<double> nodes() const;             // size intervals + 1
  std::vector<double> quadratureWeights() const;  // Simpson, aligned with nodes
};

// qEnvelope(r) must bound |2 mu (W_ii(r) - E)| + centrifugal term over every
// channel and every (E, B) the mesh will serve
RadialMesh buildMesh(const std::function<double(double)>& qEnvelope,
                     const MeshParams& p);

// Shared mesh-envelope policy. A solution is treated as fully decayed this
// many e-folds past its turning point (sweeps may truncate there); in
// decaying regions the phase criterion relaxes by kMeshForbiddenRelax; local
// kappa may exceed budget/(r - turningPoint) by kMeshShapeSlack before the
// decay integral reaches the budget.
inline constexpr double kMeshDecayBudget = 45.0;
inline constexpr double kMeshForbiddenRelax = 8.0 / 3.0;
inline constexpr double kMeshShapeSlack = 3.0;
// Wavefunction seeding horizon: past this decay depth the energy-bisection
// residual already feeds a visible growing admixture, so reconstructions seed
// there (amplitude ~e^-13 of the peak) and zero the rest of the tail.
inline constexpr double kReconstructBudget = 13.0;

struct SweepOptions {
  bool countNodes = false;
  bool storeRatios = false;
  // global node index at which to stop early (-1 = full range). A truncated
  // sweep reports nodes, ratios and the extension ratio at the stop node but
  // no log-derivative.
  int stopNode = -1;
};

// Renormalized-Numerov outward sweep: propagates R_g = F(node g+1) F(node g)^-1
// from a hard wall at the inner node. ratios[g] covers interval (g, g+1);
// slot 0 is never defined and holds zero. extensionRatio covers the virtual
// interval past the last node and feeds both the endpoint log-derivative and
// bound-state reconstruction seeds.
struct ScalarSweep {
  double logDerivative = 0.0;
  int nodes = 0;
  double extensionRatio = 0.0;
  std::vector<double> ratios;
};

// q[i] = 2 mu (W(samples[i]) - E), aligned with mesh.samples
ScalarSweep scalarSweepOutward(const std::vector<double>& q,
                               const RadialMesh& mesh, const SweepOptions& opt);

struct MatrixSweep {
  Eigen::MatrixXd logDerivative;
  int nodes = 0;
  Eigen::MatrixXd extensionRatio;
  std::vector<Eigen::MatrixXd> ratios;
};

// streams Q(samples[i]) without owning the storage; engines cache behind it
class MatrixQSource {
 public:
  virtual ~MatrixQSource() = default;
  virtual int dim() const = 0;
  virtual void q(int sampleIndex, Eigen::MatrixXd& out) const = 0;
};

MatrixSweep matrixSweepOutward(const MatrixQSource& src, const RadialMesh& mesh,
                               const SweepOptions& opt);

// negative-eigenvalue count of a symmetric matrix (lower triangle read)
int negativeEigenvalues(const Eigen::MatrixXd& sym);

// backward substitution through stored ratios; psiEnd seeds node endNode
// (-1 = outermost), nodes beyond it are zero and the wall node comes back
// as exactly zero
std::vector<double> scalarReconstruct(const std::vector<double>& q,
                                      const RadialMesh& mesh,
                                      const ScalarSweep& sweep, double psiEnd,
                                      int endNode = -1);

std::vector<Eigen::VectorXd> matrixReconstruct(const MatrixQSource& src,
                                               const RadialMesh& mesh,
                                               const MatrixSweep& sweep,
                                               const Eigen::VectorXd& psiEnd,
                                               int endNode = -1);

}  // namespace ccmol
