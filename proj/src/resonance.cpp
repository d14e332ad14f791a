#include "ccmol/resonance.hpp"

#include <algorithm>
#include <cmath>

#include "ccmol/boundstates.hpp"
#include "ccmol/errors.hpp"

namespace ccmol {

double scatteringLengthAt(const CollisionSystem& sys, const RadialCache& rc,
                          double B, double collisionEnergy) {
  const FieldModel fm = buildFieldModel(sys, B);
  return scatterAt(sys, fm, rc, collisionEnergy).scatteringLength;
}

namespace {

// a sign flip of a(B) bracketed to well inside bTol; the a values at the
// final bracket ends tell a pole (both ends huge) from a zero (both tiny)
struct FlipResult {
  double b = 0;
  double aNear = 0;
  double aFar = 0;
};

// scale-free crossing classifier: against the background magnitude aRef the
// end product sits a factor (width / bracket)^2 high at a pole and the same
// factor low at a zero, so the midpoint never misreads a resolved resonance
bool crossesPole(const FlipResult& f, double aRef) {
  return std::abs(f.aNear * f.aFar) > std::max(aRef * aRef, 1e-12);
}

struct Finder {
  const CollisionSystem& sys;
  const RadialCache& rc;
  const ResonanceScan& p;

  int countAt(double b) const {
    const FieldModel fm = buildFieldModel(sys, b);
    return boundCountBelow(sys, fm, rc, -p.probeBinding);
  }
  double aAt(double b) const {
    return scatteringLengthAt(sys, rc, b, p.collisionEnergy);
  }

  void split(double b1, int n1, double b2, int n2,
             std::vector<Resonance>& out) const {
    if (n1 == n2) return;
    if (b2 - b1 <= p.bTol) {
      for (int u = 0; u < std::abs(n2 - n1); ++u) {
        Resonance r;
        r.b0 = 0.5 * (b1 + b2);
        r.bFlip = r.b0;
        r.countStep = (n2 > n1) ? 1 : -1;
        out.push_back(r);
      }
      return;
    }
    const double mid = 0.5 * (b1 + b2);
    const int nm = countAt(mid);
    split(b1, n1, mid, nm, out);
    split(mid, nm, b2, n2, out);
  }

  // stops at a fiftieth of bTol: tight enough that neither the pole field
  // nor a width built from the zero moves at the reported precision, and
  // each step saved is a full propagation
  FlipResult bisectFlip(double bNear, double aNear, double bFar,
                        double aFar) const {
    const bool nearSign = std::signbit(aNear);
    while (std::abs(bFar - bNear) > 0.02 * p.bTol) {
      const double m = 0.5 * (bNear + bFar);
      if (m == bNear || m == bFar) break;
      const double am = aAt(m);
      if (std::signbit(am) == nearSign) {
        bNear = m;
        aNear = am;
      } else {
        bFar = m;
        aFar = am;
      }
    }
    return {0.5 * (bNear + bFar), aNear, aFar};
  }

  // walks a geometric ladder from b along direction dir (limit |s| given),
  // returns true when a(b + dir s) changes sign and leaves the flip in *flip
  bool ladderFlip(double b, int dir, double s0, double limit, double aRef,
                  FlipResult* flip) const {
    if (limit <= s0) return false;
    double sPrev = 0.0;
    double aPrev = aRef;
    double s = s0;
    while (true) {
      const double aCur = aAt(b + dir * s);
      if (std::signbit(aPrev) != std::signbit(aCur)) {
        *flip = bisectFlip(b + dir * sPrev, aPrev, b + dir * s, aCur);
        return true;
      }
      if (s >= limit) return false;
      sPrev = s;
      aPrev = aCur;
      s = std::min(s * 1.8, limit);
    }
  }

  // The count flip sits early of the true pole: the outer wall lifts a
  // near-threshold level, so it reaches -probeBinding before the physical
  // crossing. The pole is re-located as the divergence of a(B) on the side
  // the count step points to, then the width comes from the zero of a(B).
  void refine(Resonance& r, double gapLo, double gapHi) const {
    const double floorStep = p.widthFloor > 0.0 ? p.widthFloor : 2.0 * p.bTol;
    const int sidePole = r.countStep < 0 ? +1 : -1;
    const double poleLimit = 0.45 * (sidePole > 0 ? gapHi : gapLo);
    const double aStart = aAt(r.b0);
    FlipResult flip;
    if (ladderFlip(r.b0, sidePole, p.bTol, poleLimit, aStart, &flip)) {
      if (crossesPole(flip, aStart)) {
        if (sidePole > 0) gapHi -= flip.b - r.b0;
        else gapLo -= r.b0 - flip.b;
        r.b0 = flip.b;
      } else {
        // the zero came first: the pole hides within bTol of the flip point
        r.width = flip.b - r.b0;
      }
    }

    if (r.width == 0.0) {
      for (const int side : {sidePole, -sidePole}) {
        const double limit = 0.45 * (side > 0 ? gapHi : gapLo);
        const double aRef = aAt(r.b0 + side * floorStep * 0.5);
        FlipResult zero;
        if (!ladderFlip(r.b0, side, floorStep, limit, aRef, &zero)) continue;
        if (crossesPole(zero, aRef)) continue;
        r.width = zero.b - r.b0;
        break;
      }
    }

    if (r.width != 0.0) {
      const int sideZ = r.width > 0 ? +1 : -1;
      const double dz = std::abs(r.width);
      const double oppLimit = 0.45 * (sideZ > 0 ? gapLo : gapHi);
      const double sameLimit = 0.45 * (sideZ > 0 ? gapHi : gapLo);
      if (oppLimit > floorStep) {
        // a(B0 - s) = abg (1 + dz/s): never ill-conditioned
        const double sb = std::min(5.0 * dz, oppLimit);
        r.abg = aAt(r.b0 - sideZ * sb) * sb / (sb + dz);
      } else if (sameLimit > 1.2 * dz) {
        const double sb = std::min(5.0 * dz, sameLimit);
        r.abg = aAt(r.b0 + sideZ * sb) * sb / (sb - dz);
      }
    } else {
      r.abg = aAt(r.b0 + (gapHi >= gapLo ? 0.45 * gapHi : -0.45 * gapLo));
    }
  }
};

}  // namespace

std::vector<Resonance> findResonances(
    const CollisionSystem& sys, const RadialCache& rc, const ResonanceScan& p,
    const std::function<void(const Resonance&)>& onFound) {
  if (!(p.bLo < p.bHi) || !(p.bStep > 0.0) || !(p.bTol > 0.0))
    throw ValidationError("resonance scan range, step and tolerance must be "
                          "positive and ordered");
  if (!(p.probeBinding > 0.0) || !(p.collisionEnergy > 0.0))
    throw ValidationError("probe energies must be positive");

  Finder f{sys, rc, p};
  std::vector<Resonance> found;
  double bPrev = p.bLo;
  int nPrev = f.countAt(bPrev);
  for (double b = p.bLo + p.bStep;; b += p.bStep) {
    if (b > p.bHi) b = p.bHi;
    const int nb = f.countAt(b);
    f.split(bPrev, nPrev, b, nb, found);
    if (b >= p.bHi) break;
    bPrev = b;
    nPrev = nb;
  }
  std::sort(found.begin(), found.end(),
            [](const Resonance& x, const Resonance& y) { return x.b0 < y.b0; });

  std::vector<double> flipAt(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) flipAt[i] = found[i].b0;
  for (std::size_t i = 0; i < found.size(); ++i) {
    const double gapLo = flipAt[i] - (i == 0 ? p.bLo : flipAt[i - 1]);
    const double gapHi =
        (i + 1 == found.size() ? p.bHi : flipAt[i + 1]) - flipAt[i];
    f.refine(found[i], gapLo, gapHi);
    if (onFound) onFound(found[i]);
  }
  std::sort(found.begin(), found.end(),
            [](const Resonance& x, const Resonance& y) { return x.b0 < y.b0; });
  return found;
}

}  // namespace ccmol
