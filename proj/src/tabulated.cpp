#include "ccmol/tabulated.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ccmol/errors.hpp"

namespace ccmol {

TabulatedCurve::TabulatedCurve(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw ValidationError("a tabulated curve needs two or more (x, y) pairs");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
      throw ValidationError("tabulated curve samples must be finite");
    if (i > 0 && !(x_[i] > x_[i - 1]))
      throw ValidationError("tabulated curve abscissae must be increasing");
  }

  // shape-preserving cubic slopes: harmonic mean of neighbor secants, zeroed
  // at local extrema, so the interpolant never overshoots its samples
  slope_.assign(n, 0.0);
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    slope_[0] = slope_[1] = d[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) continue;
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return m;
  };
  slope_[0] = edge(h[0], h[1], d[0], d[1]);
  slope_[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

double TabulatedCurve::operator()(double r) const {
  if (x_.empty()) throw ValidationError("evaluating an empty tabulated curve");
  if (r <= x_.front()) return y_.front();
  if (r >= x_.back()) return y_.back();
  const std::size_t i =
      std::upper_bound(x_.begin(), x_.end(), r) - x_.begin() - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (r - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return y_[i] * (2.0 * t3 - 3.0 * t2 + 1.0) +
         h * slope_[i] * (t3 - 2.0 * t2 + t) +
         y_[i + 1] * (-2.0 * t3 + 3.0 * t2) + h * slope_[i + 1] * (t3 - t2);
}

TabulatedCurve loadTwoColumnCurve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open curve table: " + path);
  std::vector<double> x, y;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    if (!(row >> a)) continue;  // blank or comment-only line
    std::string extra;
    if (!(row >> b) || (row >> extra))
      throw ValidationError(path + ":" + std::to_string(lineNo) +
                            ": expected exactly two columns");
    x.push_back(a);
    y.push_back(b);
  }
  return TabulatedCurve(std::move(x), std::move(y));
}

}  // namespace ccmol
