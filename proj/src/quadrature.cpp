#include "netfrac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "netfrac/errors.hpp"

namespace netfrac {

namespace {

struct Panel {
  double a, b;
  double fa, fm, fb;
  double whole;
  double tolerance;
  int depth;
};

constexpr int kMaxDepth = 60;

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breakpoints,
                                  const QuadratureOptions& options) {
  QuadratureResult result;
  if (a == b) return result;
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);

  std::vector<double> nodes{a};
  for (double x : breakpoints) {
    if (x > a && x < b) nodes.push_back(x);
  }
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const double length = b - a;
  std::vector<Panel> stack;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double lo = nodes[k], hi = nodes[k + 1];
    const double mid = 0.5 * (lo + hi);
    // One-sided values, so a jump sitting on a node does not stall refinement.
    Panel p{lo, hi, f(std::nextafter(lo, hi)), f(mid), f(std::nextafter(hi, lo)), 0.0,
            options.absolute_tolerance * (hi - lo) / length, 0};
    p.whole = (hi - lo) / 6.0 * (p.fa + 4.0 * p.fm + p.fb);
    stack.push_back(p);
  }
  std::size_t live = stack.size();

  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (std::abs(delta) <= 15.0 * p.tolerance || p.depth >= kMaxDepth || m <= p.a || m >= p.b) {
      if (p.depth >= kMaxDepth && std::abs(delta) > 15.0 * p.tolerance) {
        std::ostringstream msg;
        msg << "adaptive Simpson reached maximum depth on [" << p.a << ", " << p.b << "]";
        throw NumericError(msg.str());
      }
      result.value += left + right + delta / 15.0;
      result.error_estimate += std::abs(delta) / 15.0;
      ++result.subintervals;
      continue;
    }
    if (++live > options.max_subintervals) {
      std::ostringstream msg;
      msg << "adaptive Simpson exceeded " << options.max_subintervals
          << " subintervals near [" << p.a << ", " << p.b << "]";
      throw NumericError(msg.str());
    }
    stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tolerance, p.depth + 1});
    stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tolerance, p.depth + 1});
  }
  result.value *= sign;
  return result;
}

}  // namespace netfrac
