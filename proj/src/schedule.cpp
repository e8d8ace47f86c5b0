#include "netfrac/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "netfrac/errors.hpp"
#include "netfrac/number_format.hpp"

namespace netfrac {

// ---------------------------------------------------------------------------

SplineSchedule::SplineSchedule(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  const std::size_t n = times_.size();
  if (n < 2 || values_.size() != n) {
    throw ContractError("spline schedule needs at least two (time, value) knots");
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!(times_[k + 1] > times_[k])) {
      throw ContractError("spline knot times must be strictly increasing");
    }
  }
  std::vector<double> h(n - 1), slope(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = times_[k + 1] - times_[k];
    slope[k] = (values_[k + 1] - values_[k]) / h[k];
  }

  // Second derivatives at the knots.
  Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (n == 3) {
    // Not-a-knot on three points is the interpolating parabola.
    m.setConstant(2.0 * (slope[1] - slope[0]) / (times_[2] - times_[0]));
  } else if (n >= 4) {
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    a(0, 0) = h[1];
    a(0, 1) = -(h[0] + h[1]);
    a(0, 2) = h[0];
    for (Eigen::Index k = 1; k + 1 < N; ++k) {
      a(k, k - 1) = h[k - 1];
      a(k, k) = 2.0 * (h[k - 1] + h[k]);
      a(k, k + 1) = h[k];
      rhs(k) = 6.0 * (slope[k] - slope[k - 1]);
    }
    a(N - 1, N - 3) = h[n - 2];
    a(N - 1, N - 2) = -(h[n - 3] + h[n - 2]);
    a(N - 1, N - 1) = h[n - 3];
    m = a.partialPivLu().solve(rhs);
  }
  b_.resize(n - 1);
  c_.resize(n - 1);
  d_.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    b_[k] = slope[k] - h[k] * (2.0 * m(i) + m(i + 1)) / 6.0;
    c_[k] = 0.5 * m(i);
    d_[k] = (m(i + 1) - m(i)) / (6.0 * h[k]);
  }
}

double SplineSchedule::operator()(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  k = std::min(k, times_.size() - 2);
  const double s = t - times_[k];
  return values_[k] + s * (b_[k] + s * (c_[k] + s * d_[k]));
}

// ---------------------------------------------------------------------------

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double fractional_part(double x) { return x - std::floor(x); }

}  // namespace

double AlphaSchedule::raw(double t) const {
  return std::visit(
      Overloaded{
          [](const ConstantSchedule& s) { return s.value; },
          [t](const SineSchedule& s) { return s.base + s.amplitude * std::sin(s.angular_frequency * t); },
          [t](const ExpSaturatingSchedule& s) { return -std::expm1(-s.rate * t); },
          [t](const SawtoothSchedule& s) {
            return s.lo + (s.hi - s.lo) * fractional_part(t / s.period);
          },
          [t](const TriangularSchedule& s) {
            const double phase = fractional_part(t / s.period);
            const double ramp = phase < 0.5 ? 2.0 * phase : 2.0 - 2.0 * phase;
            return s.lo + (s.hi - s.lo) * ramp;
          },
          [t](const SplineSchedule& s) { return s(t); },
      },
      family_);
}

AlphaSchedule::Sample AlphaSchedule::sample(double t) const {
  const double value = raw(t);
  if (value < kMinAlpha) return {kMinAlpha, true};
  if (value > 1.0) return {1.0, true};
  return {value, false};
}

std::optional<double> AlphaSchedule::period() const {
  return std::visit(
      Overloaded{
          [](const SineSchedule& s) -> std::optional<double> {
            return 2.0 * std::numbers::pi / s.angular_frequency;
          },
          [](const SawtoothSchedule& s) -> std::optional<double> { return s.period; },
          [](const TriangularSchedule& s) -> std::optional<double> { return s.period; },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      family_);
}

std::vector<double> AlphaSchedule::breakpoints(double a, double b) const {
  std::vector<double> out;
  auto multiples = [&](double step) {
    for (double k = std::floor(a / step) + 1.0; k * step < b; k += 1.0) {
      if (k * step > a) out.push_back(k * step);
    }
  };
  std::visit(Overloaded{
                 [&](const SawtoothSchedule& s) { multiples(s.period); },
                 [&](const TriangularSchedule& s) { multiples(0.5 * s.period); },
                 [&](const SplineSchedule& s) {
                   for (double x : s.times()) {
                     if (x > a && x < b) out.push_back(x);
                   }
                 },
                 [](const auto&) {},
             },
             family_);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<double> parse_numbers(std::string_view body, std::size_t count, std::string_view name) {
  auto parts = split(body, ',');
  if (parts.size() != count) {
    throw ContractError("schedule '" + std::string(name) + "' expects " + std::to_string(count) +
                        " comma-separated parameters");
  }
  std::vector<double> out;
  for (auto p : parts) out.push_back(parse_double(p));
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ContractError("invalid schedule: " + message);
}

// The probes guard the families whose range is not fixed by the parameter
// checks alone (the spline can overshoot its knots).
void check_probe_range(const AlphaSchedule& s, double lo, double hi) {
  constexpr int kProbes = 1000;
  constexpr double kSlack = 1e-12;
  for (int k = 0; k < kProbes; ++k) {
    const double t = lo + (hi - lo) * k / (kProbes - 1);
    const double v = s.raw(t);
    if (!(v >= -kSlack && v <= 1.0 + kSlack)) {
      throw ContractError("invalid schedule: value " + format_double(v) + " at t = " +
                          format_double(t) + " leaves [0, 1]");
    }
  }
}

}  // namespace

AlphaSchedule parse_schedule(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ContractError("schedule descriptor '" + std::string(text) + "' lacks '<family>:'");
  }
  const std::string_view name = text.substr(0, colon);
  const std::string_view body = text.substr(colon + 1);

  if (name == "const") {
    const double c = parse_double(body);
    require(c > 0.0 && c <= 1.0, "constant must lie in (0, 1]");
    return ConstantSchedule{c};
  }
  if (name == "sin") {
    auto p = parse_numbers(body, 3, name);
    require(p[2] > 0.0 && std::isfinite(p[2]), "angular frequency must be positive");
    require(p[0] - std::abs(p[1]) >= 0.0, "base - |amp| must be >= 0");
    require(p[0] + std::abs(p[1]) <= 1.0, "base + |amp| must be <= 1");
    AlphaSchedule s = SineSchedule{p[0], p[1], p[2]};
    check_probe_range(s, 0.0, *s.period());
    return s;
  }
  if (name == "expsat") {
    const double rate = parse_double(body);
    require(rate > 0.0 && std::isfinite(rate), "rate must be positive");
    AlphaSchedule s = ExpSaturatingSchedule{rate};
    check_probe_range(s, 0.0, 10.0 / rate);
    return s;
  }
  if (name == "saw" || name == "tri") {
    auto p = parse_numbers(body, 3, name);
    require(p[0] >= 0.0 && p[0] < p[1] && p[1] <= 1.0, "need 0 <= lo < hi <= 1");
    require(p[2] > 0.0 && std::isfinite(p[2]), "period must be positive");
    AlphaSchedule s = name == "saw" ? AlphaSchedule(SawtoothSchedule{p[0], p[1], p[2]})
                                    : AlphaSchedule(TriangularSchedule{p[0], p[1], p[2]});
    check_probe_range(s, 0.0, p[2]);
    return s;
  }
  if (name == "spline") {
    std::vector<double> times, values;
    for (auto knot : split(body, ';')) {
      auto eq = knot.find('=');
      require(eq != std::string_view::npos, "spline knots are '<t>=<value>'");
      times.push_back(parse_double(knot.substr(0, eq)));
      values.push_back(parse_double(knot.substr(eq + 1)));
      require(values.back() > 0.0 && values.back() <= 1.0, "spline knot values must lie in (0, 1]");
    }
    AlphaSchedule s = SplineSchedule(std::move(times), std::move(values));
    const auto& spline = std::get<SplineSchedule>(s.family());
    check_probe_range(s, spline.times().front(), spline.times().back());
    return s;
  }
  throw ContractError("unknown schedule family '" + std::string(name) + "'");
}

std::string render_schedule(const AlphaSchedule& s) {
  auto join3 = [](const char* name, double a, double b, double c) {
    return std::string(name) + ":" + format_double(a) + "," + format_double(b) + "," +
           format_double(c);
  };
  return std::visit(
      Overloaded{
          [](const ConstantSchedule& c) { return "const:" + format_double(c.value); },
          [&](const SineSchedule& c) {
            return join3("sin", c.base, c.amplitude, c.angular_frequency);
          },
          [](const ExpSaturatingSchedule& c) { return "expsat:" + format_double(c.rate); },
          [&](const SawtoothSchedule& c) { return join3("saw", c.lo, c.hi, c.period); },
          [&](const TriangularSchedule& c) { return join3("tri", c.lo, c.hi, c.period); },
          [](const SplineSchedule& c) {
            std::string out = "spline:";
            for (std::size_t k = 0; k < c.times().size(); ++k) {
              if (k > 0) out += ';';
              out += format_double(c.times()[k]) + "=" + format_double(c.values()[k]);
            }
            return out;
          },
      },
      s.family());
}

}  // namespace netfrac
