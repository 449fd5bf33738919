#include "latflow/capacity.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "latflow/errors.hpp"
#include "latflow/rng.hpp"

namespace latflow {

namespace {

constexpr std::uint32_t kCapacityStream = 0;
constexpr std::uint32_t kMomentStream = 1;

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw SpecError("invalid distribution: " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw SpecError("invalid number '" + std::string(s) + "'");
  }
  return v;
}

// Splits "a, b(c, d), e" on top-level commas.
std::vector<std::string_view> split_args(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

// Threshold t with P[u64 < t] = w for a uniform 64-bit word.
std::uint64_t zero_threshold(double w) {
  if (w <= 0.0) return 0;
  if (w >= 1.0) return std::numeric_limits<std::uint64_t>::max();
  const long double t = static_cast<long double>(w) * 18446744073709551616.0L;
  return static_cast<std::uint64_t>(t);
}

}  // namespace

Capacity to_fixed(double value, int bits) {
  return static_cast<Capacity>(std::llround(std::ldexp(value, bits)));
}

double to_real(Capacity value, int bits) { return std::ldexp(static_cast<double>(value), -bits); }

DistributionSpec DistributionSpec::dirac(double c) {
  require(std::isfinite(c) && c >= 0.0, "dirac requires c >= 0");
  DistributionSpec s;
  s.kind_ = Kind::kDirac;
  s.params_ = {c};
  if (c == 0.0) {
    s.zero_mass_ = 1.0;
  } else {
    s.positive_ = Positive::kPoint;
    s.pa_ = c;
  }
  return s;
}

DistributionSpec DistributionSpec::bernoulli(double p_open, double c) {
  require(p_open >= 0.0 && p_open <= 1.0, "bernoulli requires p_open in [0,1]");
  require(std::isfinite(c) && c >= 0.0, "bernoulli requires c >= 0");
  DistributionSpec s;
  s.kind_ = Kind::kBernoulli;
  s.params_ = {p_open, c};
  if (c == 0.0) {
    s.zero_mass_ = 1.0;
  } else {
    s.zero_mass_ = 1.0 - p_open;
    s.positive_ = Positive::kPoint;
    s.pa_ = c;
  }
  return s;
}

DistributionSpec DistributionSpec::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a >= 0.0, "uniform requires 0 <= a");
  require(a <= b, "uniform requires a <= b");
  DistributionSpec s;
  s.kind_ = Kind::kUniform;
  s.params_ = {a, b};
  if (b == 0.0) {
    s.zero_mass_ = 1.0;
  } else {
    s.positive_ = Positive::kUniform;
    s.pa_ = a;
    s.pb_ = b;
  }
  return s;
}

DistributionSpec DistributionSpec::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential requires rate > 0");
  DistributionSpec s;
  s.kind_ = Kind::kExponential;
  s.params_ = {rate};
  s.positive_ = Positive::kExponential;
  s.pa_ = rate;
  return s;
}

DistributionSpec DistributionSpec::mixture(double zero_weight, const DistributionSpec& inner) {
  require(zero_weight >= 0.0 && zero_weight <= 1.0, "mixture weight must lie in [0,1]");
  require(inner.kind_ == Kind::kDirac || inner.kind_ == Kind::kUniform ||
              inner.kind_ == Kind::kExponential,
          "mixture inner part must be dirac, uniform or exponential");
  require(inner.zero_mass_ == 0.0, "mixture inner part must be strictly positive");
  DistributionSpec s = inner;
  s.kind_ = Kind::kMixture;
  s.params_ = {zero_weight};
  s.inner_text_ = inner.to_string();
  s.zero_mass_ = zero_weight;
  return s;
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw SpecError("invalid distribution '" + std::string(text) + "'");
  }
  const std::string_view name = trim(text.substr(0, open));
  const auto args = split_args(text.substr(open + 1, text.size() - open - 2));
  auto expect = [&](std::size_t n) {
    if (args.size() != n) {
      throw SpecError(std::string(name) + " expects " + std::to_string(n) + " parameters");
    }
  };
  if (name == "dirac") {
    expect(1);
    return dirac(parse_number(args[0]));
  }
  if (name == "bernoulli") {
    expect(2);
    return bernoulli(parse_number(args[0]), parse_number(args[1]));
  }
  if (name == "uniform") {
    expect(2);
    return uniform(parse_number(args[0]), parse_number(args[1]));
  }
  if (name == "exponential") {
    expect(1);
    return exponential(parse_number(args[0]));
  }
  if (name == "mixture") {
    expect(2);
    return mixture(parse_number(args[0]), parse(args[1]));
  }
  throw SpecError("unknown distribution '" + std::string(name) + "'");
}

double DistributionSpec::mean() const {
  double positive_mean = 0.0;
  switch (positive_) {
    case Positive::kNone: positive_mean = 0.0; break;
    case Positive::kPoint: positive_mean = pa_; break;
    case Positive::kUniform: positive_mean = 0.5 * (pa_ + pb_); break;
    case Positive::kExponential: positive_mean = 1.0 / pa_; break;
  }
  return (1.0 - zero_mass_) * positive_mean;
}

double DistributionSpec::positive_quantile(double u) const {
  switch (positive_) {
    case Positive::kNone: return 0.0;
    case Positive::kPoint: return pa_;
    case Positive::kUniform: return pa_ + (pb_ - pa_) * u;
    case Positive::kExponential: return -std::log1p(-u) / pa_;
  }
  return 0.0;
}

std::string DistributionSpec::to_string() const {
  std::string name;
  switch (kind_) {
    case Kind::kDirac: name = "dirac"; break;
    case Kind::kBernoulli: name = "bernoulli"; break;
    case Kind::kUniform: name = "uniform"; break;
    case Kind::kExponential: name = "exponential"; break;
    case Kind::kMixture: name = "mixture"; break;
  }
  std::string s = name + "(";
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) s += ",";
    s += format_number(params_[i]);
  }
  if (kind_ == Kind::kMixture) s += "," + inner_text_;
  return s + ")";
}

std::uint64_t lattice_edge_key(const Point& lower, int axis, int d) {
  const int bits = 60 / d;
  const std::int64_t bias = std::int64_t{1} << (bits - 1);
  std::uint64_t key = static_cast<std::uint64_t>(axis) << 60;
  for (int a = 0; a < d; ++a) {
    const std::int64_t shifted = lower[a] + bias;
    if (shifted < 0 || shifted >= 2 * bias) {
      throw RangeError("coordinate " + std::to_string(lower[a]) + " exceeds the sampling range");
    }
    key |= static_cast<std::uint64_t>(shifted) << (bits * a);
  }
  return key;
}

Capacity sample_edge(const DistributionSpec& dist, std::uint64_t master_seed,
                     std::uint32_t replicate_id, const Point& lower, int axis, int d, int bits) {
  const auto w = Philox4x32::words(master_seed, lattice_edge_key(lower, axis, d), replicate_id,
                                   kCapacityStream);
  const double zero_mass = dist.zero_mass();
  if (zero_mass >= 1.0 || w[0] < zero_threshold(zero_mass)) return 0;
  const double x = dist.positive_quantile(to_unit(w[1]));
  // Positive draws never collapse onto the zero atom.
  return std::max<Capacity>(1, to_fixed(x, bits));
}

CapacityField::CapacityField(Grid grid, DistributionSpec dist, std::uint64_t master_seed,
                             std::uint32_t replicate_id, int bits, std::vector<Capacity> values)
    : grid_(std::move(grid)),
      dist_(std::move(dist)),
      master_seed_(master_seed),
      replicate_id_(replicate_id),
      bits_(bits),
      values_(std::move(values)) {
  if (values_.size() != grid_.edge_count()) {
    throw SpecError("capacity vector does not match the window's edge count");
  }
}

CapacityField CapacityField::constant(const Region& window, Capacity value, int bits) {
  Grid grid(window);
  std::vector<Capacity> values(grid.edge_count(), value);
  const double c = to_real(value, bits);
  return CapacityField(std::move(grid), DistributionSpec::dirac(c), 0, 0, bits,
                       std::move(values));
}

void CapacityField::set(EdgeId e, Capacity value) {
  if (value < 0) throw SpecError("capacities are non-negative");
  values_.at(e) = value;
}

CapacityField sample_field(const Region& window, const DistributionSpec& dist,
                           std::uint64_t master_seed, std::uint32_t replicate_id, int bits) {
  if (bits < 0 || bits > 40) throw SpecError("quantization bits must lie in [0,40]");
  Grid grid(window);
  std::vector<Capacity> values(grid.edge_count());
  const int d = window.d;
  for (EdgeId e = 0; e < values.size(); ++e) {
    const EdgeEnds ends = grid.edge(e);
    values[e] = sample_edge(dist, master_seed, replicate_id, grid.point(ends.lower), ends.axis, d,
                            bits);
  }
  return CapacityField(std::move(grid), dist, master_seed, replicate_id, bits,
                       std::move(values));
}

EdgeClass classify_capacity(Capacity value, Capacity epsilon) {
  if (value == 0) return EdgeClass::kClosed;
  return value <= epsilon ? EdgeClass::kEpsMinus : EdgeClass::kEpsPlus;
}

EdgeClass classify_edge(const CapacityField& field, EdgeId e, Capacity epsilon) {
  return classify_capacity(field.capacity(e), epsilon);
}

MomentEstimate estimate_moment(const DistributionSpec& dist, double eta, std::size_t n_samples,
                               std::uint64_t seed) {
  if (eta <= 0.0) throw SpecError("eta must be positive");
  if (n_samples == 0) throw SpecError("n_samples must be at least 1");
  const std::uint64_t threshold = zero_threshold(dist.zero_mass());
  double sum = 0.0;
  double sum_sq = 0.0;
  double largest = 0.0;
  double mean_at_half = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto w = Philox4x32::words(seed, i, 0, kMomentStream);
    double x = 0.0;
    if (!(dist.zero_mass() >= 1.0 || w[0] < threshold)) {
      x = dist.positive_quantile(to_unit(w[1]));
    }
    const double term = std::exp(eta * x);
    sum += term;
    sum_sq += term * term;
    largest = std::max(largest, term);
    if (i + 1 == (n_samples + 1) / 2) mean_at_half = sum / static_cast<double>(i + 1);
  }
  const double n = static_cast<double>(n_samples);
  MomentEstimate est;
  est.mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - est.mean * est.mean);
  est.std_error = std::sqrt(var / n);
  est.diverging = !std::isfinite(est.mean) ||
                  (n_samples >= 100 && (largest > 0.5 * sum || est.mean > 2.0 * mean_at_half));
  return est;
}

}  // namespace latflow
