#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latflow/lattice.hpp"

namespace latflow {

/// Fixed-point capacity, counted in quanta of 2^-bits.
using Capacity = std::int64_t;

inline constexpr int kDefaultQuantBits = 20;

Capacity to_fixed(double value, int bits = kDefaultQuantBits);
double to_real(Capacity value, int bits = kDefaultQuantBits);

/// Capacity distribution F with an explicit atom at zero.
///
/// Every kind reduces to a zero mass F(0) plus a strictly positive part:
///   dirac(c)               point mass at c (F(0)=1 when c=0)
///   bernoulli(p_open, c)   c with probability p_open, else 0
///   uniform(a, b)          uniform on [a,b], 0 <= a <= b
///   exponential(rate)      rate > 0
///   mixture(w, inner)      0 with probability w, else a draw from `inner`
///                          (inner is dirac, uniform or exponential)
class DistributionSpec {
 public:
  enum class Kind { kDirac, kBernoulli, kUniform, kExponential, kMixture };

  static DistributionSpec dirac(double c);
  static DistributionSpec bernoulli(double p_open, double c);
  static DistributionSpec uniform(double a, double b);
  static DistributionSpec exponential(double rate);
  static DistributionSpec mixture(double zero_weight, const DistributionSpec& inner);
  /// Parses the textual form produced by to_string(). Throws SpecError.
  static DistributionSpec parse(std::string_view text);

  Kind kind() const { return kind_; }
  /// F(0): probability that a capacity is exactly zero.
  double zero_mass() const { return zero_mass_; }
  /// p = 1 - F(0).
  double open_probability() const { return 1.0 - zero_mass_; }
  double mean() const;
  /// Quantile of the strictly positive part at u in [0,1).
  double positive_quantile(double u) const;
  std::string to_string() const;

  friend bool operator==(const DistributionSpec& a, const DistributionSpec& b) {
    return a.to_string() == b.to_string();
  }

 private:
  enum class Positive { kNone, kPoint, kUniform, kExponential };

  Kind kind_ = Kind::kDirac;
  std::vector<double> params_;
  std::string inner_text_;
  double zero_mass_ = 0.0;
  Positive positive_ = Positive::kNone;
  double pa_ = 0.0;
  double pb_ = 0.0;
};

/// Window-independent key of the lattice edge whose lower endpoint is `lower`.
std::uint64_t lattice_edge_key(const Point& lower, int axis, int d);

/// The capacity of one lattice edge: a pure function of
/// (master_seed, replicate_id, lattice edge).
Capacity sample_edge(const DistributionSpec& dist, std::uint64_t master_seed,
                     std::uint32_t replicate_id, const Point& lower, int axis, int d,
                     int bits = kDefaultQuantBits);

/// Realized configuration over a window. Values are stored per EdgeId of the
/// window grid.
class CapacityField {
 public:
  CapacityField() = default;
  CapacityField(Grid grid, DistributionSpec dist, std::uint64_t master_seed,
                std::uint32_t replicate_id, int bits, std::vector<Capacity> values);

  /// Every edge of the region set to `value` (in quanta).
  static CapacityField constant(const Region& window, Capacity value,
                                int bits = kDefaultQuantBits);

  const Grid& grid() const { return grid_; }
  const DistributionSpec& distribution() const { return dist_; }
  std::uint64_t master_seed() const { return master_seed_; }
  std::uint32_t replicate_id() const { return replicate_id_; }
  int quant_bits() const { return bits_; }
  Capacity quantum_one() const { return Capacity{1} << bits_; }

  Capacity capacity(EdgeId e) const { return values_[e]; }
  Capacity capacity(const Point& lower, int axis) const {
    return values_[grid_.edge_id(lower, axis)];
  }
  std::span<const Capacity> values() const { return values_; }

  /// Overwrites one edge; used to build hand-made configurations.
  void set(EdgeId e, Capacity value);
  void set(const Point& lower, int axis, Capacity value) { set(grid_.edge_id(lower, axis), value); }

 private:
  Grid grid_;
  DistributionSpec dist_ = DistributionSpec::dirac(0.0);
  std::uint64_t master_seed_ = 0;
  std::uint32_t replicate_id_ = 0;
  int bits_ = kDefaultQuantBits;
  std::vector<Capacity> values_;
};

CapacityField sample_field(const Region& window, const DistributionSpec& dist,
                           std::uint64_t master_seed, std::uint32_t replicate_id,
                           int bits = kDefaultQuantBits);
inline CapacityField sample_field(const AmbientWindow& window, const DistributionSpec& dist,
                                  std::uint64_t master_seed, std::uint32_t replicate_id,
                                  int bits = kDefaultQuantBits) {
  return sample_field(window.region(), dist, master_seed, replicate_id, bits);
}

enum class EdgeClass { kClosed, kEpsMinus, kEpsPlus };

EdgeClass classify_capacity(Capacity value, Capacity epsilon);
EdgeClass classify_edge(const CapacityField& field, EdgeId e, Capacity epsilon);

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  /// Heuristic: the running mean keeps growing or is dominated by a few draws.
  bool diverging = false;
};

/// Monte Carlo estimate of E exp(eta * tau(e)).
MomentEstimate estimate_moment(const DistributionSpec& dist, double eta, std::size_t n_samples,
                               std::uint64_t seed = 0);

}  // namespace latflow
