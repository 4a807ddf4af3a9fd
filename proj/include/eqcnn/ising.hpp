#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eqcnn/dataset.hpp"
#include "eqcnn/embedding.hpp"
#include "eqcnn/rng.hpp"

namespace eqcnn {

/// Exact critical temperature of the square-lattice Ising model, 2J / ln(1 + sqrt 2).
double critical_temperature(double coupling = 1.0);

struct IsingConfig {
  std::size_t lattice_size = 16;
  double coupling = 1.0;  // J
  double temperature = 1.0;
  std::size_t sweeps = 2000;
  std::size_t burn_in = 500;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Periodic L x L spin lattice with incrementally tracked energy.
class IsingLattice {
 public:
  IsingLattice(std::size_t size, double coupling);

  static IsingLattice random(std::size_t size, double coupling, Rng& rng);
  static IsingLattice uniform(std::size_t size, double coupling, int spin);

  std::size_t size() const noexcept { return size_; }
  int spin(std::size_t i, std::size_t j) const { return spins_[i * size_ + j]; }
  std::span<const std::int8_t> spins() const noexcept { return spins_; }

  /// H = -J Σ_<ij> s_i s_j over nearest-neighbour bonds, counted once each.
  double energy() const;
  double tracked_energy() const noexcept { return energy_; }
  /// Mean spin in [-1, 1].
  double magnetization() const;

  /// One Metropolis sweep visiting every site in row-major order; returns
  /// the number of accepted flips.
  std::size_t sweep(double temperature, Rng& rng);

  Image to_image() const;

 private:
  int neighbour_sum(std::size_t i, std::size_t j) const;

  std::size_t size_;
  double coupling_;
  std::vector<std::int8_t> spins_;
  double energy_ = 0.0;
};

/// Lattice after config.sweeps sweeps from a random start; labelled ordered
/// ([1,0]) below T_c and disordered ([0,1]) otherwise.
ImageSample ising_sample(const IsingConfig& config);

struct IsingGrid {
  std::vector<double> ordered = {1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  std::vector<double> disordered = {2.6, 2.8, 3.0, 3.2, 3.4, 3.6};
};

/// n_per_class samples per phase, interleaved ordered/disordered so that any
/// even-length prefix is balanced. Sample k uses seed mix_seed(seed, k).
std::vector<ImageSample> ising_samples(std::size_t n_per_class, const IsingGrid& grid,
                                       std::uint64_t seed, const IsingConfig& base = {},
                                       std::size_t workers = 1);

/// Train and test sets drawn from disjoint seed streams.
DatasetSplit ising_dataset(std::size_t n_train_per_class, std::size_t n_test_per_class,
                           const IsingGrid& grid, std::uint64_t seed,
                           const IsingConfig& base = {}, std::size_t workers = 1);

struct MagnetizationPoint {
  double temperature = 0.0;
  double mean_abs_magnetization = 0.0;
};

/// Mean |m| per temperature: `chains` independent chains, each averaged over
/// the sweeps after burn-in.
std::vector<MagnetizationPoint> magnetization_curve(std::span<const double> temperatures,
                                                    const IsingConfig& base, std::size_t chains);

/// Linear interpolation of the first temperature where mean |m| drops below
/// `level`; NaN if the curve never crosses.
double crossing_temperature(std::span<const MagnetizationPoint> curve, double level = 0.5);

}  // namespace eqcnn
