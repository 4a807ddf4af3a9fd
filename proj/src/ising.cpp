#include "eqcnn/ising.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "eqcnn/parallel.hpp"

namespace eqcnn {
namespace {

constexpr std::uint64_t kTestStream = 0x7e57'5e7d'0000'0001ULL;

std::string join(std::span<const double> values) {
  std::ostringstream out;
  for (std::size_t k = 0; k < values.size(); ++k) out << (k ? "," : "") << values[k];
  return out.str();
}

}  // namespace

double critical_temperature(double coupling) {
  return 2.0 * coupling / std::log(1.0 + std::sqrt(2.0));
}

void IsingConfig::validate() const {
  if (lattice_size < 2 || !std::has_single_bit(lattice_size)) {
    throw std::invalid_argument("Ising lattice size must be a power of two >= 2");
  }
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
}

IsingLattice::IsingLattice(std::size_t size, double coupling)
    : size_(size), coupling_(coupling), spins_(size * size, 1) {
  if (size < 2) throw std::invalid_argument("lattice size must be >= 2");
  energy_ = energy();
}

IsingLattice IsingLattice::random(std::size_t size, double coupling, Rng& rng) {
  IsingLattice lattice(size, coupling);
  for (auto& s : lattice.spins_) s = (rng.next() >> 63) ? 1 : -1;
  lattice.energy_ = lattice.energy();
  return lattice;
}

IsingLattice IsingLattice::uniform(std::size_t size, double coupling, int spin) {
  IsingLattice lattice(size, coupling);
  for (auto& s : lattice.spins_) s = static_cast<std::int8_t>(spin >= 0 ? 1 : -1);
  lattice.energy_ = lattice.energy();
  return lattice;
}

int IsingLattice::neighbour_sum(std::size_t i, std::size_t j) const {
  const std::size_t up = (i + size_ - 1) % size_;
  const std::size_t down = (i + 1) % size_;
  const std::size_t left = (j + size_ - 1) % size_;
  const std::size_t right = (j + 1) % size_;
  return spin(up, j) + spin(down, j) + spin(i, left) + spin(i, right);
}

double IsingLattice::energy() const {
  // Each site owns its bond to the right and the bond below.
  long bonds = 0;
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = 0; j < size_; ++j) {
      bonds += spin(i, j) * (spin((i + 1) % size_, j) + spin(i, (j + 1) % size_));
    }
  }
  return -coupling_ * static_cast<double>(bonds);
}

double IsingLattice::magnetization() const {
  long total = 0;
  for (auto s : spins_) total += s;
  return static_cast<double>(total) / static_cast<double>(spins_.size());
}

std::size_t IsingLattice::sweep(double temperature, Rng& rng) {
  // Acceptance for dE = 2 J s h with h in {-4,-2,0,2,4}, indexed by (s*h + 4) / 2.
  double accept[5];
  for (int k = 0; k < 5; ++k) {
    const double delta = 2.0 * coupling_ * (2 * k - 4);
    accept[k] = delta <= 0.0 ? 1.0 : std::exp(-delta / temperature);
  }
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = 0; j < size_; ++j) {
      auto& s = spins_[i * size_ + j];
      const int local = s * neighbour_sum(i, j);
      const double p = accept[(local + 4) / 2];
      if (p >= 1.0 || rng.uniform() < p) {
        s = static_cast<std::int8_t>(-s);
        energy_ += 2.0 * coupling_ * local;
        ++accepted;
      }
    }
  }
  return accepted;
}

Image IsingLattice::to_image() const {
  Image image(size_);
  for (std::size_t k = 0; k < spins_.size(); ++k) image.pixels[k] = static_cast<float>(spins_[k]);
  return image;
}

ImageSample ising_sample(const IsingConfig& config) {
  config.validate();
  Rng rng(config.seed);
  IsingLattice lattice = IsingLattice::random(config.lattice_size, config.coupling, rng);
  for (std::size_t s = 0; s < config.sweeps; ++s) lattice.sweep(config.temperature, rng);
  const bool ordered = config.temperature < critical_temperature(config.coupling);
  return ImageSample{lattice.to_image(), one_hot(ordered ? 0 : 1, 2)};
}

std::vector<ImageSample> ising_samples(std::size_t n_per_class, const IsingGrid& grid,
                                       std::uint64_t seed, const IsingConfig& base,
                                       std::size_t workers) {
  if (grid.ordered.empty() || grid.disordered.empty()) {
    throw std::invalid_argument("temperature grids must be non-empty");
  }
  const double tc = critical_temperature(base.coupling);
  for (double t : grid.ordered) {
    if (!(t > 0.0 && t < tc)) {
      throw std::invalid_argument("ordered temperature " + std::to_string(t) +
                                  " is not below T_c = " + std::to_string(tc));
    }
  }
  for (double t : grid.disordered) {
    if (!(t > tc)) {
      throw std::invalid_argument("disordered temperature " + std::to_string(t) +
                                  " is not above T_c = " + std::to_string(tc));
    }
  }

  std::vector<ImageSample> samples(2 * n_per_class);
  parallel_for(samples.size(), workers == 0 ? default_workers() : workers, [&](std::size_t k) {
    const bool ordered = k % 2 == 0;
    const auto& temps = ordered ? grid.ordered : grid.disordered;
    IsingConfig config = base;
    config.temperature = temps[(k / 2) % temps.size()];
    config.seed = mix_seed(seed, k);
    samples[k] = ising_sample(config);
  });
  return samples;
}

DatasetSplit ising_dataset(std::size_t n_train_per_class, std::size_t n_test_per_class,
                           const IsingGrid& grid, std::uint64_t seed, const IsingConfig& base,
                           std::size_t workers) {
  DatasetSplit split;
  split.train = ising_samples(n_train_per_class, grid, seed, base, workers);
  split.test = ising_samples(n_test_per_class, grid, mix_seed(seed, kTestStream), base, workers);
  split.provenance.source = "ising";
  split.provenance.seed = seed;
  split.provenance.notes = {
      {"lattice_size", std::to_string(base.lattice_size)},
      {"coupling", std::to_string(base.coupling)},
      {"sweeps", std::to_string(base.sweeps)},
      {"temps_ordered", join(grid.ordered)},
      {"temps_disordered", join(grid.disordered)},
  };
  return split;
}

std::vector<MagnetizationPoint> magnetization_curve(std::span<const double> temperatures,
                                                    const IsingConfig& base, std::size_t chains) {
  base.validate();
  if (base.burn_in >= base.sweeps) throw std::invalid_argument("burn-in must be shorter than the run");
  std::vector<MagnetizationPoint> curve;
  for (std::size_t t = 0; t < temperatures.size(); ++t) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t c = 0; c < chains; ++c) {
      Rng rng(mix_seed(base.seed, t * chains + c));
      IsingLattice lattice = IsingLattice::random(base.lattice_size, base.coupling, rng);
      for (std::size_t s = 0; s < base.sweeps; ++s) {
        lattice.sweep(temperatures[t], rng);
        if (s >= base.burn_in) {
          sum += std::abs(lattice.magnetization());
          ++count;
        }
      }
    }
    curve.push_back({temperatures[t], sum / static_cast<double>(count)});
  }
  return curve;
}

double crossing_temperature(std::span<const MagnetizationPoint> curve, double level) {
  for (std::size_t k = 1; k < curve.size(); ++k) {
    const auto& a = curve[k - 1];
    const auto& b = curve[k];
    if (a.mean_abs_magnetization >= level && b.mean_abs_magnetization < level) {
      const double frac = (a.mean_abs_magnetization - level) /
                          (a.mean_abs_magnetization - b.mean_abs_magnetization);
      return a.temperature + frac * (b.temperature - a.temperature);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace eqcnn
