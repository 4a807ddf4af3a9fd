#include "eqcnn/mnist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "eqcnn/rng.hpp"

namespace eqcnn {
namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  if (offset + 4 > bytes.size()) throw IdxFormatError("IDX truncated header", offset);
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void check_magic(std::span<const std::uint8_t> bytes, std::uint32_t expected) {
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != expected) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "IDX bad magic number 0x%08x (expected 0x%08x)", magic, expected);
    throw IdxFormatError(buf, 0);
  }
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::filesystem::filesystem_error("cannot open IDX file", path,
                                            std::make_error_code(std::errc::no_such_file_or_directory));
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

IdxFormatError::IdxFormatError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  check_magic(bytes, kIdxImageMagic);
  const std::size_t count = read_be32(bytes, 4);
  IdxImages out;
  out.rows = read_be32(bytes, 8);
  out.cols = read_be32(bytes, 12);
  const std::size_t stride = out.rows * out.cols;
  const std::size_t needed = 16 + count * stride;
  if (bytes.size() < needed) {
    // Offset of the first image that does not fit.
    const std::size_t complete = stride ? (bytes.size() - 16) / stride : 0;
    throw IdxFormatError("IDX image data truncated", 16 + complete * stride);
  }
  out.images.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto* begin = bytes.data() + 16 + k * stride;
    out.images.emplace_back(begin, begin + stride);
  }
  return out;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  check_magic(bytes, kIdxLabelMagic);
  const std::size_t count = read_be32(bytes, 4);
  if (bytes.size() < 8 + count) throw IdxFormatError("IDX label data truncated", bytes.size());
  return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(count)};
}

std::vector<ImageSample> mnist_from_idx(std::span<const std::uint8_t> image_bytes,
                                        std::span<const std::uint8_t> label_bytes,
                                        std::span<const int> digits) {
  if (digits.size() != 2 || digits[0] == digits[1]) {
    throw std::invalid_argument("MNIST loader needs exactly two distinct digits");
  }
  const IdxImages images = parse_idx_images(image_bytes);
  const auto labels = parse_idx_labels(label_bytes);
  if (images.images.size() != labels.size()) {
    throw std::invalid_argument("IDX image and label counts differ");
  }
  if (images.rows != images.cols) throw std::invalid_argument("IDX images are not square");

  std::vector<ImageSample> out;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const int digit = labels[k];
    const auto pos = std::find(digits.begin(), digits.end(), digit);
    if (pos == digits.end()) continue;
    ImageSample sample;
    sample.image = Image(images.rows);
    for (std::size_t p = 0; p < images.images[k].size(); ++p) {
      sample.image.pixels[p] = static_cast<float>(images.images[k][p]) / 255.0f;
    }
    sample.label = one_hot(static_cast<std::size_t>(pos - digits.begin()), 2);
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<ImageSample> mnist_load(const std::filesystem::path& images,
                                    const std::filesystem::path& labels,
                                    std::span<const int> digits) {
  return mnist_from_idx(slurp(images), slurp(labels), digits);
}

Image downsample(const Image& image) {
  constexpr std::size_t kIn = 28;
  constexpr std::size_t kOut = 16;
  if (image.size != kIn || image.pixels.size() != kIn * kIn) {
    throw std::invalid_argument("downsample expects a 28x28 image, got side " +
                                std::to_string(image.size));
  }
  const double scale = static_cast<double>(kIn - 1) / static_cast<double>(kOut - 1);
  Image out(kOut);
  for (std::size_t i = 0; i < kOut; ++i) {
    const double y = static_cast<double>(i) * scale;
    const std::size_t y0 = std::min<std::size_t>(static_cast<std::size_t>(y), kIn - 2);
    const double fy = y - static_cast<double>(y0);
    for (std::size_t j = 0; j < kOut; ++j) {
      const double x = static_cast<double>(j) * scale;
      const std::size_t x0 = std::min<std::size_t>(static_cast<std::size_t>(x), kIn - 2);
      const double fx = x - static_cast<double>(x0);
      const double v = (1 - fy) * ((1 - fx) * image.at(y0, x0) + fx * image.at(y0, x0 + 1)) +
                       fy * ((1 - fx) * image.at(y0 + 1, x0) + fx * image.at(y0 + 1, x0 + 1));
      out.at(i, j) = static_cast<float>(v);
    }
  }
  return out;
}

ExtendedSamples extend_with_group(std::span<const ImageSample> samples, std::uint64_t seed) {
  Rng rng(seed);
  ExtendedSamples out;
  out.samples.reserve(samples.size());
  out.applied.reserve(samples.size());
  for (const auto& s : samples) {
    const GroupElement g = kExtensionElements[rng.below(kExtensionElements.size())];
    out.samples.push_back(apply_group_to_image(s, g));
    out.applied.push_back(g);
  }
  return out;
}

MnistFiles MnistFiles::in(const std::filesystem::path& dir) {
  return {dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte",
          dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte"};
}

bool MnistFiles::exist() const {
  namespace fs = std::filesystem;
  return fs::exists(train_images) && fs::exists(train_labels) && fs::exists(test_images) &&
         fs::exists(test_labels);
}

DatasetSplit mnist_dataset(const MnistFiles& files, std::uint64_t seed) {
  constexpr std::array<int, 2> kDigits = {4, 5};
  auto prepare = [&](const std::filesystem::path& images, const std::filesystem::path& labels,
                     std::uint64_t stream, std::string_view tag, DatasetSplit& split) {
    auto raw = mnist_load(images, labels, kDigits);
    for (auto& s : raw) s.image = downsample(s.image);
    auto extended = extend_with_group(raw, mix_seed(seed, stream));
    for (std::size_t k = 0; k < extended.applied.size(); ++k) {
      split.provenance.transform_log.push_back(std::string(tag) + ":" + std::to_string(k) + ":" +
                                               std::string(to_string(extended.applied[k])));
    }
    return std::move(extended.samples);
  };

  DatasetSplit split;
  split.provenance.source = "mnist";
  split.provenance.seed = seed;
  split.train = prepare(files.train_images, files.train_labels, 1, "train", split);
  split.test = prepare(files.test_images, files.test_labels, 2, "test", split);

  Rng rng(mix_seed(seed, 3));
  std::vector<std::size_t> order(split.train.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  rng.shuffle(order);
  std::vector<ImageSample> shuffled;
  shuffled.reserve(order.size());
  for (std::size_t k : order) shuffled.push_back(std::move(split.train[k]));
  split.train = std::move(shuffled);

  split.provenance.notes = {{"digits", "4,5"},
                            {"train_images", files.train_images.string()},
                            {"test_images", files.test_images.string()},
                            {"downsample", "bilinear 28x28 -> 16x16"}};
  return split;
}

}  // namespace eqcnn
