#include <gtest/gtest.h>

#include <array>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>

#include "eqcnn/mnist.hpp"
#include "eqcnn/rng.hpp"

namespace eqcnn {
namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::vector<std::uint8_t> idx_images(std::size_t side, const std::vector<std::vector<std::uint8_t>>& images) {
  std::vector<std::uint8_t> out;
  put_be32(out, 0x803);
  put_be32(out, static_cast<std::uint32_t>(images.size()));
  put_be32(out, static_cast<std::uint32_t>(side));
  put_be32(out, static_cast<std::uint32_t>(side));
  for (const auto& img : images) out.insert(out.end(), img.begin(), img.end());
  return out;
}

std::vector<std::uint8_t> idx_labels(const std::vector<std::uint8_t>& labels) {
  std::vector<std::uint8_t> out;
  put_be32(out, 0x801);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

constexpr std::array<int, 2> kFourFive = {4, 5};

struct Synthetic {
  std::vector<std::uint8_t> images;
  std::vector<std::uint8_t> labels;
};

Synthetic synthetic() {
  const std::vector<std::uint8_t> labels = {4, 1, 5, 4, 9, 5, 5};
  std::vector<std::vector<std::uint8_t>> images;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    std::vector<std::uint8_t> img(4 * 4);
    for (std::size_t p = 0; p < img.size(); ++p) img[p] = static_cast<std::uint8_t>((k * 16 + p) % 256);
    img[0] = 255;
    images.push_back(img);
  }
  return {idx_images(4, images), idx_labels(labels)};
}

TEST(MnistFromIdx, KeepsRequestedDigitsScaledToUnitRange) {
  const auto data = synthetic();
  const auto samples = mnist_from_idx(data.images, data.labels, kFourFive);
  ASSERT_EQ(samples.size(), 5u);
  const std::size_t expected_class[] = {0, 1, 0, 1, 1};
  for (std::size_t k = 0; k < samples.size(); ++k) {
    EXPECT_EQ(samples[k].label_index(), expected_class[k]);
    EXPECT_EQ(samples[k].image.size, 4u);
    EXPECT_EQ(samples[k].image.pixels[0], 1.0f);
    for (float p : samples[k].image.pixels) {
      EXPECT_GE(p, 0.0f);
      EXPECT_LE(p, 1.0f);
    }
  }
  // Second kept sample is source index 2: pixel 1 holds byte 33.
  EXPECT_EQ(samples[1].image.pixels[1], 33.0f / 255.0f);
}

TEST(MnistFromIdx, EmptyIntersectionIsNotAnError) {
  const auto data = synthetic();
  constexpr std::array<int, 2> absent = {2, 3};
  EXPECT_TRUE(mnist_from_idx(data.images, data.labels, absent).empty());
}

TEST(MnistFromIdx, RequiresTwoDistinctDigits) {
  const auto data = synthetic();
  constexpr std::array<int, 2> same = {4, 4};
  constexpr std::array<int, 3> three = {3, 4, 5};
  EXPECT_THROW(mnist_from_idx(data.images, data.labels, same), std::invalid_argument);
  EXPECT_THROW(mnist_from_idx(data.images, data.labels, three), std::invalid_argument);
}

TEST(ParseIdx, BadMagicNamesOffsetZero) {
  auto data = synthetic();
  data.images[3] = 0x04;
  try {
    parse_idx_images(data.images);
    FAIL() << "expected IdxFormatError";
  } catch (const IdxFormatError& e) {
    EXPECT_EQ(e.offset(), 0u);
    EXPECT_NE(std::string(e.what()).find("offset 0"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("0x00000804"), std::string::npos);
  }
  EXPECT_THROW(parse_idx_labels(data.images), IdxFormatError);
}

TEST(ParseIdx, TruncationReportsOffset) {
  auto data = synthetic();
  data.images.resize(16 + 2 * 16 + 5);
  try {
    parse_idx_images(data.images);
    FAIL() << "expected IdxFormatError";
  } catch (const IdxFormatError& e) {
    EXPECT_EQ(e.offset(), 16u + 2 * 16);
  }
  const std::vector<std::uint8_t> header_only = {0, 0, 8};
  EXPECT_THROW(parse_idx_images(header_only), IdxFormatError);
  data.labels.pop_back();
  EXPECT_THROW(parse_idx_labels(data.labels), IdxFormatError);
}

TEST(ParseIdx, CountsAndDimensionsFromHeader) {
  const auto data = synthetic();
  const auto images = parse_idx_images(data.images);
  EXPECT_EQ(images.rows, 4u);
  EXPECT_EQ(images.cols, 4u);
  EXPECT_EQ(images.images.size(), 7u);
  EXPECT_EQ(parse_idx_labels(data.labels).size(), 7u);
}

TEST(MnistLoad, MissingFileIsFilesystemError) {
  EXPECT_THROW(mnist_load("/nonexistent/a", "/nonexistent/b", kFourFive), std::filesystem::filesystem_error);
}

// Independent label counter over the raw IDX bytes.
std::map<int, std::size_t> count_labels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::map<int, std::size_t> counts;
  for (std::size_t k = 8; k < bytes.size(); ++k) counts[bytes[k]]++;
  return counts;
}

TEST(MnistLoad, CanonicalTestSetCounts) {
  const char* dir = std::getenv("EQCNN_MNIST_DIR");
  if (!dir) GTEST_SKIP() << "EQCNN_MNIST_DIR not set; MNIST IDX files unavailable";
  const auto files = MnistFiles::in(dir);
  if (!files.exist()) GTEST_SKIP() << "MNIST IDX files missing under " << dir;
  const auto samples = mnist_load(files.test_images, files.test_labels, kFourFive);
  std::size_t fours = 0;
  std::size_t fives = 0;
  for (const auto& s : samples) (s.label_index() == 0 ? fours : fives)++;
  const auto reference = count_labels(files.test_labels);
  EXPECT_EQ(fours, reference.at(4));
  EXPECT_EQ(fives, reference.at(5));
  EXPECT_EQ(fours, 982u);
  EXPECT_EQ(fives, 892u);
}

Image random28(Rng& rng) {
  Image img(28);
  for (auto& p : img.pixels) p = static_cast<float>(rng.uniform());
  return img;
}

TEST(Downsample, ConstantStaysConstant) {
  const auto out = downsample(Image(28, 0.375f));
  EXPECT_EQ(out.size, 16u);
  for (float p : out.pixels) EXPECT_FLOAT_EQ(p, 0.375f);
}

TEST(Downsample, OutputWithinInputRange) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = random28(rng);
    const auto [lo, hi] = std::minmax_element(in.pixels.begin(), in.pixels.end());
    for (float p : downsample(in).pixels) {
      EXPECT_GE(p, *lo);
      EXPECT_LE(p, *hi);
    }
  }
}

TEST(Downsample, CornersAlignAndLinearRampIsExact) {
  Image ramp(28);
  for (std::size_t i = 0; i < 28; ++i) {
    for (std::size_t j = 0; j < 28; ++j) ramp.at(i, j) = static_cast<float>(j);
  }
  const auto out = downsample(ramp);
  for (std::size_t j = 0; j < 16; ++j) EXPECT_NEAR(out.at(5, j), j * 27.0 / 15.0, 1e-4);
}

TEST(Downsample, ZeroImageStaysZeroAndWrongShapeThrows) {
  const auto out = downsample(Image(28));
  EXPECT_TRUE(out.all_zero());
  EXPECT_THROW(caa_embed(out), std::invalid_argument);
  EXPECT_THROW(downsample(Image(16)), std::invalid_argument);
}

std::vector<ImageSample> numbered(std::size_t count) {
  std::vector<ImageSample> out;
  for (std::size_t k = 0; k < count; ++k) {
    Image img(4);
    for (std::size_t p = 0; p < 16; ++p) img.pixels[p] = static_cast<float>(p + 1);
    out.push_back({img, one_hot(k % 2, 2)});
  }
  return out;
}

TEST(ExtendWithGroup, DeterministicPerSeed) {
  const auto base = numbered(50);
  const auto a = extend_with_group(base, 5);
  const auto b = extend_with_group(base, 5);
  EXPECT_EQ(a.applied, b.applied);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(extend_with_group(base, 6).applied, a.applied);
  for (std::size_t k = 0; k < base.size(); ++k) {
    EXPECT_EQ(a.samples[k], apply_group_to_image(base[k], a.applied[k]));
  }
}

TEST(ExtendWithGroup, ElementFrequenciesAreUniform) {
  const auto ext = extend_with_group(numbered(6000), 9);
  std::map<GroupElement, std::size_t> counts;
  for (auto g : ext.applied) counts[g]++;
  EXPECT_EQ(counts.size(), 6u);
  for (auto g : kExtensionElements) {
    EXPECT_NEAR(static_cast<double>(counts[g]) / 6000.0, 1.0 / 6.0, 0.02) << to_string(g);
  }
}

TEST(ExtendWithGroup, TwiceComposesWithinTheGroup) {
  const auto base = numbered(100);
  const auto once = extend_with_group(base, 1);
  const auto twice = extend_with_group(once.samples, 2);
  for (std::size_t k = 0; k < base.size(); ++k) {
    const auto g = compose(twice.applied[k], once.applied[k]);
    EXPECT_EQ(twice.samples[k], apply_group_to_image(base[k], g));
  }
}

}  // namespace
}  // namespace eqcnn
