#include <gtest/gtest.h>

#include <fstream>
#include <iterator>
#include <random>

#include "qr_layout.hpp"
#include "qrscript/error.hpp"
#include "qrscript/qrio.hpp"
#include "reed_solomon.hpp"

using namespace qrscript;
using namespace qrscript::qrio;

namespace {

std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

// Binary-mode capacities from the published symbol tables, L/M/Q/H.
struct Published {
  int version;
  std::size_t capacity[4];
};
constexpr Published kPublished[] = {
    {1, {17, 14, 11, 7}},       {2, {32, 26, 20, 14}},      {3, {53, 42, 32, 24}},
    {4, {78, 62, 46, 34}},      {5, {106, 84, 60, 44}},     {6, {134, 106, 74, 58}},
    {7, {154, 122, 86, 64}},    {8, {192, 152, 108, 84}},   {9, {230, 180, 130, 98}},
    {10, {271, 213, 151, 119}}, {20, {858, 666, 482, 382}}, {40, {2953, 2331, 1663, 1273}},
};

}  // namespace

TEST(Capacity, MatchesPublishedTable) {
  for (const auto& row : kPublished) {
    for (int level = 0; level < 4; ++level) {
      EXPECT_EQ(byte_capacity(row.version, static_cast<EcLevel>(level)), row.capacity[level]) << row.version;
    }
  }
}

TEST(Capacity, FollowsFromCodewordCounts) {
  for (int version = 1; version <= 40; ++version) {
    const int count_bits = version < 10 ? 8 : 16;
    for (int level = 0; level < 4; ++level) {
      const auto ec = static_cast<EcLevel>(level);
      const int data = detail::data_codewords(version, ec);
      const int total = detail::raw_data_modules(version) / 8;
      EXPECT_EQ(data, total - detail::ecc_codewords_per_block(version, ec) * detail::error_correction_blocks(version, ec));
      EXPECT_EQ(byte_capacity(version, ec), static_cast<std::size_t>((data * 8 - 4 - count_bits) / 8));
      if (version > 1) EXPECT_GT(byte_capacity(version, ec), byte_capacity(version - 1, ec));
    }
  }
}

TEST(Capacity, AutoSelectionIsMinimal) {
  for (int level = 0; level < 4; ++level) {
    const auto ec = static_cast<EcLevel>(level);
    for (std::size_t n : {0, 1, 7, 17, 18, 82, 283, 1000, 1273, 2331, 2953}) {
      if (n > byte_capacity(40, ec)) {
        EXPECT_THROW(select_version(n, ec), CapacityError);
        continue;
      }
      const int v = select_version(n, ec);
      EXPECT_GE(byte_capacity(v, ec), n);
      if (v > 1) EXPECT_LT(byte_capacity(v - 1, ec), n);
    }
  }
  EXPECT_THROW(select_version(2954, EcLevel::L), CapacityError);
  EXPECT_THROW(select_version(1274, EcLevel::H), CapacityError);
}

TEST(ReedSolomon, KnownCodeword) {
  // 1-M symbol holding "HELLO WORLD" in alphanumeric mode.
  const std::vector<std::uint8_t> data{32, 91, 11, 120, 209, 114, 220, 77, 67, 64, 236, 17, 236, 17, 236, 17};
  const std::vector<std::uint8_t> ecc{196, 35, 39, 119, 235, 215, 231, 226, 93, 23};
  EXPECT_EQ(detail::reed_solomon_remainder(data, 10), ecc);
}

TEST(ReedSolomon, CorrectsUpToHalfTheEcc) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int ecc = 2 + static_cast<int>(rng() % 29);
    auto data = random_bytes(rng, 1 + rng() % 100);
    const auto parity = detail::reed_solomon_remainder(data, ecc);
    std::vector<std::uint8_t> word = data;
    word.insert(word.end(), parity.begin(), parity.end());
    const auto clean = word;
    const int errors = static_cast<int>(rng() % (ecc / 2 + 1));
    for (int e = 0; e < errors; ++e) word[rng() % word.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    ASSERT_TRUE(detail::reed_solomon_correct(word, ecc));
    ASSERT_EQ(word, clean);
  }
}

TEST(Symbol, RoundTripAcrossVersionsAndLevels) {
  std::mt19937_64 rng(2);
  for (int version : {1, 2, 6, 7, 10, 14, 21, 27, 33, 40}) {
    for (int level = 0; level < 4; ++level) {
      const auto ec = static_cast<EcLevel>(level);
      const auto payload = random_bytes(rng, 1 + rng() % byte_capacity(version, ec));
      QrConfig config;
      config.version = version;
      config.ec_level = ec;
      const Raster image = payload_to_qr(payload, config);
      EXPECT_EQ(image.width, (17 + 4 * version + 8) * 4);
      ASSERT_EQ(qr_to_payload(image), payload) << version << " " << level;
    }
  }
}

TEST(Symbol, AutoVersionAndPng) {
  std::mt19937_64 rng(3);
  const auto payload = random_bytes(rng, 82);
  const Raster image = payload_to_qr(payload, {});
  const QrSymbol symbol = encode_symbol(payload, {});
  EXPECT_EQ(symbol.version(), 5);
  const auto png = encode_png(image);
  EXPECT_TRUE(looks_like_png(png));
  EXPECT_EQ(qr_to_payload(decode_png(png)), payload);
}

TEST(Symbol, LargerModulesAndQuietZone) {
  std::mt19937_64 rng(4);
  const auto payload = random_bytes(rng, 300);
  QrConfig config;
  config.module_pixels = 7;
  config.quiet_zone = 10;
  config.ec_level = EcLevel::Q;
  EXPECT_EQ(qr_to_payload(payload_to_qr(payload, config)), payload);
  config.module_pixels = 3;
  EXPECT_THROW(payload_to_qr(payload, config), std::invalid_argument);
}

TEST(Symbol, CapacityLimits) {
  std::mt19937_64 rng(5);
  QrConfig config;
  config.version = 40;
  const auto full = random_bytes(rng, 2953);
  EXPECT_EQ(qr_to_payload(payload_to_qr(full, config)), full);
  EXPECT_THROW(payload_to_qr(random_bytes(rng, 2954), config), CapacityError);
  config.version = 1;
  EXPECT_THROW(payload_to_qr(random_bytes(rng, 18), config), CapacityError);
  config.version = kAutoVersion;
  config.ec_level = EcLevel::H;
  EXPECT_THROW(payload_to_qr(random_bytes(rng, 1274), config), CapacityError);
}

TEST(Symbol, SurvivesDamage) {
  std::mt19937_64 rng(6);
  const auto payload = random_bytes(rng, 40);
  QrConfig config;
  config.version = 5;
  config.ec_level = EcLevel::H;
  Raster image = payload_to_qr(payload, config);
  // Blot out a 5x5-module patch in the lower right data area.
  const int origin = (4 + 25) * 4;
  for (int y = origin; y < origin + 20; ++y) {
    for (int x = origin; x < origin + 20; ++x) image.pixels[static_cast<std::size_t>(y) * image.width + x] = 0;
  }
  EXPECT_EQ(qr_to_payload(image), payload);
}

TEST(Symbol, Unreadable) {
  Raster blank{200, 200, std::vector<std::uint8_t>(200 * 200, 255)};
  EXPECT_THROW(qr_to_payload(blank), QrReadError);
  Raster black{50, 50, std::vector<std::uint8_t>(50 * 50, 0)};
  EXPECT_THROW(qr_to_payload(black), QrReadError);
  EXPECT_THROW(decode_png(std::vector<std::uint8_t>{1, 2, 3}), ImageError);
}

TEST(Symbol, FormatAndVersionCodewords) {
  // Published format string for level M, mask 0 and version 7 information.
  EXPECT_EQ(detail::format_bits(EcLevel::M, 0), 0b101010000010010u);
  EXPECT_EQ(detail::version_bits(7), 0b000111110010010100u);
}

// Symbols written by segno (tests/data/make_fixtures.py) in non-byte modes.
TEST(ReaderOracle, TextModeSymbolsReturnTheirBytes) {
  for (const char* name : {"alphanumeric", "numeric", "byte", "long_alphanumeric"}) {
    const std::string base = std::string(QRSCRIPT_TEST_DATA "/") + name;
    std::ifstream text(base + ".txt", std::ios::binary);
    const std::vector<std::uint8_t> expected((std::istreambuf_iterator<char>(text)), std::istreambuf_iterator<char>());
    ASSERT_FALSE(expected.empty()) << name;
    EXPECT_EQ(qr_to_payload(read_png(base + ".png")), expected) << name;
  }
}
