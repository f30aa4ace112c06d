#include "qr_layout.hpp"

#include <array>
#include <cstdlib>
#include <stdexcept>

namespace qrscript::qrio::detail {

namespace {

using Row = std::array<std::int16_t, 41>;

// Indexed by [level][version]; column 0 is unused.
constexpr std::array<Row, 4> kEccCodewordsPerBlock = {{
    {-1, 7,  10, 15, 20, 26, 18, 20, 24, 30, 18, 20, 24, 26, 30, 22, 24, 28, 30, 28, 28,
     28, 28, 30, 30, 26, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
    {-1, 10, 16, 26, 18, 24, 16, 18, 22, 22, 26, 30, 22, 22, 24, 24, 28, 28, 26, 26, 26,
     26, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28},
    {-1, 13, 22, 18, 26, 18, 24, 18, 22, 20, 24, 28, 26, 24, 20, 30, 24, 28, 28, 26, 30,
     28, 30, 30, 30, 30, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
    {-1, 17, 28, 22, 16, 22, 28, 26, 26, 24, 28, 24, 28, 22, 24, 24, 30, 28, 28, 26, 28,
     30, 24, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
}};

constexpr std::array<Row, 4> kErrorCorrectionBlocks = {{
    {-1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 4, 6, 6, 6, 6, 7, 8,
     8, 9, 9, 10, 12, 12, 12, 13, 14, 15, 16, 17, 18, 19, 19, 20, 21, 22, 24, 25},
    {-1, 1, 1, 1, 2, 2, 4, 4, 4, 5, 5, 5, 8, 9, 9, 10, 10, 11, 13, 14, 16,
     17, 17, 18, 20, 21, 23, 25, 26, 28, 29, 31, 33, 35, 37, 38, 40, 43, 45, 47, 49},
    {-1, 1, 1, 2, 2, 4, 4, 6, 6, 8, 8, 8, 10, 12, 16, 12, 17, 16, 18, 21, 20,
     23, 23, 25, 27, 29, 34, 34, 35, 38, 40, 43, 45, 48, 51, 53, 56, 59, 62, 65, 68},
    {-1, 1, 1, 2, 4, 4, 4, 5, 6, 8, 8, 11, 11, 16, 16, 18, 16, 19, 21, 25, 25,
     25, 34, 30, 32, 35, 37, 40, 42, 45, 48, 51, 54, 57, 60, 63, 66, 70, 74, 77, 81},
}};

void check_version(int version) {
  if (version < kMinVersion || version > kMaxVersion) throw std::out_of_range("QR version must be in [1, 40]");
}

}  // namespace

int ecc_codewords_per_block(int version, EcLevel level) {
  check_version(version);
  return kEccCodewordsPerBlock[static_cast<std::size_t>(level)][static_cast<std::size_t>(version)];
}

int error_correction_blocks(int version, EcLevel level) {
  check_version(version);
  return kErrorCorrectionBlocks[static_cast<std::size_t>(level)][static_cast<std::size_t>(version)];
}

int raw_data_modules(int version) {
  check_version(version);
  int result = (16 * version + 128) * version + 64;
  if (version >= 2) {
    const int alignments = version / 7 + 2;
    result -= (25 * alignments - 10) * alignments - 55;
    if (version >= 7) result -= 36;
  }
  return result;
}

int data_codewords(int version, EcLevel level) {
  return raw_data_modules(version) / 8 - ecc_codewords_per_block(version, level) * error_correction_blocks(version, level);
}

std::vector<int> alignment_positions(int version) {
  check_version(version);
  if (version == 1) return {};
  const int count = version / 7 + 2;
  const int step = version == 32 ? 26 : (version * 4 + count * 2 + 1) / (count * 2 - 2) * 2;
  std::vector<int> result(static_cast<std::size_t>(count));
  result[0] = 6;
  int pos = 17 + 4 * version - 7;
  for (int i = count - 1; i >= 1; --i, pos -= step) result[static_cast<std::size_t>(i)] = pos;
  return result;
}

int char_count_bits(int mode, int version) {
  const int band = version <= 9 ? 0 : (version <= 26 ? 1 : 2);
  switch (mode) {
    case kModeNumeric: return std::array{10, 12, 14}[band];
    case kModeAlphanumeric: return std::array{9, 11, 13}[band];
    case kModeByte: return std::array{8, 16, 16}[band];
    case kModeKanji: return std::array{8, 10, 12}[band];
    default: throw std::invalid_argument("mode has no character count");
  }
}

int ec_format_bits(EcLevel level) {
  switch (level) {
    case EcLevel::L: return 1;
    case EcLevel::M: return 0;
    case EcLevel::Q: return 3;
    case EcLevel::H: return 2;
  }
  return 0;
}

EcLevel ec_from_format_bits(int bits) {
  switch (bits & 3) {
    case 1: return EcLevel::L;
    case 0: return EcLevel::M;
    case 3: return EcLevel::Q;
    default: return EcLevel::H;
  }
}

std::uint32_t format_bits(EcLevel level, int mask) {
  const std::uint32_t data = static_cast<std::uint32_t>(ec_format_bits(level) << 3 | mask);
  std::uint32_t rem = data;
  for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
  return (data << 10 | rem) ^ 0x5412;
}

std::uint32_t version_bits(int version) {
  std::uint32_t rem = static_cast<std::uint32_t>(version);
  for (int i = 0; i < 12; ++i) rem = (rem << 1) ^ ((rem >> 11) * 0x1F25);
  return static_cast<std::uint32_t>(version) << 12 | rem;
}

bool mask_applies(int mask, int x, int y) {
  switch (mask) {
    case 0: return (x + y) % 2 == 0;
    case 1: return y % 2 == 0;
    case 2: return x % 3 == 0;
    case 3: return (x + y) % 3 == 0;
    case 4: return (x / 3 + y / 2) % 2 == 0;
    case 5: return x * y % 2 + x * y % 3 == 0;
    case 6: return (x * y % 2 + x * y % 3) % 2 == 0;
    case 7: return ((x + y) % 2 + x * y % 3) % 2 == 0;
    default: throw std::invalid_argument("mask must be in [0, 7]");
  }
}

Grid::Grid(int v)
    : version(v),
      size(17 + 4 * v),
      dark(static_cast<std::size_t>(size) * size, false),
      function(static_cast<std::size_t>(size) * size, false) {
  check_version(v);
  for (int i = 0; i < size; ++i) {
    set_function(6, i, i % 2 == 0);
    set_function(i, 6, i % 2 == 0);
  }
  draw_finder(3, 3);
  draw_finder(size - 4, 3);
  draw_finder(3, size - 4);

  const auto positions = alignment_positions(version);
  const std::size_t n = positions.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool corner = (i == 0 && j == 0) || (i == 0 && j == n - 1) || (i == n - 1 && j == 0);
      if (!corner) draw_alignment(positions[i], positions[j]);
    }
  }
  draw_format(0);  // reserve
  draw_version();
}

void Grid::draw_finder(int cx, int cy) {
  for (int dy = -4; dy <= 4; ++dy) {
    for (int dx = -4; dx <= 4; ++dx) {
      const int x = cx + dx;
      const int y = cy + dy;
      if (x < 0 || x >= size || y < 0 || y >= size) continue;
      const int dist = std::max(std::abs(dx), std::abs(dy));
      set_function(x, y, dist != 2 && dist != 4);
    }
  }
}

void Grid::draw_alignment(int cx, int cy) {
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) set_function(cx + dx, cy + dy, std::max(std::abs(dx), std::abs(dy)) != 1);
  }
}

std::vector<std::pair<int, int>> format_positions_primary() {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i <= 5; ++i) out.emplace_back(8, i);
  out.emplace_back(8, 7);
  out.emplace_back(8, 8);
  out.emplace_back(7, 8);
  for (int i = 9; i < 15; ++i) out.emplace_back(14 - i, 8);
  return out;
}

std::vector<std::pair<int, int>> format_positions_secondary(int size) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < 8; ++i) out.emplace_back(size - 1 - i, 8);
  for (int i = 8; i < 15; ++i) out.emplace_back(8, size - 15 + i);
  return out;
}

void Grid::draw_format(std::uint32_t bits) {
  const auto primary = format_positions_primary();
  const auto secondary = format_positions_secondary(size);
  for (std::size_t i = 0; i < 15; ++i) {
    const bool bit = ((bits >> i) & 1u) != 0;
    set_function(primary[i].first, primary[i].second, bit);
    set_function(secondary[i].first, secondary[i].second, bit);
  }
  set_function(8, size - 8, true);  // always-dark module
}

void Grid::draw_version() {
  if (version < 7) return;
  const std::uint32_t bits = version_bits(version);
  for (int i = 0; i < 18; ++i) {
    const bool bit = ((bits >> i) & 1u) != 0;
    const int a = size - 11 + i % 3;
    const int b = i / 3;
    set_function(a, b, bit);
    set_function(b, a, bit);
  }
}

std::vector<std::pair<int, int>> Grid::data_positions() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(raw_data_modules(version)));
  for (int right = size - 1; right >= 1; right -= 2) {
    if (right == 6) right = 5;
    for (int vert = 0; vert < size; ++vert) {
      for (int j = 0; j < 2; ++j) {
        const int x = right - j;
        const bool upward = ((right + 1) & 2) == 0;
        const int y = upward ? size - 1 - vert : vert;
        if (!is_function(x, y)) out.emplace_back(x, y);
      }
    }
  }
  return out;
}

std::vector<std::pair<int, int>> block_layout(int version, EcLevel level) {
  const int blocks = error_correction_blocks(version, level);
  const int ecc = ecc_codewords_per_block(version, level);
  const int raw_codewords = raw_data_modules(version) / 8;
  const int short_blocks = blocks - raw_codewords % blocks;
  const int short_length = raw_codewords / blocks;
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < blocks; ++i) out.emplace_back(short_length - ecc + (i < short_blocks ? 0 : 1), ecc);
  return out;
}

}  // namespace qrscript::qrio::detail
