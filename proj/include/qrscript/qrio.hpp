#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrscript::qrio {

enum class EcLevel : std::uint8_t { L = 0, M = 1, Q = 2, H = 3 };

std::string_view to_string(EcLevel level);
/// Accepts "L", "M", "Q", "H" in either case; throws std::invalid_argument otherwise.
EcLevel ec_level_from_string(std::string_view text);

inline constexpr int kMinVersion = 1;
inline constexpr int kMaxVersion = 40;
inline constexpr int kAutoVersion = 0;
inline constexpr int kAutoMask = -1;

struct QrConfig {
  int version = kAutoVersion;  // 1..40, or kAutoVersion for the smallest that fits
  EcLevel ec_level = EcLevel::L;
  int mask = kAutoMask;   // 0..7, or kAutoMask for the lowest penalty
  int module_pixels = 4;  // at least 4
  int quiet_zone = 4;     // modules of white border
};

/// Byte-mode capacity in bytes of a symbol at (version, level).
std::size_t byte_capacity(int version, EcLevel level);
/// Smallest version whose byte-mode capacity at `level` holds `bytes`.
/// Throws CapacityError when even version 40 is too small.
int select_version(std::size_t bytes, EcLevel level);

/// Square matrix of modules; true is dark.
class QrSymbol {
 public:
  QrSymbol(int version, EcLevel level, int mask, std::vector<bool> modules);

  int version() const noexcept { return version_; }
  EcLevel ec_level() const noexcept { return level_; }
  int mask() const noexcept { return mask_; }
  int size() const noexcept { return 17 + 4 * version_; }
  bool dark(int x, int y) const { return modules_[static_cast<std::size_t>(y) * size() + x]; }

 private:
  int version_;
  EcLevel level_;
  int mask_;
  std::vector<bool> modules_;
};

/// Builds a byte-mode symbol holding `bytes` exactly.
QrSymbol encode_symbol(std::span<const std::uint8_t> bytes, const QrConfig& config);

/// 8-bit grayscale image, row-major; 0 is black.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

Raster render(const QrSymbol& symbol, int module_pixels, int quiet_zone);

Raster payload_to_qr(std::span<const std::uint8_t> payload, const QrConfig& config);
/// Reads the single upright symbol in the image and returns its data bytes.
/// Throws QrReadError.
std::vector<std::uint8_t> qr_to_payload(const Raster& image);

std::vector<std::uint8_t> encode_png(const Raster& image);
Raster decode_png(std::span<const std::uint8_t> png);
void write_png(const std::filesystem::path& path, const Raster& image);
Raster read_png(const std::filesystem::path& path);

/// True when the bytes start with the PNG signature.
bool looks_like_png(std::span<const std::uint8_t> bytes);

}  // namespace qrscript::qrio
