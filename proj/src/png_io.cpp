#include <png.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <iterator>

#include "qrscript/error.hpp"
#include "qrscript/qrio.hpp"

namespace qrscript::qrio {

namespace {

constexpr std::array<std::uint8_t, 8> kSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

// Releases libpng's read/write state on every exit path.
struct ImageGuard {
  png_image image{};
  ImageGuard() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~ImageGuard() { png_image_free(&image); }
  ImageGuard(const ImageGuard&) = delete;
  ImageGuard& operator=(const ImageGuard&) = delete;
};

}  // namespace

bool looks_like_png(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= kSignature.size() && std::equal(kSignature.begin(), kSignature.end(), bytes.begin());
}

std::vector<std::uint8_t> encode_png(const Raster& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw ImageError("raster dimensions do not match its pixel buffer");
  }
  ImageGuard guard;
  guard.image.width = static_cast<png_uint_32>(image.width);
  guard.image.height = static_cast<png_uint_32>(image.height);
  guard.image.format = PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&guard.image, nullptr, &size, 0, image.pixels.data(), 0, nullptr)) {
    throw ImageError(std::string("PNG encoding failed: ") + guard.image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&guard.image, out.data(), &size, 0, image.pixels.data(), 0, nullptr)) {
    throw ImageError(std::string("PNG encoding failed: ") + guard.image.message);
  }
  out.resize(size);
  return out;
}

Raster decode_png(std::span<const std::uint8_t> png) {
  if (!looks_like_png(png)) throw ImageError("not a PNG image");
  ImageGuard guard;
  if (!png_image_begin_read_from_memory(&guard.image, png.data(), png.size())) {
    throw ImageError(std::string("PNG decoding failed: ") + guard.image.message);
  }
  guard.image.format = PNG_FORMAT_GRAY;
  Raster out;
  out.width = static_cast<int>(guard.image.width);
  out.height = static_cast<int>(guard.image.height);
  out.pixels.resize(PNG_IMAGE_SIZE(guard.image));
  // Transparent pixels are composited onto white.
  png_color background{255, 255, 255};
  if (!png_image_finish_read(&guard.image, &background, out.pixels.data(), 0, nullptr)) {
    throw ImageError(std::string("PNG decoding failed: ") + guard.image.message);
  }
  return out;
}

void write_png(const std::filesystem::path& path, const Raster& image) {
  const auto bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ImageError("failed writing " + path.string());
}

Raster read_png(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

}  // namespace qrscript::qrio
