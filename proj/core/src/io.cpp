// Copyright (c) 2026 The laryngo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "laryngo/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <regex>
#include <sstream>

#include "laryngo/error.hpp"

namespace laryngo {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Raster read_png(const fs::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorCode::UnreadableFile, path.string());
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + " is not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::UnreadableFile, path.string());
  }
  Raster out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::UnreadableFile, path.string() + ": corrupt PNG");
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const auto bit_depth = png_get_bit_depth(png, info);
  const auto color = png_get_color_type(png, info);
  if (bit_depth != 8 || (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::UnsupportedFormat,
                path.string() + ": only 8-bit gray or RGB PNG is supported");
  }
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = color == PNG_COLOR_TYPE_GRAY ? 1 : 3;
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
  rows.resize(out.height);
  for (int y = 0; y < out.height; ++y)
    rows[y] = out.data.data() + static_cast<std::size_t>(y) * out.width * out.channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void write_png(const fs::path& path, const Raster& r) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorCode::WriteFailure, path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::WriteFailure, path.string());
  }
  std::vector<png_bytep> rows(r.height);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::WriteFailure, path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, r.width, r.height, 8,
               r.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < r.height; ++y)
    rows[y] = const_cast<png_bytep>(r.data.data() +
                                    static_cast<std::size_t>(y) * r.width * r.channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// Netpbm header token, skipping whitespace and comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

Raster read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, path.string());
  const std::string magic = pnm_token(in);
  int channels = 0;
  bool ascii = false;
  if (magic == "P2" || magic == "P5") channels = 1;
  if (magic == "P3" || magic == "P6") channels = 3;
  if (magic == "P2" || magic == "P3") ascii = true;
  if (channels == 0) throw Error(ErrorCode::UnsupportedFormat, path.string() + ": bad magic");
  Raster out;
  try {
    out.width = std::stoi(pnm_token(in));
    out.height = std::stoi(pnm_token(in));
    const int maxval = std::stoi(pnm_token(in));
    if (maxval <= 0 || maxval > 255)
      throw Error(ErrorCode::UnsupportedFormat, path.string() + ": maxval must be <= 255");
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": bad header");
  }
  if (out.width <= 0 || out.height <= 0)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": bad dimensions");
  out.channels = channels;
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * channels);
  if (ascii) {
    for (auto& v : out.data) {
      int value = 0;
      if (!(in >> value)) throw Error(ErrorCode::UnreadableFile, path.string() + ": truncated");
      v = static_cast<std::uint8_t>(std::clamp(value, 0, 255));
    }
  } else {
    in.read(reinterpret_cast<char*>(out.data.data()),
            static_cast<std::streamsize>(out.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(out.data.size()))
      throw Error(ErrorCode::UnreadableFile, path.string() + ": truncated");
  }
  return out;
}

void write_pnm(const fs::path& path, const Raster& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::WriteFailure, path.string());
  out << (r.channels == 1 ? "P5" : "P6") << '\n' << r.width << ' ' << r.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(r.data.data()),
            static_cast<std::streamsize>(r.data.size()));
  if (!out) throw Error(ErrorCode::WriteFailure, path.string());
}

template <typename T>
T read_le(const std::vector<char>& buf, std::size_t offset) {
  T value;
  std::memcpy(&value, buf.data() + offset, sizeof(T));
  return value;
}

template <typename T>
void put_le(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

}  // namespace

Raster read_raster(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::UnreadableFile, path.string() + " not found");
  const auto ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm(path);
  throw Error(ErrorCode::UnsupportedFormat, path.string());
}

void write_raster(const fs::path& path, const Raster& raster) {
  const auto ext = lower_extension(path);
  if (ext == ".png") return write_png(path, raster);
  if (ext == ".pgm" || ext == ".ppm") return write_pnm(path, raster);
  throw Error(ErrorCode::UnsupportedFormat, path.string());
}

WavData read_wav(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + " is not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t data_offset = 0, data_size = 0;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::string id(buf.data() + pos, 4);
    const auto size = read_le<std::uint32_t>(buf, pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt " && size >= 16 && body + 16 <= buf.size()) {
      format = read_le<std::uint16_t>(buf, body);
      channels = read_le<std::uint16_t>(buf, body + 2);
      rate = read_le<std::uint32_t>(buf, body + 4);
      bits = read_le<std::uint16_t>(buf, body + 14);
      if (format == 0xFFFE && size >= 26) format = read_le<std::uint16_t>(buf, body + 24);
      have_fmt = true;
    } else if (id == "data") {
      data_offset = body;
      data_size = std::min<std::size_t>(size, buf.size() - body);
      have_data = true;
      break;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt || !have_data || channels == 0 || rate == 0)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": missing fmt or data chunk");
  const bool pcm16 = format == 1 && bits == 16;
  const bool f32 = format == 3 && bits == 32;
  if (!pcm16 && !f32)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": need PCM16 or float32");

  const std::size_t bytes_per = bits / 8;
  const std::size_t frames = data_size / (bytes_per * channels);
  WavData out;
  out.sample_rate = rate;
  out.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t off = data_offset + (i * channels + c) * bytes_per;
      acc += pcm16 ? read_le<std::int16_t>(buf, off) / 32768.0
                   : static_cast<double>(read_le<float>(buf, off));
    }
    out.samples[i] = acc / channels;
  }
  return out;
}

void write_wav(const fs::path& path, std::span<const double> samples, double sample_rate) {
  std::string out;
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 4);
  out.append("RIFF");
  put_le<std::uint32_t>(out, 36 + data_bytes);
  out.append("WAVEfmt ");
  put_le<std::uint32_t>(out, 16);
  put_le<std::uint16_t>(out, 3);
  put_le<std::uint16_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate) * 4);
  put_le<std::uint16_t>(out, 4);
  put_le<std::uint16_t>(out, 32);
  out.append("data");
  put_le<std::uint32_t>(out, data_bytes);
  for (double s : samples) put_le<float>(out, static_cast<float>(s));
  write_text(path, out);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::WriteFailure, path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::WriteFailure, path.string());
}

nlohmann::json read_json(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& value) {
  write_text(path, value.dump(2) + "\n");
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      std::string field = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
      const auto b = field.find_first_not_of(" \t");
      const auto e = field.find_last_not_of(" \t");
      fields.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

double parse_double(const std::string& field) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last)
    throw Error(ErrorCode::UnsupportedFormat, "not a number: '" + field + "'");
  return value;
}

long long parse_int(const std::string& field) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    throw Error(ErrorCode::UnsupportedFormat, "not an integer: '" + field + "'");
  return value;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_f32_matrix(const fs::path& path, std::uint32_t rows, std::uint32_t cols,
                      std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(rows) * cols)
    throw Error(ErrorCode::WriteFailure, "matrix shape does not match data size");
  std::string out;
  out.reserve(8 + values.size() * 4);
  put_le<std::uint32_t>(out, rows);
  put_le<std::uint32_t>(out, cols);
  for (double v : values) put_le<float>(out, static_cast<float>(v));
  write_text(path, out);
}

F32Matrix read_f32_matrix(const fs::path& path) {
  const std::string text = read_text(path);
  if (text.size() < 8) throw Error(ErrorCode::UnsupportedFormat, path.string() + ": no header");
  F32Matrix m;
  std::memcpy(&m.rows, text.data(), 4);
  std::memcpy(&m.cols, text.data() + 4, 4);
  const std::size_t n = static_cast<std::size_t>(m.rows) * m.cols;
  if (text.size() != 8 + n * 4)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": size does not match header");
  m.values.resize(n);
  std::memcpy(m.values.data(), text.data() + 8, n * 4);
  return m;
}

std::vector<fs::path> list_frame_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::UnreadableFile, dir.string() + " is not a directory");
  static const std::regex pattern(R"(frame_\d{6}\.(png|pgm|ppm))", std::regex::icase);
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (std::regex_match(entry.path().filename().string(), pattern)) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string frame_file_name(std::size_t index, const std::string& extension) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu", index);
  return std::string(buf) + extension;
}

std::optional<double> read_video_fps(const fs::path& dir) {
  const fs::path meta = dir / "video.json";
  if (!fs::exists(meta)) return std::nullopt;
  const auto doc = read_json(meta);
  if (!doc.contains("fps") || !doc["fps"].is_number()) return std::nullopt;
  const double fps = doc["fps"].get<double>();
  if (!(fps > 0.0)) throw Error(ErrorCode::MissingMetadata, meta.string() + ": fps must be > 0");
  return fps;
}

void write_video_json(const fs::path& dir, double fps) {
  write_json(dir / "video.json", {{"fps", fps}});
}

}  // namespace laryngo
