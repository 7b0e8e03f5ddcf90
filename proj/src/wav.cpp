#include "mfx/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace mfx::wav {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

}  // namespace

TimeSeries decode(std::span<const std::uint8_t> bytes, WavInfo* info) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw Error(Errc::ParseError, "not a RIFF/WAVE file");
  }
  WavInfo fmt;
  std::uint16_t format = 0;
  std::uint16_t block_align = 0;
  std::span<const std::uint8_t> data;
  bool have_fmt = false;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = std::min<std::size_t>(size, bytes.size() - body);
    if (tag_is(bytes, pos, "fmt ")) {
      if (available < 16) throw Error(Errc::ParseError, "fmt chunk too short");
      format = read_u16(bytes, body);
      fmt.channels = read_u16(bytes, body + 2);
      fmt.sample_rate = read_u32(bytes, body + 4);
      block_align = read_u16(bytes, body + 12);
      fmt.bits_per_sample = read_u16(bytes, body + 14);
      if (format == kFormatExtensible && available >= 26) format = read_u16(bytes, body + 24);
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      data = bytes.subspan(body, available);
      have_data = true;
    }
    pos = body + size + (size % 2);  // chunks are word aligned
  }

  if (!have_fmt) throw Error(Errc::ParseError, "missing fmt chunk");
  if (!have_data) throw Error(Errc::ParseError, "missing data chunk");
  if (format != kFormatPcm) {
    throw Error(Errc::ParseError, "unsupported WAV encoding " + std::to_string(format) +
                                      " (only integer PCM is supported)");
  }
  if (fmt.bits_per_sample != 16 && fmt.bits_per_sample != 24) {
    throw Error(Errc::ParseError, "unsupported bit depth " +
                                      std::to_string(fmt.bits_per_sample) + " (16 or 24 only)");
  }
  if (fmt.channels == 0 || fmt.sample_rate == 0) {
    throw Error(Errc::ParseError, "WAV header declares zero channels or sample rate");
  }
  const std::size_t bytes_per_sample = fmt.bits_per_sample / 8;
  if (block_align != bytes_per_sample * fmt.channels) {
    throw Error(Errc::ParseError, "inconsistent WAV block alignment");
  }

  fmt.frames = data.size() / block_align;
  std::vector<double> mono(fmt.frames, 0.0);
  const double full_scale = fmt.bits_per_sample == 16 ? 32768.0 : 8388608.0;
  for (std::size_t f = 0; f < fmt.frames; ++f) {
    double sum = 0.0;
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      const std::size_t at = f * block_align + c * bytes_per_sample;
      std::int32_t v = 0;
      if (bytes_per_sample == 2) {
        v = static_cast<std::int16_t>(read_u16(data, at));
      } else {
        v = static_cast<std::int32_t>(static_cast<std::uint32_t>(data[at]) << 8 |
                                      static_cast<std::uint32_t>(data[at + 1]) << 16 |
                                      static_cast<std::uint32_t>(data[at + 2]) << 24) >>
            8;
      }
      sum += static_cast<double>(v) / full_scale;
    }
    mono[f] = sum / static_cast<double>(fmt.channels);
  }
  if (info != nullptr) *info = fmt;
  return TimeSeries(std::move(mono), static_cast<double>(fmt.sample_rate));
}

TimeSeries read(const std::filesystem::path& path, WavInfo* info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  try {
    return decode(bytes, info);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_pcm(const std::vector<TimeSeries>& channels, int bits) {
  if (channels.empty()) throw Error(Errc::InvalidArgument, "no channels to encode");
  if (bits != 16 && bits != 24) throw Error(Errc::InvalidArgument, "bit depth must be 16 or 24");
  const std::size_t frames = channels.front().size();
  for (const auto& c : channels) {
    if (c.size() != frames) throw Error(Errc::InvalidArgument, "channel lengths differ");
  }
  const auto rate = static_cast<std::uint32_t>(std::lround(channels.front().sample_rate_hz));
  const auto n_channels = static_cast<std::uint16_t>(channels.size());
  const std::uint16_t bytes_per_sample = static_cast<std::uint16_t>(bits / 8);
  const std::uint16_t block = static_cast<std::uint16_t>(bytes_per_sample * n_channels);
  const auto data_size = static_cast<std::uint32_t>(frames * block);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, n_channels);
  put_u32(out, rate);
  put_u32(out, rate * block);
  put_u16(out, block);
  put_u16(out, static_cast<std::uint16_t>(bits));
  put_tag(out, "data");
  put_u32(out, data_size);

  const double scale = bits == 16 ? 32767.0 : 8388607.0;
  for (std::size_t f = 0; f < frames; ++f) {
    for (const auto& c : channels) {
      const double x = std::clamp(c.samples[f], -1.0, 1.0);
      const auto v = static_cast<std::int32_t>(std::lround(x * scale));
      const auto u = static_cast<std::uint32_t>(v);
      for (int b = 0; b < bytes_per_sample; ++b) {
        out.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_pcm16(const TimeSeries& ts) { return encode_pcm({ts}, 16); }

void write_pcm16(const std::filesystem::path& path, const TimeSeries& ts) {
  const auto bytes = encode_pcm16(ts);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

}  // namespace mfx::wav
