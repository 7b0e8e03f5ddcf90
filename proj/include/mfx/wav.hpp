#pragma once

#include "mfx/series.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mfx::wav {

struct WavInfo {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 0;
  std::uint16_t bits_per_sample = 0;
  std::size_t frames = 0;
};

// PCM 16- or 24-bit, any channel count (downmixed to mono by averaging),
// samples scaled to [-1, 1).
TimeSeries decode(std::span<const std::uint8_t> bytes, WavInfo* info = nullptr);
TimeSeries read(const std::filesystem::path& path, WavInfo* info = nullptr);

// Mono 16-bit PCM at the series' (rounded) sample rate; samples clipped to [-1, 1].
std::vector<std::uint8_t> encode_pcm16(const TimeSeries& ts);
void write_pcm16(const std::filesystem::path& path, const TimeSeries& ts);

// Arbitrary-format encoder used by tests and fixtures (16 or 24 bit, interleaved).
std::vector<std::uint8_t> encode_pcm(const std::vector<TimeSeries>& channels, int bits);

}  // namespace mfx::wav
