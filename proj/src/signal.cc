// Copyright (c) 2026 pathvc authors
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

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pathvc/signal.h"

namespace pathvc {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptHeader: return "CorruptHeader";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kAllSilent: return "AllSilent";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kInvalidPath: return "InvalidPath";
    case ErrorCode::kEmptyControlSet: return "EmptyControlSet";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kMixedSpeakers: return "MixedSpeakers";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kSpeakerSetMismatch: return "SpeakerSetMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kUnknownSpeaker: return "UnknownSpeaker";
    case ErrorCode::kUnknownStage: return "UnknownStage";
    case ErrorCode::kEmptyScores: return "EmptyScores";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kOutOfScale: return "OutOfScale";
    case ErrorCode::kInvalidIncrement: return "InvalidIncrement";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kWrongCount: return "WrongCount";
    case ErrorCode::kEmptySelection: return "EmptySelection";
    case ErrorCode::kMissingInput: return "MissingInput";
    case ErrorCode::kNumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

namespace {

uint32_t ReadU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string* out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

AudioBufferd LoadWav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open " + path);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(ErrorCode::kCorruptHeader, path + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const uint32_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > bytes.size())
        throw Error(ErrorCode::kCorruptHeader, path + ": short fmt chunk");
      format = ReadU16(bytes.data() + body);
      channels = ReadU16(bytes.data() + body + 2);
      rate = ReadU32(bytes.data() + body + 4);
      bits = ReadU16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt)
        throw Error(ErrorCode::kCorruptHeader, path + ": data before fmt");
      if (format != 1)
        throw Error(ErrorCode::kUnsupportedFormat,
                    path + ": only PCM is supported (format tag " +
                        std::to_string(format) + ")");
      if (channels != 1)
        throw Error(ErrorCode::kUnsupportedFormat,
                    path + ": expected mono, got " + std::to_string(channels) +
                        " channels");
      if (bits != 16)
        throw Error(ErrorCode::kUnsupportedFormat,
                    path + ": expected 16-bit samples, got " +
                        std::to_string(bits));
      if (rate == 0)
        throw Error(ErrorCode::kCorruptHeader, path + ": zero sample rate");
      const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
      const Eigen::Index n = static_cast<Eigen::Index>(avail / 2);
      Vector<double> samples(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto v = static_cast<int16_t>(ReadU16(bytes.data() + body + 2 * i));
        samples(i) = v / 32768.0;
      }
      return AudioBufferd(std::move(samples), static_cast<int>(rate));
    }
    pos = body + size + (size & 1u);
  }
  throw Error(ErrorCode::kCorruptHeader, path + ": no data chunk");
}

void WriteWav(const std::string& path, const AudioBufferd& audio) {
  const uint32_t n = static_cast<uint32_t>(audio.size());
  std::string out;
  out.reserve(44 + 2 * n);
  out += "RIFF";
  PutU32(&out, 36 + 2 * n);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 1);
  PutU16(&out, 1);
  PutU32(&out, static_cast<uint32_t>(audio.sample_rate()));
  PutU32(&out, static_cast<uint32_t>(audio.sample_rate()) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, 2 * n);
  for (uint32_t i = 0; i < n; ++i) {
    const double v = std::round(audio.samples()(i) * 32768.0);
    const auto q = static_cast<int16_t>(std::clamp(v, -32768.0, 32767.0));
    PutU16(&out, static_cast<uint16_t>(q));
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIoError, "cannot write " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

}  // namespace pathvc
