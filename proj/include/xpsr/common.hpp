#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace xpsr {

// Dense column-major matrix, the one numeric container used everywhere.
// Feature maps are stored as (height*width) x channels with row-major
// spatial indexing (position = y*width + x).
template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

// Error taxonomy. Every error carries a stable kind string so the CLI can
// emit machine-parsable diagnostics.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

#define XPSR_DEFINE_ERROR(NAME)                                       \
  class NAME : public Error {                                         \
  public:                                                             \
    explicit NAME(const std::string& msg) : Error(#NAME, msg) {}      \
  }

XPSR_DEFINE_ERROR(ShapeError);
XPSR_DEFINE_ERROR(ShapeMismatch);
XPSR_DEFINE_ERROR(NonDivisibleShape);
XPSR_DEFINE_ERROR(TimestepOutOfRange);
XPSR_DEFINE_ERROR(EmptySourceDir);
XPSR_DEFINE_ERROR(EmptyDataset);
XPSR_DEFINE_ERROR(FrozenViolation);
XPSR_DEFINE_ERROR(DigestMismatch);
XPSR_DEFINE_ERROR(MissingCheckpoint);
XPSR_DEFINE_ERROR(PairMismatch);
XPSR_DEFINE_ERROR(PromptSourceUnavailable);
XPSR_DEFINE_ERROR(Timeout);
XPSR_DEFINE_ERROR(HttpError);
XPSR_DEFINE_ERROR(EmptyResponse);
XPSR_DEFINE_ERROR(ConfigError);
XPSR_DEFINE_ERROR(IoError);

#undef XPSR_DEFINE_ERROR

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ShapeMismatch(msg);
}

// FNV-1a, used for content digests and seed derivation.
inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a(s.data(), s.size(), h);
}

}  // namespace xpsr
