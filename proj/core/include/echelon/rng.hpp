#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace echelon {

using Engine = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over the bytes of a label.
std::uint64_t label_hash(std::string_view label);

/// Seed of episode `index` in a run started from `base_seed`.
std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t index);

/// Seed of the named stream ("demand", "policy/2", ...) inside one episode.
/// Streams with different labels are independent, so a new consumer never
/// shifts the draws of an existing one.
std::uint64_t stream_seed(std::uint64_t episode_seed, std::string_view label);

inline Engine make_stream(std::uint64_t episode_seed, std::string_view label) {
  return Engine{stream_seed(episode_seed, label)};
}

}  // namespace echelon
