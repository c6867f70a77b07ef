#pragma once

#include <cstdint>

#include "propforge/common/image.hpp"
#include "propforge/common/rng.hpp"
#include "propforge/events/event_synth.hpp"

namespace propforge::events {

/// p_noise: chance that any pixel is replaced by a +/-1 event (equally
/// likely). p_miss: chance that a propeller pixel does not fire.
struct CorruptionConfig {
  double p_noise{0.0};
  double p_miss{0.0};
  std::uint64_t seed{0};

  void validate() const;
};

/// Zeroes each masked pixel with probability p. Draws one variate per
/// pixel of the frame regardless of content.
void drop_events(EventFrame& frame, const Mask& mask, double p, Rng& rng);

/// Sets each pixel to +1 or -1 with probability p. Draws two variates per
/// pixel regardless of outcome.
void inject_noise(EventFrame& frame, double p, Rng& rng);

/// Misses on the propeller mask first, then noise over the whole frame,
/// both from one stream seeded by cfg.seed.
EventFrame corrupt(const EventFrame& frame, const Mask& mask, const CorruptionConfig& cfg);

/// -1 -> 0, 0 -> 127, +1 -> 255, i.e. clamp(E * 255 + 127, 0, 255).
GrayImage quantize_frame(const EventFrame& frame);

/// Inverse of quantize_frame; throws std::invalid_argument for values other
/// than 0, 127, 255.
EventFrame dequantize_frame(const GrayImage& img);

}  // namespace propforge::events
