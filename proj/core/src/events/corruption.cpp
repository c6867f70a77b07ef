#include "propforge/events/corruption.hpp"

#include <stdexcept>

namespace propforge::events {

void CorruptionConfig::validate() const {
  if (!(p_noise >= 0.0 && p_noise <= 1.0)) throw std::invalid_argument("CorruptionConfig: p_noise outside [0, 1]");
  if (!(p_miss >= 0.0 && p_miss <= 1.0)) throw std::invalid_argument("CorruptionConfig: p_miss outside [0, 1]");
}

void drop_events(EventFrame& frame, const Mask& mask, double p, Rng& rng) {
  if (!frame.same_shape(mask)) throw std::invalid_argument("drop_events: mask size differs from frame");
  for (std::size_t i = 0; i < frame.data.size(); ++i) {
    const bool miss = rng.uniform() < p;
    if (miss && mask.data[i]) frame.data[i] = 0;
  }
}

void inject_noise(EventFrame& frame, double p, Rng& rng) {
  for (auto& v : frame.data) {
    const bool hit = rng.uniform() < p;
    const bool positive = rng.uniform() < 0.5;
    if (hit) v = positive ? 1 : -1;
  }
}

EventFrame corrupt(const EventFrame& frame, const Mask& mask, const CorruptionConfig& cfg) {
  cfg.validate();
  if (!frame.same_shape(mask)) throw std::invalid_argument("corrupt: mask size differs from frame");
  EventFrame out = frame;
  if (cfg.p_noise == 0.0 && cfg.p_miss == 0.0) return out;
  Rng rng(cfg.seed);
  drop_events(out, mask, cfg.p_miss, rng);
  inject_noise(out, cfg.p_noise, rng);
  return out;
}

GrayImage quantize_frame(const EventFrame& frame) {
  check_ternary(frame);
  GrayImage out(frame.width, frame.height);
  for (std::size_t i = 0; i < frame.data.size(); ++i) {
    const int v = frame.data[i] * 255 + 127;
    out.data[i] = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
  }
  return out;
}

EventFrame dequantize_frame(const GrayImage& img) {
  EventFrame out(img.width, img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    switch (img.data[i]) {
      case 0: out.data[i] = -1; break;
      case 127: out.data[i] = 0; break;
      case 255: out.data[i] = 1; break;
      default: throw std::invalid_argument("dequantize_frame: value is not a quantized event");
    }
  }
  return out;
}

}  // namespace propforge::events
