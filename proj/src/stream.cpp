#include "gradual/stream.hpp"

#include <cstdio>

#include "gradual/errors.hpp"

namespace gradual {

std::string symbol_label(Symbol s) {
  const auto v = s.value();
  if (v >= 0x21 && v <= 0x7E) return std::string(1, static_cast<char>(v));
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02X", static_cast<unsigned>(v));
  return buf;
}

Reward reward_from_int(int value) {
  switch (value) {
    case -1:
      return Reward::negative;
    case 0:
      return Reward::none;
    case 1:
      return Reward::positive;
    default:
      throw RewardOutOfRange(value);
  }
}

std::string reward_label(Reward r) {
  switch (r) {
    case Reward::negative:
      return "-1";
    case Reward::none:
      return "0";
    case Reward::positive:
      return "+1";
  }
  return "?";
}

Frame encode_frame(Symbol observation, Reward reward) {
  return {observation.value(), static_cast<std::uint8_t>(static_cast<std::int8_t>(reward))};
}

std::pair<Symbol, Reward> decode_frame(const Frame& frame) {
  const auto raw = static_cast<std::int8_t>(frame[1]);
  if (raw < -1 || raw > 1) throw RewardOutOfRange(frame[1]);
  return {Symbol(frame[0]), static_cast<Reward>(raw)};
}

std::pair<Symbol, Reward> decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kFrameSize) throw FrameSizeError(bytes.size());
  return decode_frame(Frame{bytes[0], bytes[1]});
}

void SessionLog::append(Symbol observation, Reward reward, std::optional<Symbol> action) {
  records_.push_back({records_.size(), observation, reward, action});
}

void SessionLog::mark_instance(Boundary boundary) {
  boundary.record = records_.size();
  boundaries_.push_back(std::move(boundary));
}

std::size_t SessionLog::action_count() const {
  std::size_t n = 0;
  for (const auto& r : records_) n += r.action.has_value();
  return n;
}

std::vector<DeliveredFrame> SessionLog::delivered_frames() const {
  std::vector<DeliveredFrame> frames;
  frames.reserve(records_.size());
  Reward carry = Reward::none;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& rec = records_[i];
    const bool last_of_instance =
        i + 1 == records_.size() || !records_[i + 1].action.has_value();
    if (!rec.action) {
      frames.push_back({rec.observation, carry, std::nullopt});
    } else {
      frames.back().reply = rec.action;
      if (last_of_instance) {
        carry = rec.reward;
      } else {
        frames.push_back({rec.observation, rec.reward, std::nullopt});
      }
    }
  }
  return frames;
}

std::vector<std::uint8_t> SessionLog::wire_bytes() const {
  std::vector<std::uint8_t> out;
  for (const auto& f : delivered_frames()) {
    const auto frame = encode_frame(f.observation, f.reward);
    out.insert(out.end(), frame.begin(), frame.end());
    if (f.reply) out.push_back(f.reply->value());
  }
  return out;
}

}  // namespace gradual
