#pragma once

// Byte/reward alphabet shared by the environment and agents, plus the
// two-octet wire frame used to talk to agents running in another process.
//
// Wire protocol (stdio, strictly lockstep, no delimiters):
//   env -> agent : [observation, reward]   reward as a signed octet
//   agent -> env : [action]
// The environment always speaks first and ends the session by closing its
// output.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gradual {

class Symbol {
 public:
  constexpr Symbol() = default;
  constexpr explicit Symbol(std::uint8_t value) : value_(value) {}

  constexpr std::uint8_t value() const { return value_; }

  friend constexpr auto operator<=>(Symbol, Symbol) = default;

 private:
  std::uint8_t value_ = 0;
};

constexpr Symbol operator""_sym(char c) { return Symbol(static_cast<std::uint8_t>(c)); }

// Printable ASCII is rendered verbatim, anything else as 0xNN.
std::string symbol_label(Symbol s);

enum class Reward : std::int8_t { negative = -1, none = 0, positive = 1 };

constexpr int to_int(Reward r) { return static_cast<int>(r); }

// Throws RewardOutOfRange for anything outside {-1, 0, +1}.
Reward reward_from_int(int value);

std::string reward_label(Reward r);  // "+1", "0", "-1"

inline constexpr std::size_t kFrameSize = 2;
inline constexpr std::size_t kReplySize = 1;

using Frame = std::array<std::uint8_t, kFrameSize>;

Frame encode_frame(Symbol observation, Reward reward);
std::pair<Symbol, Reward> decode_frame(const Frame& frame);
// Length-checked variant for raw buffers; throws FrameSizeError.
std::pair<Symbol, Reward> decode_frame(std::span<const std::uint8_t> bytes);

// One EnvStep: the action fed to the environment (absent on the priming
// step) and the reward/observation it produced.
struct StepRecord {
  std::uint64_t t = 0;
  Symbol observation;
  Reward reward = Reward::none;
  std::optional<Symbol> action;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

// Harness-side annotation; never part of what the agent receives.
struct Boundary {
  std::size_t record = 0;  // index of the priming record of the instance
  std::string task_id;
  std::size_t task_index = 0;
  std::size_t instance_index = 0;  // attempt number within the task
  std::uint64_t instance_seed = 0;
  bool starts_task = false;

  friend bool operator==(const Boundary&, const Boundary&) = default;
};

// A delivered frame together with the reply the agent gave to it (absent
// for the final frame of a session that ended before a reply).
struct DeliveredFrame {
  Symbol observation;
  Reward reward = Reward::none;
  std::optional<Symbol> reply;

  friend bool operator==(const DeliveredFrame&, const DeliveredFrame&) = default;
};

class SessionLog {
 public:
  void append(Symbol observation, Reward reward, std::optional<Symbol> action);
  void mark_instance(Boundary boundary);

  const std::vector<StepRecord>& records() const { return records_; }
  const std::vector<Boundary>& boundaries() const { return boundaries_; }

  std::size_t size() const { return records_.size(); }
  // Number of records carrying an agent action (i.e. non-priming steps).
  std::size_t action_count() const;

  // Reconstructs the frames the agent actually saw.  Each instance's final
  // observation is never delivered (the instance ends before the agent is
  // asked again); its reward rides along with the next instance's priming
  // frame instead.
  std::vector<DeliveredFrame> delivered_frames() const;

  // Raw byte stream as it would appear on the wire, frames and replies
  // interleaved.
  std::vector<std::uint8_t> wire_bytes() const;

 private:
  std::vector<StepRecord> records_;
  std::vector<Boundary> boundaries_;
};

}  // namespace gradual
