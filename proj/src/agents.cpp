#include "gradual/agent.hpp"

#include <algorithm>

#include "json.hpp"

#include "gradual/errors.hpp"

namespace gradual {
namespace {

using json = nlohmann::json;

void expect_kind(const AgentSnapshot& s, const std::string& kind, int version) {
  if (s.kind != kind || s.version != version)
    throw ValidationError("snapshot of '" + s.kind + "' v" + std::to_string(s.version) +
                          " cannot restore a '" + kind + "' v" + std::to_string(version) + " agent");
}

std::vector<std::uint8_t> bytes_of(const std::vector<Symbol>& symbols) {
  std::vector<std::uint8_t> out;
  for (auto s : symbols) out.push_back(s.value());
  return out;
}

std::vector<Symbol> symbols_from(const std::vector<std::uint8_t>& bytes) {
  std::vector<Symbol> out;
  for (auto b : bytes) out.push_back(Symbol(b));
  return out;
}

}  // namespace

std::vector<Symbol> printable_alphabet() {
  std::vector<Symbol> out;
  for (int b = 0x20; b <= 0x7E; ++b) out.push_back(Symbol(static_cast<std::uint8_t>(b)));
  return out;
}

std::vector<Symbol> symbols_of(const std::string& text) {
  std::vector<Symbol> out;
  for (char c : text) out.push_back(Symbol(static_cast<std::uint8_t>(c)));
  return out;
}

RandomAgent::RandomAgent(std::uint64_t seed, std::vector<Symbol> alphabet)
    : alphabet_(std::move(alphabet)), rng_(seed) {
  if (alphabet_.empty()) throw ValidationError("random agent needs a non-empty alphabet");
}

Symbol RandomAgent::step(Reward, Symbol) { return alphabet_[rng_.below(alphabet_.size())]; }

AgentSnapshot RandomAgent::snapshot() const {
  json j = {{"alphabet", bytes_of(alphabet_)}, {"rng", rng_.serialize()}};
  return {"random", 1, j.dump()};
}

void RandomAgent::restore(const AgentSnapshot& s) {
  expect_kind(s, "random", 1);
  const auto j = json::parse(s.payload);
  alphabet_ = symbols_from(j.at("alphabet").get<std::vector<std::uint8_t>>());
  rng_.deserialize(j.at("rng").get<std::string>());
}

AgentSnapshot ConstantAgent::snapshot() const {
  return {"constant", 1, json{{"action", action_.value()}}.dump()};
}

void ConstantAgent::restore(const AgentSnapshot& s) {
  expect_kind(s, "constant", 1);
  action_ = Symbol(json::parse(s.payload).at("action").get<std::uint8_t>());
}

AgentSnapshot EchoAgent::snapshot() const { return {"echo", 1, "{}"}; }

void EchoAgent::restore(const AgentSnapshot& s) { expect_kind(s, "echo", 1); }

MemorizerAgent::MemorizerAgent(std::uint64_t seed, std::vector<Symbol> alphabet,
                               MemorizerOptions options)
    : alphabet_(std::move(alphabet)), options_(options), rng_(seed), epsilon_(options.epsilon) {
  if (alphabet_.empty()) throw ValidationError("memorizer needs a non-empty alphabet");
  if (options_.window == 0) throw ValidationError("memorizer window must be >= 1");
}

std::vector<std::string> MemorizerAgent::suffixes() const {
  std::vector<std::string> out;
  const std::string full(window_.begin(), window_.end());
  for (std::size_t len = full.size(); len >= 1; --len) out.push_back(full.substr(full.size() - len));
  return out;
}

Symbol MemorizerAgent::step(Reward reward, Symbol observation) {
  if (last_action_) {
    for (const auto& ctx : last_contexts_) {
      auto& e = table_[ctx];
      if (reward == Reward::positive) {
        e.good = *last_action_;
        e.bad.erase(*last_action_);
      } else if (reward == Reward::negative) {
        e.bad.insert(*last_action_);
        if (e.good == last_action_) e.good.reset();
      }
    }
  }
  if (reward == Reward::positive) epsilon_ *= options_.epsilon_decay;

  window_.push_back(observation.value());
  while (window_.size() > options_.window) window_.pop_front();
  last_contexts_ = suffixes();

  std::optional<std::uint8_t> choice;
  const Entry* longest = nullptr;
  for (const auto& ctx : last_contexts_) {
    auto it = table_.find(ctx);
    if (it == table_.end()) continue;
    if (!longest) longest = &it->second;
    if (it->second.good) {
      choice = it->second.good;
      break;
    }
  }
  // One draw per step keeps the random stream independent of table state.
  const double u = rng_.uniform();
  if (!choice || u < epsilon_) {
    std::vector<std::uint8_t> candidates;
    for (auto s : alphabet_)
      if (!longest || !longest->bad.count(s.value())) candidates.push_back(s.value());
    if (candidates.empty()) candidates = bytes_of(alphabet_);
    choice = candidates[rng_.below(candidates.size())];
  }
  last_action_ = choice;
  return Symbol(*choice);
}

std::optional<Symbol> MemorizerAgent::known_action(const std::string& context) const {
  auto it = table_.find(context);
  if (it == table_.end() || !it->second.good) return std::nullopt;
  return Symbol(*it->second.good);
}

void MemorizerAgent::forget() {
  table_.clear();
  epsilon_ = options_.epsilon;
}

AgentSnapshot MemorizerAgent::snapshot() const {
  json table = json::object();
  for (const auto& [ctx, e] : table_) {
    json entry = {{"bad", std::vector<std::uint8_t>(e.bad.begin(), e.bad.end())}};
    if (e.good) entry["good"] = *e.good;
    // Contexts are raw bytes; store them as byte arrays keyed by position.
    table[json(std::vector<std::uint8_t>(ctx.begin(), ctx.end())).dump()] = entry;
  }
  json j = {{"alphabet", bytes_of(alphabet_)},
            {"window_size", options_.window},
            {"epsilon0", options_.epsilon},
            {"decay", options_.epsilon_decay},
            {"epsilon", epsilon_},
            {"rng", rng_.serialize()},
            {"window", std::vector<std::uint8_t>(window_.begin(), window_.end())},
            {"table", table},
            {"last_contexts", json::array()}};
  for (const auto& c : last_contexts_)
    j["last_contexts"].push_back(std::vector<std::uint8_t>(c.begin(), c.end()));
  if (last_action_) j["last_action"] = *last_action_;
  return {"memorizer", 1, j.dump()};
}

void MemorizerAgent::restore(const AgentSnapshot& s) {
  expect_kind(s, "memorizer", 1);
  const auto j = json::parse(s.payload);
  alphabet_ = symbols_from(j.at("alphabet").get<std::vector<std::uint8_t>>());
  options_.window = j.at("window_size").get<std::size_t>();
  options_.epsilon = j.at("epsilon0").get<double>();
  options_.epsilon_decay = j.at("decay").get<double>();
  epsilon_ = j.at("epsilon").get<double>();
  rng_.deserialize(j.at("rng").get<std::string>());
  const auto w = j.at("window").get<std::vector<std::uint8_t>>();
  window_.assign(w.begin(), w.end());
  table_.clear();
  for (const auto& [key, entry] : j.at("table").items()) {
    const auto ctx = json::parse(key).get<std::vector<std::uint8_t>>();
    Entry e;
    const auto bad = entry.at("bad").get<std::vector<std::uint8_t>>();
    e.bad.insert(bad.begin(), bad.end());
    if (entry.contains("good")) e.good = entry.at("good").get<std::uint8_t>();
    table_[std::string(ctx.begin(), ctx.end())] = std::move(e);
  }
  last_contexts_.clear();
  for (const auto& c : j.at("last_contexts")) {
    const auto bytes = c.get<std::vector<std::uint8_t>>();
    last_contexts_.emplace_back(bytes.begin(), bytes.end());
  }
  last_action_.reset();
  if (j.contains("last_action")) last_action_ = j.at("last_action").get<std::uint8_t>();
}

Symbol OracleAgent::best_action() const {
  if (!tap_->current) throw ValidationError("oracle agent has no live instance to observe");
  const InstanceState& inst = *tap_->current;
  const InstanceSpec& spec = inst.spec();
  std::size_t best = spec.other_class();
  int best_reward = to_int(spec.reward(inst.current_state(), best));
  for (std::size_t cls = 0; cls < spec.other_class(); ++cls) {
    const int r = to_int(spec.reward(inst.current_state(), cls));
    if (r > best_reward) {
      best = cls;
      best_reward = r;
    }
  }
  return spec.class_representative(best);
}

Symbol OracleAgent::worst_action() const {
  if (!tap_->current) throw ValidationError("oracle agent has no live instance to observe");
  const InstanceState& inst = *tap_->current;
  const InstanceSpec& spec = inst.spec();
  std::size_t worst = spec.other_class();
  int worst_reward = to_int(spec.reward(inst.current_state(), worst));
  for (std::size_t cls = 0; cls < spec.other_class(); ++cls) {
    const int r = to_int(spec.reward(inst.current_state(), cls));
    if (r < worst_reward) {
      worst = cls;
      worst_reward = r;
    }
  }
  return spec.class_representative(worst);
}

Symbol OracleAgent::step(Reward, Symbol) { return best_action(); }

AgentSnapshot OracleAgent::snapshot() const { return {"oracle", 1, "{}"}; }

void OracleAgent::restore(const AgentSnapshot& s) { expect_kind(s, "oracle", 1); }

}  // namespace gradual
