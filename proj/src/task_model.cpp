#include "gradual/task_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "gradual/errors.hpp"
#include "gradual/minimize.hpp"

namespace gradual {
namespace {

struct Atom {
  std::uint32_t instance;
  StateId state;
  double w;
};

struct Belief {
  int counter = 0;
  std::vector<Atom> atoms;  // sorted by (instance, state)
};

using BeliefKey = std::tuple<int, std::vector<std::tuple<std::uint32_t, StateId, std::int64_t>>>;

BeliefKey key_of(const Belief& b) {
  BeliefKey key{b.counter, {}};
  for (const auto& a : b.atoms) std::get<1>(key).emplace_back(a.instance, a.state, std::llround(a.w * 1e12));
  return key;
}

Belief normalized(int counter, const std::map<std::pair<std::uint32_t, StateId>, double>& mass) {
  double total = 0.0;
  for (const auto& [_, m] : mass) total += m;
  Belief b;
  b.counter = counter;
  for (const auto& [ks, m] : mass)
    if (m > 0.0) b.atoms.push_back({ks.first, ks.second, m / total});
  return b;
}

class Builder {
 public:
  Builder(const TaskSpec& task, const TaskModelOptions& options) : options_(options) {
    validate(task);
    r_star_ = options.req_reward.value_or(req_reward(task));
    if (r_star_ < 1) throw ValidationError("required reward must be >= 1");
    for (auto seed : model_seeds(options)) specs_.push_back(task.sampler(seed));

    std::set<Symbol> distinguished;
    for (const auto& s : specs_)
      for (auto a : s.distinguished_actions()) distinguished.insert(a);
    for (auto a : distinguished) {
      bytes_.push_back(a);
      data_.inputs.push_back(symbol_label(a));
    }
    for (int b = 0; b < 256; ++b) {
      const Symbol cand(static_cast<std::uint8_t>(b));
      if (!distinguished.count(cand)) {
        bytes_.push_back(cand);
        data_.inputs.push_back(kOtherInputLabel);
        break;
      }
    }
  }

  RawMachine build() {
    // Post-priming beliefs, one per possible first observation.
    std::map<Symbol, std::map<std::pair<std::uint32_t, StateId>, double>> by_obs;
    const double prior = 1.0 / static_cast<double>(specs_.size());
    for (std::uint32_t k = 0; k < specs_.size(); ++k) {
      const auto& spec = specs_[k];
      const std::size_t cls = spec.priming_class();
      for (const auto& s1 : spec.transition(InstanceSpec::kStart, cls))
        for (const auto& o : spec.observation(s1.value, cls)) by_obs[o.value][{k, s1.value}] += prior * s1.p * o.p;
    }
    for (const auto& [obs, mass] : by_obs) {
      double total = 0.0;
      for (const auto& [_, m] : mass) total += m;
      priming_.push_back({obs, total, intern(normalized(0, mass))});
    }

    while (!queue_.empty()) {
      const std::size_t id = queue_.front();
      queue_.pop_front();
      expand(id);
    }
    return finish();
  }

 private:
  struct Outcome {
    Symbol observation;
    double p;
    std::size_t state;
  };

  std::size_t intern(Belief b) {
    auto key = key_of(b);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (beliefs_.size() >= options_.state_cap)
      throw StateExplosion("task model exceeds " + std::to_string(options_.state_cap) + " states",
                           options_.state_cap);
    const std::size_t id = beliefs_.size();
    ids_.emplace(std::move(key), id);
    beliefs_.push_back(std::move(b));
    queue_.push_back(id);
    return id;
  }

  std::size_t output_index(Symbol o, Reward r) {
    auto [it, fresh] = outputs_.try_emplace({o, r}, outputs_.size());
    return it->second;
  }

  void expand(std::size_t id) {
    for (std::size_t x = 0; x < bytes_.size(); ++x) {
      const Belief b = beliefs_[id];
      std::map<std::pair<Symbol, Reward>, std::map<std::pair<std::uint32_t, StateId>, double>> joint;
      for (const auto& atom : b.atoms) {
        const auto& spec = specs_[atom.instance];
        const std::size_t cls = spec.action_class(bytes_[x]);
        const Reward r = spec.reward(atom.state, cls);
        for (const auto& next : spec.transition(atom.state, cls))
          for (const auto& o : spec.observation(next.value, cls))
            joint[{o.value, r}][{atom.instance, next.value}] += atom.w * next.p * o.p;
      }
      double completed = 0.0;
      for (const auto& [label, mass] : joint) {
        const Reward r = label.second;
        double m = 0.0;
        for (const auto& [_, v] : mass) m += v;
        if (r == Reward::positive && b.counter + 1 == r_star_) {
          completed += m;
          continue;
        }
        const int counter = r == Reward::positive ? b.counter + 1 : r == Reward::negative ? 0 : b.counter;
        const std::size_t to = intern(normalized(counter, mass));
        pending_.push_back({id, x, output_index(label.first, r), to, m,
                            r == Reward::negative ? TransitionKind::error : TransitionKind::regular});
      }
      if (completed > 0.0)
        for (const auto& prime : priming_)
          pending_.push_back({id, x, output_index(prime.observation, Reward::positive), prime.state,
                              completed * prime.p, TransitionKind::instance_switch});
    }
  }

  std::string name_of(const Belief& b) const {
    std::string name = "c" + std::to_string(b.counter) + "|";
    if (b.atoms.size() > 4) return name + "mix" + std::to_string(b.atoms.size());
    for (std::size_t i = 0; i < b.atoms.size(); ++i) {
      const auto& a = b.atoms[i];
      if (i) name += ",";
      if (specs_.size() > 1) name += "k" + std::to_string(a.instance) + ":";
      name += specs_[a.instance].state_name(a.state);
      if (b.atoms.size() > 1) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "@%.3g", a.w);
        name += buf;
      }
    }
    return name;
  }

  RawMachine finish() {
    // Outputs in label order so the alphabet does not depend on discovery
    // order.
    std::vector<std::pair<std::string, std::size_t>> labels;
    for (const auto& [key, idx] : outputs_) labels.push_back({output_label(key.first, key.second), idx});
    std::sort(labels.begin(), labels.end());
    std::vector<std::size_t> remap(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      remap[labels[i].second] = i;
      data_.outputs.push_back(labels[i].first);
    }
    std::set<std::string> used;
    for (std::size_t i = 0; i < beliefs_.size(); ++i) {
      std::string name = name_of(beliefs_[i]);
      if (!used.insert(name).second) {
        name += "#" + std::to_string(i);
        used.insert(name);
      }
      data_.states.push_back(std::move(name));
    }
    // Renormalize rows to absorb rounding from the belief products.
    std::map<std::pair<std::size_t, std::size_t>, double> row;
    for (const auto& t : pending_) row[{t.from, t.input}] += t.p;
    for (auto t : pending_) {
      t.output = remap[t.output];
      t.p /= row.at({t.from, t.input});
      data_.transitions.push_back(t);
    }
    return RawMachine(std::move(data_));
  }

  struct Priming {
    Symbol observation;
    double p;
    std::size_t state;
  };

  TaskModelOptions options_;
  int r_star_ = 1;
  std::vector<InstanceSpec> specs_;
  std::vector<Symbol> bytes_;
  MachineData data_{{}, {}, {}, {}};
  std::vector<Priming> priming_;
  std::vector<Belief> beliefs_;
  std::map<BeliefKey, std::size_t> ids_;
  std::deque<std::size_t> queue_;
  std::map<std::pair<Symbol, Reward>, std::size_t> outputs_;
  std::vector<Transition> pending_;
};

}  // namespace

std::vector<std::uint64_t> model_seeds(const TaskModelOptions& options) {
  if (!options.seeds.empty()) return options.seeds;
  if (options.instances == 0) throw ValidationError("task model needs at least one instance");
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < options.instances; ++i) seeds.push_back(instance_seed(options.seed, 0, i));
  return seeds;
}

std::string output_label(Symbol observation, Reward reward) {
  return symbol_label(observation) + "," + reward_label(reward);
}

RawMachine task_raw_machine(const TaskSpec& task, const TaskModelOptions& options) {
  return Builder(task, options).build();
}

EpsilonTransducer transducer_from_task(const TaskSpec& task, const TaskModelOptions& options) {
  return minimize(task_raw_machine(task, options));
}

}  // namespace gradual
