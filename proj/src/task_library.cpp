#include "gradual/task_library.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "gradual/errors.hpp"
#include "gradual/random.hpp"

namespace gradual {
namespace {

using json = nlohmann::json;

class Params {
 public:
  Params(std::string task, const json& params, std::set<std::string> allowed)
      : task_(std::move(task)), params_(params.is_null() ? json::object() : params) {
    if (!params_.is_object()) throw ConfigError(task_ + ": params must be an object");
    for (const auto& [key, _] : params_.items())
      if (!allowed.count(key)) throw ConfigError(task_ + ": unknown parameter '" + key + "'");
  }

  std::string letters(const std::string& key, std::string fallback, std::size_t min_size) const {
    std::string v = params_.contains(key) ? get<std::string>(key) : std::move(fallback);
    std::set<char> uniq(v.begin(), v.end());
    if (uniq.size() != v.size()) throw ConfigError(task_ + ": '" + key + "' has repeated symbols");
    if (v.size() < min_size)
      throw ConfigError(task_ + ": '" + key + "' needs at least " + std::to_string(min_size) +
                        " symbols");
    for (char c : v)
      if (c < 0x21 || c > 0x7E) throw ConfigError(task_ + ": '" + key + "' must be printable ASCII");
    return v;
  }

  int integer(const std::string& key, int fallback, int min_value) const {
    const int v = params_.contains(key) ? get<int>(key) : fallback;
    if (v < min_value)
      throw ConfigError(task_ + ": '" + key + "' must be >= " + std::to_string(min_value));
    return v;
  }

  std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback) const {
    return params_.contains(key) ? get<std::vector<std::string>>(key) : std::move(fallback);
  }

  const json& raw() const { return params_; }

 private:
  template <typename T>
  T get(const std::string& key) const {
    try {
      return params_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(task_ + ": bad parameter '" + key + "': " + e.what());
    }
  }

  std::string task_;
  json params_;
};

Symbol sym(char c) { return Symbol(static_cast<std::uint8_t>(c)); }

std::vector<Weighted<StateId>> uniform(const std::vector<StateId>& states) {
  std::vector<Weighted<StateId>> row;
  for (auto s : states) row.push_back({s, 1.0 / static_cast<double>(states.size())});
  return row;
}

std::vector<Weighted<StateId>> to(StateId s) { return {{s, 1.0}}; }

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

TaskSpec finish(std::string id, const Params& params, InstanceSampler sampler) {
  TaskSpec t;
  t.id = std::move(id);
  t.sampler = std::move(sampler);
  t.params_json = params.raw().dump();
  return t;
}

TaskSpec micro_fixed(const json& raw) {
  Params params("micro_fixed", raw, {"prompt"});
  const Symbol prompt = sym(params.letters("prompt", ">", 1).front());
  return finish("micro_fixed", params, [prompt](std::uint64_t seed) {
    Rng rng(seed);
    const Symbol target(static_cast<std::uint8_t>(rng.below(256)));
    InstanceBuilder b({target});
    const StateId ask = b.add_state("ask");
    b.priming(to(ask)).emits(ask, prompt);
    b.on_any(ask, Reward::negative, to(ask));
    b.on(ask, b.class_of(target), Reward::positive, to(ask));
    return std::move(b.label("target=" + symbol_label(target))).build();
  });
}

TaskSpec micro_echo(const json& raw) {
  Params params("micro_echo", raw, {"letters", "subset"});
  const std::string letters = params.letters("letters", "abcd", 1);
  const int subset = params.integer("subset", std::min<int>(3, letters.size()), 1);
  if (static_cast<std::size_t>(subset) > letters.size())
    throw ConfigError("micro_echo: subset larger than letters");
  return finish("micro_echo", params, [letters, subset](std::uint64_t seed) {
    Rng rng(seed);
    std::string pool = letters;
    std::vector<char> chars(pool.begin(), pool.end());
    shuffle(chars, rng);
    chars.resize(subset);
    std::sort(chars.begin(), chars.end());
    std::vector<Symbol> actions;
    for (char c : chars) actions.push_back(sym(c));
    InstanceBuilder b(actions);
    std::vector<StateId> shown;
    for (char c : chars) shown.push_back(b.add_state(std::string("echo_") + c));
    b.priming(uniform(shown));
    for (std::size_t i = 0; i < chars.size(); ++i) {
      b.emits(shown[i], sym(chars[i]));
      b.on_any(shown[i], Reward::negative, uniform(shown));
      b.on(shown[i], b.class_of(sym(chars[i])), Reward::positive, uniform(shown));
    }
    return std::move(b.label("letters=" + std::string(chars.begin(), chars.end()))).build();
  });
}

TaskSpec micro_map_a21(const json& raw) {
  Params params("micro_map_A21", raw, {"prompts", "responses"});
  const std::string prompts = params.letters("prompts", "abcd", 1);
  const std::string responses = params.letters("responses", "xy", 1);
  return finish("micro_map_A21", params, [prompts, responses](std::uint64_t seed) {
    Rng rng(seed);
    const char prompt = prompts[rng.below(prompts.size())];
    const char response = responses[rng.below(responses.size())];
    InstanceBuilder b({sym(response)});
    const StateId ask = b.add_state("ask");
    b.priming(to(ask)).emits(ask, sym(prompt));
    b.on_any(ask, Reward::negative, to(ask));
    b.on(ask, b.class_of(sym(response)), Reward::positive, to(ask));
    return std::move(b.label(std::string("prompt=") + prompt + " response=" + response)).build();
  });
}

TaskSpec micro_map_a21_adaptive(const json& raw) {
  Params params("micro_map_A21_adaptive", raw, {"prompts", "responses", "switch_after"});
  const std::string prompts = params.letters("prompts", "abcd", 1);
  const std::string responses = params.letters("responses", "xy", 2);
  const int switch_after = params.integer("switch_after", 2, 1);
  return finish("micro_map_A21_adaptive", params, [=](std::uint64_t seed) {
    Rng rng(seed);
    const char prompt = prompts[rng.below(prompts.size())];
    std::vector<char> pick(responses.begin(), responses.end());
    shuffle(pick, rng);
    const char first = pick[0], second = pick[1];
    InstanceBuilder b({sym(first), sym(second)});
    // The state counts correct answers so far (capped); the rewarded
    // letter is read off that counter.
    std::vector<StateId> count;
    for (int k = 0; k <= switch_after; ++k) count.push_back(b.add_state("k" + std::to_string(k)));
    b.priming(to(count[0]));
    for (int k = 0; k <= switch_after; ++k) {
      b.emits(count[k], sym(prompt));
      b.on_any(count[k], Reward::negative, to(count[k]));
      const char correct = k < switch_after ? first : second;
      b.on(count[k], b.class_of(sym(correct)), Reward::positive,
           to(count[std::min(k + 1, switch_after)]));
    }
    return std::move(b.label(std::string("prompt=") + prompt + " first=" + first +
                             " then=" + second))
        .build();
  });
}

TaskSpec micro_group_a22(const json& raw) {
  Params params("micro_group_A22", raw, {"letters", "responses"});
  const std::string letters = params.letters("letters", "abcd", 2);
  const std::string responses = params.letters("responses", "xy", 2);
  return finish("micro_group_A22", params, [letters, responses](std::uint64_t seed) {
    Rng rng(seed);
    std::vector<char> order(letters.begin(), letters.end());
    shuffle(order, rng);
    const std::size_t cut = order.size() / 2;
    std::map<char, int> group;
    for (std::size_t i = 0; i < order.size(); ++i) group[order[i]] = i < cut ? 0 : 1;

    InstanceBuilder b({sym(responses[0]), sym(responses[1])});
    std::vector<StateId> shown;
    for (char c : letters)
      shown.push_back(b.add_state(std::string("g") + char('0' + group[c]) + "_" + c));
    b.priming(uniform(shown));
    std::string g0, g1;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      const char c = letters[i];
      (group[c] == 0 ? g0 : g1) += c;
      b.emits(shown[i], sym(c));
      b.on_any(shown[i], Reward::negative, uniform(shown));
      b.on(shown[i], b.class_of(sym(responses[group[c]])), Reward::positive, uniform(shown));
    }
    return std::move(b.label("groups=" + g0 + "|" + g1)).build();
  });
}

TaskSpec mini_describe_a291(const json& raw) {
  Params params("mini_describe_A291", raw, {"queries", "responses", "terminator"});
  const std::string queries = params.letters("queries", "ab", 1);
  const std::string responses = params.letters("responses", "xy", 1);
  const char terminator = params.letters("terminator", ".", 1).front();
  return finish("mini_describe_A291", params, [=](std::uint64_t seed) {
    Rng rng(seed);
    std::map<char, char> mapping;
    std::string description;
    for (char q : queries) {
      mapping[q] = responses[rng.below(responses.size())];
      description += q;
      description += mapping[q];
    }
    description += terminator;

    std::vector<Symbol> actions;
    for (char r : responses) actions.push_back(sym(r));
    InstanceBuilder b(actions);
    b.description_length(description.size());
    std::vector<StateId> desc;
    for (std::size_t i = 0; i < description.size(); ++i)
      desc.push_back(b.add_state("d" + std::to_string(i)));
    std::vector<StateId> ask;
    for (char q : queries) ask.push_back(b.add_state(std::string("q_") + q));

    b.priming(to(desc[0]));
    for (std::size_t i = 0; i < desc.size(); ++i) {
      b.emits(desc[i], sym(description[i]));
      b.on_any(desc[i], Reward::none, i + 1 < desc.size() ? to(desc[i + 1]) : uniform(ask));
    }
    for (std::size_t i = 0; i < queries.size(); ++i) {
      b.emits(ask[i], sym(queries[i]));
      b.on_any(ask[i], Reward::negative, uniform(ask));
      b.on(ask[i], b.class_of(sym(mapping[queries[i]])), Reward::positive, uniform(ask));
    }
    return std::move(b.label("description=" + description)).build();
  });
}

// Small deterministic automaton over a two-letter alphabet {l0, l1}.
struct Language {
  std::string name;
  int start = 0;
  std::vector<std::array<int, 2>> delta;
  std::vector<bool> accept;
};

std::vector<Language> language_family() {
  return {
      {"even_l0", 0, {{1, 0}, {0, 1}}, {true, false}},
      // 0: empty, 1: began with l0, 2: began with l1
      {"starts_l0", 0, {{1, 2}, {1, 1}, {2, 2}}, {false, true, false}},
      // 0: empty, 1..4: (first, last) in {00, 01, 10, 11}
      {"same_ends",
       0,
       {{1, 4}, {1, 2}, {1, 2}, {3, 4}, {3, 4}},
       {false, true, false, false, true}},
      // count of l1 capped at 3
      {"three_l1", 0, {{0, 1}, {1, 2}, {2, 3}, {3, 3}}, {false, false, false, true}},
  };
}

TaskSpec mini_membership(const json& raw) {
  Params params("mini_membership", raw, {"letters", "length", "languages"});
  const std::string letters = params.letters("letters", "ab", 2);
  if (letters.size() != 2) throw ConfigError("mini_membership: exactly two letters are supported");
  const int length = params.integer("length", 4, 1);
  const auto family = language_family();
  std::vector<std::string> all;
  for (const auto& l : family) all.push_back(l.name);
  const auto chosen = params.strings("languages", all);
  std::vector<Language> langs;
  for (const auto& name : chosen) {
    auto it = std::find_if(family.begin(), family.end(), [&](const Language& l) { return l.name == name; });
    if (it == family.end()) throw ConfigError("mini_membership: unknown language '" + name + "'");
    langs.push_back(*it);
  }
  if (langs.empty()) throw ConfigError("mini_membership: no languages");

  return finish("mini_membership", params, [letters, length, langs](std::uint64_t seed) {
    Rng rng(seed);
    const Language lang = langs[rng.below(langs.size())];
    const Symbol yes = sym('y'), no = sym('n'), query = sym('?');
    InstanceBuilder b({yes, no});

    // String states are (position, automaton state, last letter).
    std::map<std::tuple<int, int, int>, StateId> ids;
    std::vector<std::tuple<int, int, int>> pending;
    auto state_of = [&](int pos, int q, int letter) {
      const auto key = std::make_tuple(pos, q, letter);
      auto it = ids.find(key);
      if (it != ids.end()) return it->second;
      const StateId s = b.add_state("p" + std::to_string(pos) + "q" + std::to_string(q) + "_" +
                                    letters[letter]);
      ids.emplace(key, s);
      pending.push_back(key);
      return s;
    };
    const StateId accept = b.add_state("ask_in");
    const StateId reject = b.add_state("ask_out");
    auto fresh_string = [&]() {
      return uniform({state_of(1, lang.delta[lang.start][0], 0), state_of(1, lang.delta[lang.start][1], 1)});
    };

    b.priming(fresh_string());
    for (StateId ask : {accept, reject}) {
      b.emits(ask, query);
      b.on_any(ask, Reward::negative, fresh_string());
      b.on(ask, b.class_of(ask == accept ? yes : no), Reward::positive, fresh_string());
    }
    while (!pending.empty()) {
      const auto [pos, q, letter] = pending.back();
      pending.pop_back();
      const StateId s = ids.at({pos, q, letter});
      b.emits(s, sym(letters[letter]));
      if (pos == length) {
        b.on_any(s, Reward::none, to(lang.accept[q] ? accept : reject));
      } else {
        b.on_any(s, Reward::none,
                 uniform({state_of(pos + 1, lang.delta[q][0], 0), state_of(pos + 1, lang.delta[q][1], 1)}));
      }
    }
    return std::move(b.label("language=" + lang.name)).build();
  });
}

using Factory = std::function<TaskSpec(const json&)>;

const std::map<std::string, Factory>& registry() {
  static const std::map<std::string, Factory> table = {
      {"micro_fixed", micro_fixed},
      {"micro_echo", micro_echo},
      {"micro_map_A21", micro_map_a21},
      {"micro_map_A21_adaptive", micro_map_a21_adaptive},
      {"micro_group_A22", micro_group_a22},
      {"mini_describe_A291", mini_describe_a291},
      {"mini_membership", mini_membership},
  };
  return table;
}

}  // namespace

std::vector<std::string> bundled_task_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : registry()) ids.push_back(id);
  return ids;
}

TaskSpec make_task(std::string_view id, const json& params) {
  auto it = registry().find(std::string(id));
  if (it == registry().end()) throw ConfigError("unknown task id '" + std::string(id) + "'");
  return it->second(params);
}

TaskSpec scripted_reward_task(std::vector<Reward> script, int req_reward, LimitPolicy limits,
                              Symbol prompt) {
  if (script.empty()) throw ValidationError("scripted task needs at least one reward");
  TaskSpec t;
  t.id = "scripted";
  t.req_reward = req_reward;
  t.limits = limits;
  t.sampler = [script, prompt](std::uint64_t) {
    InstanceBuilder b({});
    std::vector<StateId> chain;
    for (std::size_t i = 0; i < script.size(); ++i) chain.push_back(b.add_state("r" + std::to_string(i)));
    b.priming(to(chain[0]));
    for (std::size_t i = 0; i < chain.size(); ++i) {
      b.emits(chain[i], prompt);
      b.on_any(chain[i], script[i], to(chain[std::min(i + 1, chain.size() - 1)]));
    }
    return std::move(b).build();
  };
  return t;
}

CurriculumSpec bundled_curriculum(std::uint64_t seed, int n_s) {
  CurriculumSpec c;
  c.seed = seed;
  c.n_s = n_s;
  // Ordered by statistical complexity of each task's transducer under
  // uniform i.i.d. actions (two sampled instances, R* = 5).
  for (const char* id : {"micro_fixed", "mini_describe_A291", "micro_map_A21_adaptive", "micro_map_A21",
                         "micro_group_A22", "micro_echo", "mini_membership"})
    c.tasks.push_back(make_task(id));
  return c;
}

}  // namespace gradual
