#include "gradual/cssr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <iterator>
#include <map>
#include <numeric>
#include <unordered_map>

#include <boost/math/distributions/chi_squared.hpp>

#include "gradual/errors.hpp"
#include "gradual/stream.hpp"

namespace gradual {

SymbolSequence make_sequence(std::vector<std::string> alphabet, std::vector<std::uint32_t> symbols) {
  for (auto s : symbols)
    if (s >= alphabet.size()) throw ValidationError("symbol index out of range of the alphabet");
  return {std::move(alphabet), std::move(symbols)};
}

SymbolSequence read_binary_sequence(std::istream& in) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::uint8_t> distinct = bytes;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::array<std::uint32_t, 256> index{};
  SymbolSequence seq;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    index[distinct[i]] = static_cast<std::uint32_t>(i);
    seq.alphabet.push_back(symbol_label(Symbol(distinct[i])));
  }
  seq.symbols.reserve(bytes.size());
  for (auto b : bytes) seq.symbols.push_back(index[b]);
  return seq;
}

SymbolSequence read_line_sequence(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  std::vector<std::string> alphabet = lines;
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  SymbolSequence seq;
  seq.symbols.reserve(lines.size());
  for (const auto& l : lines)
    seq.symbols.push_back(
        static_cast<std::uint32_t>(std::lower_bound(alphabet.begin(), alphabet.end(), l) - alphabet.begin()));
  seq.alphabet = std::move(alphabet);
  return seq;
}

namespace {

constexpr long kUnknown = -1;

struct History {
  std::size_t len = 0;
  std::uint64_t code = 0;  // base-k, oldest symbol most significant
  std::vector<std::uint64_t> next;
  std::uint64_t total = 0;
  std::size_t state = 0;
};

struct State {
  std::vector<std::size_t> members;
  std::vector<std::uint64_t> counts;
  std::vector<long> successor;
};

class Reconstructor {
 public:
  Reconstructor(const SymbolSequence& seq, const CssrOptions& opt) : seq_(seq), opt_(opt) {
    k_ = seq.alphabet.size();
    pow_.assign(opt.l_max + 2, 1);
    for (std::size_t i = 1; i < pow_.size(); ++i) {
      if (pow_[i - 1] > (std::uint64_t{1} << 62) / k_)
        throw ValidationError("alphabet too large for the requested history length");
      pow_[i] = pow_[i - 1] * k_;
    }
    index_.resize(opt.l_max + 1);
  }

  Reconstruction run() {
    count();
    homogenize();
    determinize();
    return build();
  }

 private:
  std::size_t find(std::size_t len, std::uint64_t code) const {
    const auto it = index_[len].find(code);
    return it == index_[len].end() ? Machine::npos : it->second;
  }

  void count() {
    const auto& s = seq_.symbols;
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::uint64_t code = 0;
      for (std::size_t len = 0; len <= opt_.l_max && len <= i; ++len) {
        if (len > 0) code += s[i - len] * pow_[len - 1];
        auto [it, fresh] = index_[len].try_emplace(code, hist_.size());
        if (fresh) {
          History h;
          h.len = len;
          h.code = code;
          h.next.assign(k_, 0);
          hist_.push_back(std::move(h));
        }
        History& h = hist_[it->second];
        ++h.next[s[i]];
        ++h.total;
      }
    }
  }

  bool differ(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) const {
    const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::uint64_t{0}));
    const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
    if (na == 0.0 || nb == 0.0) return false;
    double stat = 0.0;
    int cols = 0;
    for (std::size_t y = 0; y < k_; ++y) {
      const double col = static_cast<double>(a[y] + b[y]);
      if (col == 0.0) continue;
      ++cols;
      const double ea = col * na / (na + nb);
      const double eb = col * nb / (na + nb);
      stat += (static_cast<double>(a[y]) - ea) * (static_cast<double>(a[y]) - ea) / ea;
      stat += (static_cast<double>(b[y]) - eb) * (static_cast<double>(b[y]) - eb) / eb;
    }
    if (cols < 2) return false;
    const boost::math::chi_squared dist(cols - 1);
    return boost::math::cdf(boost::math::complement(dist, stat)) < opt_.alpha;
  }

  void add(std::size_t h, std::size_t st) {
    hist_[h].state = st;
    states_[st].members.push_back(h);
    for (std::size_t y = 0; y < k_; ++y) states_[st].counts[y] += hist_[h].next[y];
  }

  std::size_t new_state() {
    states_.push_back({{}, std::vector<std::uint64_t>(k_, 0), {}});
    return states_.size() - 1;
  }

  void homogenize() {
    new_state();
    add(find(0, 0), 0);
    std::vector<std::size_t> layer{find(0, 0)};
    for (std::size_t len = 0; len < opt_.l_max; ++len) {
      std::vector<std::size_t> children;
      for (std::size_t h : layer) {
        for (std::size_t a = 0; a < k_; ++a) {
          const std::size_t c = find(len + 1, a * pow_[len] + hist_[h].code);
          if (c == Machine::npos) continue;
          children.push_back(c);
          const std::size_t parent = hist_[h].state;
          if (!differ(hist_[c].next, states_[parent].counts)) {
            add(c, parent);
            continue;
          }
          std::size_t target = Machine::npos;
          for (std::size_t st = 0; st < states_.size() && target == Machine::npos; ++st)
            if (st != parent && !differ(hist_[c].next, states_[st].counts)) target = st;
          add(c, target == Machine::npos ? new_state() : target);
        }
      }
      layer = std::move(children);
    }
  }

  std::size_t successor_history(std::size_t h, std::size_t y) const {
    const History& hs = hist_[h];
    if (hs.len < opt_.l_max) return find(hs.len + 1, hs.code * k_ + y);
    return find(opt_.l_max, (hs.code * k_ + y) % pow_[opt_.l_max]);
  }

  std::vector<long> key_of(std::size_t h) const {
    std::vector<long> key(k_, kUnknown);
    for (std::size_t y = 0; y < k_; ++y) {
      if (hist_[h].next[y] == 0) continue;
      const std::size_t nh = successor_history(h, y);
      if (nh != Machine::npos) key[y] = static_cast<long>(hist_[nh].state);
    }
    return key;
  }

  static bool compatible(const std::vector<long>& a, const std::vector<long>& b) {
    for (std::size_t y = 0; y < a.size(); ++y)
      if (a[y] != kUnknown && b[y] != kUnknown && a[y] != b[y]) return false;
    return true;
  }

  void determinize() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t st = 0; st < states_.size(); ++st) {
        struct Group {
          std::vector<long> key;
          std::vector<std::size_t> members;
        };
        std::vector<Group> groups;
        for (std::size_t h : states_[st].members) {
          const auto key = key_of(h);
          auto g = std::find_if(groups.begin(), groups.end(),
                                [&](const Group& gr) { return compatible(gr.key, key); });
          if (g == groups.end()) {
            groups.push_back({key, {h}});
            continue;
          }
          for (std::size_t y = 0; y < k_; ++y)
            if (g->key[y] == kUnknown) g->key[y] = key[y];
          g->members.push_back(h);
        }
        if (groups.size() == 1) {
          states_[st].successor = groups[0].key;
          continue;
        }
        changed = true;
        states_[st].members.clear();
        std::fill(states_[st].counts.begin(), states_[st].counts.end(), 0);
        for (std::size_t h : groups[0].members) add(h, st);
        for (std::size_t g = 1; g < groups.size(); ++g) {
          const std::size_t fresh = new_state();
          for (std::size_t h : groups[g].members) add(h, fresh);
        }
        break;  // successor keys of every state are stale now
      }
    }
  }

  Reconstruction build() {
    const std::size_t n = states_.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t st = 0; st < n; ++st)
      for (long t : states_[st].successor)
        if (t != kUnknown) adj[st].push_back(static_cast<std::size_t>(t));

    // Closed classes by forward reachability: a state is recurrent iff every
    // state it reaches reaches it back.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> stack{s};
      while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w : adj[v])
          if (!reach[s][w]) {
            reach[s][w] = true;
            stack.push_back(w);
          }
      }
    }
    std::vector<bool> recurrent(n, false);
    for (std::size_t s = 0; s < n; ++s) {
      if (!reach[s][s]) continue;
      bool closed = true;
      for (std::size_t t = 0; t < n && closed; ++t)
        if (reach[s][t] && !reach[t][s]) closed = false;
      recurrent[s] = closed;
    }
    // Pick the recurrent class carrying the most observations.
    std::size_t best_root = Machine::npos;
    std::uint64_t best_weight = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (!recurrent[s]) continue;
      bool first = true;
      for (std::size_t t = 0; t < s; ++t)
        if (recurrent[t] && reach[s][t]) first = false;
      if (!first) continue;
      std::uint64_t w = 0;
      for (std::size_t t = 0; t < n; ++t)
        if (t == s || (reach[s][t] && recurrent[t]))
          w += std::accumulate(states_[t].counts.begin(), states_[t].counts.end(), std::uint64_t{0});
      if (best_root == Machine::npos || w > best_weight) {
        best_root = s;
        best_weight = w;
      }
    }
    if (best_root == Machine::npos) throw InsufficientData("no recurrent causal state found");

    std::vector<std::size_t> kept;
    std::vector<std::size_t> local(n, Machine::npos);
    for (std::size_t s = 0; s < n; ++s)
      if (s == best_root || (reach[best_root][s] && recurrent[s])) {
        local[s] = kept.size();
        kept.push_back(s);
      }

    MachineData d;
    d.outputs = seq_.alphabet;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const State& st = states_[kept[i]];
      d.states.push_back("s" + std::to_string(i));
      std::uint64_t total = 0;
      for (std::size_t y = 0; y < k_; ++y)
        if (st.successor[y] != kUnknown) total += st.counts[y];
      if (total < opt_.min_count)
        throw InsufficientData("causal state rests on " + std::to_string(total) + " observations, need " +
                               std::to_string(opt_.min_count));
      for (std::size_t y = 0; y < k_; ++y) {
        if (st.successor[y] == kUnknown || st.counts[y] == 0) continue;
        Transition t;
        t.from = i;
        t.output = y;
        t.to = local[static_cast<std::size_t>(st.successor[y])];
        t.p = static_cast<double>(st.counts[y]) / static_cast<double>(total);
        d.transitions.push_back(t);
      }
    }
    Reconstruction r{EpsilonMachine(std::move(d)), {}, hist_.size()};
    const double recommended = 10.0 * std::pow(static_cast<double>(k_), static_cast<double>(opt_.l_max));
    if (static_cast<double>(seq_.symbols.size()) < recommended)
      r.warnings.push_back("sequence of " + std::to_string(seq_.symbols.size()) +
                           " symbols is shorter than the recommended " +
                           std::to_string(static_cast<std::uint64_t>(recommended)));
    return r;
  }

  const SymbolSequence& seq_;
  CssrOptions opt_;
  std::size_t k_ = 0;
  std::vector<std::uint64_t> pow_;
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> index_;
  std::vector<History> hist_;
  std::vector<State> states_;
};

}  // namespace

Reconstruction reconstruct_from_sequence(const SymbolSequence& sequence, const CssrOptions& options) {
  if (options.l_max == 0) throw ValidationError("l_max must be >= 1");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ValidationError("alpha must be in (0, 1)");
  if (sequence.alphabet.empty() || sequence.symbols.size() <= options.l_max)
    throw InsufficientData("sequence of " + std::to_string(sequence.symbols.size()) +
                           " symbols cannot fill a history of length " + std::to_string(options.l_max));
  return Reconstructor(sequence, options).run();
}

}  // namespace gradual
