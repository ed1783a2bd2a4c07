// Copyright 2026 The osci Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "osci/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace osci {

namespace {

using nlohmann::json;

// Forward iterator over the text that counts the newlines it has consumed,
// so SAX callbacks can be tagged with the line of the token just read.
class LineCountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator(const char* p, int* line) : p_(p), line_(line) {}
  reference operator*() const { return *p_; }
  LineCountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    auto copy = *this;
    ++*this;
    return copy;
  }
  friend bool operator==(const LineCountingIterator& a, const LineCountingIterator& b) { return a.p_ == b.p_; }
  friend bool operator!=(const LineCountingIterator& a, const LineCountingIterator& b) { return a.p_ != b.p_; }

 private:
  const char* p_;
  int* line_;
};

// DOM builder that also records the line of every object key and array
// element, keyed by JSON pointer.
class LineSax : public nlohmann::detail::json_sax_dom_parser<json> {
 public:
  using Base = nlohmann::detail::json_sax_dom_parser<json>;

  LineSax(json& root, const int* line, std::map<std::string, int>* lines)
      : Base(root, true), line_(line), lines_(lines) {}

  bool null() { return element() && Base::null(); }
  bool boolean(bool v) { return element() && Base::boolean(v); }
  bool number_integer(number_integer_t v) { return element() && Base::number_integer(v); }
  bool number_unsigned(number_unsigned_t v) { return element() && Base::number_unsigned(v); }
  bool number_float(number_float_t v, const string_t& s) { return element() && Base::number_float(v, s); }
  bool string(string_t& v) { return element() && Base::string(v); }
  bool binary(binary_t& v) { return element() && Base::binary(v); }

  bool start_object(std::size_t n) {
    element();
    frames_.push_back({false, 0, path()});
    return Base::start_object(n);
  }
  bool key(string_t& k) {
    auto& f = frames_.back();
    current_key_ = f.base + "/" + k;
    (*lines_)[current_key_] = *line_;
    return Base::key(k);
  }
  bool end_object() {
    frames_.pop_back();
    return Base::end_object();
  }
  bool start_array(std::size_t n) {
    element();
    frames_.push_back({true, 0, path()});
    return Base::start_array(n);
  }
  bool end_array() {
    frames_.pop_back();
    return Base::end_array();
  }

 private:
  struct Frame {
    bool is_array;
    std::size_t next_index;
    std::string base;
  };

  // Pointer of the value about to be produced.
  std::string path() const { return frames_.empty() ? "" : frames_.back().is_array ? last_element_ : current_key_; }

  bool element() {
    if (!frames_.empty() && frames_.back().is_array) {
      auto& f = frames_.back();
      last_element_ = f.base + "/" + std::to_string(f.next_index++);
      (*lines_)[last_element_] = *line_;
    }
    return true;
  }

  const int* line_;
  std::map<std::string, int>* lines_;
  std::vector<Frame> frames_;
  std::string current_key_;
  std::string last_element_;
};

// A ConfigError that already carries its "source:line:" prefix.
class AnchoredError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct Document {
  std::string source;
  json root;
  std::map<std::string, int> lines;

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    int line = 1;
    // Fall back to the closest ancestor with a recorded line.
    std::string p = pointer;
    while (true) {
      auto it = lines.find(p);
      if (it != lines.end()) {
        line = it->second;
        break;
      }
      const auto cut = p.rfind('/');
      if (cut == std::string::npos) break;
      p.resize(cut);
    }
    throw AnchoredError(source + ":" + std::to_string(line) + ": " + message);
  }
};

Document parse_document(std::string_view text, const std::string& source) {
  Document doc;
  doc.source = source;
  int line = 1;
  LineSax sax(doc.root, &line, &doc.lines);
  LineCountingIterator first(text.data(), &line);
  LineCountingIterator last(text.data() + text.size(), &line);
  try {
    json::sax_parse(first, last, &sax);
  } catch (const json::parse_error& e) {
    // The parser reports "... at line L, column C: ..."; keep our prefix.
    std::string what = e.what();
    const auto at = what.find("at line ");
    int err_line = line;
    if (at != std::string::npos) err_line = std::atoi(what.c_str() + at + 8);
    const auto colon = what.find(": ", at == std::string::npos ? 0 : at);
    throw AnchoredError(source + ":" + std::to_string(err_line) + ": malformed JSON" +
                      (colon == std::string::npos ? "" : what.substr(colon)));
  }
  if (!doc.root.is_object()) throw AnchoredError(source + ":1: top level must be a JSON object");
  return doc;
}

// View of one JSON object with its pointer, for typed field access.
class Node {
 public:
  Node(const Document& doc, const json& value, std::string pointer)
      : doc_(&doc), value_(&value), pointer_(std::move(pointer)) {}

  const json& value() const { return *value_; }
  const std::string& pointer() const { return pointer_; }
  [[noreturn]] void fail(const std::string& message) const { doc_->fail(pointer_, message); }
  [[noreturn]] void fail_at(const std::string& key, const std::string& message) const {
    doc_->fail(pointer_ + "/" + key, message);
  }

  void require_object(const std::string& what) const {
    if (!value_->is_object()) fail(what + " must be a JSON object");
  }

  void only_keys(std::initializer_list<const char*> allowed) const {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = value_->begin(); it != value_->end(); ++it) {
      if (!ok.count(it.key())) fail_at(it.key(), "unknown field '" + it.key() + "'");
    }
  }

  bool has(const std::string& key) const { return value_->contains(key); }
  Node child(const std::string& key) const {
    if (!has(key)) fail("missing required field '" + key + "'");
    return Node(*doc_, (*value_)[key], pointer_ + "/" + key);
  }
  Node element(std::size_t i) const {
    return Node(*doc_, (*value_)[i], pointer_ + "/" + std::to_string(i));
  }

  double number(const std::string& key) const {
    const auto c = child(key);
    if (!c.value().is_number()) c.fail("field '" + key + "' must be a number");
    const double v = c.value().get<double>();
    if (!std::isfinite(v)) c.fail("field '" + key + "' must be finite");
    return v;
  }
  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::uint64_t unsigned_int(const std::string& key) const {
    const auto c = child(key);
    if (!c.value().is_number_unsigned() && !(c.value().is_number_integer() && c.value().get<std::int64_t>() >= 0)) {
      c.fail("field '" + key + "' must be a nonnegative integer");
    }
    return c.value().get<std::uint64_t>();
  }
  std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? unsigned_int(key) : fallback;
  }

  std::string string(const std::string& key) const {
    const auto c = child(key);
    if (!c.value().is_string()) c.fail("field '" + key + "' must be a string");
    return c.value().get<std::string>();
  }
  std::string string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  // Runs `fn`, re-anchoring any ConfigError it raises at `key`.
  template <typename Fn>
  auto anchored(const std::string& key, Fn fn) const -> decltype(fn()) {
    try {
      return fn();
    } catch (const AnchoredError&) {
      throw;
    } catch (const ConfigError& e) {
      fail_at(key, e.what());
    }
  }

 private:
  const Document* doc_;
  const json* value_;
  std::string pointer_;
};

std::size_t to_size(const Node& node, const std::string& key, std::uint64_t v) {
  if (v > std::numeric_limits<std::size_t>::max() / 2) node.fail_at(key, "field '" + key + "' is too large");
  return static_cast<std::size_t>(v);
}

RuleSpec parse_rule_spec(const Node& node) {
  node.require_object("rule");
  node.only_keys({"family", "tau0", "tau1", "prior_count"});
  const std::string family_name = node.string("family");
  const RuleFamily family = node.anchored("family", [&] { return parse_rule_family(family_name); });
  const double prior = node.number_or("prior_count", 0.0);
  auto build = [&]() -> RuleSpec {
    switch (family) {
      case RuleFamily::kRunningCountThreshold:
        return RuleSpec::running_count_threshold(node.number("tau0"), node.number("tau1"), prior);
      case RuleFamily::kCountGate:
        if (node.has("tau0")) node.fail_at("tau0", "count_gate takes no tau0");
        return RuleSpec::count_gate(node.number("tau1"), prior);
      case RuleFamily::kShiftedThreshold:
        return RuleSpec::shifted_threshold(node.number("tau0"), node.number("tau1"), prior);
      case RuleFamily::kConstantOne:
        if (node.has("tau0") || node.has("tau1") || node.has("prior_count")) {
          node.fail("constant_one takes no parameters");
        }
        return RuleSpec::constant_one();
      case RuleFamily::kCustom:
        node.fail_at("family", "custom rules can only be registered from code");
    }
    node.fail("unsupported rule family");
  };
  try {
    return build();
  } catch (const AnchoredError&) {
    throw;
  } catch (const ConfigError& e) {
    node.fail(e.what());
  }
}

SelectionRule parse_selection_rule(const Node& node, std::size_t n_on) {
  node.require_object("rule");
  if (!node.has("past")) return SelectionRule(parse_rule_spec(node));
  node.only_keys({"past", "test", "test_time"});
  RuleSpec past = parse_rule_spec(node.child("past"));
  RuleSpec test = parse_rule_spec(node.child("test"));
  const std::size_t at = node.has("test_time") ? to_size(node, "test_time", node.unsigned_int("test_time")) : n_on - 1;
  if (at >= n_on) node.fail_at("test_time", "test_time must be below n_on");
  return SelectionRule(std::move(past), std::move(test), at);
}

StrategyKind parse_strategy(const Node& node, std::size_t n_on) {
  if (node.value().is_string()) {
    const auto name = node.value().get<std::string>();
    StrategyKind kind;
    try {
      kind.tag = parse_strategy_tag(name);
    } catch (const ConfigError& e) {
      node.fail(e.what());
    }
    if (kind.tag == StrategyKind::Tag::kKExpress) node.fail("K_EXPRESS needs an object with field 'k'");
    if (kind.tag == StrategyKind::Tag::kExpressM) kind.horizon_T = n_on;
    try {
      kind.validate();
    } catch (const ConfigError& e) {
      node.fail(e.what());
    }
    return kind;
  }
  node.require_object("strategy");
  node.only_keys({"kind", "k", "horizon_T"});
  StrategyKind kind;
  const std::string name = node.string("kind");
  kind.tag = node.anchored("kind", [&] { return parse_strategy_tag(name); });
  if (node.has("k")) {
    if (kind.tag != StrategyKind::Tag::kKExpress) node.fail_at("k", "'k' only applies to K_EXPRESS");
    kind.k = to_size(node, "k", node.unsigned_int("k"));
  }
  if (node.has("horizon_T")) {
    if (kind.tag != StrategyKind::Tag::kExpressM) node.fail_at("horizon_T", "'horizon_T' only applies to EXPRESS_M");
    kind.horizon_T = to_size(node, "horizon_T", node.unsigned_int("horizon_T"));
  } else if (kind.tag == StrategyKind::Tag::kExpressM) {
    kind.horizon_T = n_on;
  }
  if (kind.tag == StrategyKind::Tag::kKExpress && !node.has("k")) node.fail("K_EXPRESS needs field 'k'");
  try {
    kind.validate();
  } catch (const ConfigError& e) {
    node.fail(e.what());
  }
  return kind;
}

BaselineSpec parse_baseline(const Node& node, double alpha) {
  node.require_object("baseline");
  node.only_keys({"baseline", "W0", "gamma_seq", "gamma_step", "clip"});
  BaselineSpec b;
  const std::string kind = node.string("baseline");
  if (kind == "lord") {
    b.kind = BaselineSpec::Kind::kLord;
    if (node.has("gamma_step") || node.has("clip")) node.fail("gamma_step and clip apply to aci only");
    b.w0 = node.number_or("W0", 0.0);
    if (node.has("W0") && !(b.w0 > 0.0 && b.w0 <= alpha)) node.fail_at("W0", "W0 must lie in (0, alpha]");
    const std::string seq = node.string_or("gamma_seq", "inverse_square");
    if (seq != "inverse_square") node.fail_at("gamma_seq", "unknown gamma_seq '" + seq + "' (expected inverse_square)");
  } else if (kind == "aci") {
    b.kind = BaselineSpec::Kind::kAci;
    if (node.has("W0") || node.has("gamma_seq")) node.fail("W0 and gamma_seq apply to lord only");
    b.gamma_step = node.number_or("gamma_step", 0.01);
    if (!(b.gamma_step > 0.0)) node.fail_at("gamma_step", "gamma_step must be positive");
    const std::string clip = node.string_or("clip", "none");
    if (clip == "none") {
      b.clip = AciState::Clip::kNone;
    } else if (clip == "unit_interval") {
      b.clip = AciState::Clip::kUnitInterval;
    } else {
      node.fail_at("clip", "unknown clip '" + clip + "' (expected none or unit_interval)");
    }
  } else {
    node.fail_at("baseline", "unknown baseline '" + kind + "' (expected lord or aci)");
  }
  return b;
}

DataGenConfig parse_data(const Node& node) {
  node.require_object("data");
  node.only_keys({"n_off", "n_on", "beta", "noise", "noise_param", "seed"});
  DataGenConfig d;
  d.n_off = to_size(node, "n_off", node.unsigned_int("n_off"));
  d.n_on = to_size(node, "n_on", node.unsigned_int("n_on"));
  if (d.n_on < 1) node.fail_at("n_on", "n_on must be at least 1");
  d.beta = node.number_or("beta", 1.0);
  const std::string noise = node.string_or("noise", "heteroscedastic_half_x");
  if (noise != "heteroscedastic_half_x") {
    node.fail_at("noise", "unknown noise '" + noise + "' (expected heteroscedastic_half_x)");
  }
  const std::string param = node.string_or("noise_param", "variance");
  d.noise_param = node.anchored("noise_param", [&] { return parse_noise_param(param); });
  d.seed = node.unsigned_or("seed", 0);
  return d;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ":0: cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string evaluation_name(Evaluation e) { return e == Evaluation::kTerminal ? "terminal" : "every_time"; }

std::string BaselineSpec::name() const {
  if (kind == Kind::kLord) return "LORD_CI";
  char buf[48];
  std::snprintf(buf, sizeof buf, "ACI_%g", gamma_step);
  return buf;
}

void ExperimentConfig::validate() const {
  data.validate();
  rule.validate();
  Level level(alpha);
  (void)level;
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (strategies.empty()) throw ConfigError("at least one strategy is required");
  for (const auto& s : strategies) s.validate();
  if (rule.test && rule.test_time >= data.n_on) throw ConfigError("test_time must be below n_on");
  for (const auto& b : baselines) {
    if (b.kind == BaselineSpec::Kind::kAci && !(b.gamma_step > 0.0)) throw ConfigError("gamma_step must be positive");
    if (b.kind == BaselineSpec::Kind::kLord && !(b.w0 >= 0.0 && b.w0 <= alpha)) {
      throw ConfigError("W0 must lie in [0, alpha]");
    }
  }
  // Output files are named after the methods.
  std::set<std::string> names;
  for (const auto& s : strategies) {
    if (!names.insert(s.name()).second) throw ConfigError("duplicate method " + s.name());
  }
  for (const auto& b : baselines) {
    if (!names.insert(b.name()).second) throw ConfigError("duplicate method " + b.name());
  }
}

ExperimentConfig parse_experiment_config(std::string_view text, const std::string& source) {
  const Document doc = parse_document(text, source);
  const Node root(doc, doc.root, "");
  root.only_keys({"data", "rule", "strategies", "baselines", "alpha", "replicates", "output_path", "evaluation"});

  ExperimentConfig cfg;
  cfg.data = parse_data(root.child("data"));
  cfg.alpha = root.number("alpha");
  root.anchored("alpha", [&] { return Level(cfg.alpha); });
  cfg.rule = parse_selection_rule(root.child("rule"), cfg.data.n_on);

  const Node strategies = root.child("strategies");
  if (!strategies.value().is_array() || strategies.value().empty()) {
    strategies.fail("'strategies' must be a nonempty array");
  }
  for (std::size_t i = 0; i < strategies.value().size(); ++i) {
    cfg.strategies.push_back(parse_strategy(strategies.element(i), cfg.data.n_on));
  }
  if (root.has("baselines")) {
    const Node baselines = root.child("baselines");
    if (!baselines.value().is_array()) baselines.fail("'baselines' must be an array");
    for (std::size_t i = 0; i < baselines.value().size(); ++i) {
      cfg.baselines.push_back(parse_baseline(baselines.element(i), cfg.alpha));
    }
  }
  cfg.replicates = to_size(root, "replicates", root.unsigned_int("replicates"));
  if (cfg.replicates < 1) root.fail_at("replicates", "replicates must be at least 1");
  cfg.output_path = root.string_or("output_path", "out");
  const std::string evaluation = root.string_or("evaluation", "every_time");
  if (evaluation == "every_time") {
    cfg.evaluation = Evaluation::kEveryTime;
  } else if (evaluation == "terminal") {
    cfg.evaluation = Evaluation::kTerminal;
  } else {
    root.fail_at("evaluation", "unknown evaluation '" + evaluation + "' (expected every_time or terminal)");
  }
  // Cross-field checks (e.g. two methods writing the same file).
  root.anchored("strategies", [&] {
    cfg.validate();
    return 0;
  });
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_file(path), path);
}

WitnessSearch parse_witness_search(std::string_view text, const std::string& source) {
  const Document doc = parse_document(text, source);
  const Node root(doc, doc.root, "");
  root.only_keys({"strategy", "rule", "trials", "seed", "max_n_off", "max_t", "jitter"});
  WitnessSearch s;
  const std::string name = root.string("strategy");
  s.strategy = root.anchored("strategy", [&] { return parse_search_strategy(name); });
  s.max_n_off = to_size(root, "max_n_off", root.unsigned_or("max_n_off", 3));
  s.max_t = to_size(root, "max_t", root.unsigned_or("max_t", 4));
  if (s.max_t < 1) root.fail_at("max_t", "max_t must be at least 1");
  if (s.max_n_off + s.max_t > kMaxOracleCandidates) {
    root.fail("max_n_off + max_t must not exceed " + std::to_string(kMaxOracleCandidates));
  }
  s.rule = parse_selection_rule(root.child("rule"), s.max_t + 1);
  s.trials = to_size(root, "trials", root.unsigned_or("trials", 1000));
  if (s.trials < 1) root.fail_at("trials", "trials must be at least 1");
  s.seed = root.unsigned_or("seed", 0);
  s.jitter = root.number_or("jitter", 1.0);
  if (s.jitter < 0.0) root.fail_at("jitter", "jitter must be nonnegative");
  return s;
}

WitnessSearch load_witness_search(const std::string& path) { return parse_witness_search(read_file(path), path); }

namespace {

nlohmann::ordered_json spec_json(const RuleSpec& spec) {
  nlohmann::ordered_json j;
  j["family"] = std::string(rule_family_name(spec.family));
  switch (spec.family) {
    case RuleFamily::kRunningCountThreshold:
    case RuleFamily::kShiftedThreshold:
      j["tau0"] = spec.tau0;
      j["tau1"] = spec.tau1;
      break;
    case RuleFamily::kCountGate:
      j["tau1"] = spec.tau1;
      break;
    case RuleFamily::kConstantOne:
      return j;
    case RuleFamily::kCustom:
      throw ConfigError("custom rules cannot be serialized");
  }
  if (spec.prior_count != 0.0) j["prior_count"] = spec.prior_count;
  return j;
}

nlohmann::ordered_json selection_json(const SelectionRule& rule) {
  if (!rule.test) return spec_json(rule.past);
  nlohmann::ordered_json j;
  j["past"] = spec_json(rule.past);
  j["test"] = spec_json(*rule.test);
  j["test_time"] = rule.test_time;
  return j;
}

std::vector<int> int_array(const Node& node, const std::string& key) {
  const Node c = node.child(key);
  if (!c.value().is_array()) c.fail("'" + key + "' must be an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < c.value().size(); ++i) {
    const auto& v = c.value()[i];
    if (!v.is_number_integer()) c.element(i).fail("expected an integer");
    out.push_back(v.get<int>());
  }
  return out;
}

std::vector<double> double_array(const Node& node, const std::string& key) {
  const Node c = node.child(key);
  if (!c.value().is_array()) c.fail("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < c.value().size(); ++i) {
    const auto& v = c.value()[i];
    if (!v.is_number()) c.element(i).fail("expected a number");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string rule_to_json(const SelectionRule& rule) { return selection_json(rule).dump(); }

std::string witness_to_json(const SymmetryWitness& w) {
  nlohmann::ordered_json j;
  j["strategy"] = w.instance.strategy.name();
  j["rule"] = selection_json(w.instance.rule);
  j["offline_x"] = w.instance.offline_x;
  j["online_x"] = w.instance.online_x;
  j["domain"] = w.domain;
  j["image"] = w.image;
  j["original"] = w.original;
  j["permuted"] = w.permuted;
  // Full precision so that a reloaded fixture reproduces the instance.
  return j.dump(2) + "\n";
}

SymmetryWitness parse_witness(std::string_view text, const std::string& source) {
  const Document doc = parse_document(text, source);
  const Node root(doc, doc.root, "");
  root.only_keys({"strategy", "rule", "offline_x", "online_x", "domain", "image", "original", "permuted"});
  SymmetryWitness w;
  const std::string name = root.string("strategy");
  w.instance.strategy = root.anchored("strategy", [&] { return parse_search_strategy(name); });
  w.instance.offline_x = double_array(root, "offline_x");
  w.instance.online_x = double_array(root, "online_x");
  if (w.instance.online_x.empty()) root.fail_at("online_x", "online_x needs at least the test point");
  w.instance.rule = parse_selection_rule(root.child("rule"), w.instance.online_x.size());
  w.domain = int_array(root, "domain");
  w.image = int_array(root, "image");
  w.original = int_array(root, "original");
  w.permuted = int_array(root, "permuted");
  return w;
}

}  // namespace osci
