// Copyright 2026 The juntalab Authors
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

#include "juntalab/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace juntalab {

namespace {

// Read-only view of a JSON node that knows its own path.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError(path_, what);
  }

  Node at(const std::string& key) const {
    object();
    auto it = j_.find(key);
    if (it == j_.end()) Node(j_, child(key)).fail("missing");
    return Node(*it, child(key));
  }
  bool has(const std::string& key) const {
    object();
    return j_.contains(key);
  }
  Node at(size_t i) const {
    return Node(j_[i], path_ + "[" + std::to_string(i) + "]");
  }
  size_t size() const {
    array();
    return j_.size();
  }
  void only(std::initializer_list<const char*> keys) const {
    object();
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!ok.count(it.key())) Node(j_, child(it.key())).fail("unknown field");
  }

  double num() const {
    if (!j_.is_number()) fail("expected a number");
    double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  Mask mask() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0))
      fail("expected a nonnegative integer");
    return j_.get<Mask>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<double> nums() const {
    std::vector<double> v;
    for (size_t i = 0; i < size(); ++i) v.push_back(at(i).num());
    return v;
  }
  std::vector<int> ints() const {
    std::vector<int> v;
    for (size_t i = 0; i < size(); ++i) v.push_back(at(i).integer());
    return v;
  }

 private:
  void object() const {
    if (!j_.is_object()) fail("expected an object");
  }
  void array() const {
    if (!j_.is_array()) fail("expected an array");
  }
  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
};

json flags_json(const StructureFlags& f) {
  return {{"monotone", f.monotone},
          {"submodular", f.submodular},
          {"nonnegative", f.nonnegative},
          {"xos", f.xos}};
}

StructureFlags flags_from(const Node& n) {
  n.only({"monotone", "submodular", "nonnegative", "xos"});
  StructureFlags f;
  if (n.has("monotone")) f.monotone = n.at("monotone").boolean();
  if (n.has("submodular")) f.submodular = n.at("submodular").boolean();
  if (n.has("nonnegative")) f.nonnegative = n.at("nonnegative").boolean();
  if (n.has("xos")) f.xos = n.at("xos").boolean();
  return f;
}

std::string num_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

json to_json(const FamilySpec& s) {
  const FamilyParams& p = s.params;
  const FamilyParams d;
  json params = json::object();
  if (!p.weights.empty()) params["weights"] = p.weights;
  if (!p.sets.empty()) params["sets"] = p.sets;
  if (!p.item_weights.empty()) params["item_weights"] = p.item_weights;
  if (!p.edges.empty()) {
    json e = json::array();
    for (const Edge& x : p.edges) e.push_back({{"u", x.u}, {"v", x.v}, {"w", x.w}});
    params["edges"] = e;
  }
  if (!p.blocks.empty()) params["blocks"] = p.blocks;
  if (!p.capacities.empty()) params["capacities"] = p.capacities;
  if (!p.clauses.empty()) params["clauses"] = p.clauses;
  if (!p.table.empty()) params["table"] = p.table;
  if (p.budget != d.budget) params["budget"] = p.budget;
  if (p.scale != d.scale) params["scale"] = p.scale;
  if (p.a) params["a"] = p.a;
  if (p.b) params["b"] = p.b;
  if (p.k) params["k"] = p.k;
  if (p.range) params["range"] = {{"lo", p.range->lo}, {"hi", p.range->hi}};
  if (p.claims != d.claims) params["claims"] = flags_json(p.claims);
  return {{"family", family_name(s.family)}, {"n", s.n}, {"params", params}};
}

FamilySpec family_spec_from_json(const json& j) {
  Node root(j, "");
  root.only({"family", "n", "params"});
  FamilySpec s;
  const Node fam = root.at("family");
  try {
    s.family = family_from_name(fam.str());
  } catch (const SchemaError&) {
    throw;
  } catch (const JuntaError& e) {
    fam.fail(e.what());
  }
  s.n = root.at("n").integer();
  if (s.n < 0 || s.n > kMaxDim) root.at("n").fail("must lie in [0,63]");
  if (!root.has("params")) return s;
  const Node p = root.at("params");
  p.only({"weights", "sets", "item_weights", "edges", "blocks", "capacities",
          "clauses", "table", "budget", "scale", "a", "b", "k", "range",
          "claims"});
  FamilyParams& q = s.params;
  if (p.has("weights")) q.weights = p.at("weights").nums();
  if (p.has("sets")) {
    Node v = p.at("sets");
    for (size_t i = 0; i < v.size(); ++i) q.sets.push_back(v.at(i).ints());
  }
  if (p.has("item_weights")) q.item_weights = p.at("item_weights").nums();
  if (p.has("edges")) {
    Node v = p.at("edges");
    for (size_t i = 0; i < v.size(); ++i) {
      Node e = v.at(i);
      e.only({"u", "v", "w"});
      Edge x{e.at("u").integer(), e.at("v").integer(), 1.0};
      if (e.has("w")) x.w = e.at("w").num();
      q.edges.push_back(x);
    }
  }
  if (p.has("blocks")) {
    Node v = p.at("blocks");
    for (size_t i = 0; i < v.size(); ++i) q.blocks.push_back(v.at(i).ints());
  }
  if (p.has("capacities")) q.capacities = p.at("capacities").ints();
  if (p.has("clauses")) {
    Node v = p.at("clauses");
    for (size_t i = 0; i < v.size(); ++i) q.clauses.push_back(v.at(i).nums());
  }
  if (p.has("table")) q.table = p.at("table").nums();
  if (p.has("budget")) q.budget = p.at("budget").num();
  if (p.has("scale")) q.scale = p.at("scale").num();
  if (p.has("a")) q.a = p.at("a").integer();
  if (p.has("b")) q.b = p.at("b").integer();
  if (p.has("k")) q.k = p.at("k").integer();
  if (p.has("range")) {
    Node r = p.at("range");
    r.only({"lo", "hi"});
    q.range = Range{r.at("lo").num(), r.at("hi").num()};
    if (q.range->lo > q.range->hi) r.fail("lo exceeds hi");
  }
  if (p.has("claims")) q.claims = flags_from(p.at("claims"));
  return s;
}

// ---------------------------------------------------------------------------

json to_json(const FourierTable& t) {
  return {{"n", t.n}, {"coeffs", t.coeffs}};
}

FourierTable fourier_from_json(const json& j) {
  Node root(j, "");
  root.only({"n", "coeffs"});
  FourierTable t;
  t.n = root.at("n").integer();
  if (t.n < 0 || t.n > kMaxFourierDim) root.at("n").fail("must lie in [0,24]");
  t.coeffs = root.at("coeffs").nums();
  if (t.coeffs.size() != (size_t{1} << t.n))
    root.at("coeffs").fail("expected 2^n entries");
  return t;
}

json to_json(const JuntaModel& m) {
  return {{"n", m.n},
          {"vars", m.vars},
          {"table", m.table},
          {"scale", m.scale},
          {"provenance", m.provenance}};
}

JuntaModel junta_model_from_json(const json& j) {
  Node root(j, "");
  root.only({"n", "vars", "table", "scale", "provenance"});
  JuntaModel m;
  m.n = root.at("n").integer();
  if (m.n < 0 || m.n > kMaxDim) root.at("n").fail("must lie in [0,63]");
  m.vars = root.at("vars").ints();
  for (size_t i = 0; i < m.vars.size(); ++i)
    if (m.vars[i] < 0 || m.vars[i] >= m.n ||
        (i && m.vars[i] <= m.vars[i - 1]))
      root.at("vars").at(i).fail("variables must be increasing and in [0,n)");
  if (m.vars.size() > 30) root.at("vars").fail("too many variables");
  m.table = root.at("table").nums();
  if (m.table.size() != (size_t{1} << m.vars.size()))
    root.at("table").fail("expected 2^|vars| entries");
  if (root.has("scale")) m.scale = root.at("scale").num();
  if (root.has("provenance")) m.provenance = root.at("provenance").raw();
  return m;
}

json to_json(const PolynomialModel& m) {
  json terms = json::array();
  for (const auto& [s, c] : m.terms) terms.push_back({{"mask", s}, {"coef", c}});
  return {{"n", m.n}, {"support", m.support}, {"degree", m.degree},
          {"terms", terms}};
}

PolynomialModel polynomial_from_json(const json& j) {
  Node root(j, "");
  root.only({"n", "support", "degree", "terms"});
  PolynomialModel m;
  m.n = root.has("n") ? root.at("n").integer() : 0;
  if (root.has("support")) m.support = root.at("support").ints();
  if (root.has("degree")) m.degree = root.at("degree").integer();
  Node t = root.at("terms");
  for (size_t i = 0; i < t.size(); ++i) {
    Node e = t.at(i);
    e.only({"mask", "coef"});
    Mask s = e.at("mask").mask();
    if (m.n < 64 && (s & ~full_mask(m.n))) e.at("mask").fail("outside the cube");
    if (m.terms.count(s)) e.at("mask").fail("duplicate term");
    m.terms[s] = e.at("coef").num();
  }
  return m;
}

namespace {

json node_json(const PmacNode& n) {
  json j = {{"kind", n.kind == PmacNode::Kind::kLeaf ? "leaf" : "internal"},
            {"mu", n.mu}};
  if (n.kind == PmacNode::Kind::kLeaf) {
    j["value"] = n.value;
    j["reason"] = n.reason;
  } else {
    j["vars"] = n.vars;
    json c = json::array();
    for (const auto& ch : n.children) c.push_back(node_json(ch));
    j["children"] = c;
  }
  return j;
}

PmacNode node_from(const Node& j, int n) {
  j.only({"kind", "mu", "value", "reason", "vars", "children"});
  PmacNode node;
  const std::string kind = j.at("kind").str();
  if (j.has("mu")) node.mu = j.at("mu").num();
  if (kind == "leaf") {
    node.kind = PmacNode::Kind::kLeaf;
    node.value = j.at("value").num();
    if (j.has("reason")) node.reason = j.at("reason").str();
  } else if (kind == "internal") {
    node.kind = PmacNode::Kind::kInternal;
    node.vars = j.at("vars").ints();
    for (size_t i = 0; i < node.vars.size(); ++i)
      if (node.vars[i] < 0 || node.vars[i] >= n ||
          (i && node.vars[i] <= node.vars[i - 1]))
        j.at("vars").at(i).fail("variables must be increasing and in [0,n)");
    Node ch = j.at("children");
    if (ch.size() != (size_t{1} << node.vars.size()))
      ch.fail("expected 2^|vars| children");
    const int sub = n - static_cast<int>(node.vars.size());
    for (size_t i = 0; i < ch.size(); ++i)
      node.children.push_back(node_from(ch.at(i), sub));
  } else {
    j.at("kind").fail("expected \"leaf\" or \"internal\"");
  }
  return node;
}

}  // namespace

json to_json(const PmacTree& t) {
  return {{"n", t.n},
          {"gamma", t.gamma},
          {"eps", t.eps},
          {"depth_cap", t.depth_cap},
          {"depth", t.depth},
          {"node_count", t.node_count},
          {"learner_calls", t.learner_calls},
          {"budget_exhausted", t.budget_exhausted},
          {"xos", t.xos},
          {"root", node_json(t.root)}};
}

PmacTree pmac_tree_from_json(const json& j) {
  Node root(j, "");
  root.only({"n", "gamma", "eps", "depth_cap", "depth", "node_count",
             "learner_calls", "budget_exhausted", "xos", "root"});
  PmacTree t;
  t.n = root.at("n").integer();
  if (t.n < 0 || t.n > kMaxDim) root.at("n").fail("must lie in [0,63]");
  if (root.has("gamma")) t.gamma = root.at("gamma").num();
  if (root.has("eps")) t.eps = root.at("eps").num();
  if (root.has("depth_cap")) t.depth_cap = root.at("depth_cap").integer();
  if (root.has("depth")) t.depth = root.at("depth").integer();
  if (root.has("node_count")) t.node_count = root.at("node_count").integer();
  if (root.has("learner_calls"))
    t.learner_calls = root.at("learner_calls").integer();
  if (root.has("budget_exhausted"))
    t.budget_exhausted = root.at("budget_exhausted").boolean();
  if (root.has("xos")) t.xos = root.at("xos").boolean();
  t.root = node_from(root.at("root"), t.n);
  return t;
}

json to_json(const DetectionResult& d) {
  return {{"I", d.I},
          {"n", d.n},
          {"s", d.s},
          {"eps", d.eps},
          {"accuracy", d.accuracy},
          {"deg1_threshold", d.deg1_threshold},
          {"deg2_threshold", d.deg2_threshold},
          {"deg1_inner", d.deg1_inner},
          {"deg2_inner", d.deg2_inner},
          {"deg1_outer", d.deg1_outer},
          {"deg2_outer", d.deg2_outer},
          {"size_bound", d.size_bound},
          {"deg1", d.deg1},
          {"deg2", d.deg2},
          {"samples_used", d.samples_used},
          {"exhaustive", d.exhaustive},
          {"unate", d.unate}};
}

DetectionResult detection_from_json(const json& j) {
  Node root(j, "");
  root.only({"I", "n", "s", "eps", "accuracy", "deg1_threshold",
             "deg2_threshold", "deg1_inner", "deg2_inner", "deg1_outer",
             "deg2_outer", "size_bound", "deg1", "deg2", "samples_used",
             "exhaustive", "unate"});
  DetectionResult d;
  d.I = root.at("I").ints();
  d.n = root.at("n").integer();
  auto opt = [&](const char* k, double& v) {
    if (root.has(k)) v = root.at(k).num();
  };
  opt("s", d.s);
  opt("eps", d.eps);
  opt("accuracy", d.accuracy);
  opt("deg1_threshold", d.deg1_threshold);
  opt("deg2_threshold", d.deg2_threshold);
  opt("deg1_inner", d.deg1_inner);
  opt("deg2_inner", d.deg2_inner);
  opt("deg1_outer", d.deg1_outer);
  opt("deg2_outer", d.deg2_outer);
  opt("size_bound", d.size_bound);
  if (root.has("deg1")) d.deg1 = root.at("deg1").nums();
  if (root.has("deg2")) d.deg2 = root.at("deg2").nums();
  if (root.has("samples_used"))
    d.samples_used = root.at("samples_used").mask();
  if (root.has("exhaustive")) d.exhaustive = root.at("exhaustive").boolean();
  if (root.has("unate")) d.unate = root.at("unate").boolean();
  return d;
}

// ---------------------------------------------------------------------------

std::string samples_to_csv(const SampleSet& s) {
  std::string out = "mask,label\n";
  for (const auto& x : s.samples)
    out += std::to_string(x.x) + "," + num_text(x.label) + "\n";
  return out;
}

SampleSet samples_from_csv(const std::string& text, int n,
                           SampleSource source) {
  check_dim(n, kMaxDim, "samples_from_csv");
  SampleSet s;
  s.n = n;
  s.source = source;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("mask,label", 0) != 0)
    throw SchemaError("row 0", "expected header 'mask,label'");
  size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "row " + std::to_string(row);
    auto comma = line.find(',');
    if (comma == std::string::npos) throw SchemaError(where, "expected 2 columns");
    Sample x;
    try {
      size_t used = 0;
      x.x = std::stoull(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("mask");
    } catch (const std::exception&) {
      throw SchemaError(where + ".mask", "expected a nonnegative integer");
    }
    if (x.x & ~full_mask(n)) throw SchemaError(where + ".mask", "outside the cube");
    try {
      const std::string lab = line.substr(comma + 1);
      size_t used = 0;
      x.label = std::stod(lab, &used);
      if (used != lab.size() || !std::isfinite(x.label))
        throw std::invalid_argument("label");
    } catch (const std::exception&) {
      throw SchemaError(where + ".label", "expected a finite number");
    }
    s.samples.push_back(x);
  }
  return s;
}

std::string report_to_csv(const CheckReport& r) {
  std::string out = "check,instance,n,slack,violations,runtime_ms\n";
  for (const auto& row : r.rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", row.runtime_ms);
    out += row.check + "," + row.instance + "," + std::to_string(row.n) + "," +
           num_text(row.slack) + "," + std::to_string(row.violations.size()) +
           "," + buf + "\n";
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw JuntaError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw JuntaError("cannot write '" + path + "'");
  out << content;
  if (!out) throw JuntaError("write failed for '" + path + "'");
}

}  // namespace juntalab
