#include "config.hpp"

#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "sparsetail/error.hpp"
#include "sparsetail/io.hpp"

namespace sparsetail::cli {

namespace {

class Reader {
 public:
  explicit Reader(RunConfig& config) : config_(config) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& msg,
                         Errc code = Errc::Config) const {
    const YAML::Mark m = node.Mark();
    throw Error(code, config_.source + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1) +
                          ": field '" + field + "': " + msg);
  }

  void note(const YAML::Node& node, const std::string& field) {
    const YAML::Mark m = node.Mark();
    config_.locations[field] = {m.line + 1, m.column + 1};
  }

  YAML::Node map(const YAML::Node& parent, const std::string& key, const std::string& path,
                 const std::set<std::string>& allowed, bool required) {
    const YAML::Node node = parent[key];
    if (!node) {
      if (required) fail(parent, path, "missing section");
      return node;
    }
    note(node, path);
    if (!node.IsMap()) fail(node, path, "must be a mapping");
    for (const auto& kv : node) {
      const std::string k = kv.first.as<std::string>();
      if (!allowed.count(k)) fail(kv.first, path + "." + k, "unknown field");
    }
    return node;
  }

  YAML::Node get(const YAML::Node& parent, const std::string& key, const std::string& path, bool required) {
    const YAML::Node node = parent[key];
    if (!node && required) fail(parent, path, "missing field");
    if (node) note(node, path);
    return node;
  }

  std::int64_t integer(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) fail(node, path, "must be an integer");
    try {
      return node.as<std::int64_t>();
    } catch (const YAML::Exception&) {
      fail(node, path, "must be an integer, got '" + node.Scalar() + "'");
    }
  }

  Rational rational(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) fail(node, path, "must be an exact fraction \"p/q\"");
    try {
      return parseRational(node.Scalar());
    } catch (const Error& e) {
      fail(node, path, "must be an exact fraction \"p/q\", got '" + node.Scalar() + "'");
    }
  }

  bool boolean(const YAML::Node& node, const std::string& path) {
    try {
      return node.as<bool>();
    } catch (const YAML::Exception&) {
      fail(node, path, "must be true or false");
    }
  }

  Word word(const YAML::Node& node, const std::string& path, int alphabet) {
    if (!node.IsScalar()) fail(node, path, "must be a word");
    try {
      return parseWord(node.Scalar(), alphabet);
    } catch (const Error& e) {
      fail(node, path, e.what());
    }
  }

 private:
  RunConfig& config_;
};

template <class F>
auto located(const RunConfig& config, const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    auto it = config.locations.find(field);
    std::string where = config.source;
    if (it != config.locations.end()) {
      where += ":" + std::to_string(it->second.line) + ":" + std::to_string(it->second.column);
    }
    std::string msg = e.what();
    const std::string prefix = std::string(errcName(e.code())) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw Error(e.code(), where + ": field '" + field + "': " + msg);
  }
}

}  // namespace

RunConfig parseConfig(std::string_view text, std::string source) {
  RunConfig config;
  config.source = std::move(source);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw Error(Errc::Config, config.source + ":" + std::to_string(e.mark.line + 1) + ":" +
                                  std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  Reader r(config);
  if (!root.IsMap()) r.fail(root, "<root>", "document must be a mapping");
  const std::set<std::string> top{"sft", "potential", "target", "scale", "depth", "control", "output", "verify"};
  for (const auto& kv : root) {
    const std::string k = kv.first.as<std::string>();
    if (!top.count(k)) r.fail(kv.first, k, "unknown field");
  }

  const YAML::Node sft = r.map(root, "sft", "sft", {"alphabet", "forbidden", "matrix"}, true);
  config.alphabet = static_cast<int>(r.integer(r.get(sft, "alphabet", "sft.alphabet", true), "sft.alphabet"));
  if (config.alphabet < 2 || config.alphabet > 255) {
    r.fail(sft["alphabet"], "sft.alphabet", "alphabet size must be in [2, 255]");
  }
  if (const YAML::Node f = r.get(sft, "forbidden", "sft.forbidden", false)) {
    if (!f.IsSequence()) r.fail(f, "sft.forbidden", "must be a list of 2-words");
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string path = "sft.forbidden[" + std::to_string(i) + "]";
      Word w = r.word(f[i], path, config.alphabet);
      if (w.size() != 2) r.fail(f[i], path, "forbidden words must have length 2");
      config.forbidden.push_back(std::move(w));
    }
  }
  if (const YAML::Node m = r.get(sft, "matrix", "sft.matrix", false)) {
    if (!config.forbidden.empty()) r.fail(m, "sft.matrix", "give either 'forbidden' or 'matrix', not both");
    if (!m.IsSequence() || static_cast<int>(m.size()) != config.alphabet) {
      r.fail(m, "sft.matrix", "must be an A x A list of 0/1 rows");
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      const YAML::Node row = m[i];
      const std::string path = "sft.matrix[" + std::to_string(i) + "]";
      if (!row.IsSequence() || static_cast<int>(row.size()) != config.alphabet) r.fail(row, path, "row must have A entries");
      std::vector<int> out;
      for (std::size_t j = 0; j < row.size(); ++j) {
        const std::int64_t v = r.integer(row[j], path);
        if (v != 0 && v != 1) r.fail(row[j], path, "entries must be 0 or 1");
        out.push_back(static_cast<int>(v));
      }
      config.matrix.push_back(std::move(out));
    }
  }

  const YAML::Node pot = r.map(root, "potential", "potential", {"depth", "values", "default"}, true);
  if (const YAML::Node d = r.get(pot, "depth", "potential.depth", false)) {
    config.potentialDepth = static_cast<int>(r.integer(d, "potential.depth"));
    if (config.potentialDepth < 1 || config.potentialDepth > 16) r.fail(d, "potential.depth", "must be in [1, 16]");
  }
  const YAML::Node values = r.get(pot, "values", "potential.values", true);
  if (!values.IsMap()) r.fail(values, "potential.values", "must map words to fractions");
  for (const auto& kv : values) {
    const std::string key = kv.first.as<std::string>();
    const std::string path = "potential.values." + key;
    Word w = r.word(kv.first, path, config.alphabet);
    if (static_cast<int>(w.size()) != config.potentialDepth) r.fail(kv.first, path, "word length must equal potential.depth");
    if (config.potential.count(w)) r.fail(kv.first, path, "duplicate word");
    config.potential.emplace(std::move(w), r.rational(kv.second, path));
  }
  if (const YAML::Node d = r.get(pot, "default", "potential.default", false)) {
    config.potentialDefault = r.rational(d, "potential.default");
  }

  config.target = r.rational(r.get(root, "target", "target", true), "target");

  const YAML::Node scale = r.map(root, "scale", "scale", {"t0", "factors"}, true);
  config.t0 = r.integer(r.get(scale, "t0", "scale.t0", true), "scale.t0");
  if (const YAML::Node f = r.get(scale, "factors", "scale.factors", false)) {
    if (f.IsScalar() && f.Scalar() == "auto") {
      config.factors.reset();
    } else if (f.IsSequence()) {
      std::vector<std::int64_t> fs;
      for (std::size_t i = 0; i < f.size(); ++i) fs.push_back(r.integer(f[i], "scale.factors"));
      config.factors = std::move(fs);
    } else {
      r.fail(f, "scale.factors", "must be 'auto' or a list of integers");
    }
  }

  const YAML::Node depth = r.get(root, "depth", "depth", true);
  config.depth = static_cast<int>(r.integer(depth, "depth"));
  if (config.depth < 0 || config.depth > 12) r.fail(depth, "depth", "must be in [0, 12]");

  const YAML::Node control = r.map(root, "control", "control", {"alpha0", "decay", "beta_fraction", "density"}, true);
  config.alpha0 = r.rational(r.get(control, "alpha0", "control.alpha0", true), "control.alpha0");
  if (const YAML::Node n = r.get(control, "decay", "control.decay", false)) config.decay = r.rational(n, "control.decay");
  if (const YAML::Node n = r.get(control, "beta_fraction", "control.beta_fraction", false)) {
    config.betaFraction = r.rational(n, "control.beta_fraction");
  }
  if (const YAML::Node n = r.get(control, "density", "control.density", false)) {
    if (!n.IsSequence()) r.fail(n, "control.density", "must be a list of integers");
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::int64_t m = r.integer(n[i], "control.density");
      if (m < 0 || m > 16) r.fail(n[i], "control.density", "entries must be in [0, 16]");
      config.density.push_back(static_cast<int>(m));
    }
  }

  if (const YAML::Node out = r.map(root, "output", "output", {"dir"}, false)) {
    if (const YAML::Node d = r.get(out, "dir", "output.dir", false)) config.output = d.as<std::string>();
  }
  if (const YAML::Node v = r.map(root, "verify", "verify", {"exhaustive", "claims", "coverage_order", "checkpoints_per_level"}, false)) {
    if (const YAML::Node n = r.get(v, "exhaustive", "verify.exhaustive", false)) config.exhaustive = r.boolean(n, "verify.exhaustive");
    if (const YAML::Node n = r.get(v, "claims", "verify.claims", false)) config.claims = r.boolean(n, "verify.claims");
    if (const YAML::Node n = r.get(v, "coverage_order", "verify.coverage_order", false)) {
      config.coverageOrder = static_cast<int>(r.integer(n, "verify.coverage_order"));
      if (config.coverageOrder < 1 || config.coverageOrder > 16) r.fail(n, "verify.coverage_order", "must be in [1, 16]");
    }
    if (const YAML::Node n = r.get(v, "checkpoints_per_level", "verify.checkpoints_per_level", false)) {
      config.checkpointsPerLevel = static_cast<int>(r.integer(n, "verify.checkpoints_per_level"));
      if (config.checkpointsPerLevel < 0) r.fail(n, "verify.checkpoints_per_level", "must be nonnegative");
    }
  }
  return config;
}

RunConfig loadConfig(const std::filesystem::path& path) { return parseConfig(readText(path), path.string()); }

std::string formatConfig(const RunConfig& config) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "sft" << YAML::Value << YAML::BeginMap << YAML::Key << "alphabet" << YAML::Value << config.alphabet;
  if (!config.forbidden.empty()) {
    out << YAML::Key << "forbidden" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const Word& w : config.forbidden) out << YAML::DoubleQuoted << formatWord(w, config.alphabet);
    out << YAML::EndSeq;
  }
  if (!config.matrix.empty()) {
    out << YAML::Key << "matrix" << YAML::Value << YAML::BeginSeq;
    for (const auto& row : config.matrix) out << YAML::Flow << row;
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  out << YAML::Key << "potential" << YAML::Value << YAML::BeginMap << YAML::Key << "depth" << YAML::Value
      << config.potentialDepth << YAML::Key << "values" << YAML::Value << YAML::BeginMap;
  for (const auto& [w, v] : config.potential) {
    out << YAML::Key << YAML::DoubleQuoted << formatWord(w, config.alphabet) << YAML::Value << YAML::DoubleQuoted
        << formatRational(v);
  }
  out << YAML::EndMap;
  if (config.potentialDefault) {
    out << YAML::Key << "default" << YAML::Value << YAML::DoubleQuoted << formatRational(*config.potentialDefault);
  }
  out << YAML::EndMap;
  out << YAML::Key << "target" << YAML::Value << YAML::DoubleQuoted << formatRational(config.target);
  out << YAML::Key << "scale" << YAML::Value << YAML::BeginMap << YAML::Key << "t0" << YAML::Value << config.t0
      << YAML::Key << "factors" << YAML::Value;
  if (config.factors) {
    out << YAML::Flow << *config.factors;
  } else {
    out << "auto";
  }
  out << YAML::EndMap;
  out << YAML::Key << "depth" << YAML::Value << config.depth;
  out << YAML::Key << "control" << YAML::Value << YAML::BeginMap << YAML::Key << "alpha0" << YAML::Value
      << YAML::DoubleQuoted << formatRational(config.alpha0) << YAML::Key << "decay" << YAML::Value << YAML::DoubleQuoted
      << formatRational(config.decay) << YAML::Key << "beta_fraction" << YAML::Value << YAML::DoubleQuoted
      << formatRational(config.betaFraction) << YAML::Key << "density" << YAML::Value << YAML::Flow << config.density
      << YAML::EndMap;
  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap << YAML::Key << "dir" << YAML::Value
      << config.output.string() << YAML::EndMap;
  out << YAML::Key << "verify" << YAML::Value << YAML::BeginMap << YAML::Key << "exhaustive" << YAML::Value
      << config.exhaustive << YAML::Key << "claims" << YAML::Value << config.claims << YAML::Key << "coverage_order"
      << YAML::Value << config.coverageOrder << YAML::Key << "checkpoints_per_level" << YAML::Value
      << config.checkpointsPerLevel << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

RunConfig demoConfig() {
  RunConfig config;
  config.source = "<demo>";
  config.alphabet = 2;
  config.potentialDepth = 1;
  config.potential = {{Word{0}, Rational(1)}, {Word{1}, Rational(-1)}};
  config.target = 0;
  config.t0 = 6;
  config.depth = 3;
  config.alpha0 = Rational(4, 3);
  config.decay = Rational(6, 25);
  config.betaFraction = Rational(1, 3);
  config.density = {1, 2, 3, 3};
  config.output = "demo-out";
  return config;
}

Model resolve(const RunConfig& config) {
  Model model;
  model.sft = located(config, config.matrix.empty() ? "sft.forbidden" : "sft.matrix", [&] {
    if (config.matrix.empty()) return buildSftForbidden(config.alphabet, config.forbidden);
    std::vector<std::vector<bool>> m;
    for (const auto& row : config.matrix) m.emplace_back(row.begin(), row.end());
    return buildSft(config.alphabet, m);
  });
  model.potential = located(config, "potential.values", [&] {
    return Potential(model.sft, config.potentialDepth, config.potential, config.potentialDefault);
  });
  std::tie(model.rangeLo, model.rangeHi) = averageRange(model.sft, model.potential);
  located(config, "target", [&] {
    if (!(model.rangeLo < config.target && config.target < model.rangeHi)) {
      throw Error(Errc::TargetOutOfRange, "target " + formatRational(config.target) + " is not inside the average range (" +
                                              formatRational(model.rangeLo) + ", " + formatRational(model.rangeHi) + ")");
    }
    return 0;
  });
  model.params = located(config, "control", [&] {
    ControlParams p = geometricParams(config.depth, config.alpha0, config.decay, config.betaFraction, config.density,
                                      config.target);
    validateParams(p);
    return p;
  });
  located(config, "scale.t0", [&] { return buildScale(config.t0, {}); });
  if (config.factors) {
    model.scale = located(config, "scale.factors", [&] {
      Scale s = buildScale(config.t0, *config.factors);
      if (s.depth() < config.depth) {
        throw Error(Errc::InvalidParams, "scale lists " + std::to_string(s.depth()) + " factors but depth is " +
                                             std::to_string(config.depth));
      }
      return s.truncated(config.depth);
    });
  } else {
    model.scale = located(config, "scale.factors", [&] {
      std::vector<std::int64_t> sojourns;
      for (int n = 0; n < config.depth; ++n) {
        const int m = model.params.densityDepth[static_cast<std::size_t>(n)];
        sojourns.push_back(m == 0 ? 0 : static_cast<std::int64_t>(universalWord(model.sft, m).size()));
      }
      const Rational phiRange = model.potential.shifted(config.target).maxAbs();
      return buildScale(config.t0, minimalFactors(model.params, phiRange, sojourns, config.t0));
    });
  }
  return model;
}

}  // namespace sparsetail::cli
