#include "commands.hpp"

#include <fstream>
#include <ostream>
#include <set>

#include "sparsetail/analyze.hpp"
#include "sparsetail/error.hpp"
#include "sparsetail/io.hpp"
#include "sparsetail/pattern.hpp"
#include "sparsetail/synth.hpp"
#include "sparsetail/tail.hpp"

namespace sparsetail::cli {

namespace fs = std::filesystem;

namespace {

struct Run {
  RunConfig config;
  Model model;
  fs::path dir;
  std::ostream& out;
};

fs::path cacheDir(const Run& r) {
  fs::path d = r.dir / "cache";
  fs::create_directories(d);
  return d;
}

SparseTail cachedTail(const Run& r) {
  const Scale& scale = r.model.scale;
  const std::string key = scaleToJson(scale).dump() + "|" + std::to_string(r.config.depth);
  const fs::path path = cacheDir(r) / ("tail-" + hexDigest(fnv1a(key)) + ".json");
  if (fs::exists(path)) {
    try {
      SparseTail tail = tailFromJson(Json::parse(readText(path)));
      if (tail.scale() == scale && tail.depth() == r.config.depth) return tail;
    } catch (const std::exception&) {
    }
  }
  SparseTail tail = buildTail(scale, r.config.depth);
  writeText(path, tailToJson(tail).dump() + "\n");
  return tail;
}

bool isUniversal(const Sft& sft, const Word& w, int m) {
  if (static_cast<int>(w.size()) < m || !sft.isLegal(w)) return false;
  const EmpiricalMeasure measure = empiricalMeasure(w, sft.alphabetSize(), static_cast<std::int64_t>(w.size()) - m + 1, m);
  return coverage(measure, sft) == 1;
}

std::map<int, Word> cachedUniversals(const Run& r) {
  std::map<int, Word> words;
  const Sft& sft = r.model.sft;
  std::string matrix(sft.matrix().begin(), sft.matrix().end());
  for (char& c : matrix) c = static_cast<char>('0' + c);
  for (int n = 0; n < r.config.depth; ++n) {
    const int m = r.model.params.densityDepth[static_cast<std::size_t>(n)];
    if (m == 0 || words.count(m)) continue;
    const std::string key = std::to_string(sft.alphabetSize()) + "|" + matrix + "|" + std::to_string(m);
    const fs::path path = cacheDir(r) / ("universal-" + hexDigest(fnv1a(key)) + ".txt");
    if (fs::exists(path)) {
      try {
        std::string text = readText(path);
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
        Word w = parseWord(text, sft.alphabetSize());
        if (isUniversal(sft, w, m)) {
          words.emplace(m, std::move(w));
          continue;
        }
      } catch (const Error&) {
      }
    }
    Word w = universalWord(sft, m);
    writeText(path, formatWord(w, sft.alphabetSize()) + "\n");
    words.emplace(m, std::move(w));
  }
  return words;
}

Json rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const Rational& x : v) a.push_back(formatRational(x));
  return a;
}

int cmdScale(Run& r) {
  const ControllingSequence cs = controllingSequence(r.model.scale);
  const ControlParams& p = r.model.params;
  Json doc{{"scale", scaleToJson(r.model.scale)},
           {"depth", r.config.depth},
           {"controlling_sequence",
            {{"eps", rationals(cs.eps)},
             {"partial_sum", formatRational(cs.partialSum)},
             {"partial_product", formatRational(cs.partialProduct)}}},
           {"params",
            {{"alpha", rationals(p.alpha)},
             {"beta", rationals(p.beta)},
             {"density", p.densityDepth},
             {"target", formatRational(p.target)}}},
           {"average_range", {formatRational(r.model.rangeLo), formatRational(r.model.rangeHi)}}};
  writeJson(r.dir / "scale.json", doc);
  r.out << doc.dump(1) << "\n";
  return Clean;
}

int cmdTail(Run& r) {
  const SparseTail tail = cachedTail(r);
  TailValidationOptions opts;
  opts.exhaustive = r.config.exhaustive;
  opts.sampleStride = r.config.exhaustive ? 1 : 97;
  const std::vector<TailViolation> violations = validateTail(tail, opts);
  Json list = Json::array();
  for (const TailViolation& v : violations) {
    list.push_back({{"kind", violationKindName(v.kind)},
                    {"level", v.level},
                    {"first", v.first},
                    {"last", v.last},
                    {"detail", v.detail}});
  }
  writeText(r.dir / "tail.json", tailToJson(tail).dump() + "\n");
  writeJson(r.dir / "tail_report.json",
            Json{{"mode", r.config.exhaustive ? "exhaustive" : "sampled"}, {"violations", list}});
  r.out << "tail: horizon " << tail.horizon() << ", depth " << tail.depth() << "\n";
  for (int n = 0; n < tail.depth(); ++n) r.out << "  level " << n << ": " << tail.starts(n).size() << " components\n";
  r.out << "validation (" << (r.config.exhaustive ? "exhaustive" : "sampled") << "): " << violations.size()
        << " violations\n";
  for (std::size_t i = 0; i < violations.size() && i < 10; ++i) {
    r.out << "  " << violationKindName(violations[i].kind) << " level " << violations[i].level << " ["
          << violations[i].first << ", " << violations[i].last << "]: " << violations[i].detail << "\n";
  }
  return violations.empty() ? Clean : Violations;
}

int cmdPattern(Run& r) {
  const SparseTail tail = cachedTail(r);
  std::ofstream file(r.dir / "patterns.json", std::ios::binary);
  if (!file) throw Error(Errc::Config, "cannot write " + (r.dir / "patterns.json").string());
  file << "{\"patterns\": [\n";
  for (int n = 0; n <= tail.depth(); ++n) {
    const Pattern p = initialPattern(tail, n);
    if (n > 0) file << ",\n";
    writePattern(file, p);
    std::int64_t walks = 0;
    for (const Cell& c : p.cells()) walks += c.kind == CellKind::Walk;
    r.out << "pattern T_" << n << ": " << p.cells().size() << " cells, " << walks << " w\n";
  }
  file << "\n]}\n";
  return Clean;
}

SynthesisLedger synthStage(Run& r, const SparseTail& tail) {
  GeneratorOptions options;
  options.universals = cachedUniversals(r);
  SynthesisLedger ledger = synthesize(r.model.sft, r.model.potential, r.model.scale, tail, r.model.params, options);
  writeBytes(r.dir / "prefix.bin", ledger.prefix);
  std::ofstream file(r.dir / "ledger.json", std::ios::binary);
  if (!file) throw Error(Errc::Config, "cannot write " + (r.dir / "ledger.json").string());
  writeLedger(file, ledger);
  return ledger;
}

int cmdSynth(Run& r) {
  const SparseTail tail = cachedTail(r);
  const SynthesisLedger ledger = synthStage(r, tail);
  r.out << "synth: " << ledger.prefix.size() << " symbols (T_" << tail.depth() << " = " << ledger.horizon
        << " plus " << ledger.contextLength << " context), " << ledger.cells.size() << " cells, "
        << ledger.blocks.size() << " blocks\n";
  return Clean;
}

int cmdAnalyze(Run& r) {
  const SparseTail tail = cachedTail(r);
  const fs::path prefixPath = r.dir / "prefix.bin", ledgerPath = r.dir / "ledger.json";
  SynthesisLedger ledger;
  if (!fs::exists(prefixPath) || !fs::exists(ledgerPath)) {
    r.out << "analyze: no prefix in " << r.dir.string() << ", running synth first\n";
    ledger = synthStage(r, tail);
  } else {
    std::ifstream in(ledgerPath, std::ios::binary);
    ledger = readLedger(in, readBytes(prefixPath));
  }
  const Sft& sft = r.model.sft;
  const Potential& phi = r.model.potential;
  const ControlParams& params = r.model.params;
  const Word& prefix = ledger.prefix;
  const ControlReport report = verifyControl(sft, prefix, tail, params, phi, ledger);
  bool clean = report.clean();

  Json claims = Json::array();
  if (r.config.claims && report.stats.legalityViolations == 0) {
    const Scale& scale = tail.scale();
    for (int k = 0; k + 2 <= tail.depth(); ++k) {
      if (scale.length(k + 2) >= tail.horizon()) continue;
      const ClaimReport c = verifyDensityClaim(sft, prefix, tail, params, k, scale.length(k + 2));
      clean = clean && c.clean();
      Json j = claimToJson(c);
      j["k"] = k;
      claims.push_back(j);
    }
    for (int k = 0; k < tail.depth(); ++k) {
      const std::int64_t t = averageClaimWindow(tail, params, phi, k, k + 1);
      if (t > tail.horizon()) continue;
      const ClaimReport c = verifyAverageClaim(sft, prefix, tail, params, phi, k, k + 1, t);
      clean = clean && c.clean();
      Json j = claimToJson(c);
      j["k"] = k;
      j["m"] = k + 1;
      claims.push_back(j);
    }
  }
  const std::vector<ConsequenceCheck> consequences = finiteScaleConsequences(sft, prefix, tail, params, phi);
  for (const ConsequenceCheck& c : consequences) clean = clean && c.averageOk && c.densityOk;

  const int order = r.config.coverageOrder;
  const EmpiricalMeasure measure = empiricalMeasure(prefix, sft.alphabetSize(), tail.horizon(), order);
  const Rational cov = coverage(measure, sft);
  const auto series = checkpointSeries(sft, prefix, tail, phi, order, r.config.checkpointsPerLevel);

  Json doc{{"clean", clean},
           {"target", formatRational(params.target)},
           {"horizon", tail.horizon()},
           {"control", reportToJson(report, sft.alphabetSize())},
           {"claims", claims},
           {"finite_scale_consequences", consequencesToJson(consequences)},
           {"empirical_measure",
            {{"length", measure.length},
             {"order", order},
             {"support", measure.supportSize()},
             {"coverage", formatRational(cov)},
             {"average", formatRational(integratePotential(empiricalMeasure(prefix, sft.alphabetSize(), tail.horizon(),
                                                                            std::max(order, phi.depth())),
                                                           phi))}}}};
  writeJson(r.dir / "report.json", doc);
  writeText(r.dir / "series.csv", seriesCsv(series));

  const ControlStats& s = report.stats;
  r.out << "analyze: " << s.prefixLength << " symbols, " << s.intervalsChecked << " intervals, "
        << s.componentsChecked << " components, " << s.recordsChecked << " records\n"
        << "  violations: average " << s.averageViolations << ", density " << s.densityViolations << ", legality "
        << s.legalityViolations << ", ledger " << s.ledgerViolations << "\n"
        << "  final average of phi - t: " << formatRational(s.finalAverage) << "\n";
  for (const Json& c : claims) {
    r.out << "  " << c["claim"].get<std::string>() << " claim k=" << c["k"].get<int>() << " t=" << c["window"].get<std::int64_t>()
          << ": " << c["violations"].get<std::int64_t>() << " counterexamples\n";
  }
  r.out << "  finite-scale consequences: " << consequences.size() << " checks\n"
        << "  coverage of " << order << "-words: " << formatRational(cov) << "\n"
        << (clean ? "clean\n" : "VIOLATIONS\n");
  return clean ? Clean : Violations;
}

}  // namespace

int run(const std::string& command, const Options& options, std::ostream& out, std::ostream& err) {
  static const std::set<std::string> commands{"scale", "tail", "pattern", "synth", "analyze", "demo"};
  try {
    if (!commands.count(command)) throw Error(Errc::Config, "unknown subcommand '" + command + "'");
    RunConfig config;
    if (command == "demo") {
      config = options.config ? loadConfig(*options.config) : demoConfig();
    } else {
      if (!options.config) throw Error(Errc::Config, "subcommand '" + command + "' needs --config PATH");
      config = loadConfig(*options.config);
    }
    if (options.depth) {
      if (*options.depth < 0 || *options.depth > 12) throw Error(Errc::Config, "--depth must be in [0, 12]");
      config.depth = *options.depth;
    }
    if (options.out) config.output = *options.out;
    if (options.exhaustive) config.exhaustive = *options.exhaustive;

    Run r{config, resolve(config), config.output, out};
    fs::create_directories(r.dir);
    if (command == "scale") return cmdScale(r);
    if (command == "tail") return cmdTail(r);
    if (command == "pattern") return cmdPattern(r);
    if (command == "synth") return cmdSynth(r);
    if (command == "analyze") return cmdAnalyze(r);
    const int synth = cmdSynth(r);
    return synth == Clean ? cmdAnalyze(r) : synth;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return Failure;
}

}  // namespace sparsetail::cli
