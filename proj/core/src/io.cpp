#include "sparsetail/io.hpp"

#include <charconv>
#include <cstdio>
#include <limits>
#include <numeric>
#include <variant>
#include <fstream>
#include <ostream>
#include <iterator>
#include <sstream>

#include "sparsetail/error.hpp"

namespace sparsetail {

namespace {

template <class T>
T field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw Error(Errc::Format, std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::Format, std::string("field '") + key + "' has the wrong type");
  }
}

char kindChar(CellKind k) { return cellKindChar(k); }

CellKind kindFrom(const std::string& s) {
  if (s == "r") return CellKind::Rest;
  if (s == "w") return CellKind::Walk;
  throw Error(Errc::Format, "cell kind must be \"r\" or \"w\", got \"" + s + "\"");
}

Sign signFrom(const std::string& s) {
  if (s == "+") return Sign::Plus;
  if (s == "-") return Sign::Minus;
  throw Error(Errc::Format, "sign must be \"+\" or \"-\", got \"" + s + "\"");
}


}  // namespace

Json scaleToJson(const Scale& scale) {
  return Json{{"t0", scale.t0}, {"factors", scale.factors}, {"lengths", scale.lengths}};
}

Scale scaleFromJson(const Json& doc) {
  return buildScale(field<std::int64_t>(doc, "t0"), field<std::vector<std::int64_t>>(doc, "factors"));
}

Json tailToJson(const SparseTail& tail) {
  Json starts = Json::array();
  for (int n = 0; n < tail.depth(); ++n) starts.push_back(tail.starts(n));
  return Json{{"scale", scaleToJson(tail.scale())}, {"depth", tail.depth()}, {"starts", starts}};
}

SparseTail tailFromJson(const Json& doc) {
  if (!doc.is_object() || !doc.contains("scale")) throw Error(Errc::Format, "missing field 'scale'");
  const Scale scale = scaleFromJson(doc.at("scale"));
  const int depth = field<int>(doc, "depth");
  auto starts = field<std::vector<std::vector<std::int64_t>>>(doc, "starts");
  if (depth < 0 || depth > scale.depth() || static_cast<int>(starts.size()) != depth) {
    throw Error(Errc::Format, "tail depth does not match its scale or start lists");
  }
  return SparseTail(scale.truncated(depth), depth, std::move(starts));
}

Json patternToJson(const Pattern& pattern) {
  Json cells = Json::array();
  for (const Cell& c : pattern.cells()) {
    cells.push_back(Json::array({c.start - pattern.baseStart(), c.level, std::string(1, kindChar(c.kind))}));
  }
  return Json{{"lengths", pattern.lengths()}, {"base", pattern.baseStart()}, {"cells", cells}};
}

Pattern patternFromJson(const Json& doc) {
  const auto lengths = field<std::vector<std::int64_t>>(doc, "lengths");
  const auto base = field<std::int64_t>(doc, "base");
  std::vector<Cell> cells;
  for (const Json& c : field<Json>(doc, "cells")) {
    if (!c.is_array() || c.size() != 3) throw Error(Errc::Format, "pattern cell must be [offset, level, kind]");
    try {
      cells.push_back({base + c[0].get<std::int64_t>(), c[1].get<int>(), kindFrom(c[2].get<std::string>())});
    } catch (const nlohmann::json::exception&) {
      throw Error(Errc::Format, "pattern cell has the wrong types");
    }
  }
  return Pattern(lengths, base, std::move(cells));
}

void writePattern(std::ostream& out, const Pattern& pattern) {
  out << "{\"lengths\": " << Json(pattern.lengths()).dump() << ", \"base\": " << pattern.baseStart() << ", \"cells\": [";
  const char* sep = "\n  ";
  for (const Cell& c : pattern.cells()) {
    out << sep << '[' << c.start - pattern.baseStart() << ',' << c.level << ",\"" << kindChar(c.kind) << "\"]";
    sep = ",\n  ";
  }
  out << "\n ]}";
}

namespace {

std::string averageText(std::int64_t sum, std::int64_t scale, std::int64_t length) {
  const __int128 den = static_cast<__int128>(scale) * length;
  if (den <= std::numeric_limits<std::int64_t>::max()) {
    const std::int64_t d = static_cast<std::int64_t>(den);
    const std::int64_t g = std::gcd(sum, d);
    return std::to_string(sum / g) + "/" + std::to_string(d / g);
  }
  return formatRational(Rational(BigInt(sum), BigInt(scale) * length));
}

std::int64_t sumFromAverage(const std::string& text, std::int64_t scale, std::int64_t length) {
  const auto slash = text.find('/');
  std::int64_t p = 0, q = 0;
  if (slash != std::string::npos) {
    const char* b = text.data();
    const char* e = b + text.size();
    const auto r1 = std::from_chars(b, b + slash, p);
    const auto r2 = std::from_chars(b + slash + 1, e, q);
    if (r1.ec == std::errc() && r1.ptr == b + slash && r2.ec == std::errc() && r2.ptr == e && q > 0) {
      const __int128 num = static_cast<__int128>(p) * scale * length;
      if (num % q != 0) throw Error(Errc::Format, "record average " + text + " is not a scaled integer sum");
      const __int128 v = num / q;
      if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw Error(Errc::Overflow, "record sum exceeds 64 bits");
      }
      return static_cast<std::int64_t>(v);
    }
  }
  const Rational s = parseRational(text) * scale * length;
  if (denominatorOf(s) != 1) throw Error(Errc::Format, "record average " + text + " is not a scaled integer sum");
  return toInt64(numeratorOf(s));
}

using Value = std::variant<std::int64_t, std::string>;

/// Builds a ledger from parse events without materializing the document.
class LedgerSax : public nlohmann::json_sax<Json> {
 public:
  explicit LedgerSax(SynthesisLedger& ledger) : ledger_(ledger) {}

  bool null() override { return fail("null"); }
  bool boolean(bool) override { return fail("boolean"); }
  bool number_integer(number_integer_t v) override { return value(static_cast<std::int64_t>(v)); }
  bool number_unsigned(number_unsigned_t v) override {
    if (v > static_cast<number_unsigned_t>(std::numeric_limits<std::int64_t>::max())) return fail("huge integer");
    return value(static_cast<std::int64_t>(v));
  }
  bool number_float(number_float_t, const string_t&) override { return fail("non-integer number"); }
  bool string(string_t& v) override { return value(std::move(v)); }
  bool binary(binary_t&) override { return fail("binary"); }
  bool start_object(std::size_t) override {
    if (depth_++ != 0) return fail("nested object");
    return true;
  }
  bool key(string_t& k) override {
    key_ = k;
    return true;
  }
  bool end_object() override {
    --depth_;
    return true;
  }
  bool start_array(std::size_t) override {
    ++depth_;
    if (depth_ == 3) record_.clear();
    if (depth_ > 3) return fail("nested array");
    return true;
  }
  bool end_array() override {
    if (depth_ == 3) finishRecord();
    --depth_;
    return true;
  }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
    throw Error(Errc::Format, "ledger is not valid JSON at byte " + std::to_string(position) + ": " + ex.what());
  }

 private:
  bool fail(const char* what) { throw Error(Errc::Format, std::string("unexpected ") + what + " in ledger field '" + key_ + "'"); }

  bool value(Value v) {
    if (depth_ == 3) {
      record_.push_back(std::move(v));
      return true;
    }
    auto integer = [&]() {
      if (!std::holds_alternative<std::int64_t>(v)) fail("string");
      return std::get<std::int64_t>(v);
    };
    if (depth_ == 1) {
      if (key_ == "horizon") ledger_.horizon = integer();
      else if (key_ == "context_length") ledger_.contextLength = static_cast<int>(integer());
      else if (key_ == "alphabet_size") ledger_.alphabetSize = static_cast<int>(integer());
      else if (key_ == "scale") ledger_.scale = integer();
      else if (key_ == "target") {
        if (!std::holds_alternative<std::string>(v)) fail("integer");
        ledger_.target = parseRational(std::get<std::string>(v));
      } else fail("scalar");
    } else if (depth_ == 2 && key_ == "lengths") {
      ledger_.lengths.push_back(integer());
    } else {
      fail("value");
    }
    return true;
  }

  void finishRecord() {
    if (key_ != "cells" && key_ != "blocks") fail("record");
    if (record_.size() != 5 || !std::holds_alternative<std::int64_t>(record_[0]) ||
        !std::holds_alternative<std::int64_t>(record_[1])) {
      throw Error(Errc::Format, "ledger record must be [start, level, kind, sign, average]");
    }
    for (std::size_t i = 2; i < 5; ++i)
      if (!std::holds_alternative<std::string>(record_[i])) throw Error(Errc::Format, "ledger record has the wrong types");
    const std::int64_t start = std::get<std::int64_t>(record_[0]);
    const auto level = std::get<std::int64_t>(record_[1]);
    if (ledger_.scale <= 0 || level < 0 || level >= static_cast<std::int64_t>(ledger_.lengths.size())) {
      throw Error(Errc::Format, "ledger record level out of range, or scale and lengths missing before records");
    }
    const Sign omega = signFrom(std::get<std::string>(record_[3]));
    const std::int64_t sum = sumFromAverage(std::get<std::string>(record_[4]), ledger_.scale, ledger_.length(static_cast<int>(level)));
    if (key_ == "cells") {
      ledger_.cells.push_back({start, static_cast<int>(level), kindFrom(std::get<std::string>(record_[2])), omega, sum});
    } else {
      ledger_.blocks.push_back({start, static_cast<int>(level), omega, sum});
    }
  }

  SynthesisLedger& ledger_;
  int depth_ = 0;
  std::string key_;
  std::vector<Value> record_;
};

}  // namespace

void writeLedger(std::ostream& out, const SynthesisLedger& ledger) {
  out << "{\n \"horizon\": " << ledger.horizon << ",\n \"context_length\": " << ledger.contextLength
      << ",\n \"alphabet_size\": " << ledger.alphabetSize << ",\n \"scale\": " << ledger.scale
      << ",\n \"target\": \"" << formatRational(ledger.target) << "\",\n \"lengths\": " << Json(ledger.lengths).dump()
      << ",\n \"cells\": [";
  const char* sep = "\n  ";
  for (const CellRecord& c : ledger.cells) {
    out << sep << '[' << c.start << ',' << c.level << ",\"" << kindChar(c.kind) << "\",\"" << signChar(c.omega)
        << "\",\"" << averageText(c.sum, ledger.scale, ledger.length(c.level)) << "\"]";
    sep = ",\n  ";
  }
  out << "\n ],\n \"blocks\": [";
  sep = "\n  ";
  for (const BlockRecord& b : ledger.blocks) {
    out << sep << '[' << b.start << ',' << b.level << ",\"b\",\"" << signChar(b.omega) << "\",\""
        << averageText(b.sum, ledger.scale, ledger.length(b.level)) << "\"]";
    sep = ",\n  ";
  }
  out << "\n ]\n}\n";
}

SynthesisLedger readLedger(std::istream& in, Word prefix) {
  SynthesisLedger ledger;
  LedgerSax sax(ledger);
  Json::sax_parse(in, &sax);
  if (ledger.lengths.empty()) throw Error(Errc::Format, "ledger has no lengths");
  ledger.prefix = std::move(prefix);
  return ledger;
}

Json reportToJson(const ControlReport& report, int alphabetSize) {
  Json avg = Json::array(), dens = Json::array(), legal = Json::array(), led = Json::array();
  for (const auto& v : report.averageViolations)
    avg.push_back({{"start", v.start}, {"level", v.level}, {"average", formatRational(v.average)}});
  for (const auto& v : report.densityViolations)
    dens.push_back({{"start", v.start}, {"level", v.level}, {"missing", formatWord(v.missing, alphabetSize)}});
  for (const auto& v : report.legalityViolations) legal.push_back({{"position", v.position}});
  for (const auto& v : report.ledgerViolations)
    led.push_back({{"start", v.start}, {"level", v.level}, {"what", v.what}});
  const ControlStats& s = report.stats;
  return Json{{"clean", report.clean()},
              {"stats",
               {{"prefix_length", s.prefixLength},
                {"intervals_checked", s.intervalsChecked},
                {"components_checked", s.componentsChecked},
                {"records_checked", s.recordsChecked},
                {"final_average", formatRational(s.finalAverage)},
                {"average_violations", s.averageViolations},
                {"density_violations", s.densityViolations},
                {"legality_violations", s.legalityViolations},
                {"ledger_violations", s.ledgerViolations}}},
              {"average_violations", avg},
              {"density_violations", dens},
              {"legality_violations", legal},
              {"ledger_violations", led}};
}

Json claimToJson(const ClaimReport& claim) {
  return Json{{"claim", claim.claim},     {"window", claim.window},         {"checked", claim.checked},
              {"excluded", claim.excluded}, {"violations", claim.violations}, {"examples", claim.examples},
              {"detail", claim.detail}};
}

Json consequencesToJson(const std::vector<ConsequenceCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    out.push_back({{"k", c.k},
                   {"n", c.n},
                   {"average", formatRational(c.average)},
                   {"average_ok", c.averageOk},
                   {"density_ok", c.densityOk}});
  }
  return out;
}

std::string seriesCsv(const std::vector<CheckpointRow>& rows) {
  std::ostringstream out;
  out << "checkpoint,average_num,average_den,coverage_num,coverage_den\n";
  for (const auto& r : rows) {
    out << r.checkpoint << ',' << numeratorOf(r.average) << ',' << denominatorOf(r.average) << ','
        << numeratorOf(r.coverage) << ',' << denominatorOf(r.coverage) << '\n';
  }
  return out.str();
}

void writeBytes(const std::filesystem::path& path, const Word& symbols) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Config, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(symbols.data()), static_cast<std::streamsize>(symbols.size()));
}

Word readBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Config, "cannot read " + path.string());
  return Word(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void writeText(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Config, "cannot write " + path.string());
  out << text;
}

std::string readText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Config, "cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void writeJson(const std::filesystem::path& path, const Json& doc) { writeText(path, doc.dump(1) + "\n"); }

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hexDigest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sparsetail
