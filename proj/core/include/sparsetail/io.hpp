#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparsetail/analyze.hpp"
#include "sparsetail/pattern.hpp"
#include "sparsetail/scale.hpp"
#include "sparsetail/synth.hpp"
#include "sparsetail/tail.hpp"

namespace sparsetail {

using Json = nlohmann::ordered_json;

Json scaleToJson(const Scale& scale);
Scale scaleFromJson(const Json& doc);

Json tailToJson(const SparseTail& tail);
/// Throws Format on malformed documents; shape is not validated.
SparseTail tailFromJson(const Json& doc);

/// Cells as [offset from base, level, "r"|"w"] triples.
Json patternToJson(const Pattern& pattern);
Pattern patternFromJson(const Json& doc);
/// Same document as patternToJson, streamed one cell per line.
void writePattern(std::ostream& out, const Pattern& pattern);

/// Streams the ledger as a JSON document with one record per line:
/// [start, level, kind, sign, average "p/q"]. The prefix is stored separately.
void writeLedger(std::ostream& out, const SynthesisLedger& ledger);
/// Event-driven reader for documents written by writeLedger.
SynthesisLedger readLedger(std::istream& in, Word prefix);

Json reportToJson(const ControlReport& report, int alphabetSize);
Json claimToJson(const ClaimReport& claim);
Json consequencesToJson(const std::vector<ConsequenceCheck>& checks);

/// checkpoint,average_num,average_den,coverage_num,coverage_den
std::string seriesCsv(const std::vector<CheckpointRow>& rows);

void writeBytes(const std::filesystem::path& path, const Word& symbols);
Word readBytes(const std::filesystem::path& path);
void writeText(const std::filesystem::path& path, std::string_view text);
std::string readText(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void writeJson(const std::filesystem::path& path, const Json& doc);

std::uint64_t fnv1a(std::string_view data);
std::string hexDigest(std::uint64_t h);

}  // namespace sparsetail
