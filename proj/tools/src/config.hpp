#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparsetail/scale.hpp"
#include "sparsetail/sft.hpp"

namespace sparsetail::cli {

/// Position of a field in the source document, 1-based.
struct Location {
  int line = 0;
  int column = 0;
};

struct RunConfig {
  std::string source = "<config>";

  int alphabet = 2;
  std::vector<Word> forbidden;                   // 2-words
  std::vector<std::vector<int>> matrix;          // empty unless given explicitly
  int potentialDepth = 1;
  std::map<Word, Rational> potential;
  std::optional<Rational> potentialDefault;
  Rational target{0};

  std::int64_t t0 = 3;
  std::optional<std::vector<std::int64_t>> factors;  // nullopt means auto
  int depth = 3;

  Rational alpha0{1};
  Rational decay{6, 25};
  Rational betaFraction{1, 3};
  std::vector<int> density;  // m_0, m_1, ...; padded with the last entry

  std::filesystem::path output = "out";
  bool exhaustive = true;
  bool claims = true;
  int coverageOrder = 3;
  int checkpointsPerLevel = 4;

  std::map<std::string, Location> locations;  // dotted field name -> position
};

/// Throws Error(Config) with "source:line:column: field 'name': ..." diagnostics.
RunConfig parseConfig(std::string_view text, std::string source = "<config>");
RunConfig loadConfig(const std::filesystem::path& path);
std::string formatConfig(const RunConfig& config);

/// The full 2-shift with φ = (1, −1) and t = 0.
RunConfig demoConfig();

/// Everything derived from a configuration, validated before any heavy work.
struct Model {
  Sft sft;
  Potential potential;
  ControlParams params;
  Scale scale;
  Rational rangeLo, rangeHi;
};

/// Validates all inequalities; errors keep their code and carry the field position.
Model resolve(const RunConfig& config);

}  // namespace sparsetail::cli
