// Solver result files.
//
//   soscache 1 <spec fingerprint>
//   <board text> <F|S|D> <distance|->
//
// One position per line, sorted by board text so files diff cleanly.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sos/codec.hpp"
#include "sos/solver.hpp"
#include "sos/spec_io.hpp"

namespace sos {

inline constexpr int kCacheVersion = 1;

inline char outcome_letter(OutcomeValue v) {
  switch (v) {
    case OutcomeValue::FirstWins: return 'F';
    case OutcomeValue::SecondWins: return 'S';
    case OutcomeValue::Draw: return 'D';
  }
  return 'D';
}

inline void write_cache(std::ostream& out, const VariantSpec& spec, const std::vector<CacheEntry>& entries) {
  out << "soscache " << kCacheVersion << ' ' << spec_fingerprint(spec) << '\n';
  for (const auto& e : entries) {
    out << format_board(e.board) << ' ' << outcome_letter(e.outcome.value) << ' ';
    if (e.outcome.distance)
      out << *e.outcome.distance;
    else
      out << '-';
    out << '\n';
  }
}

inline std::vector<CacheEntry> read_cache(std::istream& in, const VariantSpec& spec) {
  std::string line;
  int number = 0;
  auto fail = [&](const std::string& why) {
    throw Error(Error::Kind::Parse, "cache line " + std::to_string(number) + ": " + why);
  };
  ++number;
  if (!std::getline(in, line)) fail("missing header");
  {
    std::istringstream h(line);
    std::string magic, fp;
    int version = 0;
    if (!(h >> magic >> version >> fp) || magic != "soscache") fail("not a cache file");
    if (version != kCacheVersion) fail("unsupported cache version " + std::to_string(version));
    if (fp != spec_fingerprint(spec))
      throw Error(Error::Kind::InvalidSpec, "cache was written for a different variant (fingerprint " + fp + ")");
  }
  std::vector<CacheEntry> out;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::istringstream l(line);
    std::string board, value, dist, extra;
    if (!(l >> board >> value >> dist) || (l >> extra)) fail("expected '<board> <F|S|D> <distance|->'");
    CacheEntry e;
    try {
      e.board = parse_board(spec, board);
      e.outcome.value = outcome_from_string(value);
    } catch (const Error& err) {
      fail(err.what());
    }
    if (dist != "-") {
      char* end = nullptr;
      const long d = std::strtol(dist.c_str(), &end, 10);
      if (*end != '\0' || d < 0) fail("bad distance '" + dist + "'");
      e.outcome.distance = static_cast<int>(d);
    }
    out.push_back(std::move(e));
  }
  if (!in.eof()) fail("read error");
  return out;
}

inline void save_cache(const std::filesystem::path& path, const VariantSpec& spec, const std::vector<CacheEntry>& entries) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(Error::Kind::Parse, "cannot write " + path.string());
  write_cache(out, spec, entries);
  if (!out) throw Error(Error::Kind::Parse, "write failed: " + path.string());
}

inline std::vector<CacheEntry> load_cache(const std::filesystem::path& path, const VariantSpec& spec) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Parse, "cannot read " + path.string());
  return read_cache(in, spec);
}

// $SOS_CACHE_DIR/<fingerprint>.soscache, or empty when the variable is unset.
inline std::filesystem::path default_cache_path(const VariantSpec& spec) {
  const char* dir = std::getenv("SOS_CACHE_DIR");
  if (!dir || !*dir) return {};
  return std::filesystem::path(dir) / (spec_fingerprint(spec) + ".soscache");
}

}  // namespace sos
