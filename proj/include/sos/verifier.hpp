// Exhaustive adversarial verification of policies, and solver tables checked
// against the closed-form outcome predictions.
//
// The policy's moves are fixed and the opponent branches over every legal
// move. No symmetry pruning: policies are not symmetric in general. Subtrees
// are memoized on the exact position plus the policy's memory key, which is
// sound because the key captures everything the policy's future choices
// depend on.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "sos/codec.hpp"
#include "sos/solver.hpp"
#include "sos/spec_io.hpp"
#include "sos/strategies.hpp"

namespace sos {

struct Guarantee {
  GuaranteeKind kind = GuaranteeKind::AtLeastDraw;
  Player role = Player::First;
  std::optional<int> ply_bound = std::nullopt;  // required exactly for the expandable board
};

struct Verdict {
  bool holds = false;
  std::uint64_t leaves = 0;        // when holds
  std::vector<Move> counterexample;  // when not: moves from the empty board
  std::string reason;

  static Verdict ok(std::uint64_t leaves) { return {true, leaves, {}, {}}; }
  static Verdict fail(std::vector<Move> line, std::string why) { return {false, 0, std::move(line), std::move(why)}; }
};

struct VerifyOptions {
  int workers = 1;
};

namespace detail {

// Why a finished (or truncated) game violates the guarantee, or empty.
inline std::string violation(const GameStatus& st, const Guarantee& g, bool truncated) {
  if (truncated) return g.kind == GuaranteeKind::Win ? "no win within the ply bound" : "";
  const bool won = st.kind == GameStatus::Kind::Won;
  if (won && st.player != g.role) return "policy player lost";
  if (g.kind == GuaranteeKind::Win && !(won && st.player == g.role)) return "game ended without a win for the policy player";
  return {};
}

class Verifier {
 public:
  Verifier(const VariantSpec& spec, Guarantee g) : spec_(spec), g_(g) {}

  // Leaf count of the subtree, or nullopt with path_/reason_ describing the failure.
  std::optional<std::uint64_t> walk(const BoardState& s, const GameStatus& st, Policy& policy, int ply) {
    if (st.terminal()) {
      if (auto why = violation(st, g_, false); !why.empty()) return failure(why);
      return 1;
    }
    if (g_.ply_bound && ply >= *g_.ply_bound) {
      if (auto why = violation(st, g_, true); !why.empty()) return failure(why);
      return 1;
    }
    std::string key = format_board(s) + "|" + policy.memory_key();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::uint64_t total = 0;
    if (s.to_move() == g_.role) {
      Policy next_policy = policy;
      Move m;
      try {
        m = next_policy.choose(spec_, s);
      } catch (const Error& e) {
        return failure(std::string("policy error: ") + e.what());
      }
      path_.push_back(m);
      auto [next, nst] = apply_move(s, spec_, m);
      auto sub = walk(next, nst, next_policy, ply + 1);
      if (!sub) return std::nullopt;
      path_.pop_back();
      total = *sub;
    } else {
      for (const Move& m : legal_moves(s, spec_)) {
        path_.push_back(m);
        auto [next, nst] = apply_move(s, spec_, m);
        Policy branch = policy;
        auto sub = walk(next, nst, branch, ply + 1);
        if (!sub) return std::nullopt;
        path_.pop_back();
        total += *sub;
      }
    }
    memo_.emplace(std::move(key), total);
    return total;
  }

  std::vector<Move> path_;
  std::string reason_;

 private:
  std::optional<std::uint64_t> failure(const std::string& why) {
    reason_ = why;
    return std::nullopt;
  }

  const VariantSpec& spec_;
  Guarantee g_;
  std::unordered_map<std::string, std::uint64_t> memo_;
};

}  // namespace detail

inline Verdict verify_guarantee(const VariantSpec& spec, const std::string& policy_name, const Guarantee& g,
                                VerifyOptions opts = {}) {
  spec.validate();
  if ((spec.geometry == GeometryKind::Expandable) != g.ply_bound.has_value())
    throw Error(Error::Kind::Unsupported, "a ply bound is required exactly for the expandable board");
  Policy root_policy = make_policy(policy_name, g.role, spec);

  // Play the policy's forced prefix up to the first opponent decision.
  BoardState s = new_game(spec);
  GameStatus st = game_status(s, spec);
  std::vector<Move> prefix;
  int ply = 0;
  while (!st.terminal() && s.to_move() == g.role && !(g.ply_bound && ply >= *g.ply_bound)) {
    Move m;
    try {
      m = root_policy.choose(spec, s);
    } catch (const Error& e) {
      return Verdict::fail(prefix, std::string("policy error: ") + e.what());
    }
    prefix.push_back(m);
    std::tie(s, st) = apply_move(s, spec, m);
    ++ply;
  }
  if (st.terminal() || (g.ply_bound && ply >= *g.ply_bound)) {
    detail::Verifier v(spec, g);
    auto r = v.walk(s, st, root_policy, ply);
    if (r) return Verdict::ok(*r);
    prefix.insert(prefix.end(), v.path_.begin(), v.path_.end());
    return Verdict::fail(prefix, v.reason_);
  }

  // Opponent's first decision: subtrees are independent.
  const auto replies = legal_moves(s, spec);
  struct Part {
    std::optional<std::uint64_t> leaves;
    std::vector<Move> path;
    std::string reason;
  };
  std::vector<Part> parts(replies.size());
  std::atomic<std::size_t> next{0};
  // Subtrees past the first known failure are skipped; every subtree before
  // it is still completed, so the reported counterexample does not depend on
  // scheduling.
  std::atomic<std::size_t> first_fail{replies.size()};
  auto work = [&] {
    detail::Verifier v(spec, g);  // one memo per worker
    for (std::size_t i; (i = next.fetch_add(1)) < replies.size();) {
      if (i > first_fail.load()) continue;
      auto [child, cst] = apply_move(s, spec, replies[i]);
      Policy branch = root_policy;
      v.path_.clear();
      auto r = v.walk(child, cst, branch, ply + 1);
      parts[i].leaves = r;
      if (!r) {
        parts[i].path = v.path_;
        parts[i].reason = v.reason_;
        for (std::size_t cur = first_fail.load(); i < cur && !first_fail.compare_exchange_weak(cur, i);) {
        }
      }
    }
  };
  const int workers = std::max(1, opts.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::uint64_t total = 0;
  for (std::size_t i = 0; i < replies.size(); ++i) {
    if (!parts[i].leaves) {
      if (parts[i].reason.empty()) continue;  // skipped after an earlier failure
      std::vector<Move> line = prefix;
      line.push_back(replies[i]);
      line.insert(line.end(), parts[i].path.begin(), parts[i].path.end());
      return Verdict::fail(line, parts[i].reason);
    }
    total += *parts[i].leaves;
  }
  return Verdict::ok(total);
}

// Replays a counterexample with the game model alone and reports whether it
// ends in a genuine violation.
inline bool replay_violates(const VariantSpec& spec, const std::vector<Move>& line, const Guarantee& g) {
  BoardState s = new_game(spec);
  GameStatus st = game_status(s, spec);
  for (const Move& m : line) {
    if (st.terminal()) return false;
    std::tie(s, st) = apply_move(s, spec, m);
  }
  const bool truncated = !st.terminal();
  if (truncated) {
    // Stopping early is only a violation for a Win guarantee at its bound,
    // or when the policy itself broke down at this position.
    if (g.kind == GuaranteeKind::Win && g.ply_bound && static_cast<int>(line.size()) >= *g.ply_bound) return true;
    return false;
  }
  return !detail::violation(st, g, false).empty();
}

// ---------------------------------------------------------------------------
// Closed-form outcome predictions

namespace detail {

inline bool only_patterns(const VariantSpec& spec, std::initializer_list<const char*> pats) {
  std::vector<std::string> want(pats.begin(), pats.end());
  std::sort(want.begin(), want.end());
  std::vector<std::string> have = spec.patterns.patterns();
  std::sort(have.begin(), have.end());
  return have == want;
}

inline bool contains_run3(const std::string& p) {
  return p.find("SSS") != std::string::npos || p.find("OOO") != std::string::npos;
}

}  // namespace detail

// The proven outcome for this variant, when one is known. Conjectured
// families (SOOS, other length-4 targets) deliberately have no prediction.
inline std::optional<OutcomeValue> predicted_outcome(const VariantSpec& spec) {
  using O = OutcomeValue;
  const int n = spec.n;
  const bool normal = spec.goal == Goal::Normal;
  const bool sos = detail::only_patterns(spec, {"SOS"});
  switch (spec.geometry) {
    case GeometryKind::Linear:
      if (normal) {
        if (sos) {
          if (n >= 7 && n % 2 == 1) return O::FirstWins;
          if (n >= 16 && n % 2 == 0) return O::SecondWins;
          return O::Draw;
        }
        if (spec.patterns.size() == 1) {
          const std::string& p = spec.patterns[0];
          if (p == "SOO" || p == "OOS" || p == "SSO" || p == "OSS") return O::Draw;
          if (p == "SOSO" || p == "OSOS") return O::Draw;
          if (detail::contains_run3(p)) return O::Draw;
        }
        if (detail::only_patterns(spec, {"SSSS", "OOOO"})) return O::Draw;
        return std::nullopt;
      }
      if (sos && n >= 3) return O::Draw;
      if (detail::only_patterns(spec, {"SSS"}) || detail::only_patterns(spec, {"OOO"})) return O::Draw;
      if (detail::only_patterns(spec, {"SOO"})) return O::Draw;
      if (detail::only_patterns(spec, {"SO"}) && n == 6) return O::FirstWins;
      return std::nullopt;
    case GeometryKind::Circular:
      if (!normal || !sos) return std::nullopt;
      if (n == 3) return O::FirstWins;
      if (n >= 7 && n % 2 == 1) return O::FirstWins;
      if (n >= 10 && n % 2 == 0) return O::SecondWins;
      return O::Draw;
    case GeometryKind::Grid:
      if (!normal || !sos || spec.rows != 2) return std::nullopt;
      return spec.cols < 7 ? O::Draw : O::SecondWins;
    case GeometryKind::Restricted3x3:
      if (normal && sos && spec.stuck_rule == StuckRule::Draw) return O::FirstWins;
      return std::nullopt;
    case GeometryKind::Expandable: return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Solver tables

struct TableRow {
  int n = 0;
  std::optional<Outcome> outcome;  // nullopt when the budget ran out
  std::uint64_t nodes = 0;
  std::optional<OutcomeValue> predicted;
  double seconds = 0;

  bool matches() const { return outcome && predicted && outcome->value == *predicted; }
  bool mismatch() const { return outcome && predicted && outcome->value != *predicted; }
};

struct Table {
  std::vector<TableRow> rows;  // mismatches first, then by n
  bool complete = true;
};

struct TableOptions {
  SolverOptions solver;
  std::function<void(Solver&)> before_solve = nullptr;  // e.g. cache import
  std::function<void(const Solver&)> after_solve = nullptr;
};

inline Table cross_check(const std::function<VariantSpec(int)>& family, int lo, int hi, TableOptions opts = {}) {
  if (lo > hi) throw Error(Error::Kind::Parse, "empty size range");
  Table t;
  for (int n = lo; n <= hi; ++n) {
    TableRow row;
    row.n = n;
    const VariantSpec spec = family(n);
    row.predicted = predicted_outcome(spec);
    const auto start = std::chrono::steady_clock::now();
    try {
      Solver solver(spec, opts.solver);
      if (opts.before_solve) opts.before_solve(solver);
      auto r = solver.solve(new_game(spec));
      row.outcome = r.outcome;
      row.nodes = r.nodes;
      if (opts.after_solve) opts.after_solve(solver);
    } catch (const BudgetExceeded& e) {
      t.complete = false;
      row.nodes = e.nodes();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t.rows.push_back(row);
  }
  std::stable_partition(t.rows.begin(), t.rows.end(), [](const TableRow& r) { return r.mismatch(); });
  return t;
}

inline std::string matches_cell(const TableRow& r) {
  if (!r.outcome) return "INCOMPLETE";
  if (!r.predicted) return "n/a";
  return r.matches() ? "yes" : "MISMATCH";
}

inline std::string render_table(const Table& t, const std::string& format) {
  if (t.rows.empty()) throw Error(Error::Kind::Parse, "empty table");
  std::ostringstream out;
  auto outcome_text = [](const TableRow& r) { return r.outcome ? std::string(to_string(r.outcome->value)) : "?"; };
  auto dist_text = [](const TableRow& r) {
    return r.outcome && r.outcome->distance ? std::to_string(*r.outcome->distance) : std::string();
  };
  if (format == "csv") {
    out << "n,outcome,distance,nodes,matches_theorem\r\n";
    for (const auto& r : t.rows)
      out << r.n << ',' << outcome_text(r) << ',' << dist_text(r) << ',' << r.nodes << ',' << matches_cell(r) << "\r\n";
  } else if (format == "json") {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json j = {{"n", r.n}, {"outcome", r.outcome ? json(outcome_text(r)) : json(nullptr)},
                {"distance", r.outcome && r.outcome->distance ? json(*r.outcome->distance) : json(nullptr)},
                {"nodes", r.nodes}, {"matches_theorem", matches_cell(r)}};
      rows.push_back(std::move(j));
    }
    out << json{{"complete", t.complete}, {"rows", rows}}.dump(2) << "\n";
  } else if (format == "text") {
    out << std::left;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%4s  %-11s %8s %12s  %s\n", "n", "outcome", "distance", "nodes", "matches_theorem");
    out << buf;
    for (const auto& r : t.rows) {
      std::snprintf(buf, sizeof buf, "%4d  %-11s %8s %12llu  %s\n", r.n, outcome_text(r).c_str(), dist_text(r).c_str(),
                    static_cast<unsigned long long>(r.nodes), matches_cell(r).c_str());
      out << buf;
    }
    if (!t.complete) out << "table incomplete: node budget exceeded\n";
  } else {
    throw Error(Error::Kind::Parse, "unknown format '" + format + "'");
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Verification reports

inline std::string moves_text(const std::vector<Move>& line) {
  std::string s;
  for (const Move& m : line) s += (s.empty() ? "" : " ") + to_string(m);
  return s;
}

inline std::string render_verdict(const VariantSpec& spec, const std::string& policy, const Guarantee& g,
                                  const Verdict& v, const std::string& format) {
  if (format == "json") {
    json j = {{"policy", policy},
              {"spec", spec_to_json(spec)},
              {"guarantee", to_string(g.kind)},
              {"role", to_string(g.role)},
              {"verdict", v.holds ? "Holds" : "Counterexample"}};
    if (g.ply_bound) j["ply_bound"] = *g.ply_bound;
    if (v.holds) {
      j["leaves"] = v.leaves;
    } else {
      json line = json::array();
      for (const Move& m : v.counterexample) line.push_back(to_string(m));
      j["counterexample"] = line;
      j["reason"] = v.reason;
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << (v.holds ? "Holds" : "Counterexample") << ": " << policy << " as " << to_string(g.role) << " on "
      << describe(spec) << ", " << to_string(g.kind);
  if (g.ply_bound) out << " within " << *g.ply_bound << " plies";
  if (v.holds)
    out << " (" << v.leaves << " leaves)\n";
  else
    out << "\n  line: " << moves_text(v.counterexample) << "\n  reason: " << v.reason << "\n";
  return out.str();
}

}  // namespace sos
