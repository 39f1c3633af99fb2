// Acceptance suite: one PASS/FAIL line per primary criterion, then the
// secondary service round trip. Exit status is the number of failed primary
// criteria (capped at 100). Budgets below are wall-clock limits on this run.

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "sos/bounded.hpp"
#include "sos/service.hpp"
#include "sos/spec_io.hpp"
#include "sos/tactics.hpp"
#include "sos/verifier.hpp"

using namespace sos;

namespace {

constexpr double kLinearUpTo14Seconds = 60;
constexpr double kLinearLargeSeconds = 600;  // each of n = 15, 16
constexpr long kLinearLargeMaxRssKb = 4L * 1024 * 1024;
constexpr double kSooSeconds = 120;
constexpr double kCircularSeconds = 120;
constexpr double kRestrictedSeconds = 5;
constexpr int kExpandablePlies = 7;
constexpr int kExpandableReplyPlies = 9;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

long max_rss_kb() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return u.ru_maxrss;
}

struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
  bool ok() const { return failures.empty(); }
};

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

OutcomeValue solve_value(const VariantSpec& spec, SolverOptions o = {}) { return Solver(spec, o).solve(new_game(spec)).outcome.value; }

void expect_outcome(Check& c, const VariantSpec& spec, OutcomeValue want) {
  const auto got = solve_value(spec);
  c.expect(got == want, describe(spec) + ": " + std::string(to_string(got)) + ", expected " + std::string(to_string(want)));
}

void expect_holds(Check& c, const VariantSpec& spec, const std::string& policy, const Guarantee& g) {
  const Verdict v = verify_guarantee(spec, policy, g);
  if (!v.holds)
    c.failures.push_back(policy + " as " + std::string(to_string(g.role)) + " on " + describe(spec) + ": " + v.reason +
                         " after " + moves_text(v.counterexample));
}

int failed_primary = 0;

void report(int id, const std::string& title, const std::function<void(Check&)>& body, bool primary = true) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = since(t0);
  std::ostringstream line;
  line << (c.ok() ? "PASS" : "FAIL") << "  [" << (primary ? "" : "S") << id << "] " << title << "  (" << fmt_seconds(secs);
  for (const auto& n : c.notes) line << "; " << n;
  line << ")";
  for (const auto& f : c.failures) line << "\n        - " << f;
  std::cout << line.str() << std::endl;
  if (primary && !c.ok()) ++failed_primary;
}

void sos_linear_table(Check& c) {
  auto t0 = Clock::now();
  for (int n = 1; n <= 14; ++n) {
    const OutcomeValue want = n >= 7 && n % 2 == 1 ? OutcomeValue::FirstWins : OutcomeValue::Draw;
    expect_outcome(c, VariantSpec::linear(n), want);
  }
  const double small = since(t0);
  c.expect(small < kLinearUpTo14Seconds, "n <= 14 took " + fmt_seconds(small));
  c.note("n<=14 " + fmt_seconds(small));
  for (int n : {15, 16}) {
    t0 = Clock::now();
    expect_outcome(c, VariantSpec::linear(n), n == 15 ? OutcomeValue::FirstWins : OutcomeValue::SecondWins);
    const double s = since(t0);
    c.expect(s < kLinearLargeSeconds, "n = " + std::to_string(n) + " took " + fmt_seconds(s));
    c.note("n=" + std::to_string(n) + " " + fmt_seconds(s));
  }
  const long rss = max_rss_kb();
  c.expect(rss < kLinearLargeMaxRssKb, "peak memory " + std::to_string(rss / 1024) + " MB");
  c.note("peak " + std::to_string(rss / 1024) + " MB");
}

void soo_linear(Check& c) {
  const auto t0 = Clock::now();
  for (int n = 1; n <= 12; ++n) expect_outcome(c, VariantSpec::linear(n, {"SOO"}), OutcomeValue::Draw);
  for (int n = 1; n <= 14; ++n)
    for (Player p : {Player::First, Player::Second})
      expect_holds(c, VariantSpec::linear(n, {"SOO"}), "soo_draw", {GuaranteeKind::AtLeastDraw, p});
  c.expect(since(t0) < kSooSeconds, "took " + fmt_seconds(since(t0)));
}

void sss_targets(Check& c) {
  for (const char* target : {"SSS", "SSSO", "OSSS", "OSSSO"}) {
    for (int n = 1; n <= 12; ++n) expect_outcome(c, VariantSpec::linear(n, {target}), OutcomeValue::Draw);
    for (int n = 1; n <= 14; ++n)
      for (Player p : {Player::First, Player::Second})
        expect_holds(c, VariantSpec::linear(n, {target}), "sss_superstring_draw", {GuaranteeKind::AtLeastDraw, p});
  }
}

void soso(Check& c) {
  for (int n = 1; n <= 14; ++n) expect_outcome(c, VariantSpec::linear(n, {"SOSO"}), OutcomeValue::Draw);
  for (int n = 1; n <= 15; ++n)
    for (Player p : {Player::Second, Player::First})
      expect_holds(c, VariantSpec::linear(n, {"SOSO"}), "soso_draw", {GuaranteeKind::AtLeastDraw, p});
}

void ssss_oooo(Check& c) {
  const PatternSet pats{"SSSS", "OOOO"};
  bool swap = false, mirror = false;
  for (const auto& t : symmetry_group(VariantSpec::linear(10, pats))) {
    swap = swap || t.swap_letters;
    mirror = mirror || (!t.swap_letters && !t.identity());
  }
  c.expect(swap && mirror, "letter swap and reflection are not both in the symmetry group");
  for (int n = 1; n <= 14; ++n) expect_outcome(c, VariantSpec::linear(n, pats), OutcomeValue::Draw);
  for (int n = 1; n <= 14; ++n)
    for (Player p : {Player::First, Player::Second})
      expect_holds(c, VariantSpec::linear(n, pats), "ssss_oooo_draw", {GuaranteeKind::AtLeastDraw, p});
}

void misere(Check& c) {
  for (int n = 3; n <= 12; ++n) {
    const auto spec = VariantSpec::linear(n, {"SOS"}, Goal::Misere);
    expect_outcome(c, spec, OutcomeValue::Draw);
    for (Player p : {Player::First, Player::Second}) expect_holds(c, spec, "misere_sos", {GuaranteeKind::AtLeastDraw, p});
  }
  for (int n = 1; n <= 14; ++n)
    for (Player p : {Player::First, Player::Second})
      expect_holds(c, VariantSpec::linear(n, {"SSS"}, Goal::Misere), "misere_all_o", {GuaranteeKind::AtLeastDraw, p});
  for (int n = 1; n <= 12; ++n) {
    const auto spec = VariantSpec::linear(n, {"SOO"}, Goal::Misere);
    expect_outcome(c, spec, OutcomeValue::Draw);
    for (Player p : {Player::First, Player::Second}) expect_holds(c, spec, "misere_soo", {GuaranteeKind::AtLeastDraw, p});
  }
  expect_outcome(c, VariantSpec::linear(6, {"SO"}, Goal::Misere), OutcomeValue::FirstWins);
}

void circular(Check& c) {
  const auto t0 = Clock::now();
  for (int n = 3; n <= 14; ++n) {
    OutcomeValue want = OutcomeValue::Draw;
    if (n == 3 || (n >= 7 && n % 2 == 1)) want = OutcomeValue::FirstWins;
    if (n >= 10 && n % 2 == 0) want = OutcomeValue::SecondWins;
    expect_outcome(c, VariantSpec::circular(n), want);
  }
  c.expect(since(t0) < kCircularSeconds, "took " + fmt_seconds(since(t0)));
}

void two_rows(Check& c) {
  for (int n = 3; n <= 8; ++n) expect_outcome(c, VariantSpec::grid(2, n), n < 7 ? OutcomeValue::Draw : OutcomeValue::SecondWins);
  for (const char* target : {"SOS", "SOO"})
    for (int n = 1; n <= 6; ++n)
      expect_holds(c, VariantSpec::grid(2, n, {target}), "two_row_copy", {GuaranteeKind::AtLeastDraw, Player::Second});
  for (int n : {7, 8}) expect_holds(c, VariantSpec::grid(2, n), "two_row_second_win", {GuaranteeKind::Win, Player::Second});
}

void expandable(Check& c) {
  const auto ex = VariantSpec::expandable();
  const auto open = BoundedSolver(ex).solve(new_game(ex), kExpandablePlies);
  c.expect(open.kind == BoundedOutcome::Kind::ForcedWinWithin && open.player == Player::First,
           "empty board: " + to_string(open));
  c.note("empty board " + to_string(open));
  expect_holds(c, ex, "expandable_first", {GuaranteeKind::Win, Player::First, kExpandablePlies});
  const BoardState after_s = apply_move(new_game(ex), ex, {{0, 0}, Letter::S}).first;
  const auto reply = BoundedSolver(ex).solve(after_s, kExpandableReplyPlies);
  c.expect(reply.kind == BoundedOutcome::Kind::ForcedWinWithin && reply.player == Player::Second,
           "after S: " + to_string(reply));
  if (reply.kind == BoundedOutcome::Kind::ForcedWinWithin) c.note("after S d*=" + std::to_string(reply.plies));
}

void restricted(Check& c) {
  const auto t0 = Clock::now();
  const auto r = VariantSpec::restricted(StuckRule::Draw);
  expect_outcome(c, r, OutcomeValue::FirstWins);
  expect_holds(c, r, "restricted_first", {GuaranteeKind::Win, Player::First});
  c.expect(since(t0) < kRestrictedSeconds, "took " + fmt_seconds(since(t0)));
}

void conjectures(Check& c) {
  int rows = 0;
  for (int n = 1; n <= 13; ++n) {
    const auto spec = VariantSpec::linear(n, {"SOOS"});
    expect_outcome(c, spec, OutcomeValue::Draw);
    c.expect(!predicted_outcome(spec), "SOOS has a closed-form prediction");
    ++rows;
  }
  for (int bits = 0; bits < 16; ++bits) {
    std::string target;
    for (int k = 3; k >= 0; --k) target += (bits >> k) & 1 ? 'O' : 'S';
    for (int n = 1; n <= 12; ++n) {
      expect_outcome(c, VariantSpec::linear(n, {target}), OutcomeValue::Draw);
      ++rows;
    }
  }
  c.note(std::to_string(rows) + " evidence rows, reported as n/a");
}

// Two-ply reading of safety: no opponent reply wins on the spot.
bool safe_by_definition(const BoardState& s, const VariantSpec& spec, const Move& m) {
  auto [next, st] = apply_move(s, spec, m);
  if (st.terminal() || next.to_move() == s.to_move()) return true;
  for (const Move& r : candidate_moves(next)) {
    const auto st2 = apply_move(next, spec, r).second;
    if (st2.kind == GameStatus::Kind::Won && st2.player == next.to_move()) return false;
  }
  return true;
}

bool window_could_match(const std::string& row, const std::string& p, std::size_t at) {
  for (std::size_t k = 0; k < p.size(); ++k)
    if (row[at + k] != 'E' && row[at + k] != p[k]) return false;
  return true;
}

void properties(Check& c) {
  // is_safe against the two-ply definition, every SOS board of at most 10 cells
  // on lines, rings and two-row grids.
  std::vector<VariantSpec> shapes;
  for (int n = 3; n <= 10; ++n) shapes.push_back(VariantSpec::linear(n));
  for (int n = 3; n <= 10; ++n) shapes.push_back(VariantSpec::circular(n));
  for (int k = 2; k <= 5; ++k) shapes.push_back(VariantSpec::grid(2, k));
  shapes.push_back(VariantSpec::grid(3, 3));
  long safe_checks = 0;
  for (const auto& spec : shapes)
    for (const auto& s : oracle::all_boards(spec)) {
      if (game_status(s, spec).terminal()) continue;
      for (const Move& m : candidate_moves(s)) {
        ++safe_checks;
        if (is_safe(s, spec, m) != safe_by_definition(s, spec, m)) {
          c.failures.push_back("is_safe disagrees on " + describe(spec) + " " + format_board(s) + " " + to_string(m));
          return;
        }
      }
    }
  c.note(std::to_string(safe_checks) + " safety checks");

  // Losing pairs by definition vs the S-E-E-S detector on brink-free strips.
  long pair_checks = 0;
  for (const auto& spec : {VariantSpec::linear(10), VariantSpec::circular(10)})
    for (const auto& s : oracle::all_boards(spec)) {
      if (game_status(s, spec).terminal() || is_brink(s, spec)) continue;
      ++pair_checks;
      if (losing_pairs(s, spec) != sees_pairs(s, spec)) {
        c.failures.push_back("losing pairs differ on " + describe(spec) + " " + format_board(s));
        return;
      }
    }
  c.note(std::to_string(pair_checks) + " pair checks");

  // A losing pair in a live position rules out a draw.
  long prop_checks = 0;
  for (int n = 4; n <= 10; ++n) {
    const auto spec = VariantSpec::linear(n);
    Solver solver(spec);
    for (const auto& s : oracle::all_boards(spec)) {
      if (game_status(s, spec).terminal() || losing_pairs(s, spec).empty()) continue;
      ++prop_checks;
      if (solver.value(s) == Value::Draw) {
        c.failures.push_back("drawn position with a losing pair: " + format_board(s));
        return;
      }
    }
  }
  c.note(std::to_string(prop_checks) + " losing-pair positions non-drawn");

  // Purge soundness: no completion spells a pattern left of the frontier.
  long purge_checks = 0;
  for (const PatternSet& pats : {PatternSet{"SOSO"}, PatternSet{"SOS"}, PatternSet{"SSSS", "OOOO"}}) {
    const auto spec = VariantSpec::linear(10, pats);
    for (const auto& s : oracle::all_boards(spec)) {
      const int f = purge_step({0}, s, pats).index;
      if (f == 0) continue;
      ++purge_checks;
      std::string row;
      for (Cell x : s.cells) row += to_char(x);
      for (const auto& p : pats.patterns())
        for (int at = 0; at < f && at + static_cast<int>(p.size()) <= s.cols; ++at)
          if (window_could_match(row, p, static_cast<std::size_t>(at))) {
            c.failures.push_back("purge frontier " + std::to_string(f) + " unsound on " + row);
            return;
          }
    }
  }
  c.note(std::to_string(purge_checks) + " purged boards");

  // Symmetry: the brute-force value is invariant under every group element,
  // and the canonicalizing solver agrees with it.
  long sym_checks = 0;
  for (const auto& spec : {VariantSpec::circular(8), VariantSpec::grid(3, 3), VariantSpec::linear(9, {"SOS", "OSO"}),
                           VariantSpec::linear(9, {"SSSS", "OOOO"})}) {
    oracle::Minimax mm(spec);
    Solver solver(spec);
    const auto group = symmetry_group(spec);
    for (const auto& s : oracle::all_boards(spec)) {
      if (game_status(s, spec).terminal()) continue;
      const auto v = mm.value(s);
      ++sym_checks;
      if (static_cast<int>(solver.value(s)) != static_cast<int>(v)) {
        c.failures.push_back("solver differs from brute force on " + describe(spec) + " " + format_board(s));
        return;
      }
      for (const auto& t : group)
        if (mm.value(apply_transform(s, t)) != v) {
          c.failures.push_back("value not invariant on " + describe(spec) + " " + format_board(s));
          return;
        }
    }
  }
  c.note(std::to_string(sym_checks) + " symmetric positions");

  // Worker count changes neither solver results nor verdicts.
  for (const auto& spec : {VariantSpec::linear(14), VariantSpec::circular(12), VariantSpec::linear(12, {"SOSO"}),
                           VariantSpec::grid(2, 7), VariantSpec::restricted()}) {
    const auto one = Solver(spec, {.workers = 1, .distance = true}).solve(new_game(spec));
    const auto four = Solver(spec, {.workers = 4, .distance = true}).solve(new_game(spec));
    c.expect(one.outcome.value == four.outcome.value && one.outcome.distance == four.outcome.distance &&
                 one.principal_move == four.principal_move,
             "workers change the result on " + describe(spec));
  }
  struct Job {
    VariantSpec spec;
    std::string policy;
    Guarantee g;
  };
  for (const auto& j : {Job{VariantSpec::linear(12, {"SOSO"}), "soso_draw", {GuaranteeKind::AtLeastDraw, Player::Second}},
                        Job{VariantSpec::linear(9), "misere_all_o", {GuaranteeKind::AtLeastDraw, Player::Second}},
                        Job{VariantSpec::circular(7), "circular_sos", {GuaranteeKind::Win, Player::First}}}) {
    const auto a = verify_guarantee(j.spec, j.policy, j.g, {.workers = 1});
    const auto b = verify_guarantee(j.spec, j.policy, j.g, {.workers = 4});
    c.expect(a.holds == b.holds && a.leaves == b.leaves && a.counterexample == b.counterexample,
             "workers change the verdict of " + j.policy + " on " + describe(j.spec));
  }
}

void service_round_trip(Check& c) {
  SessionManager m;
  const json created = m.create({{"spec", spec_to_json(VariantSpec::linear(7))}, {"engine", "solver"}, {"engine_plays", "First"}});
  const std::string id = created["id"];
  json view = created;
  while (!view["status"]["terminal"].get<bool>()) {
    const auto board = parse_board(VariantSpec::linear(7), view["board"].get<std::string>());
    const Move m0 = candidate_moves(board).front();
    view = m.submit(id, {{"row", m0.cell.row + 1}, {"col", m0.cell.col + 1}, {"letter", std::string(1, to_char(m0.letter))}});
  }
  c.expect(view["status"]["kind"] == "WonBy(First)", "final status " + view["status"]["kind"].get<std::string>());

  const std::string h = m.create({{"spec", spec_to_json(VariantSpec::linear(4))}})["id"];
  m.submit(h, {{"row", 1}, {"col", 1}, {"letter", "S"}});
  m.submit(h, {{"row", 1}, {"col", 4}, {"letter", "S"}});
  const json hint = m.hint(h);
  c.expect(hint["losing_pairs"] == json::parse("[[[1,2],[1,3]]]"), "hint pairs " + hint["losing_pairs"].dump());
}

}  // namespace

int main() {
  std::cout << "acceptance suite\n";
  report(1, "SOS linear outcomes n=1..16", sos_linear_table);
  report(2, "SOO linear draws and soo_draw", soo_linear);
  report(3, "SSS-containing targets and sss_superstring_draw", sss_targets);
  report(4, "SOSO draws and soso_draw", soso);
  report(5, "SSSS-OOOO draws and ssss_oooo_draw", ssss_oooo);
  report(6, "misere SOS/SSS/SOO/SO", misere);
  report(7, "circular SOS outcomes n=3..14", circular);
  report(8, "two-row SOS outcomes and policies", two_rows);
  report(9, "expandable board bounded wins", expandable);
  report(10, "restricted 3x3 first-player win", restricted);
  report(11, "length-4 target evidence (no predictions)", conjectures);
  report(12, "property suites", properties);
  report(13, "service round trip and SEES hint", service_round_trip, false);
  std::cout << (12 - failed_primary) << "/12 primary criteria passed\n";
  return std::min(failed_primary, 100);
}
