#include <gtest/gtest.h>

#include <random>

#include "sos/codec.hpp"
#include "sos/spec_io.hpp"
#include "sos/strategies.hpp"

using namespace sos;

namespace {

Move mv(int r, int c, char l) { return {{r - 1, c - 1}, letter_from_char(l)}; }

Move first_choice(const std::string& name, const VariantSpec& spec, const std::string& board) {
  const BoardState s = parse_board(spec, board);
  Policy p = make_policy(name, s.to_move(), spec);
  return policy_move(p, spec, s);
}

// Whether any filling of the empty cells spells a pattern starting left of `f`.
bool occurrence_before(const BoardState& s, const PatternSet& pats, int f) {
  std::vector<int> holes;
  for (int i = 0; i < s.cols; ++i)
    if (s.cells[static_cast<std::size_t>(i)] == Cell::Empty) holes.push_back(i);
  for (unsigned mask = 0; mask < (1u << holes.size()); ++mask) {
    std::string row;
    for (Cell c : s.cells) row += to_char(c);
    for (std::size_t k = 0; k < holes.size(); ++k) row[static_cast<std::size_t>(holes[k])] = (mask >> k) & 1 ? 'O' : 'S';
    for (const auto& p : pats.patterns()) {
      const auto at = row.find(p);
      if (at != std::string::npos && static_cast<int>(at) < f) return true;
    }
  }
  return false;
}

}  // namespace

TEST(Registry, NamesAndDefaults) {
  EXPECT_EQ(registry().size(), 15u);
  EXPECT_EQ(find_policy("soo_draw").guarantee, GuaranteeKind::AtLeastDraw);
  EXPECT_EQ(find_policy("expandable_first").role, PolicyRole::First);
  EXPECT_THROW(find_policy("no_such_policy"), Error);
  for (const auto& d : registry()) {
    const auto spec = default_spec_for(d.name, 8);
    const Player role = d.role == PolicyRole::Second ? Player::Second : Player::First;
    if (d.name == "sos_designated_winner" || d.name == "circular_sos") continue;
    EXPECT_NO_THROW(make_policy(d.name, role, spec)) << d.name;
  }
}

TEST(Policies, OpeningMoves) {
  EXPECT_EQ(first_choice("soo_draw", VariantSpec::linear(4, {"SOO"}), "EEEE"), mv(1, 4, 'S'));
  EXPECT_EQ(first_choice("soo_draw", VariantSpec::linear(4, {"SOO"}), "SOEE"), mv(1, 3, 'O'));
  EXPECT_EQ(first_choice("sos_designated_winner", VariantSpec::linear(7), "EEEEEEE"), mv(1, 4, 'S'));
  EXPECT_EQ(first_choice("misere_all_o", VariantSpec::linear(5, {"SSS"}, Goal::Misere), "EEEEE"), mv(1, 1, 'O'));
  EXPECT_EQ(first_choice("expandable_first", VariantSpec::expandable(), "E"), mv(1, 1, 'O'));
  EXPECT_EQ(first_choice("restricted_first", VariantSpec::restricted(), "EEE/EEE/EEE"), mv(1, 1, 'S'));
}

TEST(Policies, DesignatedWinnerCompletesAndPunishesSees) {
  const auto lin = VariantSpec::linear(9);
  EXPECT_EQ(first_choice("sos_designated_winner", lin, "SOEEEEEEE"), mv(1, 3, 'S'));
}

TEST(Policies, CompatibilityErrors) {
  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return Error::Kind::Parse;  // sentinel: nothing thrown
  };
  EXPECT_EQ(kind([] { make_policy("restricted_first", Player::Second, VariantSpec::restricted()); }), Error::Kind::Unsupported);
  EXPECT_EQ(kind([] { make_policy("soso_draw", Player::First, VariantSpec::circular(8, {"SOSO"})); }), Error::Kind::Unsupported);
  EXPECT_EQ(kind([] { make_policy("sos_designated_winner", Player::Second, VariantSpec::linear(7)); }), Error::Kind::Unsupported);
  EXPECT_EQ(kind([] { make_policy("sos_designated_winner", Player::Second, VariantSpec::linear(16)); }), Error::Kind::Parse);
  EXPECT_EQ(kind([] { make_policy("circular_sos", Player::Second, VariantSpec::circular(9)); }), Error::Kind::Unsupported);
  EXPECT_EQ(kind([] { make_policy("two_row_copy", Player::First); }), Error::Kind::Unsupported);
  EXPECT_EQ(kind([] { make_policy("nonexistent", Player::First); }), Error::Kind::Unsupported);
}

TEST(Policies, RejectsForeignTurnAndDesync) {
  const auto spec = VariantSpec::linear(8, {"SOSO"});
  Policy p = make_policy("soso_draw", Player::First, spec);
  auto s = new_game(spec);
  const Move m = policy_move(p, spec, s);
  s = apply_move(s, spec, m).first;
  try {
    policy_move(p, spec, s);
    FAIL() << "played out of turn";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), Error::Kind::IllegalMove);
  }
  // Three new letters cannot come from one reply.
  BoardState twice = s;
  int placed = 0;
  for (int i = 0; i < twice.size() && placed < 3; ++i)
    if (twice.cells[static_cast<std::size_t>(i)] == Cell::Empty) {
      twice.cells[static_cast<std::size_t>(i)] = Cell::O;
      ++placed;
    }
  twice.move_count += 3;
  try {
    policy_move(p, spec, twice);
    FAIL() << "accepted three new letters";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), Error::Kind::InvalidBoard);
  }
}

TEST(Purge, Examples) {
  const PatternSet soso{"SOSO"};
  const auto lin = VariantSpec::linear(6, soso);
  EXPECT_EQ(purge_step({0}, parse_board(lin, "OOEEEE"), soso).index, 2);
  EXPECT_EQ(purge_step({0}, parse_board(lin, "SSOEEE"), soso).index, 0);
  EXPECT_EQ(purge_step({0}, parse_board(lin, "OOSSEE"), soso).index, 4);  // window at 3 runs off the board
  EXPECT_EQ(purge_step({0}, parse_board(VariantSpec::linear(7, soso), "OOSSEEE"), soso).index, 2);
  EXPECT_EQ(purge_step({0}, parse_board(lin, "EOOEEE"), soso).index, 0);
  EXPECT_EQ(purge_step({2}, parse_board(lin, "EEOOEE"), soso).index, 4);
  const auto lin4 = VariantSpec::linear(4, soso);
  EXPECT_EQ(purge_step({0}, parse_board(lin4, "OOSO"), soso).index, 4);
}

// No completion of the board can place a pattern left of the frontier.
TEST(Purge, FrontierIsSoundProperty) {
  for (const PatternSet& pats : {PatternSet{"SOSO"}, PatternSet{"SOS"}, PatternSet{"SSSS", "OOOO"}}) {
    const int n = 8;
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    int advanced = 0;
    for (long code = 0; code < total; ++code) {
      BoardState s;
      s.rows = 1;
      s.cols = n;
      long x = code;
      for (int i = 0; i < n; ++i, x /= 3) s.cells.push_back(static_cast<Cell>(x % 3));
      const int f = purge_step({0}, s, pats).index;
      if (f == 0) continue;
      ++advanced;
      ASSERT_FALSE(occurrence_before(s, pats, f)) << pats.joined() << " " << format_board(s) << " f=" << f;
    }
    EXPECT_GT(advanced, 0);
  }
}

// Against random opponents every policy answers with a legal move, and the
// same game replayed gives the same choices.
TEST(Policies, LegalAndDeterministicProperty) {
  for (const auto& d : registry()) {
    VariantSpec spec = default_spec_for(d.name, d.name == "sos_designated_winner" ? 9 : 7);
    const Player role = d.role == PolicyRole::Second ? Player::Second : Player::First;
    if (d.name == "circular_sos") spec = VariantSpec::circular(9);
    for (unsigned seed = 1; seed <= 15; ++seed) {
      std::vector<Move> runs[2];
      for (auto& moves : runs) {
        std::mt19937 rng(seed);
        Policy p = make_policy(d.name, role, spec);
        BoardState s = new_game(spec);
        GameStatus st = game_status(s, spec);
        for (int ply = 0; ply < 24 && !st.terminal(); ++ply) {
          Move m;
          if (s.to_move() == role) {
            m = policy_move(p, spec, s);
            ASSERT_EQ(illegal_reason(s, m), "") << d.name << " " << format_board(s) << " " << to_string(m);
            moves.push_back(m);
          } else {
            const auto legal = legal_moves(s, spec);
            m = legal[rng() % legal.size()];
          }
          std::tie(s, st) = apply_move(s, spec, m);
        }
      }
      ASSERT_EQ(runs[0], runs[1]) << d.name << " seed " << seed;
    }
  }
}

TEST(Policies, MemoryKeyTracksHistoryOnlyWhenRead) {
  const auto spec = VariantSpec::linear(7, {"SOO"});
  Policy p = make_policy("soo_draw", Player::First, spec);
  policy_move(p, spec, new_game(spec));
  EXPECT_FALSE(p.reads_history());
  EXPECT_EQ(p.memory_key().find('/'), std::string::npos);
  EXPECT_EQ(p.memory_key(), "0:0");
  const auto soso = VariantSpec::linear(7, {"SOSO"});
  Policy q = make_policy("soso_draw", Player::First, soso);
  policy_move(q, soso, new_game(soso));
  EXPECT_TRUE(q.reads_history());
  EXPECT_NE(q.memory_key(), "0:0");
}
