// Core value types for S/O placement games: letters, cells, players, moves,
// variant rules and board states.
//
// Coordinates are 0-based internally. Text and JSON interfaces use 1-based
// rows and columns; the conversion happens at the codec / service boundary.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sos {

class Error : public std::runtime_error {
 public:
  enum class Kind { InvalidSpec, InvalidBoard, IllegalMove, Terminal, Unsupported, Parse };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

enum class Letter : std::uint8_t { S = 1, O = 2 };

// Empty, S and O share the Letter encoding so a letter converts to a cell by cast.
enum class Cell : std::uint8_t { Empty = 0, S = 1, O = 2 };

constexpr Letter swapped(Letter l) noexcept { return l == Letter::S ? Letter::O : Letter::S; }
constexpr Cell to_cell(Letter l) noexcept { return static_cast<Cell>(l); }
constexpr char to_char(Letter l) noexcept { return l == Letter::S ? 'S' : 'O'; }
constexpr char to_char(Cell c) noexcept {
  return c == Cell::Empty ? 'E' : (c == Cell::S ? 'S' : 'O');
}

inline Letter letter_from_char(char ch) {
  if (ch == 'S' || ch == 's') return Letter::S;
  if (ch == 'O' || ch == 'o') return Letter::O;
  throw Error(Error::Kind::Parse, std::string("not a letter: '") + ch + "'");
}

enum class Player : std::uint8_t { First = 0, Second = 1 };

constexpr Player opponent(Player p) noexcept {
  return p == Player::First ? Player::Second : Player::First;
}
constexpr std::string_view to_string(Player p) noexcept {
  return p == Player::First ? "first" : "second";
}

struct Coord {
  int row = 0;
  int col = 0;

  friend constexpr bool operator==(const Coord&, const Coord&) = default;
  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
};

struct Move {
  Coord cell;
  Letter letter = Letter::S;

  friend constexpr bool operator==(const Move&, const Move&) = default;
  // (row, col, S < O) is the deterministic tie-break order everywhere.
  friend constexpr auto operator<=>(const Move& a, const Move& b) {
    if (auto c = a.cell <=> b.cell; c != 0) return c;
    return a.letter <=> b.letter;
  }
};

// 1-based "r,c,L" rendering used by the CLI and logs.
inline std::string to_string(const Move& m) {
  return std::to_string(m.cell.row + 1) + "," + std::to_string(m.cell.col + 1) + "," +
         to_char(m.letter);
}

inline Move parse_move(std::string_view text) {
  auto bad = [&] { return Error(Error::Kind::Parse, "move must look like r,c,L: '" + std::string(text) + "'"); };
  auto c1 = text.find(',');
  if (c1 == std::string_view::npos) throw bad();
  auto c2 = text.find(',', c1 + 1);
  if (c2 == std::string_view::npos || c2 + 2 != text.size()) throw bad();
  try {
    int r = std::stoi(std::string(text.substr(0, c1)));
    int c = std::stoi(std::string(text.substr(c1 + 1, c2 - c1 - 1)));
    return Move{{r - 1, c - 1}, letter_from_char(text[c2 + 1])};
  } catch (const std::logic_error&) {
    throw bad();
  }
}

// ---------------------------------------------------------------------------
// Pattern sets

class PatternSet {
 public:
  PatternSet() = default;
  PatternSet(std::initializer_list<std::string> patterns) : PatternSet(std::vector<std::string>(patterns)) {}
  explicit PatternSet(std::vector<std::string> patterns) : patterns_(std::move(patterns)) {
    if (patterns_.empty()) throw Error(Error::Kind::InvalidSpec, "pattern set is empty");
    std::set<std::string> seen;
    for (auto& p : patterns_) {
      for (char& ch : p) ch = to_char(letter_from_char(ch));
      if (p.size() < 2) throw Error(Error::Kind::InvalidSpec, "pattern '" + p + "' shorter than 2");
      if (!seen.insert(p).second) throw Error(Error::Kind::InvalidSpec, "duplicate pattern '" + p + "'");
    }
  }

  const std::vector<std::string>& patterns() const noexcept { return patterns_; }
  std::size_t size() const noexcept { return patterns_.size(); }
  const std::string& operator[](std::size_t i) const { return patterns_[i]; }

  std::size_t max_length() const noexcept {
    std::size_t m = 0;
    for (const auto& p : patterns_) m = std::max(m, p.size());
    return m;
  }

  std::set<std::string> as_set() const { return {patterns_.begin(), patterns_.end()}; }

  bool closed_under_reversal() const {
    auto s = as_set();
    return std::all_of(patterns_.begin(), patterns_.end(), [&](const std::string& p) {
      return s.count(std::string(p.rbegin(), p.rend())) != 0;
    });
  }

  bool closed_under_letter_swap() const {
    auto s = as_set();
    return std::all_of(patterns_.begin(), patterns_.end(), [&](const std::string& p) {
      std::string q = p;
      for (char& ch : q) ch = (ch == 'S' ? 'O' : 'S');
      return s.count(q) != 0;
    });
  }

  std::string joined(char sep = ',') const {
    std::string out;
    for (const auto& p : patterns_) {
      if (!out.empty()) out += sep;
      out += p;
    }
    return out;
  }

  friend bool operator==(const PatternSet&, const PatternSet&) = default;

 private:
  std::vector<std::string> patterns_;
};

// ---------------------------------------------------------------------------
// Variant rules

enum class GeometryKind { Linear, Circular, Grid, Expandable, Restricted3x3 };
enum class Goal { Normal, Misere };
enum class Orientation { Forward, Bidirectional };
enum class StuckRule { Draw, Pass };

enum Direction : unsigned {
  kRow = 1u << 0,
  kColumn = 1u << 1,
  kDiagonal = 1u << 2,
  kAntiDiagonal = 1u << 3,
  kAllDirections = kRow | kColumn | kDiagonal | kAntiDiagonal,
};

struct VariantSpec {
  GeometryKind geometry = GeometryKind::Linear;
  int n = 0;      // Linear, Circular
  int rows = 0;   // Grid
  int cols = 0;   // Grid
  PatternSet patterns{"SOS"};
  Goal goal = Goal::Normal;
  unsigned directions = kRow;
  Orientation orientation = Orientation::Forward;
  StuckRule stuck_rule = StuckRule::Draw;

  static VariantSpec linear(int n, PatternSet patterns = {"SOS"}, Goal goal = Goal::Normal) {
    VariantSpec s;
    s.geometry = GeometryKind::Linear;
    s.n = n;
    s.patterns = std::move(patterns);
    s.goal = goal;
    s.validate();
    return s;
  }

  static VariantSpec circular(int n, PatternSet patterns = {"SOS"}, Goal goal = Goal::Normal) {
    VariantSpec s;
    s.geometry = GeometryKind::Circular;
    s.n = n;
    s.patterns = std::move(patterns);
    s.goal = goal;
    s.validate();
    return s;
  }

  static VariantSpec grid(int rows, int cols, PatternSet patterns = {"SOS"}, Goal goal = Goal::Normal) {
    VariantSpec s;
    s.geometry = GeometryKind::Grid;
    s.rows = rows;
    s.cols = cols;
    s.patterns = std::move(patterns);
    s.goal = goal;
    s.directions = kAllDirections;
    s.orientation = Orientation::Bidirectional;
    s.validate();
    return s;
  }

  static VariantSpec expandable(PatternSet patterns = {"SOS"}) {
    VariantSpec s;
    s.geometry = GeometryKind::Expandable;
    s.patterns = std::move(patterns);
    s.directions = kAllDirections;
    s.orientation = Orientation::Bidirectional;
    s.validate();
    return s;
  }

  static VariantSpec restricted(StuckRule rule = StuckRule::Draw, PatternSet patterns = {"SOS"}) {
    VariantSpec s;
    s.geometry = GeometryKind::Restricted3x3;
    s.rows = s.cols = 3;
    s.patterns = std::move(patterns);
    s.directions = kAllDirections;
    s.orientation = Orientation::Bidirectional;
    s.stuck_rule = rule;
    s.validate();
    return s;
  }

  bool bounded() const noexcept { return geometry != GeometryKind::Expandable; }

  // Number of cells of the (initial) board.
  int cell_count() const noexcept {
    switch (geometry) {
      case GeometryKind::Linear:
      case GeometryKind::Circular: return n;
      case GeometryKind::Grid: return rows * cols;
      case GeometryKind::Restricted3x3: return 9;
      case GeometryKind::Expandable: return 1;
    }
    return 0;
  }

  int initial_rows() const noexcept {
    switch (geometry) {
      case GeometryKind::Linear:
      case GeometryKind::Circular:
      case GeometryKind::Expandable: return 1;
      case GeometryKind::Grid: return rows;
      case GeometryKind::Restricted3x3: return 3;
    }
    return 0;
  }

  int initial_cols() const noexcept {
    switch (geometry) {
      case GeometryKind::Linear:
      case GeometryKind::Circular: return n;
      case GeometryKind::Grid: return cols;
      case GeometryKind::Restricted3x3: return 3;
      case GeometryKind::Expandable: return 1;
    }
    return 0;
  }

  void validate() const {
    auto fail = [](const std::string& why) { throw Error(Error::Kind::InvalidSpec, why); };
    if (patterns.size() == 0) fail("pattern set is empty");
    const int longest = static_cast<int>(patterns.max_length());
    switch (geometry) {
      case GeometryKind::Linear:
        if (n < 1) fail("linear board needs n >= 1");
        if (directions != kRow) fail("linear board only has the row direction");
        break;
      case GeometryKind::Circular:
        if (n < 1) fail("circular board needs n >= 1");
        if (n < longest) fail("circular board of size " + std::to_string(n) + " is shorter than pattern length " + std::to_string(longest));
        if (directions != kRow) fail("circular board only has the row direction");
        break;
      case GeometryKind::Grid:
        if (rows < 1 || cols < 1) fail("grid needs rows, cols >= 1");
        if (directions == 0 || (directions & ~kAllDirections)) fail("grid direction set is invalid");
        break;
      case GeometryKind::Expandable:
        if (directions == 0 || (directions & ~kAllDirections)) fail("expandable direction set is invalid");
        break;
      case GeometryKind::Restricted3x3:
        if (rows != 3 || cols != 3) fail("restricted placement is played on 3x3");
        if (directions != kAllDirections) fail("restricted placement uses all four directions");
        break;
    }
    if (stuck_rule != StuckRule::Draw && geometry != GeometryKind::Restricted3x3)
      fail("stuck_rule only applies to restricted placement");
  }

  friend bool operator==(const VariantSpec&, const VariantSpec&) = default;
};

// ---------------------------------------------------------------------------
// Board state

struct BoardState {
  int rows = 1;
  int cols = 1;
  std::vector<Cell> cells;  // row-major
  int move_count = 0;
  std::optional<int> forced_row;  // Restricted3x3 only
  int passes = 0;                 // Restricted3x3 with StuckRule::Pass only

  int index(Coord c) const noexcept { return c.row * cols + c.col; }
  Coord coord(int index) const noexcept { return {index / cols, index % cols}; }
  bool inside(Coord c) const noexcept { return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols; }
  Cell at(Coord c) const { return cells[static_cast<std::size_t>(index(c))]; }
  int size() const noexcept { return rows * cols; }

  int empty_count() const noexcept {
    return static_cast<int>(std::count(cells.begin(), cells.end(), Cell::Empty));
  }

  Player to_move() const noexcept {
    return (move_count + passes) % 2 == 0 ? Player::First : Player::Second;
  }

  friend bool operator==(const BoardState&, const BoardState&) = default;
};

// ---------------------------------------------------------------------------
// Results

struct GameStatus {
  enum class Kind { InProgress, Won, Draw, Stuck };
  Kind kind = Kind::InProgress;
  Player player = Player::First;  // winner for Won, stuck player for Stuck

  static GameStatus in_progress() { return {}; }
  static GameStatus won_by(Player p) { return {Kind::Won, p}; }
  static GameStatus draw() { return {Kind::Draw, Player::First}; }
  static GameStatus stuck(Player p) { return {Kind::Stuck, p}; }

  bool terminal() const noexcept { return kind != Kind::InProgress; }

  friend bool operator==(const GameStatus& a, const GameStatus& b) {
    if (a.kind != b.kind) return false;
    return (a.kind == Kind::Won || a.kind == Kind::Stuck) ? a.player == b.player : true;
  }
};

inline std::string to_string(const GameStatus& s) {
  switch (s.kind) {
    case GameStatus::Kind::InProgress: return "InProgress";
    case GameStatus::Kind::Won: return s.player == Player::First ? "WonBy(First)" : "WonBy(Second)";
    case GameStatus::Kind::Draw: return "Draw";
    case GameStatus::Kind::Stuck: return s.player == Player::First ? "Stuck(First)" : "Stuck(Second)";
  }
  return "?";
}

enum class OutcomeValue { FirstWins, SecondWins, Draw };

inline std::string_view to_string(OutcomeValue v) {
  switch (v) {
    case OutcomeValue::FirstWins: return "FirstWins";
    case OutcomeValue::SecondWins: return "SecondWins";
    case OutcomeValue::Draw: return "Draw";
  }
  return "?";
}

inline OutcomeValue outcome_from_string(std::string_view s) {
  if (s == "FirstWins" || s == "F") return OutcomeValue::FirstWins;
  if (s == "SecondWins" || s == "S") return OutcomeValue::SecondWins;
  if (s == "Draw" || s == "D") return OutcomeValue::Draw;
  throw Error(Error::Kind::Parse, "unknown outcome '" + std::string(s) + "'");
}

constexpr OutcomeValue win_for(Player p) noexcept {
  return p == Player::First ? OutcomeValue::FirstWins : OutcomeValue::SecondWins;
}

struct Outcome {
  OutcomeValue value = OutcomeValue::Draw;
  std::optional<int> distance;  // plies to the end under optimal play

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

}  // namespace sos
