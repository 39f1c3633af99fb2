#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include "sos/http.hpp"

using namespace sos;

namespace {

json spec_json(const VariantSpec& spec) { return spec_to_json(spec); }

json move(int r, int c, const char* l) { return {{"row", r}, {"col", c}, {"letter", l}}; }

int status_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    return e.status();
  }
  return 200;
}

}  // namespace

TEST(Sessions, CreateAndPlay) {
  SessionManager m;
  const json v = m.create({{"spec", spec_json(VariantSpec::linear(4))}});
  EXPECT_EQ(v["id"].get<std::string>().size(), 32u);
  EXPECT_EQ(v["board"], "EEEE");
  EXPECT_EQ(v["to_move"], "first");
  EXPECT_EQ(v["engine"], "none");
  const std::string id = v["id"];
  m.submit(id, move(1, 1, "S"));
  const json after = m.submit(id, move(1, 4, "S"));
  EXPECT_EQ(after["board"], "SEES");
  EXPECT_EQ(after["history"], json::array({"1,1,S", "1,4,S"}));
  EXPECT_EQ(after["legal_mask"][0], json::array({false, true, true, false}));
  EXPECT_EQ(m.get(id), after);
  EXPECT_EQ(m.size(), 1u);
}

TEST(Sessions, HintOnSees) {
  SessionManager m;
  const std::string id = m.create({{"spec", spec_json(VariantSpec::linear(4))}})["id"];
  m.submit(id, move(1, 1, "S"));
  m.submit(id, move(1, 4, "S"));
  const json h = m.hint(id);
  EXPECT_EQ(h["value"], "SecondWins");
  EXPECT_EQ(h["losing_pairs"], json::parse("[[[1,2],[1,3]]]"));
  EXPECT_EQ(h["safe_mask"][0], json::array({false, false, false, false}));
  EXPECT_EQ(h["moves"].size(), 4u);
}

TEST(Sessions, FinishedGameReportsWinningWindow) {
  SessionManager m;
  const std::string id = m.create({{"spec", spec_json(VariantSpec::linear(3))}})["id"];
  m.submit(id, move(1, 1, "S"));
  m.submit(id, move(1, 2, "O"));
  const json v = m.submit(id, move(1, 3, "S"));
  EXPECT_EQ(v["status"]["kind"], "WonBy(First)");
  EXPECT_EQ(v["status"]["player"], "first");
  EXPECT_TRUE(v["status"]["terminal"]);
  EXPECT_EQ(v["winning_windows"], json::parse("[[[1,1],[1,2],[1,3]]]"));
  EXPECT_EQ(m.hint(id)["moves"], json::array());
  EXPECT_EQ(status_of([&] { m.submit(id, move(1, 1, "S")); }), 409);
}

TEST(Sessions, Errors) {
  SessionManager m;
  EXPECT_EQ(status_of([&] { m.create(json::object()); }), 400);
  EXPECT_EQ(status_of([&] { m.create({{"spec", {{"geometry", "Hexagonal"}}}}); }), 400);
  EXPECT_EQ(status_of([&] { m.create({{"spec", spec_json(VariantSpec::linear(5))}, {"engine", "soo_draw"}}); }), 400);
  EXPECT_EQ(status_of([&] {
              m.create({{"spec", spec_json(VariantSpec::linear(5))}, {"engine", "restricted_first"}, {"engine_plays", "First"}});
            }),
            400);
  EXPECT_EQ(status_of([&] {
              m.create({{"spec", spec_json(VariantSpec::linear(5))}, {"engine", "solver"}, {"engine_plays", "Nobody"}});
            }),
            400);
  EXPECT_EQ(status_of([&] { m.get("deadbeef"); }), 404);
  const std::string id = m.create({{"spec", spec_json(VariantSpec::linear(4))}})["id"];
  m.submit(id, move(1, 1, "S"));
  EXPECT_EQ(status_of([&] { m.submit(id, move(1, 1, "O")); }), 409);
  EXPECT_EQ(status_of([&] { m.submit(id, move(1, 9, "O")); }), 409);
  EXPECT_EQ(status_of([&] { m.submit(id, {{"row", 1}}); }), 400);
  EXPECT_EQ(status_of([&] { m.submit(id, move(1, 2, "X")); }), 400);
}

TEST(Sessions, EnginesMoveFirst) {
  SessionManager m;
  const json lin = m.create({{"spec", spec_json(VariantSpec::linear(7))}, {"engine", "solver"}, {"engine_plays", "First"}});
  EXPECT_EQ(lin["history"].size(), 1u);
  EXPECT_EQ(lin["to_move"], "second");
  EXPECT_EQ(lin["engine_plays"], "first");
  const json ex = m.create({{"spec", spec_json(VariantSpec::expandable())}, {"engine", "expandable_first"}, {"engine_plays", "First"}});
  EXPECT_EQ(ex["board"], "O/E");
  const json r = m.create({{"spec", spec_json(VariantSpec::restricted())}, {"engine", "solver"}, {"engine_plays", "First"}});
  EXPECT_EQ(r["forced_row"].is_number(), true);
  const json hint = m.hint(ex["id"]);
  EXPECT_TRUE(hint["bounded"]);
  EXPECT_EQ(hint["ply_bound"], 9);
}

// A policy engine keeps playing its own strategy against the human.
TEST(Sessions, PolicyEngineReplies) {
  SessionManager m;
  const json v = m.create({{"spec", spec_json(VariantSpec::linear(6, {"SOO"}))}, {"engine", "soo_draw"}, {"engine_plays", "First"}});
  EXPECT_EQ(v["board"], "EEEEES");
  const json after = m.submit(v["id"], move(1, 1, "O"));
  EXPECT_EQ(after["board"], "OEEESS");
  EXPECT_EQ(status_of([&] { m.submit(v["id"], move(1, 2, "O")); }), 200);
}

TEST(Sessions, JournalReplay) {
  const auto path = std::filesystem::temp_directory_path() / ("sos_journal_" + std::to_string(::getpid()) + ".jsonl");
  std::filesystem::remove(path);
  std::string a, b;
  json view_a, view_b;
  {
    SessionManager m({.journal = path.string()});
    a = m.create({{"spec", spec_json(VariantSpec::linear(7))}, {"engine", "solver"}, {"engine_plays", "First"}})["id"];
    m.submit(a, move(1, 1, "O"));
    view_a = m.get(a);
    b = m.create({{"spec", spec_json(VariantSpec::grid(2, 3))}})["id"];
    m.submit(b, move(2, 2, "S"));
    view_b = m.get(b);
  }
  SessionManager again({.journal = path.string()});
  EXPECT_EQ(again.size(), 2u);
  EXPECT_EQ(again.get(a), view_a);
  EXPECT_EQ(again.get(b), view_b);
  std::filesystem::remove(path);
}

TEST(Sessions, ConcurrentSessionsProperty) {
  SessionManager m;
  std::vector<std::thread> threads;
  std::atomic<int> finished{0};
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&] {
      const std::string id = m.create({{"spec", spec_json(VariantSpec::linear(5))}})["id"];
      for (int c = 1; c <= 5; ++c) {
        const json v = m.submit(id, move(1, c, "O"));
        if (v["status"]["terminal"]) break;
      }
      if (m.get(id)["status"]["kind"] == "Draw") ++finished;
    });
  for (auto& th : threads) th.join();
  EXPECT_EQ(finished.load(), 8);
  EXPECT_EQ(m.size(), 8u);
}

TEST(Http, RoutesOverLoopback) {
  SessionManager manager;
  httplib::Server server;
  register_routes(server, manager);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client cli("127.0.0.1", port);

  auto health = cli.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body)["status"], "ok");

  auto pol = cli.Get("/policies");
  ASSERT_TRUE(pol);
  EXPECT_EQ(json::parse(pol->body).size(), registry().size());

  auto created = cli.Post("/sessions", json{{"spec", spec_json(VariantSpec::linear(4))}}.dump(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["id"];

  auto moved = cli.Post("/sessions/" + id + "/moves", move(1, 1, "S").dump(), "application/json");
  ASSERT_TRUE(moved);
  EXPECT_EQ(moved->status, 200);
  EXPECT_EQ(json::parse(moved->body)["board"], "SEEE");

  auto clash = cli.Post("/sessions/" + id + "/moves", move(1, 1, "O").dump(), "application/json");
  ASSERT_TRUE(clash);
  EXPECT_EQ(clash->status, 409);
  EXPECT_TRUE(json::parse(clash->body).contains("error"));

  auto garbage = cli.Post("/sessions/" + id + "/moves", "{not json", "application/json");
  ASSERT_TRUE(garbage);
  EXPECT_EQ(garbage->status, 400);

  auto hint = cli.Get("/sessions/" + id + "/hint");
  ASSERT_TRUE(hint);
  EXPECT_EQ(hint->status, 200);
  EXPECT_TRUE(json::parse(hint->body).contains("safe_mask"));

  auto missing = cli.Get("/sessions/0123abcd");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  auto got = cli.Get("/sessions/" + id);
  ASSERT_TRUE(got);
  EXPECT_EQ(json::parse(got->body)["history"].size(), 1u);

  server.stop();
  th.join();
}
