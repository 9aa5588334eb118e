#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "aiti_support.hpp"
#include "cti4ai/aiti/codec.hpp"
#include "cti4ai/taxii/service.hpp"
#include "support.hpp"

using namespace cti4ai;
using namespace cti4ai::taxii;
using nlohmann::json;

namespace {

const std::string kRoot = "aiti";
const std::string kColId = "4f3c1d2e-8a6b-4c5d-9e0f-1a2b3c4d5e6f";
const std::optional<std::string> kWriter = "w";
const std::optional<std::string> kReader = "r";

ServerConfig test_config() {
  ServerConfig c;
  ApiRootConfig root{kRoot, "AI threat intelligence", std::nullopt, {}};
  root.collections.push_back(CollectionConfig{kColId, "ai-vulns", std::nullopt, "ai-vulns", true, true});
  root.collections.push_back(
      CollectionConfig{"ro", "read only", std::nullopt, std::nullopt, true, false});
  c.api_roots.push_back(root);
  c.tokens = {{"w", true, true}, {"r", true, false}};
  return c;
}

Clock stepping_clock() {
  auto t = std::make_shared<std::int64_t>(Timestamp::parse("2024-01-01T00:00:00Z").millis());
  return [t] { return Timestamp::from_millis(*t += 1000); };
}

json envelope(const std::vector<aiti::AitiObject>& objects,
              aiti::Mode mode = aiti::Mode::canonical) {
  json doc{{"objects", json::array()}};
  for (const auto& o : objects) doc["objects"].push_back(json(aiti::to_json(o, mode)));
  return doc;
}

int status_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const TaxiiError& e) {
    return e.status();
  }
  return 200;
}

std::vector<std::string> ids_in(const ObjectPage& page) {
  std::vector<std::string> out;
  for (const auto& o : page.envelope["objects"]) out.push_back(o["id"].get<std::string>());
  return out;
}

}  // namespace

TEST(Service, DiscoveryListsRoots) {
  TaxiiService svc(test_config(), stepping_clock());
  const auto d = svc.discovery();
  EXPECT_EQ(d["api_roots"], nlohmann::ordered_json::array({"/aiti/"}));
  EXPECT_EQ(d["default"], "/aiti/");

  TaxiiService empty(ServerConfig{}, stepping_clock());
  EXPECT_EQ(empty.discovery()["api_roots"], nlohmann::ordered_json::array());
  EXPECT_FALSE(empty.discovery().contains("default"));
}

TEST(Service, AuthenticationBeforeLookup) {
  TaxiiService svc(test_config(), stepping_clock());
  EXPECT_EQ(status_of([&] { svc.api_root("nope", std::nullopt); }), 401);
  EXPECT_EQ(status_of([&] { svc.collections("nope", "bogus"); }), 401);
  EXPECT_EQ(status_of([&] { svc.get_objects("nope", "nope", {}, std::nullopt); }), 401);
  EXPECT_EQ(status_of([&] { svc.add_objects("aiti", "ro", json{{"objects", json::array()}}, std::nullopt); }),
            401);
  EXPECT_EQ(status_of([&] { svc.api_root("nope", kReader); }), 404);
  EXPECT_EQ(status_of([&] { svc.get_objects(kRoot, "nope", {}, kReader); }), 404);
  EXPECT_EQ(status_of([&] { svc.get_object(kRoot, kColId, "missing", kReader); }), 404);
}

TEST(Service, WriteAuthorization) {
  TaxiiService svc(test_config(), stepping_clock());
  const auto env = envelope({testkit::attack_object("a", "2024-01-01T00:00:00Z")});
  EXPECT_EQ(status_of([&] { svc.add_objects(kRoot, kColId, env, kReader); }), 403);
  EXPECT_EQ(status_of([&] { svc.add_objects(kRoot, "ro", env, kWriter); }), 403);
  EXPECT_EQ(status_of([&] { svc.add_objects(kRoot, "ai-vulns", env, kWriter); }), 200);
  EXPECT_EQ(status_of([&] { svc.get_objects(kRoot, "ro", {}, kReader); }), 200);
}

TEST(Service, MalformedEnvelopeIs422) {
  TaxiiService svc(test_config(), stepping_clock());
  EXPECT_EQ(status_of([&] { svc.add_objects(kRoot, kColId, std::string_view("{oops"), kWriter); }),
            422);
  EXPECT_EQ(status_of([&] { svc.add_objects(kRoot, kColId, json{{"objects", 3}}, kWriter); }), 422);
  EXPECT_EQ(status_of([&] { svc.add_objects(kRoot, kColId, json::array(), kWriter); }), 422);
}

TEST(Service, StatusReportsPerObjectOutcome) {
  TaxiiService svc(test_config(), stepping_clock());
  auto env = envelope({testkit::attack_object("a", "2024-01-01T00:00:00Z"),
                       testkit::attack_object("b", "2024-01-01T00:00:00Z"),
                       testkit::attack_object("c", "2024-01-01T00:00:00Z")});
  const std::string bad_id = env["objects"][2]["id"];
  env["objects"][2].erase("created");
  const auto status = svc.add_objects(kRoot, kColId, env, kWriter);
  EXPECT_EQ(status["status"], "complete");
  EXPECT_EQ(status["success_count"], 2);
  EXPECT_EQ(status["failure_count"], 1);
  EXPECT_EQ(status["pending_count"], 0);
  EXPECT_EQ(status["failures"][0]["id"], bad_id);
  EXPECT_NE(status["failures"][0]["message"].get<std::string>().find("/objects/2/created"),
            std::string::npos);
  EXPECT_TRUE(aiti::is_canonical_uuid(status["id"].get<std::string>()));

  auto invalid = envelope({testkit::attack_object("d", "2024-01-01T00:00:00Z", "teleportation")});
  EXPECT_EQ(svc.add_objects(kRoot, kColId, invalid, kWriter)["failure_count"], 1);
  EXPECT_EQ(svc.get_objects(kRoot, kColId, {}, kReader).envelope["objects"].size(), 2u);
}

TEST(Service, PaginationFollowsCursor) {
  TaxiiService svc(test_config(), stepping_clock());
  std::vector<aiti::AitiObject> objects;
  for (int i = 0; i < 3; ++i) {
    objects.push_back(testkit::attack_object("o" + std::to_string(i), "2024-01-01T00:00:00Z"));
    svc.add_objects(kRoot, kColId, envelope({objects.back()}), kWriter);
  }
  ObjectQuery q;
  q.limit = 2;
  const auto first = svc.get_objects(kRoot, kColId, q, kReader);
  EXPECT_EQ(first.envelope["more"], true);
  EXPECT_EQ(ids_in(first), (std::vector<std::string>{objects[0].id.str(), objects[1].id.str()}));
  q.next = first.envelope["next"].get<std::string>();
  const auto second = svc.get_objects(kRoot, kColId, q, kReader);
  EXPECT_EQ(second.envelope["more"], false);
  EXPECT_FALSE(second.envelope.contains("next"));
  EXPECT_EQ(ids_in(second), std::vector<std::string>{objects[2].id.str()});

  ObjectQuery after;
  after.added_after = *first.last_added;
  EXPECT_EQ(ids_in(svc.get_objects(kRoot, kColId, after, kReader)),
            std::vector<std::string>{objects[2].id.str()});
}

TEST(Service, BadQueryParameters) {
  TaxiiService svc(test_config(), stepping_clock());
  ObjectQuery q;
  q.next = "abc";
  EXPECT_EQ(status_of([&] { svc.get_objects(kRoot, kColId, q, kReader); }), 400);
  q.next = "-1";
  EXPECT_EQ(status_of([&] { svc.get_objects(kRoot, kColId, q, kReader); }), 400);
  q = {};
  q.limit = 0;
  EXPECT_EQ(status_of([&] { svc.get_objects(kRoot, kColId, q, kReader); }), 400);
}

TEST(Service, TypeFiltersAcceptBothSpellings) {
  TaxiiService svc(test_config(), stepping_clock());
  const auto a = testkit::attack_object("a", "2024-01-01T00:00:00Z");
  const auto p = testkit::attack_object("p", "2024-01-01T00:00:00Z", "poisoning");
  const auto r = testkit::relationship_object(a.id, p.id, "2024-01-01T00:00:00Z");
  svc.add_objects(kRoot, kColId, envelope({a, p, r}), kWriter);

  auto count = [&](std::vector<std::string> types) {
    ObjectQuery q;
    q.match_type = std::move(types);
    return svc.get_objects(kRoot, kColId, q, kReader).envelope["objects"].size();
  };
  EXPECT_EQ(count({"ai-attack"}), 2u);
  EXPECT_EQ(count({"AI Attack-Evasion"}), 1u);
  EXPECT_EQ(count({"AI Attack-Poisoning", "relationship"}), 2u);
  EXPECT_EQ(count({"Relationship"}), 1u);
  EXPECT_EQ(count({"spaceship"}), 0u);

  ObjectQuery q;
  q.match_id = {p.id.str(), "unknown"};
  EXPECT_EQ(ids_in(svc.get_objects(kRoot, kColId, q, kReader)), std::vector<std::string>{p.id.str()});
}

TEST(Service, OnlyLatestVersionIsListed) {
  TaxiiService svc(test_config(), stepping_clock());
  auto a = testkit::attack_object("a", "2024-01-01T00:00:00Z");
  svc.add_objects(kRoot, kColId, envelope({a}), kWriter);
  a.modified = Timestamp::parse("2024-02-01T00:00:00Z");
  svc.add_objects(kRoot, kColId, envelope({a}), kWriter);
  const auto page = svc.get_objects(kRoot, kColId, {}, kReader);
  ASSERT_EQ(page.envelope["objects"].size(), 1u);
  EXPECT_EQ(page.envelope["objects"][0]["modified"], "2024-02-01T00:00:00.000Z");
  EXPECT_EQ(svc.get_object(kRoot, kColId, a.id.str(), kReader).envelope["objects"][0]["modified"],
            "2024-02-01T00:00:00.000Z");
  // Resubmitting the same version changes nothing.
  const auto status = svc.add_objects(kRoot, kColId, envelope({a}), kWriter);
  EXPECT_EQ(status["success_count"], 1);
  EXPECT_EQ(svc.get_objects(kRoot, kColId, {}, kReader).envelope["objects"].size(), 1u);
}

TEST(Service, ObjectByIdKeepsReceivedSpelling) {
  TaxiiService svc(test_config(), stepping_clock());
  const auto listing = json::parse(testkit::fixture_text("listing1.json"));
  const auto status =
      svc.add_objects(kRoot, kColId, json{{"objects", json::array({listing})}}, kWriter);
  ASSERT_EQ(status["success_count"], 1);
  const auto page = svc.get_object(kRoot, kColId, "exampleFGM_Resnet-50_CIFAR10", kReader);
  EXPECT_EQ(json(page.envelope["objects"][0]), listing);
  const auto listed = svc.get_objects(kRoot, kColId, {}, kReader);
  EXPECT_EQ(listed.envelope["objects"][0]["type"], "ai-attack");
}

TEST(Service, CollectionLookupByAlias) {
  TaxiiService svc(test_config(), stepping_clock());
  EXPECT_EQ(svc.collection(kRoot, "ai-vulns", kReader)["id"], kColId);
  EXPECT_EQ(svc.collection(kRoot, kColId, kReader)["alias"], "ai-vulns");
  const auto list = svc.collections(kRoot, kReader);
  ASSERT_EQ(list["collections"].size(), 2u);
  EXPECT_EQ(list["collections"][1]["can_write"], false);
}

TEST(Service, PaginationIsCompletePropertyAgainstBruteForce) {
  testkit::Gen gen(21);
  for (int trial = 0; trial < 30; ++trial) {
    TaxiiService svc(test_config(), stepping_clock());
    testkit::ObjectGen objects(100 + trial);
    const std::size_t batches = 1 + gen.index(6);
    for (std::size_t b = 0; b < batches; ++b) {
      std::vector<aiti::AitiObject> batch;
      for (std::size_t i = gen.index(5); i > 0; --i) batch.push_back(objects.any());
      svc.add_objects(kRoot, kColId, envelope(batch), kWriter);
    }
    // Brute force: everything in one oversized page.
    ObjectQuery all;
    all.limit = kMaxPageLimit;
    const auto everything = svc.get_objects(kRoot, kColId, all, kReader);
    const auto expected = ids_in(everything);

    ObjectQuery q;
    q.limit = 1 + gen.index(4);
    if (gen.coin() && !expected.empty()) {
      q.match_type = {everything.envelope["objects"][0]["type"].get<std::string>()};
    }
    std::vector<std::string> expected_filtered;
    for (const auto& o : everything.envelope["objects"]) {
      if (q.match_type.empty() || o["type"] == q.match_type[0]) {
        expected_filtered.push_back(o["id"].get<std::string>());
      }
    }

    std::vector<std::string> paged;
    std::optional<Timestamp> last;
    for (int guard = 0; guard < 1000; ++guard) {
      const auto page = svc.get_objects(kRoot, kColId, q, kReader);
      const auto ids = ids_in(page);
      ASSERT_LE(ids.size(), *q.limit);
      if (page.first_added && last) ASSERT_GT(*page.first_added, *last);
      if (page.last_added) last = page.last_added;
      paged.insert(paged.end(), ids.begin(), ids.end());
      if (!page.envelope["more"].get<bool>()) break;
      ASSERT_FALSE(ids.empty());
      q.next = page.envelope["next"].get<std::string>();
    }
    EXPECT_EQ(paged, expected_filtered) << "trial " << trial;
    EXPECT_EQ(std::set<std::string>(paged.begin(), paged.end()).size(), paged.size());
  }
}

TEST(Service, ErrorBody) {
  const TaxiiError e(403, "nope");
  EXPECT_EQ(json(e.to_json()), (json{{"title", "nope"}, {"http_status", "403"}}));
}
