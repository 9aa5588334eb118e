#include <algorithm>

#include <gtest/gtest.h>

#include "aiti_support.hpp"
#include "cti4ai/aiti/codec.hpp"
#include "cti4ai/aiti/validate.hpp"
#include "support.hpp"

using namespace cti4ai;
using namespace cti4ai::aiti;

namespace {

Bundle bundle_of(std::vector<AitiObject> objects) {
  return Bundle{Identifier("bundle--" + name_based_uuid("t")), std::move(objects)};
}

std::vector<std::string> codes_of(const std::vector<Diagnostic>& d, Severity s) {
  std::vector<std::string> out;
  for (const auto& x : d) {
    if (x.severity == s) out.push_back(x.code);
  }
  return out;
}

AitiObject clean_attack() {
  auto a = testkit::attack_object("fgm", "2024-01-01T00:00:00Z");
  std::get<AiAttackBody>(a.body).sophistication = "minimal";
  return a;
}

}  // namespace

TEST(Validate, EmptyBundleHasNoDiagnostics) {
  EXPECT_TRUE(validate(bundle_of({}), ValidationLevel::strict).empty());
  EXPECT_TRUE(validate(bundle_of({}), ValidationLevel::lenient).empty());
}

TEST(Validate, ListingOneIsValidLenientAndWarnsStrict) {
  const auto obj = parse_object(testkit::fixture_text("listing1.json"), Mode::paper_compat);
  EXPECT_TRUE(validate(bundle_of({obj}), ValidationLevel::lenient).empty());
  const auto strict = validate(bundle_of({obj}), ValidationLevel::strict);
  EXPECT_FALSE(has_errors(strict));
  EXPECT_EQ(codes_of(strict, Severity::warning),
            (std::vector<std::string>{"non-canonical-id", "open-vocabulary"}));
  EXPECT_EQ(strict[1].path, "/objects/0/sophistication");
}

TEST(Validate, DanglingReferenceStrictErrorLenientWarning) {
  const auto bundle = testkit::dangling_ref_bundle();
  const auto strict = validate(bundle, ValidationLevel::strict);
  ASSERT_EQ(strict.size(), 1u);
  EXPECT_EQ(strict[0].severity, Severity::error);
  EXPECT_EQ(strict[0].code, "dangling-ref");
  EXPECT_EQ(strict[0].path, "/objects/1/target_ref");
  const auto lenient = validate(bundle, ValidationLevel::lenient);
  ASSERT_EQ(lenient.size(), 1u);
  EXPECT_EQ(lenient[0].severity, Severity::warning);
  EXPECT_EQ(lenient[0].code, "dangling-ref");
}

TEST(Validate, UnknownAttackCategoryFailsBothLevels) {
  auto a = clean_attack();
  std::get<AiAttackBody>(a.body).attack_category = "teleportation";
  for (auto level : {ValidationLevel::strict, ValidationLevel::lenient}) {
    const auto d = validate(bundle_of({a}), level);
    EXPECT_EQ(codes_of(d, Severity::error), (std::vector<std::string>{"attack-category"}));
  }
}

TEST(Validate, AttackCategoryIsClosedOverExactlyFourValues) {
  const std::vector<std::pair<std::string, bool>> cases = {
      {"evasion", true},     {"poisoning", true},  {"model-replication", true},
      {"exploiting-traditional-software-flaws", true},
      {"Evasion", false},    {"inference", false}, {"extraction", false}, {"", false}};
  for (const auto& [category, known] : cases) {
    auto a = clean_attack();
    std::get<AiAttackBody>(a.body).attack_category = category;
    EXPECT_EQ(has_errors(validate(bundle_of({a}), ValidationLevel::lenient)), !known) << category;
  }
}

TEST(Validate, StructuralErrors) {
  auto a = clean_attack();
  auto dup = a;
  auto rel = testkit::relationship_object(a.id, a.id, "2024-01-01T00:00:00Z");
  auto late = clean_attack();
  late.id = name_based_id(ObjectKind::ai_attack, "late");
  late.modified = Timestamp::parse("2023-01-01T00:00:00Z");
  AitiObject sighting{ObjectKind::sighting,
                      name_based_id(ObjectKind::sighting, "s"),
                      Timestamp::parse("2024-01-01T00:00:00Z"),
                      std::nullopt,
                      SightingBody{a.id, 0, Timestamp::parse("2024-02-01T00:00:00Z"),
                                   Timestamp::parse("2024-01-01T00:00:00Z")},
                      {}};
  AitiObject personas{ObjectKind::affected_user_personas,
                      name_based_id(ObjectKind::affected_user_personas, "p"),
                      Timestamp::parse("2024-01-01T00:00:00Z"),
                      std::nullopt,
                      AffectedUserPersonasBody{{}, std::nullopt},
                      {}};
  AitiObject mismatch{ObjectKind::identity, name_based_id(ObjectKind::identity, "m"),
                      Timestamp::parse("2024-01-01T00:00:00Z"), std::nullopt,
                      AiUseCaseBody{"edge", std::nullopt}, {}};
  auto empty_type = testkit::relationship_object(a.id, late.id, "2024-01-01T00:00:00Z");
  std::get<RelationshipBody>(empty_type.body).relationship_type = "";

  const auto d = validate(bundle_of({a, dup, rel, late, sighting, personas, mismatch, empty_type}),
                          ValidationLevel::lenient);
  std::vector<std::pair<std::string, std::string>> got;
  for (const auto& x : d) {
    ASSERT_EQ(x.severity, Severity::error) << format(x);
    got.emplace_back(x.path, x.code);
  }
  EXPECT_EQ(got, (std::vector<std::pair<std::string, std::string>>{
                     {"/objects/1/id", "duplicate-id"},
                     {"/objects/2/target_ref", "self-reference"},
                     {"/objects/3/modified", "modified-before-created"},
                     {"/objects/4/count", "invalid-count"},
                     {"/objects/4/last_seen", "last-seen-before-first-seen"},
                     {"/objects/5/personas", "empty-list"},
                     {"/objects/6/type", "kind-mismatch"},
                     {"/objects/7/relationship_type", "empty-field"},
                 }));
}

TEST(Validate, OpenVocabularyWarnsOnlyWhenStrict) {
  AitiObject paradigms{ObjectKind::ai_paradigm_under_threat,
                       name_based_id(ObjectKind::ai_paradigm_under_threat, "p"),
                       Timestamp::parse("2024-01-01T00:00:00Z"),
                       std::nullopt,
                       AiParadigmUnderThreatBody{{"edge", "on-prem"}, std::nullopt},
                       {}};
  const auto strict = validate(bundle_of({paradigms}), ValidationLevel::strict);
  ASSERT_EQ(strict.size(), 1u);
  EXPECT_EQ(strict[0].code, "open-vocabulary");
  EXPECT_EQ(strict[0].path, "/objects/0/paradigms/1");
  EXPECT_TRUE(validate(bundle_of({paradigms}), ValidationLevel::lenient).empty());
}

TEST(Validate, DiagnosticsAreSortedAndDeterministic) {
  testkit::ObjectGen gen(9);
  std::vector<AitiObject> objects;
  for (int i = 0; i < 40; ++i) objects.push_back(gen.any());
  const auto bundle = bundle_of(objects);
  const auto d = validate(bundle, ValidationLevel::strict);
  EXPECT_EQ(d, validate(bundle, ValidationLevel::strict));
  EXPECT_TRUE(std::is_sorted(d.begin(), d.end(), [](const auto& a, const auto& b) {
    return std::tie(a.path, a.code) < std::tie(b.path, b.code);
  }));
  // Random refs never resolve, so strict sees errors that lenient demotes.
  EXPECT_FALSE(has_errors(validate(bundle, ValidationLevel::lenient)));
  EXPECT_TRUE(has_errors(d));
}

TEST(Validate, SingleObjectCheck) {
  auto a = clean_attack();
  EXPECT_TRUE(validate_object(a, ValidationLevel::strict).empty());
  std::get<AiAttackBody>(a.body).attack_category = "x";
  const auto d = validate_object(a, ValidationLevel::strict, "/obj");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].path, "/obj/attack_category");
  EXPECT_EQ(format(d[0]).rfind("error attack-category /obj/attack_category: ", 0), 0u);
}

TEST(Validate, LevelNames) {
  EXPECT_EQ(validation_level_from_string("strict"), ValidationLevel::strict);
  EXPECT_EQ(to_string(ValidationLevel::lenient), "lenient");
  EXPECT_ANY_THROW(validation_level_from_string("loose"));
}
