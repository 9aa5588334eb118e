#include <benchmark/benchmark.h>

#include "cti4ai/aiti/codec.hpp"
#include "cti4ai/aiti/identifier.hpp"
#include "cti4ai/taxii/service.hpp"

using namespace cti4ai;
using namespace cti4ai::taxii;

namespace {

const std::string kCollection = "bench";
const std::optional<std::string> kToken = "t";

ServerConfig bench_config() {
  ServerConfig c;
  c.api_roots.push_back(ApiRootConfig{
      "aiti", "bench", std::nullopt,
      {CollectionConfig{kCollection, kCollection, std::nullopt, std::nullopt, true, true}}});
  c.tokens = {{"t", true, true}};
  return c;
}

nlohmann::json envelope(std::size_t n, aiti::UuidSource& ids) {
  nlohmann::json env{{"objects", nlohmann::json::array()}};
  for (std::size_t i = 0; i < n; ++i) {
    aiti::AitiObject obj{aiti::ObjectKind::ai_attack, aiti::new_id(aiti::ObjectKind::ai_attack, ids),
                         Timestamp::from_millis(1700000000000), std::nullopt,
                         aiti::AiAttackBody{"evasion", "pattern", std::nullopt, std::nullopt,
                                            std::nullopt, std::nullopt},
                         {}};
    env["objects"].push_back(nlohmann::json(aiti::to_json(obj, aiti::Mode::canonical)));
  }
  return env;
}

void BM_AddObjectsInMemory(benchmark::State& state) {
  TaxiiService svc(bench_config());
  aiti::UuidSource ids(3);
  const auto batch = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    const auto env = envelope(batch, ids);
    state.ResumeTiming();
    benchmark::DoNotOptimize(svc.add_objects("aiti", kCollection, env, kToken));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AddObjectsInMemory)->Arg(1)->Arg(100);

void BM_PaginateCollection(benchmark::State& state) {
  TaxiiService svc(bench_config());
  aiti::UuidSource ids(5);
  for (int i = 0; i < 10; ++i) svc.add_objects("aiti", kCollection, envelope(500, ids), kToken);
  for (auto _ : state) {
    ObjectQuery q;
    q.limit = static_cast<std::size_t>(state.range(0));
    std::size_t seen = 0;
    while (true) {
      const auto page = svc.get_objects("aiti", kCollection, q, kToken);
      seen += page.envelope["objects"].size();
      if (!page.envelope["more"].get<bool>()) break;
      q.next = page.envelope["next"].get<std::string>();
    }
    benchmark::DoNotOptimize(seen);
  }
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_PaginateCollection)->Arg(100)->Arg(1000);

}  // namespace
