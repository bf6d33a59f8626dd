#include <benchmark/benchmark.h>

#include "echelon/harness.hpp"
#include "echelon/mock_agents.hpp"
#include "echelon/prompt.hpp"

namespace {

using namespace echelon;

void BM_EnvironmentStep(benchmark::State& state) {
  Environment env(preset_scenario("variable"));
  const ActionVector orders{4, 4, 4, 4};
  std::uint64_t seed = 0;
  env.reset(seed);
  for (auto _ : state) {
    if (env.done()) {
      state.PauseTiming();
      env.reset(++seed);
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(env.step(orders));
  }
}
BENCHMARK(BM_EnvironmentStep);

void BM_HeuristicEpisode(benchmark::State& state) {
  const auto config = preset_scenario("variable");
  auto controller = preset_spec("base-stock").make(config);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_episode(config, *controller, seed++).episode_reward);
}
BENCHMARK(BM_HeuristicEpisode);

void BM_MockLlmEpisode(benchmark::State& state) {
  const auto config = preset_scenario("variable");
  auto controller =
      llm_spec("mock", std::make_shared<MockClient>(preset_responder("base-stock")), AgentConfig{}).make(config);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_episode(config, *controller, seed++).episode_reward);
}
BENCHMARK(BM_MockLlmEpisode);

void BM_RenderPrompt(benchmark::State& state) {
  const auto config = preset_scenario("seasonal");
  const auto obs = observe(config, initial_state(config), 2);
  const PromptFlags flags;
  for (auto _ : state) benchmark::DoNotOptimize(render_round_prompt(obs, 1, config, Units{4}, flags));
}
BENCHMARK(BM_RenderPrompt);

void BM_ParseAction(benchmark::State& state) {
  const std::string reply =
      "Reason: demand has been steady at about two units and my pipeline covers the lead time. Action: [3]";
  for (auto _ : state) benchmark::DoNotOptimize(parse_action(reply));
}
BENCHMARK(BM_ParseAction);

void BM_Experiment(benchmark::State& state) {
  const auto config = preset_scenario("normal");
  const auto spec = preset_spec("tracking-demand");
  const RunOptions options{.num_episodes = 500, .parallelism = static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(config, spec, options).summary.mean_reward);
}
BENCHMARK(BM_Experiment)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
