#include <gtest/gtest.h>

#include <random>

#include "echelon/environment.hpp"
#include "echelon/errors.hpp"
#include "echelon/export.hpp"
#include "echelon/prompt.hpp"

namespace echelon {
namespace {

std::string fixture(const char* name) { return read_text_file(std::string(ECHELON_FIXTURE_DIR) + "/" + name); }

Observation round_one(const ScenarioConfig& config, int stage) {
  return observe(config, initial_state(config), stage);
}

TEST(SystemMessage, FourStageRoles) {
  EXPECT_EQ(render_system_message(0, 4),
            "You play a crucial role in a 4-stage supply chain as the stage 1 (retailer). Your goal is to minimize "
            "the total cost by managing inventory and orders effectively.");
  EXPECT_EQ(render_system_message(1, 4),
            "You play a crucial role in a 4-stage supply chain as the stage 2 (wholesaler). Your goal is to minimize "
            "the total cost by managing inventory and orders effectively.");
  EXPECT_EQ(render_system_message(2, 4),
            "You play a crucial role in a 4-stage supply chain as the stage 3 (distributor). Your goal is to "
            "minimize the total cost by managing inventory and orders effectively.");
  EXPECT_EQ(render_system_message(3, 4),
            "You play a crucial role in a 4-stage supply chain as the stage 4 (manufacturer). Your goal is to "
            "minimize the total cost by managing inventory and orders effectively.");
}

TEST(SystemMessage, GenericWordingOutsideFourStages) {
  EXPECT_EQ(render_system_message(0, 2),
            "You play a crucial role in a 2-stage supply chain as the stage 1 of 2. Your goal is to minimize the "
            "total cost by managing inventory and orders effectively.");
  EXPECT_THROW(render_system_message(2, 2), InputError);
}

TEST(RoundPrompt, MatchesGoldenFixture) {
  // Round 1 is identical in the constant and variable presets; the fixture's
  // demand sentence is the variable one.
  const auto config = preset_scenario("variable");
  PromptFlags flags;
  flags.include_strategy = true;
  const auto prompt = render_round_prompt(round_one(config, 0), 1, config, std::nullopt, flags);
  EXPECT_EQ(prompt, fixture("retailer_round1_prompt.txt"));
}

TEST(RoundPrompt, GoldenResponseParsesToZero) {
  EXPECT_EQ(parse_action(fixture("retailer_round1_response.txt")), 0);
}

TEST(RoundPrompt, SectionsGatedByFlags) {
  const auto config = preset_scenario("constant");
  PromptFlags flags;
  flags.include_demand = false;
  flags.include_downstream = false;
  flags.include_strategy = false;
  const auto prompt = render_round_prompt(round_one(config, 1), 1, config, std::nullopt, flags);
  EXPECT_EQ(prompt,
            "Now this is the round 1, and you are at the stage 2 of 4 in the supply chain. Given your current state:\n"
            " - Lead Time: 2 round(s)\n"
            " - Inventory Level: 12 unit(s)\n"
            " - Current Backlog (you owing to the downstream): 0 unit(s)\n"
            " - Upstream Backlog (your upstream owing to you): 0 unit(s)\n"
            " - Previous Sales (in the recent round(s), from old to new): [0, 0]\n"
            " - Arriving Deliveries (in this and the next round(s), from near to far): [0, 0]\n"
            "\n"
            "What is your action (order quantity) for this round?\n"
            "\n"
            "Please state your reason in 1-2 sentences first and then provide your action as a non-negative integer "
            "within brackets (e.g. [0]).");
}

TEST(RoundPrompt, DownstreamSentenceForUpstreamStages) {
  const auto config = preset_scenario("constant");
  const auto prompt = render_round_prompt(round_one(config, 2), 3, config, Units{7}, PromptFlags{});
  EXPECT_NE(prompt.find("The expected demand at the retailer (stage 1) is a constant 4 units for all 12 rounds. "
                        "Your downstream order from the stage 2 for this round is 7. What is your action"),
            std::string::npos);
  EXPECT_NE(prompt.find("Now this is the round 3, and you are at the stage 3 of 4"), std::string::npos);
}

TEST(RoundPrompt, RetailerCannotReceiveDownstreamOrder) {
  const auto config = preset_scenario("constant");
  EXPECT_THROW(render_round_prompt(round_one(config, 0), 1, config, Units{4}, PromptFlags{}), InputError);
}

TEST(RoundPrompt, RestrictedMenuReplacesExample) {
  const auto config = preset_scenario("constant");
  PromptFlags flags;
  flags.restricted_menu = ActionMenu{0, 4, 8};
  const auto prompt = render_round_prompt(round_one(config, 0), 1, config, std::nullopt, flags);
  EXPECT_TRUE(prompt.ends_with("provide your action as a non-negative integer within brackets ([0], [4], or [8] only)."));
  EXPECT_EQ(prompt.find("(e.g. [0])"), std::string::npos);
}

TEST(RoundPrompt, NoCotDropsReasonClause) {
  PromptFlags flags;
  flags.chain_of_thought = false;
  EXPECT_EQ(action_instruction(flags), "Please provide your action as a non-negative integer within brackets (e.g. [0]).");
}

TEST(RoundPrompt, MenuFormatting) {
  EXPECT_EQ(format_menu({0, 4, 8}), "([0], [4], or [8] only)");
  EXPECT_EQ(format_menu({0, 4}), "([0] or [4] only)");
  EXPECT_EQ(format_menu({2}), "([2] only)");
  EXPECT_EQ(format_menu({1, 2, 3, 4}), "([1], [2], [3], or [4] only)");
  EXPECT_THROW(format_menu({}), InputError);
}

TEST(RoundPrompt, PureFunctionOfInputs) {
  const auto config = preset_scenario("normal");
  Environment env(config);
  env.reset(4);
  env.step(ActionVector{3, 5, 7, 9});
  const auto obs = env.observe(3);
  const PromptFlags flags;
  EXPECT_EQ(render_round_prompt(obs, 2, config, Units{5}, flags), render_round_prompt(obs, 2, config, Units{5}, flags));
  EXPECT_NE(render_round_prompt(obs, 2, config, Units{5}, flags).find("Lead Time: 4 round(s)"), std::string::npos);
  EXPECT_NE(render_round_prompt(obs, 2, config, Units{5}, flags).find("from old to new): [0, 0, 0, 7]"),
            std::string::npos);
}

TEST(RoundPrompt, EachFlagTouchesOnlyItsSection) {
  const auto config = preset_scenario("seasonal");
  const auto obs = round_one(config, 1);
  const Units downstream = 6;
  const std::string demand = "The expected demand at the retailer (stage 1) is " +
                             std::string("a discrete uniform distribution U{0, 4} for the first 4 rounds, and a "
                                         "discrete uniform distribution U{5, 8} for the last 8 rounds. ");
  const std::string down = "Your downstream order from the stage 1 for this round is 6. ";

  std::mt19937 rng(11);
  for (int trial = 0; trial < 64; ++trial) {
    PromptFlags base;
    base.include_demand = trial & 1;
    base.include_downstream = trial & 2;
    base.include_strategy = trial & 4;
    base.chain_of_thought = trial & 8;
    base.keep_history = trial & 16;
    if (trial & 32) base.restricted_menu = ActionMenu{0, 4, 8};
    auto render = [&](const PromptFlags& f) { return render_round_prompt(obs, 1, config, downstream, f); };
    auto without = [](std::string text, const std::string& piece) {
      const auto pos = text.find(piece);
      EXPECT_NE(pos, std::string::npos) << piece;
      if (pos != std::string::npos) text.erase(pos, piece.size());
      return text;
    };

    PromptFlags on = base, off = base;
    on.include_demand = true;
    off.include_demand = false;
    EXPECT_EQ(without(render(on), demand), render(off));

    on = base, off = base;
    on.include_downstream = true;
    off.include_downstream = false;
    EXPECT_EQ(without(render(on), down), render(off));

    on = base, off = base;
    on.include_strategy = true;
    off.include_strategy = false;
    const auto with_strategy = render(on);
    const auto golden = with_strategy.find("Golden rule");
    ASSERT_NE(golden, std::string::npos);
    const auto end = with_strategy.find("\n\n", golden);
    EXPECT_EQ(without(with_strategy, with_strategy.substr(golden, end + 2 - golden)), render(off));

    // Reasoning and menu only change the closing sentence; history does not touch the prompt.
    on = base, off = base;
    on.chain_of_thought = true;
    off.chain_of_thought = false;
    const auto cot_on = render(on), cot_off = render(off);
    EXPECT_EQ(cot_on.substr(0, cot_on.rfind("\n\n")), cot_off.substr(0, cot_off.rfind("\n\n")));
    EXPECT_NE(cot_on, cot_off);

    on = base, off = base;
    on.restricted_menu = ActionMenu{0, 4, 8};
    off.restricted_menu.reset();
    const auto menu_on = render(on), menu_off = render(off);
    EXPECT_EQ(menu_on.substr(0, menu_on.rfind("\n\n")), menu_off.substr(0, menu_off.rfind("\n\n")));

    on = base, off = base;
    on.keep_history = true;
    off.keep_history = false;
    EXPECT_EQ(render(on), render(off));
  }
}

TEST(ParseAction, Examples) {
  EXPECT_EQ(parse_action("Reason: inventory is ample.\n\nAction: [0]"), 0);
  EXPECT_EQ(parse_action("[4]"), 4);
  EXPECT_EQ(parse_action("I considered [3] but choose [5]"), 5);
  EXPECT_EQ(parse_action("Sales were [0, 4]; order [ 6 ]"), 6);
  EXPECT_EQ(parse_action("[7] and the list [1, 2]"), 7);
}

TEST(ParseAction, Errors) {
  EXPECT_THROW(parse_action("I will order four units."), ParseError);
  EXPECT_THROW(parse_action("Action: [-2]"), ParseError);
  EXPECT_THROW(parse_action("Action: [2.5]"), ParseError);
  EXPECT_THROW(parse_action("[3] then [-1]"), ParseError);
  EXPECT_THROW(parse_action("[99999999999999999999999]"), ParseError);
  EXPECT_THROW(parse_action("Action: [5]", ActionMenu{0, 4, 8}), ParseError);
  EXPECT_EQ(parse_action("Action: [8]", ActionMenu{0, 4, 8}), 8);
}

TEST(ParseAction, InvertsBracketRendering) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Units k = i < 20 ? i : std::uniform_int_distribution<Units>(0, Units{1} << 50)(rng);
    EXPECT_EQ(parse_action("[" + std::to_string(k) + "]"), k);
  }
}

}  // namespace
}  // namespace echelon
