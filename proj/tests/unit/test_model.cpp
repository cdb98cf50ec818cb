#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "fixtures.hpp"
#include "rflux/error.hpp"

using namespace rflux;
using rflux::testing::reaction;

namespace {

std::set<std::string> genes(std::initializer_list<const char*> ids) { return {ids.begin(), ids.end()}; }

}  // namespace

TEST(Gpr, AndWithDeletedOperandIsFalse) {
  EXPECT_FALSE(evaluate_gpr(parse_gpr("g1 AND g2"), genes({"g1"})));
}

TEST(Gpr, OrKeepsReactionActive) {
  EXPECT_TRUE(evaluate_gpr(parse_gpr("(g1 AND g2) OR g3"), genes({"g1"})));
}

TEST(Gpr, EmptyRuleAlwaysActive) {
  EXPECT_TRUE(evaluate_gpr(parse_gpr(""), genes({"g1", "g2", "g3"})));
  EXPECT_TRUE(evaluate_gpr(GprExpression::empty(), {}));
}

TEST(Gpr, MonotoneInDeletedSet) {
  const auto rule = parse_gpr("(a and b) or (c and (d or e))");
  const std::vector<std::string> all = {"a", "b", "c", "d", "e"};
  for (unsigned mask = 0; mask < 32; ++mask) {
    std::set<std::string> del;
    for (unsigned i = 0; i < 5; ++i) {
      if (mask & (1u << i)) del.insert(all[i]);
    }
    if (evaluate_gpr(rule, del)) continue;
    // once false, deleting more never makes it true
    for (unsigned i = 0; i < 5; ++i) {
      auto more = del;
      more.insert(all[i]);
      EXPECT_FALSE(evaluate_gpr(rule, more));
    }
  }
}

TEST(Model, RejectsInvertedBounds) {
  EXPECT_THROW(MetabolicModel::create("m", {{"A", "c"}},
                                      {reaction("EX_A", {{"A", -1}}, 0, 1), reaction("BIO", {{"A", -1}}, 5, 1, "", 1)},
                                      {}),
               ValidationError);
}

TEST(Model, RejectsUndeclaredMetaboliteAndGene) {
  EXPECT_THROW(MetabolicModel::create("m", {{"A", "c"}},
                                      {reaction("BIO", {{"A", -1}, {"Z", 1}}, 0, 1, "", 1)}, {}),
               ValidationError);
  EXPECT_THROW(MetabolicModel::create("m", {{"A", "c"}}, {reaction("BIO", {{"A", -1}}, 0, 1, "gX", 1)}, {}),
               ValidationError);
}

TEST(Model, RequiresExactlyOneObjective) {
  const std::vector<Metabolite> mets = {{"A", "c"}};
  EXPECT_THROW(MetabolicModel::create("m", mets, {reaction("EX_A", {{"A", -1}}, -1, 0), reaction("BIO", {{"A", -1}}, 0, 1)}, {}),
               ValidationError);
  EXPECT_THROW(MetabolicModel::create(
                   "m", mets, {reaction("EX_A", {{"A", -1}}, -1, 0, "", 1), reaction("BIO", {{"A", -1}}, 0, 1, "", 1)}, {}),
               ValidationError);
  // naming the biomass reaction resolves both cases
  const auto m = MetabolicModel::create(
      "m", mets, {reaction("EX_A", {{"A", -1}}, -1, 0), reaction("BIO", {{"A", -1}}, 0, 1)}, {}, "BIO");
  EXPECT_EQ(m.biomass_reaction_id(), "BIO");
  EXPECT_EQ(m.objective()[1], 1.0);
  EXPECT_EQ(m.objective()[0], 0.0);
}

TEST(Model, EmptyStoichiometryOnlyForBoundaryIds) {
  const std::vector<Metabolite> mets = {{"A", "c"}};
  EXPECT_NO_THROW(MetabolicModel::create(
      "m", mets, {reaction("EX_A", {{"A", -1}}, -1, 0), reaction("sink_x", {}, 0, 1), reaction("BIO", {{"A", -1}}, 0, 1, "", 1)},
      {}));
  EXPECT_THROW(MetabolicModel::create(
                   "m", mets, {reaction("EX_A", {{"A", -1}}, -1, 0), reaction("PGI", {}, 0, 1), reaction("BIO", {{"A", -1}}, 0, 1, "", 1)},
                   {}),
               ValidationError);
}

TEST(Deletion, GeneInNoRuleLeavesModelIdentical) {
  const auto m = rflux::testing::series_of_routes();
  const auto d = apply_deletion(m, "g_orphan");
  EXPECT_EQ(d.lower_bounds(), m.lower_bounds());
  EXPECT_EQ(d.upper_bounds(), m.upper_bounds());
}

TEST(Deletion, SoleGeneZeroesReaction) {
  const auto m = rflux::testing::toy_chain();
  const auto d = apply_deletion(m, "g1");
  const auto j = d.reaction_index("R1");
  EXPECT_EQ(d.lower_bounds()[j], 0.0);
  EXPECT_EQ(d.upper_bounds()[j], 0.0);
  // original untouched
  EXPECT_EQ(m.upper_bounds()[j], 1000.0);
}

TEST(Deletion, IsozymeKeepsReactionActive) {
  const auto m = MetabolicModel::create(
      "m", {{"A", "c"}}, {reaction("EX_A", {{"A", -1}}, -1, 0), reaction("BIO", {{"A", -1}}, 0, 7, "g1 or g2", 1)},
      {"g1", "g2"});
  const auto d = apply_deletion(m, "g1");
  EXPECT_EQ(d.upper_bounds()[1], 7.0);
}

TEST(Deletion, Idempotent) {
  const auto m = rflux::testing::series_of_routes();
  const auto once = apply_deletion(m, "g3");
  const auto twice = apply_deletion(once, "g3");
  EXPECT_EQ(once.lower_bounds(), twice.lower_bounds());
  EXPECT_EQ(once.upper_bounds(), twice.upper_bounds());
}

TEST(Deletion, UnknownGeneThrows) {
  EXPECT_THROW(apply_deletion(rflux::testing::toy_chain(), "nope"), ValidationError);
}

namespace {

// Reference evaluator over a random tree, independent of the parser.
struct RandomRule {
  std::string text;
  std::function<bool(const std::set<std::string>&)> eval;
};

RandomRule random_rule(std::mt19937_64& rng, int depth) {
  const std::vector<std::string> pool = {"a", "b", "c", "d"};
  if (depth == 0 || rng() % 3 == 0) {
    const std::string g = pool[rng() % pool.size()];
    return {g, [g](const std::set<std::string>& del) { return !del.count(g); }};
  }
  auto l = random_rule(rng, depth - 1);
  auto r = random_rule(rng, depth - 1);
  if (rng() % 2) {
    return {"(" + l.text + " and " + r.text + ")", [l, r](const auto& del) { return l.eval(del) && r.eval(del); }};
  }
  return {"(" + l.text + " OR " + r.text + ")", [l, r](const auto& del) { return l.eval(del) || r.eval(del); }};
}

}  // namespace

TEST(Gpr, RandomRulesMatchTruthTable) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> pool = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 300; ++trial) {
    const auto rule = random_rule(rng, 4);
    const auto parsed = parse_gpr(rule.text);
    const auto reparsed = parse_gpr(parsed.to_string());
    for (unsigned mask = 0; mask < 16; ++mask) {
      std::set<std::string> del;
      for (unsigned i = 0; i < 4; ++i) {
        if (mask & (1u << i)) del.insert(pool[i]);
      }
      ASSERT_EQ(evaluate_gpr(parsed, del), rule.eval(del)) << rule.text;
      ASSERT_EQ(evaluate_gpr(reparsed, del), rule.eval(del)) << parsed.to_string();
    }
  }
}
