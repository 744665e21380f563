#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "mvmol/chem/smiles.hpp"
#include "mvmol/common/rng.hpp"
#include "mvmol/rules/evaluate.hpp"
#include "mvmol/rules/normalize.hpp"
#include "mvmol/rules/prompts.hpp"
#include "mvmol/rules/ruleset.hpp"
#include "support/corpus.hpp"

namespace mvmol::rules {
namespace {

constexpr const char* kBenzoicAcid = "C1=CC=C(C=C1)C(=O)O";

RuleErrorKind parse_error_kind(const std::string& source) {
  try {
    parse_rules(source);
  } catch (const RuleError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a rule error for:\n" << source;
  return RuleErrorKind::EmptyRuleSet;
}

RuleError parse_error(const std::string& source) {
  try {
    parse_rules(source);
  } catch (const RuleError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a rule error for:\n" << source;
  return RuleError(RuleErrorKind::EmptyRuleSet, "", "");
}

// ---- parsing ---------------------------------------------------------------

TEST(ParseRules, PredicateRule) {
  const RuleSet rs = parse_rules("rule mw_lt_500: molecular_weight < 500\n");
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs.rules[0].id, "mw_lt_500");
  EXPECT_EQ(rs.rules[0].kind, RuleKind::Predicate);
  EXPECT_EQ(rs.rules[0].expression->kind, ExprKind::Less);
}

TEST(ParseRules, NumericRule) {
  const RuleSet rs = parse_rules("rule hbd: numeric hbd_count");
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs.rules[0].kind, RuleKind::Numeric);
  EXPECT_EQ(rs.rules[0].expression->kind, ExprKind::Descriptor);
}

TEST(ParseRules, UnknownDescriptorNamesIdentifier) {
  const RuleError e = parse_error("rule bad: foo < 1");
  EXPECT_EQ(e.kind(), RuleErrorKind::UnknownDescriptor);
  EXPECT_EQ(e.subject(), "foo");
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(e.column(), 11u);
}

TEST(ParseRules, DuplicateIdRejected) {
  const RuleError e = parse_error("rule a: ring_count > 0\nrule a: ring_count > 1\n");
  EXPECT_EQ(e.kind(), RuleErrorKind::DuplicateRuleId);
  EXPECT_EQ(e.subject(), "a");
  EXPECT_EQ(e.line(), 2u);
}

TEST(ParseRules, BadPatternRejected) {
  EXPECT_EQ(parse_error_kind("rule p: substructure(\"c1ccc\")"), RuleErrorKind::BadPattern);
  EXPECT_EQ(parse_error_kind("rule p: count(\"[Xx]\") > 0"), RuleErrorKind::BadPattern);
  EXPECT_EQ(parse_error_kind("rule p: substructure(\"" + std::string(33, 'C') + "\")"),
            RuleErrorKind::BadPattern);
  EXPECT_NO_THROW(parse_rules("rule p: substructure(\"" + std::string(32, 'C') + "\")"));
}

TEST(ParseRules, SyntaxErrorsCarryPosition) {
  const RuleError e = parse_error("# header\nrule x: ring_count >");
  EXPECT_EQ(e.kind(), RuleErrorKind::SyntaxError);
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 21u);

  EXPECT_EQ(parse_error_kind("rule x ring_count > 1"), RuleErrorKind::SyntaxError);
  EXPECT_EQ(parse_error_kind("rule x: 1 < ring_count < 3"), RuleErrorKind::SyntaxError);
  EXPECT_EQ(parse_error_kind("rule x: (ring_count > 1"), RuleErrorKind::SyntaxError);
  EXPECT_EQ(parse_error_kind("rule x: ring_count > 1 )"), RuleErrorKind::SyntaxError);
  EXPECT_EQ(parse_error_kind("rul x: ring_count > 1"), RuleErrorKind::SyntaxError);
  EXPECT_EQ(parse_error_kind("rule x: ring_count $ 1"), RuleErrorKind::SyntaxError);
}

TEST(ParseRules, TypeErrorsAreSyntaxErrors) {
  // Predicate body must be boolean, numeric body must be a number.
  EXPECT_EQ(parse_error_kind("rule x: ring_count"), RuleErrorKind::SyntaxError);
  EXPECT_EQ(parse_error_kind("rule x: numeric ring_count > 1"), RuleErrorKind::SyntaxError);
  EXPECT_EQ(parse_error_kind("rule x: ring_count and hbd_count > 0"), RuleErrorKind::SyntaxError);
  EXPECT_EQ(parse_error_kind("rule x: numeric substructure(\"C\") + 1"), RuleErrorKind::SyntaxError);
}

TEST(ParseRules, CommentsBlankLinesAndCrlf) {
  const RuleSet rs = parse_rules(
      "# BBBP rules\r\n\r\n"
      "rule hash_in_pattern: substructure(\"C#N\")   # nitrile\r\n"
      "   \r\n"
      "rule r2: not (ring_count >= 2 or halogen_count == 0)\r\n");
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs.rules[0].expression->name, "C#N");
}

TEST(ParseRules, ExternalsResolveAnywhereInFile) {
  const RuleSet rs = parse_rules(
      "rule logp_window: logp >= 1 and logp <= 3\n"
      "external logp unit \"log units\"\n");
  ASSERT_EQ(rs.externals.size(), 1u);
  EXPECT_EQ(rs.externals[0].id, "logp");
  EXPECT_EQ(rs.externals[0].unit, "log units");
  EXPECT_EQ(parse_error_kind("external ring_count unit \"x\""), RuleErrorKind::SyntaxError);
  EXPECT_EQ(parse_error_kind("external a\nexternal a\n"), RuleErrorKind::DuplicateRuleId);
}

TEST(ParseRules, TaskAndProvenanceDirectives) {
  const RuleSet rs = parse_rules(
      "task bbbp\n"
      "rule a: ring_count > 0\n"
      "provenance data_pattern\n"
      "rule b: substructure(\"c1ccccc1\")\n");
  EXPECT_EQ(rs.task_id, "bbbp");
  EXPECT_EQ(rs.rules[0].provenance, Provenance::Scientific);
  EXPECT_EQ(rs.rules[1].provenance, Provenance::DataPattern);
}

TEST(ParseRules, PrecedenceAndNegativeLiterals) {
  const RuleSet rs = parse_rules("rule x: numeric 2 + 3 * -ring_count - -1.5");
  EXPECT_EQ(to_source(*rs.rules[0].expression), "2 + 3 * -ring_count - -1.5");
  const auto& top = *rs.rules[0].expression;
  ASSERT_EQ(top.kind, ExprKind::Subtract);
  EXPECT_EQ(top.args[1]->kind, ExprKind::Number);
  EXPECT_EQ(top.args[1]->number, -1.5);
  EXPECT_EQ(top.args[0]->kind, ExprKind::Add);
  EXPECT_EQ(top.args[0]->args[1]->kind, ExprKind::Multiply);
}

TEST(RuleSetJson, ExportListsRulesInOrder) {
  const RuleSet rs = parse_rules("task t\nexternal logp unit \"u\"\nrule a: logp > 1\nrule b: numeric count(\"O\")\n");
  const auto j = ruleset_to_json(rs);
  EXPECT_EQ(j["task_id"], "t");
  ASSERT_EQ(j["rules"].size(), 2u);
  EXPECT_EQ(j["rules"][0]["id"], "a");
  EXPECT_EQ(j["rules"][0]["expression"]["op"], ">");
  EXPECT_EQ(j["rules"][0]["expression"]["args"][0]["external"], "logp");
  EXPECT_EQ(j["rules"][1]["kind"], "numeric");
  EXPECT_EQ(j["rules"][1]["expression"]["count"], "O");
  EXPECT_EQ(j["externals"][0]["unit"], "u");
}

// ---- evaluation ------------------------------------------------------------

TEST(EvaluateRules, BenzoicAcid) {
  const RuleSet rs = parse_rules(
      "rule mw: molecular_weight < 500\n"
      "rule arom: aromatic_ring_count >= 1\n"
      "rule hbd: numeric hbd_count\n");
  const auto v = evaluate_rules(rs, chem::parse_smiles(kBenzoicAcid), {});
  ASSERT_EQ(v.values.size(), 3u);
  EXPECT_EQ(v.values, (std::vector<double>{1.0, 1.0, 1.0}));
  EXPECT_FALSE(v.normalization_applied);

  // Hand count: C7H6O2 = 7*12.011 + 6*1.008 + 2*15.999.
  const RuleSet mw = parse_rules("rule mw: numeric molecular_weight");
  EXPECT_NEAR(evaluate_rules(mw, chem::parse_smiles(kBenzoicAcid), {}).values[0], 122.123, 1e-9);
}

TEST(EvaluateRules, LongChainFailsWeightRule) {
  const std::string c60(60, 'C');
  const RuleSet rs = parse_rules("rule mw: molecular_weight < 500\nrule w: numeric molecular_weight");
  const auto v = evaluate_rules(rs, chem::parse_smiles(c60), {});
  EXPECT_EQ(v.values[0], 0.0);
  // C60H122 = 60*12.011 + 122*1.008
  EXPECT_NEAR(v.values[1], 843.636, 1e-9);
}

TEST(EvaluateRules, EmptyRuleSetGivesEmptyVector) {
  EXPECT_TRUE(evaluate_rules(RuleSet{}, chem::parse_smiles("CCO"), {}).values.empty());
}

TEST(EvaluateRules, SubstructurePresenceAndCount) {
  const RuleSet rs = parse_rules(
      "rule benzene: substructure(\"c1ccccc1\")\n"
      "rule carbonyl: numeric count(\"C=O\")\n"
      "rule two_oxygens: count(\"O\") == 2\n");
  EXPECT_EQ(evaluate_rules(rs, chem::parse_smiles(kBenzoicAcid), {}).values,
            (std::vector<double>{1.0, 1.0, 1.0}));
  EXPECT_EQ(evaluate_rules(rs, chem::parse_smiles("CC(=O)CC(=O)C"), {}).values,
            (std::vector<double>{0.0, 2.0, 1.0}));
}

TEST(EvaluateRules, ExternalsAndErrors) {
  const RuleSet rs = parse_rules("external logp unit \"log\"\nrule w: logp >= 1 and logp <= 3\n");
  const auto mol = chem::parse_smiles("CCO");
  EXPECT_EQ(evaluate_rules(rs, mol, {{"logp", 2.0}}).values[0], 1.0);
  EXPECT_EQ(evaluate_rules(rs, mol, {{"logp", 3.5}}).values[0], 0.0);
  try {
    evaluate_rules(rs, mol, {});
    FAIL() << "expected MissingExternal";
  } catch (const RuleError& e) {
    EXPECT_EQ(e.kind(), RuleErrorKind::MissingExternal);
    EXPECT_EQ(e.subject(), "logp");
    EXPECT_NE(std::string(e.what()).find("rule 'w'"), std::string::npos);
  }

  const RuleSet div = parse_rules("rule ratio: numeric hbd_count / ring_count\n");
  try {
    evaluate_rules(div, mol, {});
    FAIL() << "expected NonFiniteResult";
  } catch (const RuleError& e) {
    EXPECT_EQ(e.kind(), RuleErrorKind::NonFiniteResult);
    EXPECT_EQ(e.subject(), "ratio");
  }
}

// ---- generators for property tests ----------------------------------------

class ExprGenerator {
 public:
  explicit ExprGenerator(std::uint64_t seed) : rng_(seed) {}

  ExprPtr numeric(int depth) {
    const std::size_t pick = rng_.uniform_index(depth <= 0 ? 3 : 6);
    switch (pick) {
      case 0: {
        // Quarter-steps keep values exactly representable.
        const double v = static_cast<double>(static_cast<int>(rng_.uniform_index(41)) - 20) * 0.25;
        return make_number(v);
      }
      case 1: {
        const auto id = static_cast<chem::DescriptorId>(rng_.uniform_index(chem::kDescriptorCount));
        return make_descriptor(id);
      }
      case 2: return count_pattern();
      case 3: {
        ExprPtr operand = numeric(depth - 1);
        if (operand->kind == ExprKind::Number) return operand;
        return make_unary(ExprKind::Negate, operand);
      }
      default: {
        static constexpr ExprKind kOps[] = {ExprKind::Add, ExprKind::Subtract, ExprKind::Multiply};
        return make_binary(kOps[rng_.uniform_index(3)], numeric(depth - 1), numeric(depth - 1));
      }
    }
  }

  ExprPtr predicate(int depth) {
    const std::size_t pick = rng_.uniform_index(depth <= 0 ? 2 : 5);
    switch (pick) {
      case 0: {
        auto [text, mol] = pattern();
        return make_substructure(ExprKind::Substructure, text, mol);
      }
      case 1: {
        static constexpr ExprKind kCmp[] = {ExprKind::Less,        ExprKind::LessEqual, ExprKind::Greater,
                                            ExprKind::GreaterEqual, ExprKind::Equal,     ExprKind::NotEqual};
        return make_binary(kCmp[rng_.uniform_index(6)], numeric(depth - 1), numeric(depth - 1));
      }
      case 2: return make_unary(ExprKind::Not, predicate(depth - 1));
      case 3: return make_binary(ExprKind::And, predicate(depth - 1), predicate(depth - 1));
      default: return make_binary(ExprKind::Or, predicate(depth - 1), predicate(depth - 1));
    }
  }

  RuleSet ruleset(std::size_t n) {
    RuleSet rs;
    rs.task_id = "task_" + std::to_string(rng_.uniform_index(100));
    for (std::size_t i = 0; i < n; ++i) {
      Rule r;
      r.id = "r" + std::to_string(i);
      r.kind = rng_.uniform_index(2) ? RuleKind::Numeric : RuleKind::Predicate;
      r.expression = r.kind == RuleKind::Numeric ? numeric(3) : predicate(3);
      r.provenance = rng_.uniform_index(2) ? Provenance::DataPattern : Provenance::Scientific;
      rs.rules.push_back(std::move(r));
    }
    return rs;
  }

  Rng& rng() { return rng_; }

 private:
  std::pair<std::string, std::shared_ptr<const chem::Molecule>> pattern() {
    const auto& patterns = testing::pattern_corpus();
    const std::string& text = patterns[rng_.uniform_index(patterns.size())];
    return {text, std::make_shared<const chem::Molecule>(chem::parse_smiles(text))};
  }

  ExprPtr count_pattern() {
    auto [text, mol] = pattern();
    return make_substructure(ExprKind::SubstructureCount, text, mol);
  }

  Rng rng_;
};

TEST(RuleProperties, SerializeParseRoundTrip) {
  ExprGenerator gen(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    const RuleSet rs = gen.ruleset(1 + gen.rng().uniform_index(8));
    const std::string text = serialize_rules(rs);
    RuleSet back;
    ASSERT_NO_THROW(back = parse_rules(text)) << text;
    EXPECT_TRUE(back == rs) << text << "\n---\n" << serialize_rules(back);
    EXPECT_EQ(serialize_rules(back), text);
  }
}

TEST(RuleProperties, PredicatesAreExactlyZeroOrOneOnCorpus) {
  ExprGenerator gen(77);
  std::vector<chem::Molecule> mols;
  for (const auto& s : testing::smiles_corpus()) mols.push_back(chem::parse_smiles(s));
  for (int trial = 0; trial < 60; ++trial) {
    const RuleSet rs = gen.ruleset(6);
    for (const auto& mol : mols) {
      RuleFeatureVector v;
      try {
        v = evaluate_rules(rs, mol, {});
      } catch (const RuleError& e) {
        // Generated arithmetic can overflow only through huge products; none expected.
        FAIL() << e.what();
      }
      ASSERT_EQ(v.values.size(), rs.size());
      for (std::size_t i = 0; i < rs.size(); ++i) {
        if (rs.rules[i].kind == RuleKind::Predicate) {
          EXPECT_TRUE(v.values[i] == 0.0 || v.values[i] == 1.0) << to_source(*rs.rules[i].expression);
        } else {
          EXPECT_TRUE(std::isfinite(v.values[i]));
        }
      }
    }
  }
}

TEST(RuleProperties, EvaluationIgnoresAtomOrder) {
  ExprGenerator gen(4242);
  Rng shuffle_rng(99);
  const RuleSet rs = gen.ruleset(24);
  for (const auto& s : testing::smiles_corpus()) {
    const chem::Molecule mol = chem::parse_smiles(s);
    const auto expected = evaluate_rules(rs, mol, {}).values;
    EXPECT_EQ(evaluate_rules(rs, mol, {}).values, expected) << s;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> order(mol.atom_count());
      std::iota(order.begin(), order.end(), 0);
      shuffle_rng.shuffle(order);
      const auto got = evaluate_rules(rs, mol.permuted(order), {}).values;
      ASSERT_EQ(got.size(), expected.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        // Molecular weight sums in atom order, so allow rounding there.
        EXPECT_NEAR(got[i], expected[i], 1e-9 * (1.0 + std::abs(expected[i]))) << s << " rule " << i;
      }
    }
  }
}

// ---- normalization ---------------------------------------------------------

RuleFeatureVector row(std::vector<double> values) { return RuleFeatureVector{std::move(values), false}; }

const RuleSet& mixed_rules() {
  static const RuleSet rs = parse_rules(
      "rule p: ring_count > 0\n"
      "rule n: numeric hbd_count\n"
      "rule c: numeric heavy_atom_count\n");
  return rs;
}

TEST(Normalization, PopulationStd) {
  const std::vector<RuleFeatureVector> train{row({1, 0, 5}), row({0, 2, 5})};
  const auto stats = fit_normalization(mixed_rules(), train);
  ASSERT_EQ(stats.columns, (std::vector<std::size_t>{1, 2}));
  EXPECT_DOUBLE_EQ(stats.mean[0], 1.0);
  EXPECT_DOUBLE_EQ(stats.std[0], 1.0);
  EXPECT_DOUBLE_EQ(stats.mean[1], 5.0);
  EXPECT_DOUBLE_EQ(stats.std[1], 0.0);

  const auto a = apply_normalization(stats, train[0]);
  const auto b = apply_normalization(stats, train[1]);
  EXPECT_TRUE(a.normalization_applied);
  EXPECT_EQ(a.values, (std::vector<double>{1, -1, 0}));
  EXPECT_EQ(b.values, (std::vector<double>{0, 1, 0}));
}

TEST(Normalization, NoNumericRulesGivesEmptyStats) {
  const RuleSet rs = parse_rules("rule p: ring_count > 0");
  const std::vector<RuleFeatureVector> train{row({1}), row({0})};
  const auto stats = fit_normalization(rs, train);
  EXPECT_TRUE(stats.empty());
  EXPECT_EQ(apply_normalization(stats, train[0]).values, train[0].values);
}

TEST(Normalization, EmptyTrainingSetRejected) {
  EXPECT_THROW(fit_normalization(mixed_rules(), std::vector<RuleFeatureVector>{}), std::invalid_argument);
}

TEST(Normalization, MismatchRejected) {
  const auto stats = fit_normalization(mixed_rules(), std::vector<RuleFeatureVector>{row({1, 2, 3})});
  try {
    apply_normalization(stats, row({1, 2}));
    FAIL() << "expected StatsMismatch";
  } catch (const RuleError& e) {
    EXPECT_EQ(e.kind(), RuleErrorKind::StatsMismatch);
  }
  const auto applied = apply_normalization(stats, row({1, 2, 3}));
  EXPECT_THROW(apply_normalization(stats, applied), RuleError);
}

TEST(Normalization, RoundTripProperty) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(30);
    std::vector<RuleFeatureVector> train;
    for (std::size_t i = 0; i < n; ++i) {
      train.push_back(row({rng.uniform_index(2) * 1.0, rng.uniform(-50, 50), rng.uniform(0, 1000)}));
    }
    const auto stats = fit_normalization(mixed_rules(), train);
    for (const auto& r : train) {
      const auto z = apply_normalization(stats, r);
      EXPECT_EQ(z.values[0], r.values[0]);
      const auto back = invert_normalization(stats, z);
      for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(back.values[c], r.values[c], 1e-12 * (1 + std::abs(r.values[c])));
    }
  }
}

TEST(Normalization, StatsDependOnlyOnRowsPassedIn) {
  // Leakage detector: adding test rows to the fit must change the train outputs,
  // so a pipeline that silently fit on all rows would be caught downstream.
  const std::vector<RuleFeatureVector> train{row({0, 0, 10}), row({1, 2, 12}), row({1, 4, 14})};
  std::vector<RuleFeatureVector> with_test = train;
  with_test.push_back(row({0, 40, 100}));

  const auto train_only = fit_normalization(mixed_rules(), train);
  const auto leaky = fit_normalization(mixed_rules(), with_test);
  bool any_changed = false;
  for (const auto& r : train) {
    any_changed |= apply_normalization(train_only, r).values != apply_normalization(leaky, r).values;
  }
  EXPECT_TRUE(any_changed);

  // Refitting on the same train rows, whatever else exists, is bit-identical.
  const auto again = fit_normalization(mixed_rules(), std::span(with_test).first(train.size()));
  EXPECT_EQ(again.mean, train_only.mean);
  EXPECT_EQ(again.std, train_only.std);
}

// ---- prompts ---------------------------------------------------------------

TEST(RulePrompts, ScientificPrompt) {
  const std::string p =
      build_scientific_rule_prompt("predict if a molecule can penetrate the blood-brain barrier", 20);
  EXPECT_EQ(p,
            "Assume you are an experienced Chemist. Please come up with 20 rules that are important to "
            "predict if a molecule can penetrate the blood-brain barrier.");
  const std::string one = build_scientific_rule_prompt("predict toxicity", 1);
  EXPECT_NE(one.find("1 rule that is important"), std::string::npos);
  EXPECT_EQ(one.find("1 rules"), std::string::npos);
  EXPECT_THROW(build_scientific_rule_prompt("", 20), std::invalid_argument);
}

TEST(RulePrompts, DataPrompt) {
  const std::vector<LabeledPair> subset{{"CCO", 1}, {"c1ccccc1", 0}};
  const std::string p = build_data_rule_prompt(subset, "BBBP", 3);
  EXPECT_EQ(p,
            "Assume you are a very experienced Chemist. In the following data, with label 1, it means the "
            "smiles string is BBBP. With label 0, it means the smiles string is not BBBP. Please infer "
            "step-by-step to come up with 3 rules that directly relate the properties/structures of a "
            "molecule to predict if it can be BBBP.\n"
            "CCO 1\n"
            "c1ccccc1 0\n");

  const std::vector<LabeledPair> single{{"CCN", 1}};
  const std::string q = build_data_rule_prompt(single, "BBBP", 3);
  EXPECT_EQ(q.substr(q.find('\n') + 1), "CCN 1\n");
  EXPECT_THROW(build_data_rule_prompt(std::vector<LabeledPair>{}, "BBBP", 3), std::invalid_argument);
}

std::vector<LabeledPair> numbered_records(std::size_t n) {
  std::vector<LabeledPair> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({std::string(i + 1, 'C'), static_cast<double>(i % 2)});
  return out;
}

TEST(SubsetSampling, DeterministicAndWithoutReplacement) {
  const auto records = numbered_records(10);
  const auto a = sample_data_subsets(records, 2, 3, 7);
  const auto b = sample_data_subsets(records, 2, 3, 7);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    ASSERT_EQ(a[k].size(), 3u);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(a[k][i].smiles, b[k][i].smiles);
      seen.insert(a[k][i].smiles);
    }
    EXPECT_EQ(seen.size(), 3u);
  }
}

TEST(SubsetSampling, FullDatasetIsAPermutation) {
  const auto records = numbered_records(10);
  const auto s = sample_data_subsets(records, 1, 10, 0);
  std::set<std::string> seen;
  for (const auto& p : s[0]) seen.insert(p.smiles);
  EXPECT_EQ(seen.size(), 10u);
}

TEST(SubsetSampling, TooLarge) {
  const auto records = numbered_records(5);
  try {
    sample_data_subsets(records, 1, 6, 0);
    FAIL() << "expected SubsetTooLarge";
  } catch (const RuleError& e) {
    EXPECT_EQ(e.kind(), RuleErrorKind::SubsetTooLarge);
  }
}

TEST(SubsetSampling, RoughlyUniform) {
  // Each record should appear in a 3-of-10 draw with probability 0.3.
  const auto records = numbered_records(10);
  const auto subsets = sample_data_subsets(records, 20000, 3, 123);
  std::map<std::string, int> hits;
  for (const auto& s : subsets) for (const auto& p : s) ++hits[p.smiles];
  ASSERT_EQ(hits.size(), 10u);
  for (const auto& [smiles, n] : hits) {
    // 6000 expected, sd ~ 65; 5 sd margin.
    EXPECT_NEAR(n, 6000, 330) << smiles;
  }
}

}  // namespace
}  // namespace mvmol::rules
