#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "mvmol/chem/descriptors.hpp"
#include "mvmol/chem/rings.hpp"
#include "mvmol/chem/scaffold.hpp"
#include "mvmol/chem/smiles.hpp"
#include "mvmol/chem/substructure.hpp"
#include "mvmol/common/rng.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

namespace mvmol::chem {
namespace {

constexpr const char* kBenzoicAcid = "C1=CC=C(C=C1)C(=O)O";

SmilesErrorKind parse_error_kind(const std::string& smiles) {
  try {
    parse_smiles(smiles);
  } catch (const SmilesError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a parse error for " << smiles;
  return SmilesErrorKind::UnexpectedCharacter;
}

TEST(ParseSmiles, SingleCarbon) {
  const Molecule m = parse_smiles("C");
  ASSERT_EQ(m.atom_count(), 1u);
  EXPECT_EQ(m.bond_count(), 0u);
  EXPECT_EQ(m.atom(0).implicit_h, 4);
}

TEST(ParseSmiles, BenzoicAcidGraph) {
  const Molecule m = parse_smiles(kBenzoicAcid);
  EXPECT_EQ(m.atom_count(), 9u);
  EXPECT_EQ(m.bond_count(), 9u);
  EXPECT_EQ(m.source_smiles(), kBenzoicAcid);
}

TEST(ParseSmiles, ErrorsCarryKindAndOffset) {
  try {
    parse_smiles("C1CC");
    FAIL();
  } catch (const SmilesError& e) {
    EXPECT_EQ(e.kind(), SmilesErrorKind::UnclosedRingBond);
    EXPECT_EQ(e.offset(), 1u);
  }
  EXPECT_EQ(parse_error_kind("   "), SmilesErrorKind::EmptyInput);
  EXPECT_EQ(parse_error_kind("CC(C"), SmilesErrorKind::UnbalancedBranch);
  EXPECT_EQ(parse_error_kind("CC)C"), SmilesErrorKind::UnbalancedBranch);
  EXPECT_EQ(parse_error_kind("CXC"), SmilesErrorKind::UnknownElement);
  EXPECT_EQ(parse_error_kind("C[Xx]"), SmilesErrorKind::UnknownElement);
  EXPECT_EQ(parse_error_kind("C[CH4"), SmilesErrorKind::MalformedBracketAtom);
  EXPECT_EQ(parse_error_kind("C[C&]"), SmilesErrorKind::MalformedBracketAtom);
  EXPECT_EQ(parse_error_kind("C=="), SmilesErrorKind::InvalidBond);
  EXPECT_EQ(parse_error_kind("C11"), SmilesErrorKind::InvalidBond);
}

TEST(ParseSmiles, OffsetAccountsForLeadingWhitespace) {
  try {
    parse_smiles("  CC(C");
    FAIL();
  } catch (const SmilesError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(ParseSmiles, BracketAtoms) {
  const Molecule m = parse_smiles("[NH4+]");
  EXPECT_EQ(m.atom(0).implicit_h, 4);
  EXPECT_EQ(m.atom(0).formal_charge, 1);
  const Molecule iso = parse_smiles("[13CH4]");
  ASSERT_TRUE(iso.atom(0).isotope.has_value());
  EXPECT_EQ(*iso.atom(0).isotope, 13);
  const Molecule multi = parse_smiles("[Fe++]");
  EXPECT_EQ(multi.atom(0).formal_charge, 2);
  const Molecule sel = parse_smiles("c1cc[se]c1");
  EXPECT_TRUE(sel.atom(3).aromatic);
  EXPECT_EQ(sel.atom(3).symbol(), "Se");
}

TEST(ParseSmiles, StereoMarkersAreDropped) {
  const Molecule a = parse_smiles("F/C=C/F");
  const Molecule b = parse_smiles("FC=CF");
  EXPECT_EQ(canonical_key(a), canonical_key(b));
  EXPECT_EQ(canonical_key(parse_smiles("C[C@@H](N)O")), canonical_key(parse_smiles("CC(N)O")));
}

TEST(ParseSmiles, FragmentsAndPercentRings) {
  const Molecule salt = parse_smiles("CC(=O)[O-].[Na+]");
  EXPECT_EQ(salt.component_count(), 2u);
  const Molecule ring = parse_smiles("C%10CCCCC%10");
  EXPECT_EQ(perceive_rings(ring).ring_count(), 1u);
}

TEST(ImplicitHydrogens, Examples) {
  EXPECT_EQ(parse_smiles("O").atom(0).implicit_h, 2);
  const Molecule pyridine = parse_smiles("c1ccncc1");
  EXPECT_EQ(pyridine.atom(3).implicit_h, 0);  // 2 ring bonds + pi donation = valence 3
  EXPECT_EQ(pyridine.atom(0).implicit_h, 1);
  EXPECT_EQ(parse_smiles("c1ccsc1").atom(3).implicit_h, 0);
  EXPECT_EQ(parse_smiles("c1cc[nH]c1").atom(3).implicit_h, 1);
  const Molecule sulfone = parse_smiles("CS(=O)(=O)C");
  EXPECT_EQ(sulfone.atom(1).implicit_h, 0);
}

TEST(ImplicitHydrogens, OvervalentAtomIsClampedAndFlagged) {
  const Molecule m = parse_smiles("C(C)(C)(C)(C)C");
  EXPECT_EQ(m.atom(0).implicit_h, 0);
  EXPECT_TRUE(m.atom(0).valence_clamped);
}

TEST(MolecularWeight, Examples) {
  EXPECT_NEAR(molecular_weight(parse_smiles("C")), 16.043, 0.001);
  EXPECT_NEAR(molecular_weight(parse_smiles(kBenzoicAcid)), 122.123, 0.01);
  EXPECT_NEAR(molecular_weight(parse_smiles("[13CH4]")), 17.035, 0.01);
}

TEST(MolecularWeight, AdditiveOverFragmentsAndPermutationInvariant) {
  const auto& corpus = testing::smiles_corpus();
  Rng rng(11);
  for (std::size_t i = 0; i + 1 < corpus.size(); ++i) {
    const double a = molecular_weight(parse_smiles(corpus[i]));
    const double b = molecular_weight(parse_smiles(corpus[i + 1]));
    const double joined = molecular_weight(parse_smiles(corpus[i] + "." + corpus[i + 1]));
    EXPECT_NEAR(joined, a + b, 1e-9) << corpus[i];

    const Molecule m = parse_smiles(corpus[i]);
    std::vector<int> order(m.atom_count());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    EXPECT_NEAR(molecular_weight(m.permuted(order)), a, 1e-9);
  }
}

TEST(Rings, Examples) {
  EXPECT_TRUE(perceive_rings(parse_smiles("CCO")).rings.empty());
  const RingInfo benzene = perceive_rings(parse_smiles("c1ccccc1"));
  ASSERT_EQ(benzene.ring_count(), 1u);
  EXPECT_EQ(benzene.rings[0].size(), 6u);
  const Molecule naphthalene = parse_smiles("c1ccc2ccccc2c1");
  EXPECT_EQ(naphthalene.bond_count(), 11u);
  EXPECT_EQ(perceive_rings(naphthalene).ring_count(), 2u);
}

TEST(Rings, CubaneBasisUsesFourRings) {
  const RingInfo cubane = perceive_rings(parse_smiles("C12C3C4C1C5C2C3C45"));
  ASSERT_EQ(cubane.ring_count(), 5u);
  for (const auto& ring : cubane.rings) EXPECT_EQ(ring.size(), 4u);
}

TEST(Rings, CountEqualsCycleRankOnCorpus) {
  for (const auto& s : testing::smiles_corpus()) {
    const Molecule m = parse_smiles(s);
    const std::size_t expected = m.bond_count() + m.component_count() - m.atom_count();
    const RingInfo info = perceive_rings(m);
    EXPECT_EQ(info.ring_count(), expected) << s;
    for (std::size_t r = 0; r < info.rings.size(); ++r) {
      EXPECT_EQ(info.rings[r].size(), info.ring_bonds[r].size()) << s;
    }
  }
}

TEST(Aromaticity, KekuleAndNotation) {
  auto count = [](const std::string& s) {
    const Molecule m = parse_smiles(s);
    return aromatic_ring_count(m, perceive_rings(m));
  };
  EXPECT_EQ(count(kBenzoicAcid), 1u);
  EXPECT_EQ(count("C1CCCCC1"), 0u);
  EXPECT_EQ(count("c1ccccc1"), 1u);
  EXPECT_EQ(count("C1=CC2=CC=CC=C2C=C1"), 2u);
  EXPECT_EQ(count("C1=CCCC=C1"), 0u);
  // Biphenyl's inter-ring bond is single even when written implicitly.
  const Molecule biphenyl = parse_smiles("c1ccccc1c1ccccc1");
  EXPECT_EQ(biphenyl.bond(biphenyl.find_bond(5, 6)).order, BondOrder::Single);
}

TEST(Descriptors, BenzoicAcid) {
  const DescriptorSet d = compute_descriptors(parse_smiles(kBenzoicAcid));
  EXPECT_EQ(d[DescriptorId::HbdCount], 1.0);
  EXPECT_EQ(d[DescriptorId::HbaCount], 2.0);
  EXPECT_EQ(d[DescriptorId::HeavyAtomCount], 9.0);
  EXPECT_EQ(d[DescriptorId::AromaticRingCount], 1.0);
  EXPECT_EQ(d[DescriptorId::RingCount], 1.0);
  EXPECT_EQ(d[DescriptorId::RotatableBondCount], 1.0);
  EXPECT_NEAR(d[DescriptorId::MolecularWeight], 122.123, 0.01);
}

TEST(Descriptors, SmallMolecules) {
  const DescriptorSet ethanol = compute_descriptors(parse_smiles("CCO"));
  EXPECT_EQ(ethanol[DescriptorId::HbdCount], 1.0);
  EXPECT_EQ(ethanol[DescriptorId::HbaCount], 1.0);
  EXPECT_EQ(ethanol[DescriptorId::RotatableBondCount], 0.0);
  EXPECT_EQ(compute_descriptors(parse_smiles("O=O"))[DescriptorId::HbdCount], 0.0);
  const DescriptorSet salt = compute_descriptors(parse_smiles("CC(=O)[O-].[Na+]"));
  EXPECT_EQ(salt[DescriptorId::NetFormalCharge], 0.0);
  EXPECT_EQ(compute_descriptors(parse_smiles("ClC(Cl)(Cl)Cl"))[DescriptorId::HalogenCount], 4.0);
}

TEST(Descriptors, AmideBondIsNotRotatable) {
  // N-methylacetamide: C-C(=O) has a terminal carbon, C(=O)-N is amide, N-C terminal.
  EXPECT_EQ(compute_descriptors(parse_smiles("CC(=O)NC"))[DescriptorId::RotatableBondCount], 0.0);
  EXPECT_EQ(compute_descriptors(parse_smiles("CCCC"))[DescriptorId::RotatableBondCount], 1.0);
}

TEST(Descriptors, CountsAreNonNegativeAndNamesResolve) {
  for (const auto& s : testing::smiles_corpus()) {
    const DescriptorSet d = compute_descriptors(parse_smiles(s));
    for (std::size_t i = 1; i + 1 < kDescriptorCount; ++i) EXPECT_GE(d.values()[i], 0.0) << s;
  }
  for (auto name : kDescriptorNames) EXPECT_TRUE(find_descriptor(name).has_value());
  EXPECT_FALSE(find_descriptor("logp").has_value());
}

TEST(Substructure, Examples) {
  const Molecule target = parse_smiles(kBenzoicAcid);
  EXPECT_TRUE(match_substructure(parse_smiles("c1ccccc1"), target).matched);
  EXPECT_TRUE(match_substructure(parse_smiles("C=O"), target).matched);
  EXPECT_FALSE(match_substructure(parse_smiles("c1ccccc1"), parse_smiles("CCO")).matched);
  EXPECT_EQ(match_substructure(parse_smiles("c1ccccc1"), parse_smiles("c1ccccc1")).count, 1u);
  EXPECT_EQ(match_substructure(parse_smiles("O"), target).count, 2u);
}

TEST(Substructure, PatternTooLarge) {
  const std::string big(33, 'C');
  EXPECT_THROW(match_substructure(parse_smiles(big), parse_smiles(big)), PatternTooLarge);
  EXPECT_NO_THROW(match_substructure(parse_smiles(std::string(32, 'C')), parse_smiles("C")));
}

TEST(Substructure, AgreesWithBruteForceOracle) {
  std::vector<Molecule> patterns, targets;
  for (const auto& s : testing::pattern_corpus()) patterns.push_back(parse_smiles(s));
  for (const auto& s : testing::smiles_corpus()) {
    Molecule m = parse_smiles(s);
    if (m.atom_count() <= 10) patterns.push_back(m);
    if (m.atom_count() <= 14) targets.push_back(std::move(m));
  }
  std::size_t pairs = 0;
  for (const auto& p : patterns) {
    for (const auto& t : targets) {
      const MatchResult got = match_substructure(p, t);
      const std::size_t expected = testing::brute_force_match_count(p, t);
      ASSERT_EQ(got.count, expected) << p.source_smiles() << " in " << t.source_smiles();
      ASSERT_EQ(got.matched, expected > 0);
      ++pairs;
    }
  }
  EXPECT_GT(pairs, 1000u);
}

TEST(Scaffold, Examples) {
  const Molecule benzoic = murcko_scaffold(parse_smiles(kBenzoicAcid));
  EXPECT_EQ(benzoic.atom_count(), 6u);
  EXPECT_EQ(canonical_key(benzoic), canonical_key(parse_smiles("c1ccccc1")));
  EXPECT_TRUE(murcko_scaffold(parse_smiles("CCO")).empty());
  EXPECT_EQ(murcko_scaffold(parse_smiles("c1ccccc1CCc1ccccc1")).atom_count(), 14u);
}

TEST(Scaffold, ExocyclicDoubleBondsKept) {
  const Molecule s = murcko_scaffold(parse_smiles("CCC1CCCCC1=O"));
  EXPECT_EQ(s.atom_count(), 7u);
  EXPECT_EQ(canonical_key(s), canonical_key(parse_smiles("O=C1CCCCC1")));
}

TEST(Scaffold, IdempotentOnCorpus) {
  for (const auto& s : testing::smiles_corpus()) {
    const Molecule once = murcko_scaffold(parse_smiles(s));
    const Molecule twice = murcko_scaffold(once);
    EXPECT_EQ(canonical_key(once), canonical_key(twice)) << s;
  }
}

TEST(CanonicalKey, Examples) {
  EXPECT_EQ(canonical_key(parse_smiles("c1ccccc1")), canonical_key(parse_smiles("c1ccccc1")));
  EXPECT_EQ(canonical_key(parse_smiles("OCC")), canonical_key(parse_smiles("CCO")));
  EXPECT_NE(canonical_key(parse_smiles("CCO")), canonical_key(parse_smiles("CCN")));
  EXPECT_NE(canonical_key(parse_smiles("C=CC")), canonical_key(parse_smiles("CCC")));
  EXPECT_EQ(canonical_key(parse_smiles("C1=CC=C(C=C1)C(=O)O")),
            canonical_key(parse_smiles("OC(=O)c1ccccc1")));
  EXPECT_EQ(canonical_key(Molecule{}), "");
}

TEST(CanonicalKey, InvariantUnderAtomPermutationAndReparse) {
  Rng rng(2024);
  for (const auto& s : testing::smiles_corpus()) {
    const Molecule m = parse_smiles(s);
    const std::string key = canonical_key(m);
    for (int trial = 0; trial < 100; ++trial) {
      EXPECT_EQ(canonical_key(parse_smiles(s)), key);
    }
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> order(m.atom_count());
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);
      ASSERT_EQ(canonical_key(m.permuted(order)), key) << s;
    }
  }
}

TEST(CanonicalKey, DistinguishesCorpusMolecules) {
  std::vector<std::string> keys;
  for (const auto& s : testing::smiles_corpus()) keys.push_back(canonical_key(parse_smiles(s)));
  std::sort(keys.begin(), keys.end());
  // Only the two naphthalene spellings and the two cyclohexane spellings collide.
  EXPECT_EQ(std::unique(keys.begin(), keys.end()) - keys.begin(),
            static_cast<std::ptrdiff_t>(keys.size() - 2));
}

}  // namespace
}  // namespace mvmol::chem
