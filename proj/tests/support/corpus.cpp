#include "support/corpus.hpp"

namespace mvmol::testing {

const std::vector<std::string>& smiles_corpus() {
  static const std::vector<std::string> kCorpus{
      "C",
      "CCO",
      "O=O",
      "C1=CC=C(C=C1)C(=O)O",
      "c1ccccc1",
      "c1ccc2ccccc2c1",
      "C1CCCCC1",
      "c1ccncc1",
      "c1ccoc1",
      "c1ccsc1",
      "c1cc[nH]c1",
      "CC(=O)Nc1ccc(O)cc1",
      "CC(=O)Oc1ccccc1C(=O)O",
      "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
      "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
      "c1ccccc1CCc1ccccc1",
      "[NH4+]",
      "[13CH4]",
      "C[N+](C)(C)C",
      "CC(=O)[O-].[Na+]",
      "ClC(Cl)(Cl)Cl",
      "FC(F)(F)c1ccccc1",
      "Brc1ccc(I)cc1",
      "C1CC2CCC1C2",
      "C12C3C4C1C5C2C3C45",
      "OC1C(O)C(O)C(O)C(O)C1O",
      "N#Cc1ccccc1",
      "O=C1CCCCC1",
      "C1=CC=CC=C1C=O",
      "CCN(CC)CC",
      "CS(=O)(=O)N",
      "OP(=O)(O)O",
      "C1CCC2(CC1)CCCC2",
      "c1ccc(cc1)-c1ccccc1",
      "c1ccc2c(c1)ccc1ccccc12",
      "C1=CC2=CC=CC=C2C=C1",
      "O=C(O)C1=CC=CC=N1",
      "CC1=CC(=O)C=CC1=O",
      "C[C@H](N)C(=O)O",
      "F/C=C/F",
      "C%10CCCCC%10",
      "[2H]OC",
      "OCCN1CCN(CC1)C",
      "c1ccc2[nH]ccc2c1",
      "O=c1cccc[nH]1",
      "CC(C)(C)c1ccc(O)cc1",
      "O=C(NC1CC1)c1ccc(Cl)cc1",
      "CCCCCCCCCCCC",
      "c1ccc(cc1)C(c1ccccc1)c1ccccc1",
      "C1CC1C1CC1",
  };
  return kCorpus;
}

const std::vector<std::string>& pattern_corpus() {
  static const std::vector<std::string> kPatterns{
      "C", "O", "N", "C=O", "CO", "CC", "CCC", "CC(=O)O", "c1ccccc1", "cc", "cn", "C#N",
      "C(F)(F)F", "Cl", "C1CC1", "CCN", "c1ccncc1", "O=C1CCCCC1", "C1CCCCC1", "cO",
  };
  return kPatterns;
}

}  // namespace mvmol::testing
