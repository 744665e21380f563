#include "mvmol/chem/elements.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace mvmol::chem {
namespace {

// Standard atomic weights (abridged to 3 decimals where the abridged value is
// longer); radioactive elements use the mass number of the longest-lived isotope.
constexpr std::array<ElementInfo, 118> kElements{{
    {1, "H", 1.008},      {2, "He", 4.003},     {3, "Li", 6.94},      {4, "Be", 9.012},
    {5, "B", 10.81},      {6, "C", 12.011},     {7, "N", 14.007},     {8, "O", 15.999},
    {9, "F", 18.998},     {10, "Ne", 20.180},   {11, "Na", 22.990},   {12, "Mg", 24.305},
    {13, "Al", 26.982},   {14, "Si", 28.085},   {15, "P", 30.974},    {16, "S", 32.06},
    {17, "Cl", 35.45},    {18, "Ar", 39.95},    {19, "K", 39.098},    {20, "Ca", 40.078},
    {21, "Sc", 44.956},   {22, "Ti", 47.867},   {23, "V", 50.942},    {24, "Cr", 51.996},
    {25, "Mn", 54.938},   {26, "Fe", 55.845},   {27, "Co", 58.933},   {28, "Ni", 58.693},
    {29, "Cu", 63.546},   {30, "Zn", 65.38},    {31, "Ga", 69.723},   {32, "Ge", 72.630},
    {33, "As", 74.922},   {34, "Se", 78.971},   {35, "Br", 79.904},   {36, "Kr", 83.798},
    {37, "Rb", 85.468},   {38, "Sr", 87.62},    {39, "Y", 88.906},    {40, "Zr", 91.224},
    {41, "Nb", 92.906},   {42, "Mo", 95.95},    {43, "Tc", 98.0},     {44, "Ru", 101.07},
    {45, "Rh", 102.906},  {46, "Pd", 106.42},   {47, "Ag", 107.868},  {48, "Cd", 112.414},
    {49, "In", 114.818},  {50, "Sn", 118.710},  {51, "Sb", 121.760},  {52, "Te", 127.60},
    {53, "I", 126.904},   {54, "Xe", 131.293},  {55, "Cs", 132.905},  {56, "Ba", 137.327},
    {57, "La", 138.905},  {58, "Ce", 140.116},  {59, "Pr", 140.908},  {60, "Nd", 144.242},
    {61, "Pm", 145.0},    {62, "Sm", 150.36},   {63, "Eu", 151.964},  {64, "Gd", 157.25},
    {65, "Tb", 158.925},  {66, "Dy", 162.500},  {67, "Ho", 164.930},  {68, "Er", 167.259},
    {69, "Tm", 168.934},  {70, "Yb", 173.045},  {71, "Lu", 174.967},  {72, "Hf", 178.49},
    {73, "Ta", 180.948},  {74, "W", 183.84},    {75, "Re", 186.207},  {76, "Os", 190.23},
    {77, "Ir", 192.217},  {78, "Pt", 195.084},  {79, "Au", 196.967},  {80, "Hg", 200.592},
    {81, "Tl", 204.38},   {82, "Pb", 207.2},    {83, "Bi", 208.980},  {84, "Po", 209.0},
    {85, "At", 210.0},    {86, "Rn", 222.0},    {87, "Fr", 223.0},    {88, "Ra", 226.0},
    {89, "Ac", 227.0},    {90, "Th", 232.038},  {91, "Pa", 231.036},  {92, "U", 238.029},
    {93, "Np", 237.0},    {94, "Pu", 244.0},    {95, "Am", 243.0},    {96, "Cm", 247.0},
    {97, "Bk", 247.0},    {98, "Cf", 251.0},    {99, "Es", 252.0},    {100, "Fm", 257.0},
    {101, "Md", 258.0},   {102, "No", 259.0},   {103, "Lr", 262.0},   {104, "Rf", 267.0},
    {105, "Db", 268.0},   {106, "Sg", 269.0},   {107, "Bh", 270.0},   {108, "Hs", 269.0},
    {109, "Mt", 278.0},   {110, "Ds", 281.0},   {111, "Rg", 282.0},   {112, "Cn", 285.0},
    {113, "Nh", 286.0},   {114, "Fl", 289.0},   {115, "Mc", 290.0},   {116, "Lv", 293.0},
    {117, "Ts", 294.0},   {118, "Og", 294.0},
}};

struct IsotopeInfo {
  int atomic_number;
  int mass_number;
  double mass;
};

constexpr std::array<IsotopeInfo, 19> kIsotopes{{
    {1, 2, 2.014},    {1, 3, 3.016},     {6, 11, 11.011},   {6, 12, 12.000},
    {6, 13, 13.003},  {6, 14, 14.003},   {7, 15, 15.000},   {8, 17, 16.999},
    {8, 18, 17.999},  {9, 18, 18.001},   {15, 32, 31.974},  {16, 35, 34.969},
    {17, 36, 35.968}, {17, 37, 36.966},  {35, 79, 78.918},  {35, 81, 80.916},
    {53, 123, 122.906}, {53, 125, 124.905}, {53, 131, 130.906},
}};

}  // namespace

const ElementInfo* find_element(std::string_view symbol) {
  for (const auto& e : kElements) {
    if (e.symbol == symbol) return &e;
  }
  return nullptr;
}

const ElementInfo& element(int atomic_number) {
  if (atomic_number < 1 || atomic_number > static_cast<int>(kElements.size())) {
    throw std::out_of_range("atomic number out of range: " + std::to_string(atomic_number));
  }
  return kElements[static_cast<std::size_t>(atomic_number - 1)];
}

double isotope_mass(int atomic_number, int mass_number) {
  for (const auto& iso : kIsotopes) {
    if (iso.atomic_number == atomic_number && iso.mass_number == mass_number) return iso.mass;
  }
  return static_cast<double>(mass_number);
}

}  // namespace mvmol::chem
