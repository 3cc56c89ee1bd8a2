#pragma once

#include <array>
#include <string_view>

#include "esr/numcore/diagnostics.hpp"

namespace esr::kinetics {

inline constexpr int kSpecies = 7;
inline constexpr int kReactions = 4;
inline constexpr int kElements = 3;

using SpeciesVector = std::array<double, kSpecies>;
using ReactionVector = std::array<double, kReactions>;
using Stoichiometry = std::array<std::array<double, kSpecies>, kReactions>;
using AtomMatrix = std::array<std::array<int, kElements>, kSpecies>;

/// Species order used by every vector in the library.
enum Species : int { C2H5OH = 0, H2O, CH4, H2, CO, CO2, CH3CHO };

inline constexpr std::array<std::string_view, kSpecies> kSpeciesNames = {"C2H5OH", "H2O", "CH4", "H2",
                                                                        "CO",     "CO2", "CH3CHO"};
inline constexpr std::array<std::string_view, kElements> kElementNames = {"C", "H", "O"};
inline constexpr std::array<std::string_view, kReactions> kReactionNames = {"1a", "1b", "1c", "1d"};

/// (C, H, O) counts per species.
const AtomMatrix& atom_matrix();

struct KineticsParams {
    ReactionVector k_inf{};
    ReactionVector E_a{};
    ReactionVector dH{};
    Stoichiometry nu{};
    double T_ref = 773.0;
    /// When false every rate is zero (transport-only runs).
    bool enabled = true;
    bool operator==(const KineticsParams&) const = default;
};

struct RateVector {
    double r_a = 0.0;
    double r_b = 0.0;
    double r_c = 0.0;
    double r_d = 0.0;

    [[nodiscard]] ReactionVector as_array() const { return {r_a, r_b, r_c, r_d}; }
};

/// Rows: dehydrogenation, decomposition, water-gas shift, acetaldehyde reforming.
Stoichiometry default_stoichiometry();

/// Element balance of reaction i: Σ_j ν_ij·a_j,e for e = C, H, O.
std::array<double, kElements> atom_imbalance(const Stoichiometry& nu, int reaction);

/// Index of the first reaction row that does not balance, or -1. Rows must be integral.
int first_unbalanced_reaction(const Stoichiometry& nu);

/// P_j = (F_j / ΣF)·p. Throws ZeroTotalFlow when ΣF <= 0.
SpeciesVector partial_pressures(const SpeciesVector& F, double p);

double k_wgs(double T);
double arrhenius(double k_inf, double E_a, double T, double T_ref, double R);

/// Negative partial pressures are clamped to zero for rate evaluation only.
RateVector reaction_rates(const SpeciesVector& P, double T, const KineticsParams& params, double R,
                          Diagnostics* diag = nullptr);

SpeciesVector species_sources(const RateVector& r, const Stoichiometry& nu);
double heat_source(const RateVector& r, const ReactionVector& dH);

}  // namespace esr::kinetics
