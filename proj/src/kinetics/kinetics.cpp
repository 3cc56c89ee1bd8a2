#include "esr/kinetics/kinetics.hpp"

#include <cmath>

#include "esr/numcore/error.hpp"

namespace esr::kinetics {

const AtomMatrix& atom_matrix() {
    static const AtomMatrix a = {{
        {2, 6, 1},  // C2H5OH
        {0, 2, 1},  // H2O
        {1, 4, 0},  // CH4
        {0, 2, 0},  // H2
        {1, 0, 1},  // CO
        {1, 0, 2},  // CO2
        {2, 4, 1},  // CH3CHO
    }};
    return a;
}

Stoichiometry default_stoichiometry() {
    return {{
        {-1, 0, 0, 1, 0, 0, 1},    // C2H5OH -> CH3CHO + H2
        {-1, 0, 1, 1, 1, 0, 0},    // C2H5OH -> CH4 + CO + H2
        {0, -1, 0, 1, -1, 1, 0},   // CO + H2O <-> CO2 + H2
        {0, -3, 0, 5, 0, 2, -1},   // CH3CHO + 3H2O -> 2CO2 + 5H2
    }};
}

std::array<double, kElements> atom_imbalance(const Stoichiometry& nu, int reaction) {
    std::array<double, kElements> out{};
    const auto& a = atom_matrix();
    for (int e = 0; e < kElements; ++e)
        for (int j = 0; j < kSpecies; ++j) out[e] += nu[reaction][j] * a[j][e];
    return out;
}

int first_unbalanced_reaction(const Stoichiometry& nu) {
    for (int i = 0; i < kReactions; ++i) {
        for (double v : nu[i])
            if (v != std::round(v)) return i;
        for (double imb : atom_imbalance(nu, i))
            if (imb != 0.0) return i;
    }
    return -1;
}

SpeciesVector partial_pressures(const SpeciesVector& F, double p) {
    double total = 0.0;
    for (double f : F) total += f;
    if (!(total > 0.0)) throw Error(ErrorCode::ZeroTotalFlow, "total molar flow is not positive");
    SpeciesVector P{};
    for (int j = 0; j < kSpecies; ++j) P[j] = F[j] / total * p;
    return P;
}

double k_wgs(double T) { return std::exp(4577.8 / T - 4.33); }

double arrhenius(double k_inf, double E_a, double T, double T_ref, double R) {
    return k_inf * std::exp(-E_a * (1.0 / (R * T) - 1.0 / (R * T_ref)));
}

RateVector reaction_rates(const SpeciesVector& P_in, double T, const KineticsParams& params, double R,
                          Diagnostics* diag) {
    if (!params.enabled) return {};
    SpeciesVector P = P_in;
    for (double& v : P)
        if (v < 0.0) {
            if (diag) diag->warn_once("kinetics.clamp", "negative partial pressure clamped to 0 in rate evaluation");
            v = 0.0;
        }
    ReactionVector k{};
    for (int i = 0; i < kReactions; ++i) k[i] = arrhenius(params.k_inf[i], params.E_a[i], T, params.T_ref, R);
    RateVector r;
    r.r_a = k[0] * P[C2H5OH];
    r.r_b = k[1] * P[C2H5OH];
    r.r_c = k[2] * (P[CO] * P[H2O] - P[CO2] * P[H2] / k_wgs(T));
    r.r_d = k[3] * P[CH3CHO] * P[H2O] * P[H2O] * P[H2O];
    return r;
}

SpeciesVector species_sources(const RateVector& r, const Stoichiometry& nu) {
    const ReactionVector rv = r.as_array();
    SpeciesVector s{};
    for (int j = 0; j < kSpecies; ++j)
        for (int i = 0; i < kReactions; ++i) s[j] += nu[i][j] * rv[i];
    return s;
}

double heat_source(const RateVector& r, const ReactionVector& dH) {
    const ReactionVector rv = r.as_array();
    double h = 0.0;
    for (int i = 0; i < kReactions; ++i) h -= dH[i] * rv[i];
    return h;
}

}  // namespace esr::kinetics
