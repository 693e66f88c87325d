#pragma once

#include "hafactor/adiabatic.hpp"
#include "hafactor/carry_simplifier.hpp"
#include "hafactor/equations.hpp"
#include "hafactor/hamiltonian.hpp"
#include "hafactor/pipeline.hpp"

#include <json.hpp>

#include <ostream>

namespace hafactor
{

using Json = nlohmann::ordered_json;

/// {split, equations: [{m, lhs, n_m}], fixed, matrix}
Json to_json(const EquationSystem& system);
/// {split, equations, free, carries, substitutions, fixed}
Json to_json(const ResidualSystem& residual, const BitSplit& split);
/// {qubits, map, terms: [{z, coeff, exact}]}
Json to_json(const HamiltonianSpec& h);
/// {n, p, q, method, split, residual_vars, qubits, final_fidelity, verified}
Json to_json(const FactorResult& result);

/// step, s, E_0..E_{2^k-1}, gap, fidelity, P_0..P_{2^k-1}
void write_trace_csv(std::ostream& os, const AdiabaticTrace& trace);
/// s, E_0..E_{2^k-1}, gap
void write_spectrum_csv(std::ostream& os, const SpectrumTrace& spectrum);

} // namespace hafactor
