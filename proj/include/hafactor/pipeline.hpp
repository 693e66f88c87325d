#pragma once

#include "hafactor/adiabatic.hpp"
#include "hafactor/carry_simplifier.hpp"
#include "hafactor/equations.hpp"
#include "hafactor/hamiltonian.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hafactor
{

enum class Method : std::uint8_t
{
	ClassicalOnly,
	HybridAdiabatic,
	PengGlobal,
};

std::string to_string(Method m);

enum class Mode : std::uint8_t
{
	/// Simplify classically, then anneal the residual equations.
	Hybrid,
	/// Anneal (n - P Q)^2 directly.
	Peng,
};

/// No split produced a verified factorization.
class NotFactorable : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

struct PipelineConfig
{
	Schedule schedule;
	int qubit_cap = default_qubit_cap;
	/// (l_p, l_q) to try instead of the enumerated splits.
	std::optional<std::pair<int, int>> split_override;
	/// Basis states above this final probability are decoded and checked.
	double threshold = 0.2;
	Mode mode = Mode::Hybrid;
	/// After a failed read-out the schedule is doubled (T and M) and rerun this many times.
	int retries = 3;
	SimplifierOptions simplifier;
};

void validate(const PipelineConfig& cfg);

struct FactorResult
{
	std::uint64_t n = 0;
	std::uint64_t p = 0;
	std::uint64_t q = 0;
	Method method = Method::ClassicalOnly;
	/// Absent when n was even and 2 was divided out directly.
	std::optional<BitSplit> split;
	std::size_t residual_vars = 0;
	int qubits = 0;
	std::optional<double> final_fidelity;
	bool verified = false;
	/// Both factors are prime.
	bool biprime = false;

	std::optional<EquationSystem> system;
	std::optional<ResidualSystem> residual;
	std::optional<HamiltonianSpec> hamiltonian;
	std::optional<AdiabaticTrace> trace;
	/// The schedule that produced the accepted read-out.
	std::optional<Schedule> schedule;
	std::vector<std::string> diagnostics;
};

FactorResult factor(std::uint64_t n, const PipelineConfig& cfg = {});

struct Decoded
{
	std::uint64_t p = 0;
	std::uint64_t q = 0;
	/// The basis state satisfies every residual equation.
	bool solution = false;
	Assignment assignment;
};

/// Reads the free variables from basis index b, replays the substitution log
/// and assembles p and q. With `require_solution` a state violating a
/// residual equation throws std::domain_error.
Decoded decode(std::uint64_t b, const QubitMap& map, const ResidualSystem& residual, const BitSplit& split,
               bool require_solution = false);

/// Basis index of the factor pair's free bits, the inverse of decode.
std::uint64_t encode_factors(std::uint64_t p, std::uint64_t q, const QubitMap& map, const ResidualSystem& residual,
                             const BitSplit& split);

bool is_prime(std::uint64_t n);

/// Trial division; smallest factor first. Throws NotFactorable for primes.
std::pair<std::uint64_t, std::uint64_t> brute_force_factor(std::uint64_t n);

} // namespace hafactor
