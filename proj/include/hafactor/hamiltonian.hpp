#pragma once

#include "hafactor/carry_simplifier.hpp"
#include "hafactor/equations.hpp"
#include "hafactor/polynomial.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hafactor
{

/// Default limit on simulated register size (2^14 amplitudes).
inline constexpr int default_qubit_cap = 14;

class CapExceeded : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// The residual is empty: nothing is left for the quantum stage.
class NothingToEncode : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

/// Exact rational numerator / 2^shift, kept in lowest terms.
class Dyadic
{
public:
	Dyadic() = default;
	Dyadic(Coeff numerator, int shift = 0); // NOLINT(google-explicit-constructor)

	[[nodiscard]] Coeff numerator() const { return numerator_; }
	[[nodiscard]] int shift() const { return shift_; }
	[[nodiscard]] double to_double() const;
	/// "3/2", "-1/4", "2".
	[[nodiscard]] std::string to_string() const;

	friend bool operator==(const Dyadic&, const Dyadic&) = default;

private:
	Coeff numerator_ = 0;
	int shift_ = 0;
};

/// coeff * prod_{i in z} Z_i; empty z is the identity.
struct PauliTerm
{
	std::vector<int> z;
	Dyadic coeff;

	friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

/// carry = offset + sum_t 2^t a_t, a_t living on `qubits[t]`.
struct CarryEncoding
{
	Variable carry;
	std::int64_t offset = 0;
	std::vector<Variable> ancillas;
	std::vector<int> qubits;

	[[nodiscard]] Polynomial expression() const;
	/// Largest encodable value, offset + 2^T - 1.
	[[nodiscard]] std::int64_t max_value() const;
};

/// Encodes a carry known to lie in `range` (hi > lo) with ceil(log2(hi - lo + 1))
/// ancilla bits starting at `first_ancilla` / `first_qubit`.
CarryEncoding encode_carry(const Variable& carry, Range range, int first_ancilla = 0, int first_qubit = 0);

/// Qubit i carries variable `qubits[i]`: free factor bits first, then ancillas.
struct QubitMap
{
	std::vector<Variable> qubits;
	std::vector<CarryEncoding> carries;

	[[nodiscard]] int size() const { return static_cast<int>(qubits.size()); }
	/// Qubit i read from basis index b; qubit 0 is the most significant bit.
	[[nodiscard]] static int qubit_bit(std::uint64_t b, int qubit, int k)
	{
		return static_cast<int>((b >> (k - 1 - qubit)) & 1U);
	}
	/// Values of every mapped variable and every encoded carry at basis index b.
	[[nodiscard]] Assignment assignment(std::uint64_t b) const;
	/// Basis index encoding the mapped variables' values in `a`.
	[[nodiscard]] std::uint64_t basis_index(const Assignment& a) const;
};

/// H_f as diagonal Z strings plus the transverse initial part sum_i sigma_x^i.
struct HamiltonianSpec
{
	std::vector<PauliTerm> final_terms;
	int qubits = 0;
	QubitMap map;
	/// Sum of squared equations over the mapped binaries (H_f before the Z expansion).
	Polynomial cost;

	[[nodiscard]] std::uint64_t dimension() const { return std::uint64_t{1} << qubits; }
	/// H_f's diagonal entry at basis index b, from the Pauli terms.
	[[nodiscard]] double energy(std::uint64_t b) const;
};

/// Expands sum_S c_S prod_{i in S} (I - Z_i)/2 into merged Z strings.
std::vector<PauliTerm> number_operators_to_pauli(const Polynomial& cost, const QubitMap& map);

/// H_f = sum over residual equations of (equation with W substituted)^2.
HamiltonianSpec build_bitwise_hamiltonian(const ResidualSystem& residual);

/// The single equation n - P*Q over the middle bits of p and q.
ResidualSystem peng_residual(std::uint64_t n, const BitSplit& split);

/// H_f = (n I - P Q)^2 over the middle bits of p and q; may have zero qubits.
HamiltonianSpec build_peng_hamiltonian(std::uint64_t n, const BitSplit& split, int qubit_cap = default_qubit_cap);

enum class HamiltonianPart : std::uint8_t
{
	Initial,
	Final,
};

Eigen::VectorXd final_diagonal(const HamiltonianSpec& h, int qubit_cap = default_qubit_cap);
Eigen::MatrixXd to_matrix(const HamiltonianSpec& h, HamiltonianPart part, int qubit_cap = default_qubit_cap);

/// sum_i sigma_x^i on k qubits.
Eigen::MatrixXd transverse_field(int k);

} // namespace hafactor
