#pragma once

#include "hafactor/polynomial.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hafactor
{

/// Bit length of n (0 for n == 0).
int bit_length(std::uint64_t n);

/// Bit i of n.
inline int bit(std::uint64_t n, int i)
{
	return i < 64 ? static_cast<int>((n >> i) & 1U) : 0;
}

enum class SplitCase : std::uint8_t
{
	A, ///< l_n = l_p + l_q
	B, ///< l_n = l_p + l_q - 1
};

/// Candidate bit lengths of the two factors, l_q <= ceil(l_n/2) <= l_p.
struct BitSplit
{
	int l_n = 0;
	int l_p = 0;
	int l_q = 0;
	SplitCase split_case = SplitCase::A;

	/// Number of multiplication-table columns with cross terms, l_p + l_q - 1.
	[[nodiscard]] int columns() const { return l_p + l_q - 1; }
	/// Index of the carry leaving the most significant column.
	[[nodiscard]] int terminal_carry() const { return l_p + l_q - 1; }

	friend bool operator==(const BitSplit&, const BitSplit&) = default;
};

std::string to_string(const BitSplit& s);

class InvalidInput : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

/// Splits consistent with n's bit length, ordered by decreasing l_q and then
/// increasing l_p, so the balanced split comes first when it exists.
std::vector<BitSplit> enumerate_splits(std::uint64_t n);

/// Makes a split from explicit factor lengths; throws InvalidInput if the lengths
/// cannot produce an l_n-bit number.
BitSplit make_split(std::uint64_t n, int l_p, int l_q);

/// One column of the multiplication table:
///   lhs(m) = sum_k p_{m-k} q_k + C_m  ==  n_m + 2 C_{m+1}
/// with the constant bits p_0 = q_0 = 1 and the two most significant bits
/// already folded into lhs. The row m = l_p + l_q - 1 is the terminal
/// condition C_{l_p+l_q-1} = n_{l_p+l_q-1} and has no outgoing carry.
struct FactoringEquation
{
	int order = 0;
	Polynomial lhs;
	int rhs_bit = 0;
	std::optional<Variable> carry_out;

	/// lhs - n_m - 2 C_{m+1}; zero on every solution.
	[[nodiscard]] Polynomial residual() const;
};

struct EquationSystem
{
	std::uint64_t n = 0;
	BitSplit split;
	std::vector<FactoringEquation> equations;
	/// All p_j, q_k and C_m, sorted.
	std::vector<Variable> variables;
	/// p_0, q_0, the two most significant bits and the terminal carry.
	Assignment fixed;

	[[nodiscard]] std::optional<Variable> find(VarKind kind, int index) const;
	[[nodiscard]] Variable carry(int index) const;
	[[nodiscard]] std::vector<Variable> carries() const;
	/// The residual polynomials in order.
	[[nodiscard]] std::vector<Polynomial> residuals() const;
};

/// First and last q index contributing to column m.
struct ColumnSpan
{
	int alpha = 0;
	int beta = 0;
};

ColumnSpan column_span(const BitSplit& split, int m);

/// Absolute upper bound of the cumulative carry entering column i, 1 <= i <= l_p + l_q - 2.
std::int64_t absolute_carry_bound(const BitSplit& split, int i);

EquationSystem build_equations(std::uint64_t n, const BitSplit& split);

/// p and q as polynomials in their bits with the fixed bits substituted.
Polynomial factor_polynomial(const BitSplit& split, VarKind kind);

/// Banded matrix layout Q * p + C_in = n + 2 C_out.
struct MatrixView
{
	/// (l_p + l_q) x l_p cells: "0", "1" or a q-bit name.
	std::vector<std::vector<std::string>> q_matrix;
	/// "1", "p1", ..., "1".
	std::vector<std::string> p_vector;
	std::vector<std::string> carry_in;
	std::vector<std::string> carry_out;
	std::vector<int> rhs;
};

MatrixView matrix_view(const EquationSystem& system);

} // namespace hafactor
