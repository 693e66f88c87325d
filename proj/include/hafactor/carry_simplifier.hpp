#pragma once

#include "hafactor/equations.hpp"
#include "hafactor/polynomial.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace hafactor
{

/// Raised when the factoring equations of a split have no solution. The
/// pipeline treats it as "try the next split".
class InfeasibleSplit : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Inclusive ranges of the cumulative carries, keyed by carry index.
class BoundTable
{
public:
	BoundTable() = default;

	void set(int index, Range r) { ranges_.insert_or_assign(index, r); }
	[[nodiscard]] Range at(int index) const;
	[[nodiscard]] bool contains(int index) const { return ranges_.count(index) != 0; }

	/// Sum of (hi - lo) over all carries.
	[[nodiscard]] std::int64_t total_width() const;

	[[nodiscard]] const std::map<int, Range>& ranges() const { return ranges_; }
	auto begin() const { return ranges_.begin(); }
	auto end() const { return ranges_.end(); }

	friend bool operator==(const BoundTable&, const BoundTable&) = default;

private:
	std::map<int, Range> ranges_;
};

/// Absolute carry bounds; the terminal carry is pinned to its case value.
BoundTable init_bounds(const BitSplit& split);

/// Interval refinement of every carry from every equation it occurs in, to a
/// fixpoint. For the outgoing carry this is
///   hi_{m+1} = floor((max cross_m + hi_m - n_m) / 2),
///   lo_{m+1} = ceil((min cross_m + lo_m - n_m) / 2),
/// and the incoming carry is tightened the same way from the other side.
/// If `width_history` is given, the table width after each sweep is appended.
BoundTable refine_bounds(const EquationSystem& system, const BoundTable& table,
                         std::vector<std::int64_t>* width_history = nullptr);

struct Substitution
{
	Variable variable;
	Polynomial expression;
};

struct ResidualSystem
{
	/// Each polynomial is constrained to zero.
	std::vector<Polynomial> equations;
	/// Binary factor bits first, then surviving carries; sorted.
	std::vector<Variable> free;
	/// Ranges of the surviving carries.
	BoundTable carry_ranges;
	/// Applied in order; replay in reverse.
	std::vector<Substitution> eliminated;
	/// Every variable pinned to a constant, including the structural fixed bits.
	Assignment fixed;
	/// Final carry table (all carries, fixed ones as singletons).
	BoundTable carries;

	[[nodiscard]] Range domain(const Variable& v) const;
	[[nodiscard]] std::size_t free_binary_count() const;
};

struct SimplifierOptions
{
	/// Rule R3: x + y = 1 becomes y = 1 - x.
	bool pairwise_substitution = true;
	/// Exact per-equation support filtering when the equation has at most this
	/// many joint assignments; 0 disables it.
	std::size_t support_enumeration_cap = std::size_t{1} << 16;
	/// Try each value of an undecided carry and drop values that lead to a contradiction.
	bool probe_carries = true;
	/// Carries with more candidate values than this are not probed.
	std::int64_t probe_domain_cap = 16;
	/// Visit equations from the most significant column down.
	bool reverse_order = false;
};

/// Runs the rule set (constant equations, fixed carries, collapsed bounds,
/// exact support, x + y = 1 substitution) with carry refinement to a fixpoint.
ResidualSystem propagate(const EquationSystem& system, const BoundTable& table, const SimplifierOptions& options = {});

/// Every satisfying assignment of the free variables. Throws std::length_error
/// when the free variable count exceeds `cap`.
std::vector<Assignment> solve_residual_exhaustively(const ResidualSystem& residual, std::size_t cap = 20);

/// Extends a solution over the free variables to all variables of the original
/// system using the fixed values and the substitution log.
Assignment replay(const ResidualSystem& residual, const Assignment& solution);

} // namespace hafactor
