#include "hafactor/equations.hpp"

#include <algorithm>
#include <bit>

namespace hafactor
{

int bit_length(std::uint64_t n)
{
	return static_cast<int>(std::bit_width(n));
}

std::string to_string(const BitSplit& s)
{
	return "(l_p=" + std::to_string(s.l_p) + ", l_q=" + std::to_string(s.l_q) + ", case " +
	       (s.split_case == SplitCase::A ? "A" : "B") + ")";
}

namespace
{

int ceil_half(int x)
{
	return (x + 1) / 2;
}

bool valid_lengths(int l_n, int l_p, int l_q)
{
	return l_p >= 2 && l_q >= 2 && l_q <= ceil_half(l_n) && ceil_half(l_n) <= l_p &&
	       (l_n == l_p + l_q || l_n == l_p + l_q - 1);
}

} // namespace

std::vector<BitSplit> enumerate_splits(std::uint64_t n)
{
	if(n % 2 == 0 || n < 9) {
		throw InvalidInput("split enumeration needs an odd n >= 9, got " + std::to_string(n));
	}
	const int l_n = bit_length(n);
	std::vector<BitSplit> out;
	for(int l_q = ceil_half(l_n); l_q >= 2; --l_q) {
		for(const int l_p : {l_n - l_q, l_n + 1 - l_q}) {
			if(valid_lengths(l_n, l_p, l_q)) {
				out.push_back({l_n, l_p, l_q, l_n == l_p + l_q ? SplitCase::A : SplitCase::B});
			}
		}
	}
	return out;
}

BitSplit make_split(std::uint64_t n, int l_p, int l_q)
{
	const int l_n = bit_length(n);
	if(!valid_lengths(l_n, l_p, l_q)) {
		throw InvalidInput("split l_p=" + std::to_string(l_p) + ", l_q=" + std::to_string(l_q) +
		                   " is not valid for a " + std::to_string(l_n) + "-bit number");
	}
	return {l_n, l_p, l_q, l_n == l_p + l_q ? SplitCase::A : SplitCase::B};
}

Polynomial FactoringEquation::residual() const
{
	Polynomial r = lhs - Polynomial(rhs_bit);
	if(carry_out) {
		r -= Polynomial::variable(*carry_out, 2);
	}
	return r;
}

std::optional<Variable> EquationSystem::find(VarKind kind, int index) const
{
	const Variable key{kind, index, {}};
	const auto it = std::lower_bound(variables.begin(), variables.end(), key);
	if(it == variables.end() || !(*it == key)) {
		return std::nullopt;
	}
	return *it;
}

Variable EquationSystem::carry(int index) const
{
	auto v = find(VarKind::Carry, index);
	if(!v) {
		throw std::out_of_range("no carry C" + std::to_string(index));
	}
	return *v;
}

std::vector<Variable> EquationSystem::carries() const
{
	std::vector<Variable> out;
	std::copy_if(variables.begin(), variables.end(), std::back_inserter(out),
	             [](const Variable& v) { return v.kind == VarKind::Carry; });
	return out;
}

std::vector<Polynomial> EquationSystem::residuals() const
{
	std::vector<Polynomial> out;
	out.reserve(equations.size());
	for(const auto& e : equations) {
		out.push_back(e.residual());
	}
	return out;
}

ColumnSpan column_span(const BitSplit& split, int m)
{
	return {std::max(0, m - split.l_p + 1), std::min(m, split.l_q - 1)};
}

std::int64_t absolute_carry_bound(const BitSplit& split, int i)
{
	if(i < 1 || i > split.l_p + split.l_q - 2) {
		throw std::out_of_range("carry index " + std::to_string(i) + " outside 1..l_p+l_q-2");
	}
	if(i <= split.l_q - 1) {
		return i - 1;
	}
	if(i <= split.l_p) {
		return split.l_q - 1;
	}
	return split.l_p + split.l_q - i;
}

namespace
{

bool is_fixed_bit(int index, int length)
{
	return index == 0 || index == length - 1;
}

/// The bit as a polynomial; fixed bits are the constant 1.
Polynomial bit_term(VarKind kind, int index, int length)
{
	if(is_fixed_bit(index, length)) {
		return Polynomial(1);
	}
	return Polynomial::variable(kind == VarKind::FactorBitP ? Variable::p(index) : Variable::q(index));
}

} // namespace

Polynomial factor_polynomial(const BitSplit& split, VarKind kind)
{
	const int length = kind == VarKind::FactorBitP ? split.l_p : split.l_q;
	Polynomial out;
	for(int j = 0; j < length; ++j) {
		out += bit_term(kind, j, length) * (Coeff{1} << j);
	}
	return out;
}

EquationSystem build_equations(std::uint64_t n, const BitSplit& split)
{
	if(bit_length(n) != split.l_n) {
		throw InvalidInput("split " + to_string(split) + " does not match bit length of " + std::to_string(n));
	}
	EquationSystem sys;
	sys.n = n;
	sys.split = split;

	for(int j = 0; j < split.l_p; ++j) {
		sys.variables.push_back(Variable::p(j));
	}
	for(int k = 0; k < split.l_q; ++k) {
		sys.variables.push_back(Variable::q(k));
	}
	const int terminal = split.terminal_carry();
	for(int i = 1; i < terminal; ++i) {
		sys.variables.push_back(Variable::carry(i, {0, absolute_carry_bound(split, i)}));
	}
	const Variable terminal_carry = Variable::carry(terminal, {0, 1});
	sys.variables.push_back(terminal_carry);
	std::sort(sys.variables.begin(), sys.variables.end());

	sys.fixed.set(Variable::p(0), 1);
	sys.fixed.set(Variable::p(split.l_p - 1), 1);
	sys.fixed.set(Variable::q(0), 1);
	sys.fixed.set(Variable::q(split.l_q - 1), 1);
	sys.fixed.set(terminal_carry, split.split_case == SplitCase::A ? 1 : 0);

	for(int m = 0; m < terminal; ++m) {
		FactoringEquation eq;
		eq.order = m;
		const auto [alpha, beta] = column_span(split, m);
		for(int k = alpha; k <= beta; ++k) {
			eq.lhs += bit_term(VarKind::FactorBitP, m - k, split.l_p) * bit_term(VarKind::FactorBitQ, k, split.l_q);
		}
		if(m > 0) {
			eq.lhs += Polynomial::variable(sys.carry(m));
		}
		eq.rhs_bit = bit(n, m);
		eq.carry_out = sys.carry(m + 1);
		sys.equations.push_back(std::move(eq));
	}
	FactoringEquation last;
	last.order = terminal;
	last.lhs = Polynomial::variable(terminal_carry);
	last.rhs_bit = bit(n, terminal);
	sys.equations.push_back(std::move(last));
	return sys;
}

MatrixView matrix_view(const EquationSystem& system)
{
	const BitSplit& s = system.split;
	const int rows = s.l_p + s.l_q;
	MatrixView view;
	auto q_cell = [&](int k) -> std::string {
		if(k < 0 || k >= s.l_q) {
			return "0";
		}
		return is_fixed_bit(k, s.l_q) ? "1" : Variable::q(k).name();
	};
	for(int m = 0; m < rows; ++m) {
		std::vector<std::string> row;
		for(int j = 0; j < s.l_p; ++j) {
			row.push_back(q_cell(m - j));
		}
		view.q_matrix.push_back(std::move(row));
		view.carry_in.push_back(m == 0 ? "0" : Variable::carry(m, {}).name());
		view.carry_out.push_back(m + 1 < rows ? Variable::carry(m + 1, {}).name() : "0");
		view.rhs.push_back(bit(system.n, m));
	}
	for(int j = 0; j < s.l_p; ++j) {
		view.p_vector.push_back(is_fixed_bit(j, s.l_p) ? "1" : Variable::p(j).name());
	}
	return view;
}

} // namespace hafactor
