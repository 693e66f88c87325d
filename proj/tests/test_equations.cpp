#include "hafactor/equations.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <algorithm>

using namespace hafactor;

namespace
{

Polynomial var(const Variable& v)
{
	return Polynomial::variable(v);
}

bool has_split(const std::vector<BitSplit>& splits, int lp, int lq, SplitCase c)
{
	return std::any_of(splits.begin(), splits.end(), [&](const BitSplit& s) {
		return s.l_p == lp && s.l_q == lq && s.split_case == c;
	});
}

/// Assignment of every variable in `system` from the factors and their long-multiplication carries.
Assignment true_assignment(const EquationSystem& system, std::uint64_t p, std::uint64_t q)
{
	const auto& s = system.split;
	const auto carries = oracle::long_multiplication_carries(p, q, s.l_p, s.l_q);
	Assignment a;
	for(const auto& v : system.variables) {
		switch(v.kind) {
		case VarKind::FactorBitP:
			a.set(v, static_cast<std::int64_t>((p >> v.index) & 1U));
			break;
		case VarKind::FactorBitQ:
			a.set(v, static_cast<std::int64_t>((q >> v.index) & 1U));
			break;
		default:
			a.set(v, carries[static_cast<std::size_t>(v.index)]);
			break;
		}
	}
	return a;
}

} // namespace

TEST_CASE("bit helpers")
{
	CHECK(bit_length(551) == 10);
	CHECK(bit_length(1) == 1);
	CHECK(bit_length(0) == 0);
	CHECK(bit(551, 0) == 1);
	CHECK(bit(551, 3) == 0);
	CHECK(bit(551, 9) == 1);
}

TEST_CASE("enumerate_splits examples")
{
	const auto s551 = enumerate_splits(551);
	REQUIRE_FALSE(s551.empty());
	CHECK(s551.front() == BitSplit{10, 5, 5, SplitCase::A});

	const auto s21 = enumerate_splits(21);
	CHECK(has_split(s21, 3, 2, SplitCase::A));
	CHECK(has_split(s21, 3, 3, SplitCase::B));

	const auto s9 = enumerate_splits(9);
	CHECK(s9.front() == BitSplit{4, 2, 2, SplitCase::A});
}

TEST_CASE("enumerate_splits rejects even and small inputs")
{
	CHECK_THROWS_AS(enumerate_splits(550), InvalidInput);
	CHECK_THROWS_AS(enumerate_splits(7), InvalidInput);
	CHECK_THROWS_AS(make_split(551, 9, 9), InvalidInput);
}

TEST_CASE("property: every split satisfies the length invariants")
{
	for(std::uint64_t n = 9; n < 5000; n += 2) {
		const int ln = bit_length(n);
		const auto splits = enumerate_splits(n);
		REQUIRE_FALSE(splits.empty());
		for(const auto& s : splits) {
			REQUIRE(s.l_n == ln);
			REQUIRE(s.l_q >= 2);
			REQUIRE(s.l_q <= (ln + 1) / 2);
			REQUIRE(s.l_p >= (ln + 1) / 2);
			REQUIRE(ln == s.l_p + s.l_q - (s.split_case == SplitCase::A ? 0 : 1));
		}
		// the lengths of the real factor pair are always offered
		const auto d = oracle::smallest_factor(n);
		if(d != 0) {
			const int lq = oracle::bits_of(d);
			const int lp = oracle::bits_of(n / d);
			REQUIRE(std::any_of(splits.begin(), splits.end(),
			                    [&](const BitSplit& s) { return s.l_p == lp && s.l_q == lq; }));
		}
	}
}

TEST_CASE("build_equations examples for 551")
{
	const auto system = build_equations(551, make_split(551, 5, 5));
	REQUIRE(system.equations.size() == 10);
	const Variable c1 = system.carry(1);
	const Variable c2 = system.carry(2);

	const auto& m1 = system.equations[1];
	CHECK(m1.rhs_bit == 1);
	CHECK(m1.residual() == var(Variable::p(1)) + var(Variable::q(1)) + var(c1) - Polynomial(1) - 2 * var(c2));

	// 1*1 - 1 - 2 C1: forces C1 = 0
	CHECK(system.equations[0].residual() == -2 * var(c1));

	const auto& m9 = system.equations[9];
	CHECK(m9.order == 9);
	CHECK_FALSE(m9.carry_out.has_value());
	CHECK(m9.residual() == var(system.carry(9)) - Polynomial(1));

	CHECK(system.fixed.at(Variable::p(0)) == 1);
	CHECK(system.fixed.at(Variable::p(4)) == 1);
	CHECK(system.fixed.at(Variable::q(0)) == 1);
	CHECK(system.fixed.at(Variable::q(4)) == 1);
	CHECK(system.fixed.at(system.carry(9)) == 1);
}

TEST_CASE("terminal carry follows the split case")
{
	const auto a = build_equations(21, make_split(21, 3, 2));
	CHECK(a.fixed.at(a.carry(4)) == 1);
	const auto b = build_equations(15, make_split(15, 3, 2));
	CHECK(b.fixed.at(b.carry(4)) == 0);
}

TEST_CASE("matrix_view examples")
{
	const auto v551 = matrix_view(build_equations(551, make_split(551, 5, 5)));
	REQUIRE(v551.q_matrix.size() == 10);
	REQUIRE(v551.q_matrix[5].size() == 5);
	CHECK(v551.q_matrix[5] == std::vector<std::string>{"0", "1", "q3", "q2", "q1"});
	CHECK(v551.p_vector == std::vector<std::string>{"1", "p1", "p2", "p3", "1"});
	CHECK(v551.rhs == std::vector<int>{1, 1, 1, 0, 0, 1, 0, 0, 0, 1});

	const auto v9 = matrix_view(build_equations(9, make_split(9, 2, 2)));
	REQUIRE(v9.q_matrix.size() == 4);
	CHECK(v9.q_matrix[0] == std::vector<std::string>{"1", "0"});

	const auto v143 = matrix_view(build_equations(143, make_split(143, 4, 4)));
	REQUIRE(v143.q_matrix.size() == 8);
	for(int m = 0; m < 8; ++m) {
		for(int j = 0; j < 4; ++j) {
			const int k = m - j;
			const std::string expected = (k < 0 || k > 3) ? "0" : (k == 0 || k == 3) ? "1" : "q" + std::to_string(k);
			CHECK(v143.q_matrix[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] == expected);
		}
	}
}

TEST_CASE("column span matches the cross-term count")
{
	for(int lp = 2; lp <= 8; ++lp) {
		for(int lq = 2; lq <= lp; ++lq) {
			const BitSplit s{lp + lq, lp, lq, SplitCase::A};
			for(int m = 0; m < lp + lq - 1; ++m) {
				int count = 0;
				for(int j = 0; j < lp; ++j) {
					for(int k = 0; k < lq; ++k) {
						count += (j + k == m) ? 1 : 0;
					}
				}
				const auto span = column_span(s, m);
				REQUIRE(span.beta - span.alpha + 1 == count);
			}
		}
	}
}

TEST_CASE("property: lhs with all bits one counts the cross terms")
{
	const std::uint64_t n = 551;
	const auto system = build_equations(n, make_split(n, 5, 5));
	Assignment ones;
	for(const auto& v : system.variables) {
		ones.set(v, v.kind == VarKind::Carry ? 0 : 1);
	}
	for(const auto& eq : system.equations) {
		if(!eq.carry_out) {
			continue;
		}
		const auto span = column_span(system.split, eq.order);
		REQUIRE(evaluate(eq.lhs, ones) == span.beta - span.alpha + 1);
	}
}

TEST_CASE("property: true factors satisfy every equation (odd biprimes < 10000)")
{
	int checked = 0;
	for(std::uint64_t n = 9; n < 10000; n += 2) {
		if(!oracle::is_odd_biprime(n)) {
			continue;
		}
		const std::uint64_t q = oracle::smallest_factor(n);
		const std::uint64_t p = n / q;
		const auto system = build_equations(n, make_split(n, oracle::bits_of(p), oracle::bits_of(q)));
		const Assignment a = true_assignment(system, p, q);
		for(const auto& eq : system.equations) {
			REQUIRE(evaluate(eq.residual(), a) == 0);
		}
		++checked;
	}
	CHECK(checked > 1000);
}

TEST_CASE("property: weighted sum of the equations telescopes to P*Q - n")
{
	for(std::uint64_t n : {9ULL, 15ULL, 21ULL, 143ULL, 551ULL, 1763ULL, 9991ULL, 40001ULL}) {
		for(const auto& split : enumerate_splits(n)) {
			const auto system = build_equations(n, split);
			Polynomial sum;
			for(const auto& eq : system.equations) {
				sum += eq.residual() * (Coeff{1} << eq.order);
			}
			const Polynomial pq = factor_polynomial(split, VarKind::FactorBitP) * factor_polynomial(split, VarKind::FactorBitQ);
			REQUIRE(sum == pq - Polynomial(static_cast<Coeff>(n)));
		}
	}
}

TEST_CASE("carry bounds")
{
	const auto s = make_split(551, 5, 5);
	std::vector<std::int64_t> hi;
	for(int i = 1; i <= 8; ++i) {
		hi.push_back(absolute_carry_bound(s, i));
	}
	CHECK(hi == std::vector<std::int64_t>{0, 1, 2, 3, 4, 4, 3, 2});
}
