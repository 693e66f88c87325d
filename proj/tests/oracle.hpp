#pragma once

// Reference implementations used only by the tests: exhaustive enumeration
// and plain integer arithmetic, independent of the library's algebra.

#include "hafactor/polynomial.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace oracle
{

using hafactor::Assignment;
using hafactor::Variable;

/// Assignment of `vars` (all binary) from the bits of `mask`, vars[i] <- bit i.
inline Assignment from_mask(const std::vector<Variable>& vars, std::uint64_t mask)
{
	Assignment a;
	for(std::size_t i = 0; i < vars.size(); ++i) {
		a.set(vars[i], static_cast<std::int64_t>((mask >> i) & 1U));
	}
	return a;
}

inline bool is_prime(std::uint64_t n)
{
	if(n < 2) {
		return false;
	}
	for(std::uint64_t d = 2; d * d <= n; ++d) {
		if(n % d == 0) {
			return false;
		}
	}
	return true;
}

/// Smallest prime factor, or 0 if n is prime or < 4.
inline std::uint64_t smallest_factor(std::uint64_t n)
{
	for(std::uint64_t d = 2; d * d <= n; ++d) {
		if(n % d == 0) {
			return d;
		}
	}
	return 0;
}

inline bool is_odd_biprime(std::uint64_t n)
{
	if(n % 2 == 0) {
		return false;
	}
	const auto d = smallest_factor(n);
	return d != 0 && is_prime(n / d);
}

inline int bits_of(std::uint64_t n)
{
	int b = 0;
	while(n != 0) {
		++b;
		n >>= 1;
	}
	return b;
}

/// Column carries of the long multiplication p * q, carries[m] entering column m.
inline std::vector<std::int64_t> long_multiplication_carries(std::uint64_t p, std::uint64_t q, int lp, int lq)
{
	const std::uint64_t n = p * q;
	std::vector<std::int64_t> carries(static_cast<std::size_t>(lp + lq + 1), 0);
	for(int m = 0; m < lp + lq; ++m) {
		std::int64_t column = carries[static_cast<std::size_t>(m)];
		for(int k = 0; k < lq; ++k) {
			const int j = m - k;
			if(j >= 0 && j < lp) {
				column += static_cast<std::int64_t>(((p >> j) & 1U) & ((q >> k) & 1U));
			}
		}
		carries[static_cast<std::size_t>(m + 1)] = (column - static_cast<std::int64_t>((n >> m) & 1U)) / 2;
	}
	return carries;
}

/// Random multilinear polynomial over binary `vars`.
inline hafactor::Polynomial random_polynomial(std::mt19937_64& rng, const std::vector<Variable>& vars, int terms,
                                              int max_degree)
{
	std::uniform_int_distribution<int> coeff(-5, 5);
	std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
	std::uniform_int_distribution<int> deg(1, max_degree);
	hafactor::Polynomial p(coeff(rng));
	for(int t = 0; t < terms; ++t) {
		hafactor::Polynomial mono(1);
		const int d = deg(rng);
		for(int i = 0; i < d; ++i) {
			mono = mono * hafactor::Polynomial::variable(vars[pick(rng)]);
		}
		p += mono * hafactor::Coeff{coeff(rng)};
	}
	return p;
}

} // namespace oracle
