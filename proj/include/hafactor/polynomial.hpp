#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hafactor
{

/// Exact coefficient type. Products of factor bits for l_n <= 64 stay below 2^128.
using Coeff = __int128;

std::string to_string(Coeff value);

/// Inclusive integer range.
struct Range
{
	std::int64_t lo = 0;
	std::int64_t hi = 0;

	[[nodiscard]] bool empty() const { return lo > hi; }
	[[nodiscard]] bool singleton() const { return lo == hi; }
	[[nodiscard]] std::int64_t width() const { return hi - lo; }
	[[nodiscard]] bool contains(std::int64_t v) const { return lo <= v && v <= hi; }

	friend bool operator==(const Range&, const Range&) = default;
};

enum class VarKind : std::uint8_t
{
	FactorBitP,
	FactorBitQ,
	Carry,
	AncillaQubit,
};

/// A named unknown. Identity (ordering, equality) is the pair (kind, index);
/// `bound` is the absolute range the variable can ever take.
struct Variable
{
	VarKind kind = VarKind::FactorBitP;
	int index = 0;
	Range bound{0, 1};

	static Variable p(int index) { return {VarKind::FactorBitP, index, {0, 1}}; }
	static Variable q(int index) { return {VarKind::FactorBitQ, index, {0, 1}}; }
	static Variable carry(int index, Range bound) { return {VarKind::Carry, index, bound}; }
	static Variable ancilla(int index) { return {VarKind::AncillaQubit, index, {0, 1}}; }

	[[nodiscard]] bool is_binary() const { return kind != VarKind::Carry; }
	[[nodiscard]] std::string name() const;

	friend bool operator==(const Variable& a, const Variable& b)
	{
		return a.kind == b.kind && a.index == b.index;
	}
	friend std::strong_ordering operator<=>(const Variable& a, const Variable& b)
	{
		if(auto c = a.kind <=> b.kind; c != 0) {
			return c;
		}
		return a.index <=> b.index;
	}
};

/// Values for a set of variables; every stored value lies inside the variable's bound.
class Assignment
{
public:
	Assignment() = default;

	void set(const Variable& v, std::int64_t value);
	void erase(const Variable& v) { values_.erase(v); }

	[[nodiscard]] bool contains(const Variable& v) const { return values_.count(v) != 0; }
	[[nodiscard]] std::int64_t at(const Variable& v) const;
	[[nodiscard]] std::size_t size() const { return values_.size(); }
	[[nodiscard]] bool empty() const { return values_.empty(); }

	[[nodiscard]] const std::map<Variable, std::int64_t>& values() const { return values_; }

	auto begin() const { return values_.begin(); }
	auto end() const { return values_.end(); }

	friend bool operator==(const Assignment&, const Assignment&) = default;

private:
	std::map<Variable, std::int64_t> values_;
};

/// Sorted, duplicate-free product of variables.
using Monomial = std::vector<Variable>;

/// Degree first, then lexicographic on the variables.
struct MonomialLess
{
	bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Integer-coefficient multilinear polynomial. Binary variables are idempotent
/// (x*x = x); carries may only appear with degree one and never multiplied by
/// another carry.
class Polynomial
{
public:
	using TermMap = std::map<Monomial, Coeff, MonomialLess>;

	Polynomial() = default;
	Polynomial(Coeff constant); // NOLINT(google-explicit-constructor)
	Polynomial(int constant) : Polynomial(Coeff{constant}) {} // NOLINT
	Polynomial(std::int64_t constant) : Polynomial(Coeff{constant}) {} // NOLINT

	static Polynomial variable(const Variable& v, Coeff coeff = 1);

	/// Non-constant terms; never contains a zero coefficient or the empty monomial.
	[[nodiscard]] const TermMap& terms() const { return terms_; }
	[[nodiscard]] Coeff constant() const { return constant_; }

	[[nodiscard]] bool is_constant() const { return terms_.empty(); }
	[[nodiscard]] bool is_zero() const { return terms_.empty() && constant_ == 0; }
	[[nodiscard]] std::size_t degree() const;

	/// Sorted list of variables occurring in any term.
	[[nodiscard]] std::vector<Variable> variables() const;
	[[nodiscard]] bool contains(const Variable& v) const;
	/// Coefficient of the degree-one monomial {v}; 0 when absent.
	[[nodiscard]] Coeff linear_coefficient(const Variable& v) const;

	Polynomial& operator+=(const Polynomial& other);
	Polynomial& operator-=(const Polynomial& other);
	Polynomial& operator*=(Coeff scalar);

	friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
	friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
	friend Polynomial operator-(Polynomial a) { return a *= -1; }
	friend Polynomial operator*(Polynomial a, Coeff s) { return a *= s; }
	friend Polynomial operator*(Coeff s, Polynomial a) { return a *= s; }
	friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

	friend bool operator==(const Polynomial&, const Polynomial&) = default;

	/// Canonical rendering, e.g. "p1 + q1 + C1 - 2*C2 - 1".
	[[nodiscard]] std::string to_string() const;

	/// Adds c * m; `m` must be sorted and duplicate-free.
	void add_term(const Monomial& m, Coeff c);

private:
	TermMap terms_;
	Coeff constant_ = 0;
};

/// Thrown when a product would place two carry variables in one monomial.
class EncodingError : public std::logic_error
{
public:
	using std::logic_error::logic_error;
};

/// Thrown by evaluate() when a variable has no value.
class MissingVariable : public std::out_of_range
{
public:
	using std::out_of_range::out_of_range;
};

Polynomial multiply(const Polynomial& a, const Polynomial& b);

/// Replace every occurrence of `v` by `e` and re-canonicalize.
Polynomial substitute(const Polynomial& p, const Variable& v, const Polynomial& e);

/// Substitute every variable that has a value in `values`.
Polynomial substitute(const Polynomial& p, const Assignment& values);

Coeff evaluate(const Polynomial& p, const Assignment& a);

/// Range of a free variable during interval evaluation.
using DomainFn = std::function<Range(const Variable&)>;

/// The variable's own absolute bound.
Range absolute_domain(const Variable& v);

struct ValueBounds
{
	Coeff min = 0;
	Coeff max = 0;

	friend bool operator==(const ValueBounds&, const ValueBounds&) = default;
};

/// Term-wise interval bounds of `p` over all completions of `fixed`. Always
/// contains the true range; may be loose when terms share variables.
ValueBounds bounds(const Polynomial& p, const Assignment& fixed, const DomainFn& domain = absolute_domain);

} // namespace hafactor
