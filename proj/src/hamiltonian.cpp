#include "hafactor/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace hafactor
{

Dyadic::Dyadic(Coeff numerator, int shift) : numerator_{numerator}, shift_{shift}
{
	if(numerator_ == 0) {
		shift_ = 0;
		return;
	}
	while(shift_ > 0 && numerator_ % 2 == 0) {
		numerator_ /= 2;
		--shift_;
	}
	while(shift_ < 0) {
		numerator_ *= 2;
		++shift_;
	}
}

double Dyadic::to_double() const
{
	return std::ldexp(static_cast<double>(numerator_), -shift_);
}

std::string Dyadic::to_string() const
{
	if(shift_ == 0) {
		return hafactor::to_string(numerator_);
	}
	return hafactor::to_string(numerator_) + "/" + hafactor::to_string(Coeff{1} << shift_);
}

Polynomial CarryEncoding::expression() const
{
	Polynomial e(offset);
	for(std::size_t t = 0; t < ancillas.size(); ++t) {
		e += Polynomial::variable(ancillas[t], Coeff{1} << t);
	}
	return e;
}

std::int64_t CarryEncoding::max_value() const
{
	return offset + (std::int64_t{1} << ancillas.size()) - 1;
}

CarryEncoding encode_carry(const Variable& carry, Range range, int first_ancilla, int first_qubit)
{
	if(range.hi <= range.lo) {
		throw std::invalid_argument("carry " + carry.name() + " is already fixed");
	}
	const auto span = static_cast<std::uint64_t>(range.hi - range.lo + 1);
	const int bits = std::bit_width(span - 1);
	CarryEncoding enc;
	enc.carry = carry;
	enc.offset = range.lo;
	for(int t = 0; t < bits; ++t) {
		enc.ancillas.push_back(Variable::ancilla(first_ancilla + t));
		enc.qubits.push_back(first_qubit + t);
	}
	return enc;
}

Assignment QubitMap::assignment(std::uint64_t b) const
{
	const int k = size();
	Assignment a;
	for(int i = 0; i < k; ++i) {
		a.set(qubits[static_cast<std::size_t>(i)], qubit_bit(b, i, k));
	}
	for(const auto& enc : carries) {
		const auto value = static_cast<std::int64_t>(evaluate(enc.expression(), a));
		// over-covering encodings can exceed the carry's absolute bound
		Variable widened = enc.carry;
		widened.bound.hi = std::max(widened.bound.hi, enc.max_value());
		a.set(widened, value);
	}
	return a;
}

std::uint64_t QubitMap::basis_index(const Assignment& a) const
{
	const int k = size();
	std::uint64_t b = 0;
	for(int i = 0; i < k; ++i) {
		if(a.at(qubits[static_cast<std::size_t>(i)]) != 0) {
			b |= std::uint64_t{1} << (k - 1 - i);
		}
	}
	return b;
}

double HamiltonianSpec::energy(std::uint64_t b) const
{
	double e = 0.0;
	for(const auto& t : final_terms) {
		int sign = 1;
		for(const int i : t.z) {
			if(QubitMap::qubit_bit(b, i, qubits) != 0) {
				sign = -sign;
			}
		}
		e += sign * t.coeff.to_double();
	}
	return e;
}

namespace
{

struct ZStringLess
{
	bool operator()(const std::vector<int>& a, const std::vector<int>& b) const
	{
		if(a.size() != b.size()) {
			return a.size() < b.size();
		}
		return a < b;
	}
};

} // namespace

std::vector<PauliTerm> number_operators_to_pauli(const Polynomial& cost, const QubitMap& map)
{
	std::map<Variable, int> qubit_of;
	for(int i = 0; i < map.size(); ++i) {
		qubit_of.emplace(map.qubits[static_cast<std::size_t>(i)], i);
	}
	const int depth = static_cast<int>(cost.degree());
	std::map<std::vector<int>, Coeff, ZStringLess> acc;
	acc[{}] += cost.constant() << depth;
	for(const auto& [mono, c] : cost.terms()) {
		std::vector<int> support;
		for(const auto& v : mono) {
			const auto it = qubit_of.find(v);
			if(it == qubit_of.end()) {
				throw std::invalid_argument("variable " + v.name() + " has no qubit");
			}
			support.push_back(it->second);
		}
		std::sort(support.begin(), support.end());
		const auto size = support.size();
		const Coeff scale = c << (depth - static_cast<int>(size));
		// prod (I - Z_i)/2 = 2^-|S| sum_{T subset S} (-1)^|T| Z_T
		for(std::uint64_t subset = 0; subset < (std::uint64_t{1} << size); ++subset) {
			std::vector<int> z;
			for(std::size_t j = 0; j < size; ++j) {
				if((subset >> j) & 1U) {
					z.push_back(support[j]);
				}
			}
			acc[z] += (z.size() % 2 == 0) ? scale : -scale;
		}
	}
	std::vector<PauliTerm> out;
	for(const auto& [z, num] : acc) {
		if(num != 0) {
			out.push_back({z, Dyadic(num, depth)});
		}
	}
	return out;
}

namespace
{

HamiltonianSpec encode_equations(const ResidualSystem& residual)
{
	HamiltonianSpec h;
	int ancilla = 0;
	for(const auto& v : residual.free) {
		if(v.is_binary()) {
			h.map.qubits.push_back(v);
		}
	}
	for(const auto& v : residual.free) {
		if(v.kind != VarKind::Carry) {
			continue;
		}
		const Range r = residual.domain(v);
		if(r.singleton()) {
			continue;
		}
		auto enc = encode_carry(v, r, ancilla, h.map.size());
		ancilla += static_cast<int>(enc.ancillas.size());
		h.map.qubits.insert(h.map.qubits.end(), enc.ancillas.begin(), enc.ancillas.end());
		h.map.carries.push_back(std::move(enc));
	}
	h.qubits = h.map.size();

	for(const auto& eq : residual.equations) {
		Polynomial e = eq;
		for(const auto& enc : h.map.carries) {
			e = substitute(e, enc.carry, enc.expression());
		}
		for(const auto& v : residual.free) {
			if(v.kind == VarKind::Carry && residual.domain(v).singleton()) {
				Assignment pin;
				pin.set(v, residual.domain(v).lo);
				e = substitute(e, pin);
			}
		}
		h.cost += e * e;
	}
	h.final_terms = number_operators_to_pauli(h.cost, h.map);
	return h;
}

} // namespace

HamiltonianSpec build_bitwise_hamiltonian(const ResidualSystem& residual)
{
	if(residual.free.empty()) {
		throw NothingToEncode("residual system has no free variables");
	}
	return encode_equations(residual);
}

ResidualSystem peng_residual(std::uint64_t n, const BitSplit& split)
{
	ResidualSystem r;
	const Polynomial p = factor_polynomial(split, VarKind::FactorBitP);
	const Polynomial q = factor_polynomial(split, VarKind::FactorBitQ);
	r.equations.push_back(Polynomial(static_cast<Coeff>(n)) - p * q);
	for(int j = 1; j + 1 < split.l_p; ++j) {
		r.free.push_back(Variable::p(j));
	}
	for(int k = 1; k + 1 < split.l_q; ++k) {
		r.free.push_back(Variable::q(k));
	}
	r.fixed.set(Variable::p(0), 1);
	r.fixed.set(Variable::p(split.l_p - 1), 1);
	r.fixed.set(Variable::q(0), 1);
	r.fixed.set(Variable::q(split.l_q - 1), 1);
	return r;
}

HamiltonianSpec build_peng_hamiltonian(std::uint64_t n, const BitSplit& split, int qubit_cap)
{
	const int k = (split.l_p - 2) + (split.l_q - 2);
	if(k > qubit_cap) {
		throw CapExceeded("global cost Hamiltonian needs " + std::to_string(k) + " qubits, cap is " +
		                  std::to_string(qubit_cap));
	}
	return encode_equations(peng_residual(n, split));
}

Eigen::VectorXd final_diagonal(const HamiltonianSpec& h, int qubit_cap)
{
	if(h.qubits > qubit_cap) {
		throw CapExceeded(std::to_string(h.qubits) + " qubits exceed the simulator cap of " + std::to_string(qubit_cap));
	}
	const auto dim = static_cast<Eigen::Index>(h.dimension());
	Eigen::VectorXd d(dim);
	for(Eigen::Index b = 0; b < dim; ++b) {
		d(b) = h.energy(static_cast<std::uint64_t>(b));
	}
	return d;
}

Eigen::MatrixXd transverse_field(int k)
{
	const auto dim = Eigen::Index{1} << k;
	Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
	for(Eigen::Index b = 0; b < dim; ++b) {
		for(int j = 0; j < k; ++j) {
			m(b, b ^ (Eigen::Index{1} << j)) = 1.0;
		}
	}
	return m;
}

Eigen::MatrixXd to_matrix(const HamiltonianSpec& h, HamiltonianPart part, int qubit_cap)
{
	if(h.qubits > qubit_cap) {
		throw CapExceeded(std::to_string(h.qubits) + " qubits exceed the simulator cap of " + std::to_string(qubit_cap));
	}
	if(part == HamiltonianPart::Initial) {
		return transverse_field(h.qubits);
	}
	return final_diagonal(h, qubit_cap).asDiagonal();
}

} // namespace hafactor
