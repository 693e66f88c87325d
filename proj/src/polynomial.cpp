#include "hafactor/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace hafactor
{

std::string to_string(Coeff value)
{
	if(value == 0) {
		return "0";
	}
	const bool negative = value < 0;
	// magnitude as unsigned so that the most negative value still prints
	auto mag = negative ? static_cast<unsigned __int128>(-(value + 1)) + 1 : static_cast<unsigned __int128>(value);
	std::string digits;
	while(mag != 0) {
		digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
		mag /= 10;
	}
	if(negative) {
		digits.push_back('-');
	}
	std::reverse(digits.begin(), digits.end());
	return digits;
}

std::string Variable::name() const
{
	switch(kind) {
	case VarKind::FactorBitP:
		return "p" + std::to_string(index);
	case VarKind::FactorBitQ:
		return "q" + std::to_string(index);
	case VarKind::Carry:
		return "C" + std::to_string(index);
	case VarKind::AncillaQubit:
		return "a" + std::to_string(index);
	}
	return "?";
}

void Assignment::set(const Variable& v, std::int64_t value)
{
	if(!v.bound.contains(value)) {
		throw std::out_of_range("value " + std::to_string(value) + " outside bound of " + v.name());
	}
	values_.insert_or_assign(v, value);
}

std::int64_t Assignment::at(const Variable& v) const
{
	const auto it = values_.find(v);
	if(it == values_.end()) {
		throw MissingVariable("no value for " + v.name());
	}
	return it->second;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const
{
	if(a.size() != b.size()) {
		return a.size() < b.size();
	}
	return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Polynomial::Polynomial(Coeff constant) : constant_{constant} { }

Polynomial Polynomial::variable(const Variable& v, Coeff coeff)
{
	Polynomial p;
	p.add_term({v}, coeff);
	return p;
}

void Polynomial::add_term(const Monomial& m, Coeff c)
{
	if(c == 0) {
		return;
	}
	if(m.empty()) {
		constant_ += c;
		return;
	}
	auto [it, inserted] = terms_.try_emplace(m, c);
	if(!inserted) {
		it->second += c;
		if(it->second == 0) {
			terms_.erase(it);
		}
	}
}

std::size_t Polynomial::degree() const
{
	return terms_.empty() ? 0 : terms_.rbegin()->first.size();
}

std::vector<Variable> Polynomial::variables() const
{
	std::vector<Variable> out;
	for(const auto& [m, c] : terms_) {
		out.insert(out.end(), m.begin(), m.end());
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

bool Polynomial::contains(const Variable& v) const
{
	return std::any_of(terms_.begin(), terms_.end(), [&](const auto& t) {
		return std::binary_search(t.first.begin(), t.first.end(), v);
	});
}

Coeff Polynomial::linear_coefficient(const Variable& v) const
{
	const auto it = terms_.find(Monomial{v});
	return it == terms_.end() ? Coeff{0} : it->second;
}

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
	constant_ += other.constant_;
	for(const auto& [m, c] : other.terms_) {
		add_term(m, c);
	}
	return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other)
{
	constant_ -= other.constant_;
	for(const auto& [m, c] : other.terms_) {
		add_term(m, -c);
	}
	return *this;
}

Polynomial& Polynomial::operator*=(Coeff scalar)
{
	if(scalar == 0) {
		terms_.clear();
		constant_ = 0;
		return *this;
	}
	constant_ *= scalar;
	for(auto& [m, c] : terms_) {
		c *= scalar;
	}
	return *this;
}

namespace
{

Monomial merge_monomials(const Monomial& a, const Monomial& b)
{
	Monomial out;
	out.reserve(a.size() + b.size());
	std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
	const auto carries = std::count_if(out.begin(), out.end(), [](const Variable& v) { return !v.is_binary(); });
	const bool squared_carry = std::any_of(a.begin(), a.end(), [&](const Variable& v) {
		return !v.is_binary() && std::binary_search(b.begin(), b.end(), v);
	});
	if(carries > 1 || squared_carry) {
		throw EncodingError("carry variables may only appear linearly");
	}
	return out;
}

} // namespace

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
	Polynomial out = Polynomial(a.constant_ * b.constant_);
	for(const auto& [m, c] : a.terms_) {
		out.add_term(m, c * b.constant_);
	}
	for(const auto& [m, c] : b.terms_) {
		out.add_term(m, c * a.constant_);
	}
	for(const auto& [ma, ca] : a.terms_) {
		for(const auto& [mb, cb] : b.terms_) {
			out.add_term(merge_monomials(ma, mb), ca * cb);
		}
	}
	return out;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b)
{
	return a * b;
}

std::string Polynomial::to_string() const
{
	if(is_zero()) {
		return "0";
	}
	std::ostringstream os;
	bool first = true;
	auto emit = [&](Coeff c, const std::string& body) {
		const bool negative = c < 0;
		const Coeff mag = negative ? -c : c;
		if(first) {
			os << (negative ? "-" : "");
		} else {
			os << (negative ? " - " : " + ");
		}
		first = false;
		if(body.empty()) {
			os << hafactor::to_string(mag);
		} else if(mag == 1) {
			os << body;
		} else {
			os << hafactor::to_string(mag) << '*' << body;
		}
	};
	for(const auto& [m, c] : terms_) {
		std::string body;
		for(std::size_t i = 0; i < m.size(); ++i) {
			body += (i ? "*" : "") + m[i].name();
		}
		emit(c, body);
	}
	if(constant_ != 0) {
		emit(constant_, "");
	}
	return os.str();
}

Polynomial substitute(const Polynomial& p, const Variable& v, const Polynomial& e)
{
	Polynomial out(p.constant());
	for(const auto& [m, c] : p.terms()) {
		if(!std::binary_search(m.begin(), m.end(), v)) {
			Polynomial term;
			term.add_term(m, c);
			out += term;
			continue;
		}
		Monomial rest_vars;
		std::copy_if(m.begin(), m.end(), std::back_inserter(rest_vars), [&](const Variable& x) { return !(x == v); });
		Polynomial rest;
		rest.add_term(rest_vars, c);
		out += rest * e;
	}
	return out;
}

Polynomial substitute(const Polynomial& p, const Assignment& values)
{
	Polynomial out(p.constant());
	for(const auto& [m, c] : p.terms()) {
		Coeff scale = c;
		Monomial rest_vars;
		for(const auto& x : m) {
			if(values.contains(x)) {
				scale *= values.at(x);
			} else {
				rest_vars.push_back(x);
			}
		}
		Polynomial rest;
		rest.add_term(rest_vars, scale);
		out += rest;
	}
	return out;
}

Coeff evaluate(const Polynomial& p, const Assignment& a)
{
	Coeff total = p.constant();
	for(const auto& [m, c] : p.terms()) {
		Coeff prod = c;
		for(const auto& x : m) {
			prod *= a.at(x);
		}
		total += prod;
	}
	return total;
}

Range absolute_domain(const Variable& v)
{
	return v.bound;
}

ValueBounds bounds(const Polynomial& p, const Assignment& fixed, const DomainFn& domain)
{
	ValueBounds out{p.constant(), p.constant()};
	for(const auto& [m, c] : p.terms()) {
		// interval product over the monomial's factors
		Coeff lo = c;
		Coeff hi = c;
		for(const auto& x : m) {
			Coeff xlo;
			Coeff xhi;
			if(fixed.contains(x)) {
				xlo = xhi = fixed.at(x);
			} else {
				const Range r = domain(x);
				xlo = r.lo;
				xhi = r.hi;
			}
			const Coeff cands[] = {lo * xlo, lo * xhi, hi * xlo, hi * xhi};
			lo = *std::min_element(std::begin(cands), std::end(cands));
			hi = *std::max_element(std::begin(cands), std::end(cands));
		}
		out.min += lo;
		out.max += hi;
	}
	return out;
}

} // namespace hafactor
