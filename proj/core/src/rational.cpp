#include "toricdef/rational.hpp"

#include <sstream>
#include <stdexcept>

namespace toricdef {

std::string to_string(const Rational& q)
{
	Rational c = q;
	c.canonicalize();
	return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(std::string_view text)
{
	std::string s(text);
	auto valid = [](const std::string& part, bool allow_sign) {
		if (part.empty())
			return false;
		std::size_t i = 0;
		if (allow_sign && (part[0] == '-' || part[0] == '+'))
			i = 1;
		if (i == part.size())
			return false;
		for (; i < part.size(); ++i)
			if (part[i] < '0' || part[i] > '9')
				return false;
		return true;
	};
	auto slash = s.find('/');
	std::string num = s.substr(0, slash);
	std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
	if (!valid(num, true) || !valid(den, false))
		throw std::invalid_argument("malformed rational '" + s + "'");
	if (num[0] == '+')
		num.erase(0, 1);
	Integer d(den);
	if (d == 0)
		throw std::invalid_argument("zero denominator in '" + s + "'");
	Rational q(Integer(num), d);
	q.canonicalize();
	return q;
}

std::int64_t dot(const IntVec& a, const IntVec& b)
{
	if (a.size() != b.size())
		throw std::invalid_argument("dot: dimension mismatch");
	std::int64_t s = 0;
	for (std::size_t i = 0; i < a.size(); ++i)
		s += a[i] * b[i];
	return s;
}

std::string to_string(const IntVec& v)
{
	std::ostringstream os;
	os << '(';
	for (std::size_t i = 0; i < v.size(); ++i)
		os << (i ? "," : "") << v[i];
	os << ')';
	return os.str();
}

}  // namespace toricdef
