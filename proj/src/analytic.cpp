#include "aglerkit/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "aglerkit/errors.hpp"

namespace aglerkit {

MultiPoly::MultiPoly(int vars) : vars_(vars) {
  if (vars < 0) throw InvalidArgument("polynomial needs a nonnegative variable count");
}

MultiPoly MultiPoly::constant(int vars, Complex c) {
  MultiPoly p(vars);
  p.add_term(Exponent(static_cast<std::size_t>(vars), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int vars, int index) {
  if (index < 0 || index >= vars) throw InvalidArgument("variable index out of range");
  MultiPoly p(vars);
  Exponent e(static_cast<std::size_t>(vars), 0);
  e[static_cast<std::size_t>(index)] = 1;
  p.add_term(e, 1.0);
  return p;
}

void MultiPoly::add_term(const Exponent& e, Complex c) {
  if (static_cast<int>(e.size()) != vars_) throw InvalidArgument("exponent length does not match variable count");
  if (std::any_of(e.begin(), e.end(), [](int k) { return k < 0; })) {
    throw InvalidArgument("exponents must be nonnegative");
  }
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InvalidArgument("non-finite coefficient");
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (c != Complex{}) terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == Complex{}) terms_.erase(it);
}

Complex MultiPoly::coeff(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? Complex{} : it->second;
}

Complex MultiPoly::evaluate(std::span<const Complex> x) const {
  if (static_cast<int>(x.size()) != vars_) throw InvalidArgument("point dimension does not match polynomial");
  Complex s{};
  for (const auto& [e, c] : terms_) {
    Complex t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    }
    s += t;
  }
  return s;
}

MultiPoly MultiPoly::derivative(int index) const {
  if (index < 0 || index >= vars_) throw InvalidArgument("variable index out of range");
  MultiPoly out(vars_);
  const auto i = static_cast<std::size_t>(index);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent d = e;
    d[i] -= 1;
    out.add_term(d, c * static_cast<double>(e[i]));
  }
  return out;
}

int MultiPoly::degree_in(int index) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<std::size_t>(index)]);
  return d;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  if (o.vars_ != vars_) throw InvalidArgument("variable counts differ");
  MultiPoly out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + o * Complex(-1.0); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  if (o.vars_ != vars_) throw InvalidArgument("variable counts differ");
  MultiPoly out(vars_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e = e1;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
      out.add_term(e, c1 * c2);
    }
  }
  return out;
}

MultiPoly MultiPoly::operator*(Complex s) const {
  MultiPoly out(vars_);
  for (const auto& [e, c] : terms_) out.add_term(e, c * s);
  return out;
}

RationalFunction::RationalFunction(MultiPoly num, MultiPoly den)
    : numerator(std::move(num)), denominator(std::move(den)) {
  if (numerator.vars() != denominator.vars()) throw InvalidArgument("numerator and denominator variable counts differ");
  if (denominator.is_zero()) throw InvalidArgument("denominator is identically zero");
}

RationalFunction::RationalFunction(MultiPoly poly)
    : RationalFunction(poly, MultiPoly::constant(poly.vars(), 1.0)) {}

Complex RationalFunction::evaluate(std::span<const Complex> x) const {
  const Complex d = denominator.evaluate(x);
  if (std::abs(d) < 1e-14) throw DomainError("rational function evaluated at a pole");
  return numerator.evaluate(x) / d;
}

Complex RationalFunction::partial(int index, std::span<const Complex> x) const {
  const Complex d = denominator.evaluate(x);
  if (std::abs(d) < 1e-14) throw DomainError("rational function differentiated at a pole");
  const Complex n = numerator.evaluate(x);
  return (numerator.derivative(index).evaluate(x) * d - n * denominator.derivative(index).evaluate(x)) / (d * d);
}

AnalyticMap AnalyticMap::rational(RationalFunction r) {
  AnalyticMap m;
  m.dimension_ = r.vars();
  m.rational_ = std::make_shared<const RationalFunction>(std::move(r));
  return m;
}

AnalyticMap AnalyticMap::callable(int dimension, Callable fn) {
  if (dimension < 0 || !fn) throw InvalidArgument("callable map needs a dimension and an evaluator");
  AnalyticMap m;
  m.dimension_ = dimension;
  m.callable_ = std::move(fn);
  return m;
}

const RationalFunction& AnalyticMap::as_rational() const {
  if (!rational_) throw InvalidArgument("map has no rational expression");
  return *rational_;
}

Complex AnalyticMap::evaluate(std::span<const Complex> x) const {
  if (static_cast<int>(x.size()) != dimension_) throw InvalidArgument("point dimension does not match map");
  if (rational_) return rational_->evaluate(x);
  if (!callable_) throw InvalidArgument("empty analytic map");
  return callable_(x);
}

Complex AnalyticMap::partial(int index, std::span<const Complex> x) const {
  if (index < 0 || index >= dimension_) throw InvalidArgument("variable index out of range");
  if (rational_) return rational_->partial(index, x);
  std::vector<Complex> plus(x.begin(), x.end()), minus(x.begin(), x.end());
  plus[static_cast<std::size_t>(index)] += kDifferenceStep;
  minus[static_cast<std::size_t>(index)] -= kDifferenceStep;
  return (evaluate(plus) - evaluate(minus)) / (2.0 * kDifferenceStep);
}

}  // namespace aglerkit
