#include "qmech/expected_curve.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qmech/errors.hpp"

namespace qmech {

using Integer = Rational::Integer;

Rational Mobius::operator()(const Rational& x) const {
  Rational den = c + d * x;
  if (den.is_zero()) throw DomainError("pole of piece at x = " + x.str());
  return (a + b * x) / den;
}

Mobius Mobius::normalized() const {
  if (c.is_zero() && d.is_zero()) throw DomainError("piece with identically zero denominator");
  if (a * d == b * c) return constant(c.is_zero() ? b / d : a / c);
  const Rational& scale = c.is_zero() ? d : c;
  return {a / scale, b / scale, c / scale, d / scale};
}

bool Mobius::is_zero() const { return a.is_zero() && b.is_zero(); }

Mobius::Kind Mobius::kind() const {
  Mobius n = normalized();
  if (n.b.is_zero() && n.d.is_zero()) return Kind::kConst;
  if (n.d.is_zero()) return Kind::kAffine;
  if (n.c.is_zero() && n.b.is_zero()) return Kind::kRecip;
  return Kind::kMobius;
}

std::string kind_name(Mobius::Kind kind) {
  switch (kind) {
    case Mobius::Kind::kConst:
      return "const";
    case Mobius::Kind::kRecip:
      return "recip";
    case Mobius::Kind::kAffine:
      return "affine";
    case Mobius::Kind::kMobius:
      return "mobius";
  }
  return "mobius";
}

Mobius operator-(const Rational& k, const Mobius& f) {
  return {k * f.c - f.a, k * f.d - f.b, f.c, f.d};
}

Mobius operator*(const Rational& k, const Mobius& f) { return {k * f.a, k * f.b, f.c, f.d}; }

Mobius divide_by_x(const Mobius& f) {
  if (f.a.is_zero()) return {f.b, 0, f.c, f.d};
  if (f.d.is_zero()) return {f.a, f.b, 0, f.c};
  throw InternalError("f(x)/x leaves the Mobius family");
}

namespace {

std::optional<Rational> exact_sqrt(const Rational& v) {
  if (v.sign() < 0) return std::nullopt;
  Integer n = v.numerator();
  Integer d = v.denominator();
  Integer rn = boost::multiprecision::sqrt(n);
  Integer rd = boost::multiprecision::sqrt(d);
  if (rn * rn != n || rd * rd != d) return std::nullopt;
  return Rational(rn, rd);
}

bool inside(const Rational& x, const Rational& lo, const std::optional<Rational>& hi) {
  return x > lo && (!hi || x < *hi);
}

}  // namespace

Rationals crossings(const Mobius& f, const Mobius& g, const Rational& lo, const std::optional<Rational>& hi) {
  // (f.a + f.b x)(g.c + g.d x) - (g.a + g.b x)(f.c + f.d x) = q2 x^2 + q1 x + q0
  Rational q2 = f.b * g.d - g.b * f.d;
  Rational q1 = f.a * g.d + f.b * g.c - g.a * f.d - g.b * f.c;
  Rational q0 = f.a * g.c - g.a * f.c;

  Rationals roots;
  if (q2.is_zero()) {
    if (!q1.is_zero()) roots.push_back(-q0 / q1);
  } else {
    Rational disc = q1 * q1 - Rational(4) * q2 * q0;
    if (disc.sign() >= 0) {
      auto root = exact_sqrt(disc);
      Rational r1 = (-q1 - (root ? *root : Rational(0))) / (Rational(2) * q2);
      Rational r2 = (-q1 + (root ? *root : Rational(0))) / (Rational(2) * q2);
      if (!root) {
        // Only a problem if the irrational crossing falls inside the range.
        double dq2 = q2.to_double(), dq1 = q1.to_double(), dd = std::sqrt(disc.to_double());
        for (double x : {(-dq1 - dd) / (2 * dq2), (-dq1 + dd) / (2 * dq2)}) {
          if (x > lo.to_double() && (!hi || x < hi->to_double())) {
            throw ResolutionError("irrational regime boundary near " + std::to_string(x));
          }
        }
      } else {
        roots.push_back(r1);
        roots.push_back(r2);
      }
    }
  }
  Rationals out;
  for (auto& r : roots) {
    if (inside(r, lo, hi) && !(f.c + f.d * r).is_zero() && !(g.c + g.d * r).is_zero()) out.push_back(r);
  }
  return out;
}

namespace {

RationalInterval atanh_log(const Rational& y, const Rational& max_width) {
  // ln y = 2 sum_k z^(2k+1)/(2k+1), z = (y-1)/(y+1); the tail after K terms is
  // bounded by 2|z|^(2K+1) / ((2K+1)(1 - z^2)).
  const Rational z = (y - 1) / (y + 1);
  const Rational z2 = z * z;
  const Rational z_abs = z.abs();
  if (z.is_zero()) return {0, 0};
  Rational sum(0);
  Rational power = z;        // z^(2k+1)
  Rational abs_power = z_abs * z2;  // |z|^(2k+3)
  for (long k = 0;; ++k) {
    sum += Rational(2) * power / Rational(2 * k + 1);
    Rational bound = Rational(2) * abs_power / (Rational(2 * k + 3) * (Rational(1) - z2));
    if (bound < max_width) {
      return z.sign() > 0 ? RationalInterval{sum, sum + bound} : RationalInterval{sum - bound, sum};
    }
    power *= z2;
    abs_power *= z2;
  }
}

}  // namespace

RationalInterval ln_enclosure(const Rational& r, const Rational& max_width) {
  if (r.sign() <= 0) throw DomainError("ln of non-positive value " + r.str());
  if (max_width.sign() <= 0) throw DomainError("enclosure width must be positive");
  if (r == Rational(1)) return {0, 0};
  long k = r.ceil_log2();
  Rational reduced = r / Rational::pow2(k);  // in (1/2, 1]
  if (k == 0) return atanh_log(reduced, max_width);
  Rational share = max_width / Rational(2 * (std::labs(k) + 1));
  RationalInterval ln2 = atanh_log(Rational(2), share);
  RationalInterval rest = atanh_log(reduced, share);
  Rational kk(k);
  RationalInterval scaled = k > 0 ? RationalInterval{kk * ln2.lo, kk * ln2.hi} : RationalInterval{kk * ln2.hi, kk * ln2.lo};
  return {scaled.lo + rest.lo, scaled.hi + rest.hi};
}

void LogLinear::add_log(const Rational& coefficient, const Rational& argument) {
  if (argument.sign() <= 0) throw DomainError("logarithm of non-positive argument " + argument.str());
  if (coefficient.is_zero() || argument == Rational(1)) return;
  Rational arg = argument;
  Rational coef = coefficient;
  if (arg < Rational(1)) {
    arg = arg.reciprocal();
    coef = -coef;
  }
  Rational& slot = log_terms[arg];
  slot += coef;
  if (slot.is_zero()) log_terms.erase(arg);
}

LogLinear LogLinear::normalized() const {
  std::map<Rational, Rational> by_coefficient;  // coef -> product of args
  for (const auto& [arg, coef] : log_terms) {
    auto [it, fresh] = by_coefficient.emplace(coef, arg);
    if (!fresh) it->second *= arg;
  }
  LogLinear out;
  out.rational_part = rational_part;
  for (const auto& [coef, arg] : by_coefficient) out.add_log(coef, arg);
  return out;
}

RationalInterval LogLinear::enclose(const Rational& max_width) const {
  RationalInterval total{rational_part, rational_part};
  if (log_terms.empty()) return total;
  const Rational terms(static_cast<std::int64_t>(log_terms.size()));
  for (const auto& [arg, coef] : log_terms) {
    RationalInterval ln = ln_enclosure(arg, max_width / (terms * coef.abs()));
    if (coef.sign() > 0) {
      total.lo += coef * ln.lo;
      total.hi += coef * ln.hi;
    } else {
      total.lo += coef * ln.hi;
      total.hi += coef * ln.lo;
    }
  }
  return total;
}

double LogLinear::approx() const {
  double v = rational_part.to_double();
  for (const auto& [arg, coef] : log_terms) v += coef.to_double() * std::log(arg.to_double());
  return v;
}

Rational PiecewiseCurve::value_at(const Rational& x) const {
  if (x.sign() <= 0) throw DomainError("curve is defined for positive bids only");
  for (const auto& piece : pieces) {
    if (x > piece.lo && (!piece.hi || x <= *piece.hi)) return piece.form(x);
  }
  throw DomainError("no piece covers " + x.str());
}

bool PiecewiseCurve::divergent() const { return !pieces.empty() && !pieces.back().form.is_zero(); }

LogLinear integrate(const PiecewiseCurve& curve, const Rational& lo, const std::optional<Rational>& hi) {
  if (lo.sign() < 0 || (hi && *hi < lo)) throw DomainError("integrate needs 0 <= lo <= hi");
  LogLinear out;
  for (const auto& piece : curve.pieces) {
    Rational u = max(piece.lo, lo);
    std::optional<Rational> v = piece.hi;
    if (hi) v = v ? min(*v, *hi) : *hi;
    if (!v) {
      if (!piece.form.is_zero()) throw DivergenceError("expected workload does not vanish; integral diverges");
      continue;
    }
    if (!(*v > u)) continue;
    const Mobius f = piece.form.normalized();
    if (f.d.is_zero()) {
      out.rational_part += f.a / f.c * (*v - u) + f.b / (Rational(2) * f.c) * (*v * *v - u * u);
      continue;
    }
    Rational at_u = f.c + f.d * u;
    Rational at_v = f.c + f.d * *v;
    if (at_u.is_zero() || at_v.is_zero() || at_u.sign() != at_v.sign()) {
      throw DivergenceError("piece has a pole inside the integration range");
    }
    out.rational_part += f.b / f.d * (*v - u);
    out.add_log((f.a * f.d - f.b * f.c) / (f.d * f.d), at_v / at_u);
  }
  return out.normalized();
}

PiecewiseCurve expected_workcurve(const AllocationRule& rule, std::span<const Rational> others_bids,
                                  std::span<const Rational> jobs, std::size_t position) {
  if (rule.name() != "at-expected" && rule.name() != "at-sample") {
    throw DomainError("expected_workcurve supports the randomized binning rule only, not '" + rule.name() + "'");
  }
  if (position > others_bids.size()) throw DimensionError("machine position beyond the bid vector");

  Rationals init(others_bids.begin(), others_bids.end());
  init.insert(init.begin() + static_cast<std::ptrdiff_t>(position), Rational(1));
  const Instance base(Rationals(jobs.begin(), jobs.end()), init);
  const Rational& total = base.total_length();

  PiecewiseCurve curve;
  auto push = [&](const Rational& lo, const std::optional<Rational>& hi, const Mobius& form) {
    Mobius f = form.normalized();
    if (!curve.pieces.empty() && curve.pieces.back().form == f) {
      curve.pieces.back().hi = hi;
      return;
    }
    curve.pieces.push_back({lo, hi, f});
  };

  if (others_bids.empty()) {
    push(0, std::nullopt, Mobius::constant(total));
    return curve;
  }

  Rationals sorted(others_bids.begin(), others_bids.end());
  std::sort(sorted.begin(), sorted.end());
  const std::set<Rational> distinct(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size() + 1;

  Rationals prefix;
  Rational acc(0);
  for (const auto& l : base.jobs()) prefix.push_back(acc += l);

  std::vector<std::optional<Rational>> bounds(distinct.begin(), distinct.end());
  bounds.push_back(std::nullopt);
  Rational slot_lo(0);
  for (const auto& slot_hi : bounds) {
    const std::size_t p = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), slot_lo) - sorted.begin());

    // Candidate lower-bound expressions, indexed [j][r] with r the sorted slot.
    Rational before(0);
    for (std::size_t r = 0; r < p; ++r) before += sorted[r].reciprocal();
    std::vector<std::vector<std::pair<Mobius, Mobius>>> terms(prefix.size());
    std::vector<Mobius> all;
    for (std::size_t j = 0; j < prefix.size(); ++j) {
      Rational inverse(0);
      for (std::size_t r = 0; r < m; ++r) {
        Mobius by_speed, by_capacity;
        if (r == p) {
          by_speed = Mobius::linear(base.jobs()[j]);
        } else {
          const Rational& bid = sorted[r < p ? r : r - 1];
          by_speed = Mobius::constant(bid * base.jobs()[j]);
          inverse += bid.reciprocal();
        }
        if (r < p) {
          by_capacity = Mobius::constant(prefix[j] / inverse);
        } else {
          by_capacity = Mobius{0, prefix[j], 1, inverse};
        }
        terms[j].emplace_back(by_speed, by_capacity);
        all.push_back(by_speed);
        all.push_back(by_capacity);
      }
    }

    std::set<Rational> cuts;
    for (std::size_t u = 0; u < all.size(); ++u) {
      for (std::size_t v = u + 1; v < all.size(); ++v) {
        for (auto& x : crossings(all[u], all[v], slot_lo, slot_hi)) cuts.insert(std::move(x));
      }
      Mobius spill = total - before * all[u];
      Mobius own = divide_by_x(all[u]);
      for (auto& x : crossings(spill, Mobius::constant(0), slot_lo, slot_hi)) cuts.insert(std::move(x));
      for (auto& x : crossings(spill, own, slot_lo, slot_hi)) cuts.insert(std::move(x));
    }

    std::vector<std::optional<Rational>> ends(cuts.begin(), cuts.end());
    ends.push_back(slot_hi);
    Rational u = slot_lo;
    for (const auto& v : ends) {
      const Rational sample = v ? (u + *v) / 2 : u + 1;

      const Mobius* bound_form = nullptr;
      Rational bound_value;
      for (std::size_t j = 0; j < terms.size(); ++j) {
        const Mobius* row_form = nullptr;
        Rational row_value;
        for (const auto& [by_speed, by_capacity] : terms[j]) {
          Rational s = by_speed(sample), c = by_capacity(sample);
          const Mobius* f = s >= c ? &by_speed : &by_capacity;
          Rational val = max(s, c);
          if (!row_form || val < row_value) {
            row_form = f;
            row_value = std::move(val);
          }
        }
        if (!bound_form || row_value > bound_value) {
          bound_form = row_form;
          bound_value = std::move(row_value);
        }
      }

      const Mobius spill = total - before * *bound_form;
      const Mobius own = divide_by_x(*bound_form);
      const Rational spill_value = max(spill(sample), Rational(0));
      const Rational own_value = own(sample);
      Mobius form = spill_value <= own_value ? (spill_value.is_zero() ? Mobius::constant(0) : spill) : own;
      Rational value = min(spill_value, own_value);

      Rational direct = at_fractional(base.with_bid(position, sample)).expected_workloads()[position];
      if (direct != value || form(sample) != value) {
        throw InternalError("symbolic expected workload disagrees with direct pouring at x = " + sample.str());
      }
      push(u, v, form);
      if (v) u = *v;
    }
    if (slot_hi) slot_lo = *slot_hi;
  }
  return curve;
}

}  // namespace qmech
