#include "veering/scalar.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace veering {

namespace {

using QPoly = std::vector<mpq_class>;

void trim_poly(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

mpq_class eval(const std::vector<mpz_class>& p, const mpq_class& t) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + mpq_class(*it);
  return acc;
}

int qsign(const mpq_class& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

// remainder of a modulo b over Q
QPoly poly_rem(QPoly a, const QPoly& b) {
  trim_poly(a);
  while (a.size() >= b.size()) {
    mpq_class f = a.back() / b.back();
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    trim_poly(a);
  }
  return a;
}

// sign changes of the Sturm chain evaluated at t
int sturm_changes(const std::vector<QPoly>& chain, const mpq_class& t) {
  int changes = 0, last = 0;
  for (const auto& p : chain) {
    mpq_class v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + *it;
    int s = qsign(v);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::vector<QPoly> sturm_chain(const std::vector<mpz_class>& poly) {
  QPoly p(poly.begin(), poly.end());
  QPoly dp;
  for (size_t i = 1; i < p.size(); ++i) dp.push_back(p[i] * static_cast<long>(i));
  std::vector<QPoly> chain{p, dp};
  while (true) {
    QPoly r = poly_rem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  return chain;
}

bool is_perfect_square(const mpq_class& q) {
  if (q < 0) return false;
  return mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t());
}

std::vector<mpz_class> divisors(const mpz_class& n) {
  std::vector<mpz_class> out;
  mpz_class a = abs(n);
  if (a == 0 || a > 1000000) return out;
  unsigned long v = a.get_ui();
  for (unsigned long d = 1; d * d <= v; ++d) {
    if (v % d) continue;
    out.emplace_back(d);
    if (d * d != v) out.emplace_back(v / d);
  }
  return out;
}

// sign of u + w sqrt(d) for irrational sqrt(d)
int sign_quadratic(const mpq_class& u, const mpq_class& w, const mpq_class& d) {
  int su = qsign(u), sw = qsign(w);
  if (sw == 0) return su;
  if (su == 0 || su == sw) return sw;
  mpq_class cmp = u * u - w * w * d;
  return cmp > 0 ? su : sw;
}

struct Interval {
  mpq_class lo, hi;
};

Interval mul(const Interval& a, const Interval& b) {
  mpq_class p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Interval r{p[0], p[0]};
  for (auto& v : p) {
    if (v < r.lo) r.lo = v;
    if (v > r.hi) r.hi = v;
  }
  return r;
}

}  // namespace

FieldContext::FieldContext(std::vector<mpz_class> min_poly, mpq_class lo, mpq_class hi)
    : poly_(std::move(min_poly)), lo_(std::move(lo)), hi_(std::move(hi)) {
  while (!poly_.empty() && poly_.back() == 0) poly_.pop_back();
  if (poly_.size() < 2) throw FieldError("minimal polynomial must have degree >= 1");
  if (!(lo_ < hi_)) throw FieldError("isolating interval is empty");
  const int d = degree();
  mpq_class flo = eval(poly_, lo_), fhi = eval(poly_, hi_);
  if (flo == 0 || fhi == 0) throw FieldError("isolating interval endpoint is a root");
  auto chain = sturm_chain(poly_);
  if (sturm_changes(chain, lo_) - sturm_changes(chain, hi_) != 1)
    throw FieldError("isolating interval must contain exactly one real root");
  if (d == 2) {
    mpq_class disc = mpq_class(poly_[1] * poly_[1]) - 4 * mpq_class(poly_[0] * poly_[2]);
    if (is_perfect_square(disc)) throw FieldError("minimal polynomial is reducible");
  } else if (d >= 3) {
    if (chain.back().size() > 1)
      throw FieldError("minimal polynomial is not squarefree");
    for (const auto& p : divisors(poly_.front()))
      for (const auto& q : divisors(poly_.back()))
        for (int s : {1, -1})
          if (eval(poly_, mpq_class(s * p, q)) == 0)
            throw FieldError("minimal polynomial has a rational root");
  }

  // theta^d = -(a_0 + ... + a_{d-1} theta^{d-1}) / a_d, then shift upward
  mpq_class lead(poly_.back());
  std::vector<mpq_class> cur(d);
  for (int i = 0; i < d; ++i) cur[i] = -mpq_class(poly_[i]) / lead;
  for (int k = 0; k + 1 < d; ++k) {
    powers_.push_back(cur);
    std::vector<mpq_class> next(d);
    for (int i = 0; i + 1 < d; ++i) next[i + 1] = cur[i];
    for (int i = 0; i < d; ++i) next[i] += cur[d - 1] * powers_[0][i];
    cur = std::move(next);
  }
  if (d == 1) powers_.clear();

  ref_lo_ = lo_;
  ref_hi_ = hi_;
  int slo = qsign(flo);
  mpq_class eps(1);
  eps /= mpq_class(mpz_class(1) << 96);
  while (ref_hi_ - ref_lo_ > eps) {
    mpq_class m = (ref_lo_ + ref_hi_) / 2;
    int sm = qsign(eval(poly_, m));
    if (sm == 0) {
      ref_lo_ = ref_hi_ = m;
      break;
    }
    if (sm == slo) ref_lo_ = m; else ref_hi_ = m;
  }
  approx_ = mpq_class((ref_lo_ + ref_hi_) / 2).get_d();
  approx_pows_.assign(d, 1.0);
  for (int i = 1; i < d; ++i) approx_pows_[i] = approx_pows_[i - 1] * approx_;

  if (d == 2) {
    quadratic_ = true;
    mpq_class a0(poly_[0]), a1(poly_[1]), a2(poly_[2]);
    qd_ = a1 * a1 - 4 * a0 * a2;
    qa_ = -a1 / (2 * a2);
    qb_ = 1 / (2 * a2);
    if (qb_ < 0) qb_ = -qb_;
    bool plus_inside = sign_quadratic(qa_ - lo_, qb_, qd_) > 0 && sign_quadratic(qa_ - hi_, qb_, qd_) < 0;
    if (!plus_inside) qb_ = -qb_;
  }
}

bool FieldContext::same_as(const FieldContext& o) const {
  return this == &o || (poly_ == o.poly_ && ref_lo_ < o.ref_hi_ && o.ref_lo_ < ref_hi_);
}

FieldPtr make_field(std::vector<mpz_class> min_poly, mpq_class lo, mpq_class hi) {
  return std::make_shared<const FieldContext>(std::move(min_poly), std::move(lo), std::move(hi));
}

Scalar::Scalar(FieldPtr f, std::vector<mpq_class> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
  if (f_ && static_cast<int>(c_.size()) > f_->degree()) {
    // reduce an over-long vector by the minimal polynomial
    Scalar acc(f_, {});
    Scalar th = generator(f_), pw(1);
    for (const auto& c : c_) {
      acc += Scalar(c) * pw;
      pw *= th;
    }
    *this = std::move(acc);
    return;
  }
  if (!f_ && c_.size() > 1) throw FieldError("non-rational scalar without a field");
  trim();
}

Scalar Scalar::rational(long num, long den) { return Scalar(mpq_class(num, den)); }

Scalar Scalar::generator(FieldPtr f) {
  Scalar s;
  s.f_ = f;
  if (f->degree() == 1) {
    s.c_ = {-mpq_class(f->poly_[0]) / mpq_class(f->poly_[1])};
  } else {
    s.c_ = {mpq_class(0), mpq_class(1)};
  }
  s.trim();
  return s;
}

mpq_class Scalar::coeff(int i) const { return i < static_cast<int>(c_.size()) ? c_[i] : mpq_class(0); }

void Scalar::trim() {
  trim_poly(c_);
  for (auto& c : c_) c.canonicalize();
}

const FieldPtr& Scalar::join(const Scalar& o) const {
  if (!f_) return o.f_;
  if (!o.f_ || f_ == o.f_) return f_;
  if (!f_->same_as(*o.f_)) throw FieldError("field context mismatch");
  return f_;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  f_ = join(o);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim_poly(c_);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  f_ = join(o);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim_poly(c_);
  return *this;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r;
  r.f_ = a.join(b);
  if (a.c_.empty() || b.c_.empty()) return r;
  if (a.c_.size() == 1) {
    r.c_ = b.c_;
    for (auto& c : r.c_) c *= a.c_[0];
    return r;
  }
  if (b.c_.size() == 1) {
    r.c_ = a.c_;
    for (auto& c : r.c_) c *= b.c_[0];
    return r;
  }
  const FieldContext& f = *r.f_;
  const int d = f.degree();
  std::vector<mpq_class> prod(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) prod[i + j] += a.c_[i] * b.c_[j];
  if (static_cast<int>(prod.size()) > d) {
    std::vector<mpq_class> red(prod.begin(), prod.begin() + d);
    for (size_t k = d; k < prod.size(); ++k) {
      if (prod[k] == 0) continue;
      const auto& pw = f.reduction(static_cast<int>(k) - d);
      for (int i = 0; i < d; ++i) red[i] += prod[k] * pw[i];
    }
    prod = std::move(red);
  }
  r.c_ = std::move(prod);
  trim_poly(r.c_);
  return r;
}

Scalar& Scalar::operator*=(const Scalar& o) { return *this = *this * o; }

int Scalar::sign() const {
  if (c_.empty()) return 0;
  if (c_.size() == 1) return qsign(c_[0]);
  const FieldContext& f = *f_;
  // floating filter with a rigorous relative error bound
  {
    double sum = 0, mag = 0;
    for (size_t i = 0; i < c_.size(); ++i) {
      double t = c_[i].get_d() * f.approx_pows_[i];
      sum += t;
      mag += std::fabs(t);
    }
    if (std::isfinite(mag) && mag > 1e-250 && std::fabs(sum) > mag * 1e-12) return sum > 0 ? 1 : -1;
  }
  if (f.quadratic_) return sign_quadratic(c_[0] + c_[1] * f.qa_, c_[1] * f.qb_, f.qd_);

  // interval Horner over a shrinking isolating interval; terminates because
  // a nonzero canonical element cannot vanish at theta
  Interval iv{f.ref_lo_, f.ref_hi_};
  int slo = qsign(eval(f.poly_, iv.lo));
  for (int iter = 0; iter < 4000; ++iter) {
    Interval acc{c_.back(), c_.back()};
    for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) {
      acc = mul(acc, iv);
      acc.lo += c_[i];
      acc.hi += c_[i];
    }
    if (acc.lo > 0) return 1;
    if (acc.hi < 0) return -1;
    mpq_class m = (iv.lo + iv.hi) / 2;
    int sm = qsign(eval(f.poly_, m));
    if (sm == 0) throw FieldError("minimal polynomial has a rational root");
    if (sm == slo) iv.lo = m; else iv.hi = m;
  }
  throw FieldError("sign refinement did not terminate; minimal polynomial is reducible");
}

double Scalar::to_double() const {
  if (c_.empty()) return 0.0;
  if (c_.size() == 1) return c_[0].get_d();
  const FieldContext& f = *f_;
  if (f.quadratic_) {
    double r = f.qa_.get_d() + f.qb_.get_d() * std::sqrt(f.qd_.get_d());
    return c_[0].get_d() + c_[1].get_d() * r;
  }
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * f.approx_ + it->get_d();
  return acc;
}

Scalar Scalar::inverse() const {
  if (c_.empty()) throw FieldError("division by zero");
  if (c_.size() == 1) {
    Scalar r = *this;
    r.c_[0] = 1 / c_[0];
    return r;
  }
  const FieldContext& f = *f_;
  if (f.degree() == 2) {
    mpq_class a0(f.poly_[0]), a1(f.poly_[1]), a2(f.poly_[2]);
    const mpq_class &x = c_[0], &y = c_[1];
    mpq_class norm = x * x - x * y * a1 / a2 + y * y * a0 / a2;
    return Scalar(f_, {(x - y * a1 / a2) / norm, -y / norm});
  }
  // extended Euclid: s * this + t * min_poly = g (a nonzero constant)
  QPoly r0(f.poly_.begin(), f.poly_.end()), r1 = c_;
  QPoly s0, s1{mpq_class(1)};
  while (r1.size() > 1) {
    QPoly q(r0.size() - r1.size() + 1), rem = r0;
    while (rem.size() >= r1.size()) {
      mpq_class k = rem.back() / r1.back();
      size_t shift = rem.size() - r1.size();
      q[shift] = k;
      for (size_t i = 0; i < r1.size(); ++i) rem[i + shift] -= k * r1[i];
      rem.pop_back();
      trim_poly(rem);
    }
    QPoly s2(std::max(s0.size(), q.size() + s1.size()));
    for (size_t i = 0; i < s0.size(); ++i) s2[i] += s0[i];
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
    trim_poly(s2);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r1.empty()) throw FieldError("element is not invertible; minimal polynomial is reducible");
  for (auto& c : s1) c /= r1[0];
  return Scalar(f_, std::move(s1));
}

int Scalar::key_compare(const Scalar& a, const Scalar& b) {
  size_t n = std::max(a.c_.size(), b.c_.size());
  for (size_t i = 0; i < n; ++i) {
    int s = cmp(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)));
    if (s != 0) return s < 0 ? -1 : 1;
  }
  return 0;
}

mpz_class Scalar::floor() const {
  if (c_.size() <= 1) {
    if (c_.empty()) return 0;
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), c_[0].get_num_mpz_t(), c_[0].get_den_mpz_t());
    return q;
  }
  mpz_class n(std::floor(to_double()));
  auto below = [&](const mpz_class& k) { return (*this - Scalar(mpq_class(k))).sign() < 0; };
  while (below(n)) n -= 1;
  while (!below(n + 1)) n += 1;
  return n;
}

std::string Scalar::to_string() const {
  std::ostringstream os;
  int n = f_ ? f_->degree() : 1;
  os << '[';
  for (int i = 0; i < n; ++i) {
    if (i) os << ", ";
    os << coeff(i).get_str();
  }
  os << ']';
  return os.str();
}

Scalar abs(const Scalar& a) { return a.sign() < 0 ? -a : a; }

Scalar parse_scalar(std::string_view text, const FieldPtr& f) {
  auto fail = [&] { return FieldError("malformed scalar: " + std::string(text)); };
  size_t b = text.find_first_not_of(" \t");
  size_t e = text.find_last_not_of(" \t");
  if (b == std::string_view::npos || text[b] != '[' || text[e] != ']') throw fail();
  std::string_view body = text.substr(b + 1, e - b - 1);
  std::vector<mpq_class> coeffs;
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t comma = body.find(',', pos);
    std::string tok(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    size_t tb = tok.find_first_not_of(" \t"), te = tok.find_last_not_of(" \t");
    if (tb == std::string::npos) throw fail();
    tok = tok.substr(tb, te - tb + 1);
    if (tok[0] == '+') tok.erase(0, 1);
    mpq_class q;
    if (tok.empty() || q.set_str(tok, 10) != 0 || q.get_den() == 0) throw fail();
    q.canonicalize();
    coeffs.push_back(q);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  int limit = f ? f->degree() : 1;
  if (static_cast<int>(coeffs.size()) > limit) throw fail();
  if (!f) return Scalar(coeffs[0]);
  return Scalar(f, std::move(coeffs));
}

}  // namespace veering
