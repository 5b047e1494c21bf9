#include "veering/surface.hpp"

namespace veering {

IntMatrix word_matrix(std::string_view word) {
  IntMatrix m = {{{1, 0}, {0, 1}}};
  for (char ch : word) {
    // right multiplication by R = [[1,1],[0,1]] or L = [[1,0],[1,1]]
    if (ch == 'R') {
      m[0][1] += m[0][0];
      m[1][1] += m[1][0];
    } else if (ch == 'L') {
      m[0][0] += m[0][1];
      m[1][0] += m[1][1];
    } else {
      throw SurfaceError("monodromy word letters must be R or L");
    }
  }
  return m;
}

SurfaceDocument punctured_torus_bundle(std::string_view word) {
  const IntMatrix a = word_matrix(word);
  if (word.find('R') == std::string_view::npos || word.find('L') == std::string_view::npos)
    throw SurfaceError("monodromy word needs both letters to be pseudo-Anosov");
  const mpz_class t = a[0][0] + a[1][1];
  // mu is the expanding root of x^2 - t x + 1, isolated in (t - 1, t) since t >= 3
  FieldPtr f = make_field({mpz_class(1), mpz_class(-t), mpz_class(1)}, mpq_class(t - 1), mpq_class(t));
  const Scalar mu = Scalar::generator(f);
  const Scalar inv_mu = Scalar(mpq_class(t)) - mu;
  const Scalar b{mpq_class(a[0][1])}, aa{mpq_class(a[0][0])}, d{mpq_class(a[1][1])};

  // eigenbasis v (expanding), w (contracting); lattice point n maps to P^-1 n
  const Vec2 v(b, mu - aa), w(b, d - mu);
  const Scalar det = v.x * w.y - w.x * v.y;
  auto to_flat = [&](const Scalar& x, const Scalar& y) {
    return Vec2((w.y * x - w.x * y) / det, (v.x * y - v.y * x) / det);
  };
  Vec2 p1 = to_flat(Scalar(1), Scalar(0)), p2 = to_flat(Scalar(0), Scalar(1));
  if (cross(p1, p2).sign() < 0) std::swap(p1, p2);

  SurfaceDocument doc;
  doc.name = "torus-bundle-" + std::string(word);
  doc.field = f;
  doc.polygons.push_back({{Vec2(Scalar(0), Scalar(0)), p1, p1 + p2, p2}});
  doc.gluings.push_back({0, 0, 0, 2, GlueKind::translation});
  doc.gluings.push_back({0, 1, 0, 3, GlueKind::translation});
  doc.fully_punctured = true;

  MonodromySpec m;
  m.matrix = {{{mu, Scalar(0)}, {Scalar(0), inv_mu}}};
  m.base = {0, Vec2(Scalar(0), Scalar(0))};
  m.image = m.base;
  m.image_sign = 1;
  m.word = std::string(word);
  doc.monodromy = m;

  // annulus about the curve fixed by R, i.e. the lattice direction e1
  SubsurfaceSpecDoc y;
  y.name = "twist-annulus";
  y.kind = "annulus";
  y.euler = 0;
  const Vec2 e1 = to_flat(Scalar(1), Scalar(0));
  y.core_holonomy = e1;
  y.core_point = PointRef{0, Scalar::rational(1, 4) * (p1 + p2) + Scalar::rational(1, 4) * (e1 == p1 ? p2 : p1)};
  doc.subsurfaces.push_back(y);
  return doc;
}

}  // namespace veering
