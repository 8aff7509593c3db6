#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ellcfd/cases.hpp"
#include "ellcfd/fvm.hpp"
#include "ellcfd/linsolve.hpp"
#include "oracles.hpp"

using namespace ellcfd;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<BoxPatch> kAllWalls = {
    {"walls", PatchKind::wall, {BoxSide::xmin, BoxSide::xmax, BoxSide::ymin, BoxSide::ymax, BoxSide::zmin, BoxSide::zmax}}};

Domain uniform_box(Index n, double h) {
  return Domain::build(
      gen_box(n, n, n, [h](Index i, Index j, Index k) { return Vec3{i * h, j * h, k * h}; }, kAllWalls));
}

// Interior lattice points jittered by up to 20% of the spacing.
Domain perturbed_box(Index n) {
  return Domain::build(gen_box(
      n, n, n,
      [n](Index i, Index j, Index k) {
        Vec3 x{double(i), double(j), double(k)};
        if (i > 0 && i < n && j > 0 && j < n && k > 0 && k < n) {
          std::mt19937_64 rng(static_cast<std::uint64_t>(i * 1000003 + j * 1009 + k));
          std::uniform_real_distribution<double> u(-0.2, 0.2);
          x += Vec3{u(rng), u(rng), u(rng)};
        }
        return x / double(n);
      },
      kAllWalls));
}

std::vector<ScalarBC> scalar_bcs(const Mesh& m, const ScalarBC& wall) {
  std::vector<ScalarBC> b;
  for (const auto& p : m.patches()) b.push_back(p.kind == PatchKind::empty ? ScalarBC{Empty{}} : wall);
  return b;
}

std::vector<VectorBC> vector_bcs(const Mesh& m, const VectorBC& wall) {
  std::vector<VectorBC> b;
  for (const auto& p : m.patches()) b.push_back(p.kind == PatchKind::empty ? VectorBC{Empty{}} : wall);
  return b;
}

// Field with arbitrary values on every boundary face.
ScalarField with_boundary(const Domain& d, const std::function<double(const Vec3&)>& fn, bool fixed) {
  ScalarField phi("phi", d.mesh, scalar_bcs(d.mesh, fixed ? ScalarBC{FixedValue<double>{0.0}} : ScalarBC{ZeroGradient{}}));
  for (Index c = 0; c < d.n_cells(); ++c) phi[c] = fn(d.geom.cell_centroid[c]);
  const Index ni = d.mesh.n_internal_faces();
  for (Index f = ni; f < d.mesh.n_faces(); ++f) phi.boundary()[f - ni] = fixed ? fn(d.geom.face_centroid[f]) : phi[d.mesh.owner()[f]];
  return phi;
}

oracle::Dense dense(const HybridMatrix& a) {
  oracle::Dense d(a.n());
  d.a = a.to_dense();
  return d;
}

// Stream-function fluxes on a one-cell-thick mesh: discretely solenoidal by telescoping.
std::vector<double> solenoidal_flux(const Domain& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::map<std::pair<long long, long long>, double> psi;
  auto key = [](const Vec3& p) { return std::pair{std::llround(p.x * 1e9), std::llround(p.y * 1e9)}; };
  for (const Vec3& p : d.mesh.points()) {
    auto [it, fresh] = psi.try_emplace(key(p), 0.0);
    if (fresh) it->second = u(rng);
  }
  std::vector<double> flux(d.mesh.n_faces(), 0.0);
  for (Index f = 0; f < d.mesh.n_faces(); ++f) {
    const Vec3 s = d.geom.face_area[f];
    if (std::abs(s.z) > 0.5 * mag(s)) continue;  // front/back
    const auto loop = d.mesh.face(f);
    Vec3 a = d.mesh.points()[loop[0]], b = a;
    double zmax = a.z;
    for (Index p : loop) zmax = std::max(zmax, d.mesh.points()[p].z);
    for (Index p : loop)
      if (key(d.mesh.points()[p]) != key(a)) b = d.mesh.points()[p];
    // Normal to the right of a -> b is (dy, -dx).
    if (s.x * (b.y - a.y) - s.y * (b.x - a.x) < 0.0) std::swap(a, b);
    flux[f] = (psi[key(b)] - psi[key(a)]) * zmax;
  }
  return flux;
}

double mms_error(Index n, double skew, bool correct) {
  const Domain d = Domain::build(gen_skewed_duct(n, n, skew, 1.0, 1.0));
  auto exact = [](const Vec3& x) { return std::sin(kPi * x.x) * std::sin(kPi * x.y); };
  ScalarField phi = with_boundary(d, exact, true);
  for (double& v : phi.cells()) v = 0.0;
  SchemeConfig sc;
  sc.nonorth_correction = correct;
  SolveConfig cfg{1e-13, 0.0, 10000, false, true};
  for (int it = 0; it < 200; ++it) {
    const auto eq = fvm::laplacian(1.0, phi, d, sc);
    HybridMatrix a = eq.matrix;
    a *= -1.0;
    std::vector<double> b(d.n_cells());
    for (Index c = 0; c < d.n_cells(); ++c)
      b[c] = -(eq.source[c] - 2.0 * kPi * kPi * exact(d.geom.cell_centroid[c]) * d.geom.cell_volume[c]);
    const auto old = phi.cells();
    cg(a, b, phi.cells(), cfg);
    double change = 0.0;
    for (Index c = 0; c < d.n_cells(); ++c) change = std::max(change, std::abs(phi[c] - old[c]));
    if (!correct || change < 1e-12) break;
  }
  double e = 0.0, v = 0.0;
  for (Index c = 0; c < d.n_cells(); ++c) {
    const double diff = phi[c] - exact(d.geom.cell_centroid[c]);
    e += diff * diff * d.geom.cell_volume[c];
    v += d.geom.cell_volume[c];
  }
  return std::sqrt(e / v);
}

}  // namespace

TEST_SUITE("fvm") {
  TEST_CASE("interpolation") {
    const Domain d = perturbed_box(3);
    ScalarField c("c", d.mesh, scalar_bcs(d.mesh, FixedValue<double>{4.5}), 4.5);
    apply_bcs(c, d.mesh, d.geom, 0.0);
    for (double v : interpolate_to_faces(c, d.mesh, d.geom)) CHECK(v == doctest::Approx(4.5).epsilon(1e-15));

    const Domain two = Domain::build(
        gen_box(2, 1, 1, [](Index i, Index j, Index k) { return Vec3{double(i), double(j), double(k)}; }, kAllWalls));
    ScalarField s("s", two.mesh, scalar_bcs(two.mesh, ZeroGradient{}));
    s[0] = 0.0;
    s[1] = 2.0;
    apply_bcs(s, two.mesh, two.geom, 0.0);
    CHECK(interpolate_to_faces(s, two.mesh, two.geom)[0] == doctest::Approx(1.0));
  }

  TEST_CASE("graded one-dimensional interpolation matches centroid distances") {
    const Index n = 6;
    auto xs = [](Index i) { return 0.1 * i * i + 0.3 * i; };
    const Domain d = Domain::build(
        gen_box(n, 1, 1, [&](Index i, Index j, Index k) { return Vec3{xs(i), double(j), double(k)}; }, kAllWalls));
    ScalarField s("s", d.mesh, scalar_bcs(d.mesh, ZeroGradient{}));
    for (Index c = 0; c < n; ++c) s[c] = std::cos(1.0 + c);
    apply_bcs(s, d.mesh, d.geom, 0.0);
    const auto faces = interpolate_to_faces(s, d.mesh, d.geom);
    for (Index f = 0; f < d.mesh.n_internal_faces(); ++f) {
      const Index P = d.mesh.owner()[f], N = d.mesh.neighbour()[f];
      const double xp = 0.5 * (xs(P) + xs(P + 1)), xn = 0.5 * (xs(N) + xs(N + 1)), xf = xs(N);
      const double w = (xn - xf) / (xn - xp);
      CHECK(faces[f] == doctest::Approx(w * s[P] + (1.0 - w) * s[N]).epsilon(1e-13));
    }
  }

  TEST_CASE("gradient of constant and linear fields") {
    const Domain d = uniform_box(5, 0.2);
    ScalarField c("c", d.mesh, scalar_bcs(d.mesh, ZeroGradient{}), 3.0);
    apply_bcs(c, d.mesh, d.geom, 0.0);
    for (const Vec3& g : fvm::gauss_gradient(c, d)) CHECK(mag(g) < 1e-12);

    const ScalarField lin = with_boundary(d, [](const Vec3& x) { return x.x; }, false);
    const auto g = fvm::gauss_gradient(lin, d);
    for (Index cell = 0; cell < d.n_cells(); ++cell) {
      const Index i = cell % 5, j = (cell / 5) % 5, k = cell / 25;
      if (i == 0 || i == 4 || j == 0 || j == 4 || k == 0 || k == 4) continue;
      CHECK(std::abs(g[cell].x - 1.0) < 1e-12);
      CHECK(std::abs(g[cell].y) < 1e-12);
      CHECK(std::abs(g[cell].z) < 1e-12);
    }
  }

  TEST_CASE("gradient on a perturbed mesh matches the per-cell surface sum") {
    const Domain d = perturbed_box(6);
    std::mt19937_64 rng(6);
    ScalarField phi("phi", d.mesh, scalar_bcs(d.mesh, FixedValue<double>{0.0}));
    phi.cells() = oracle::random_vector(d.n_cells(), rng);
    const Index ni = d.mesh.n_internal_faces();
    for (Index f = ni; f < d.mesh.n_faces(); ++f) phi.boundary()[f - ni] = std::sin(double(f));
    const auto g = fvm::gauss_gradient(phi, d);
    for (Index c = 0; c < d.n_cells(); ++c) {
      Vec3 sum;
      for (Index f = 0; f < d.mesh.n_faces(); ++f) {
        const bool own = d.mesh.owner()[f] == c;
        const bool nei = d.mesh.is_internal(f) && d.mesh.neighbour()[f] == c;
        if (!own && !nei) continue;
        const double w = d.geom.weight[f];
        const double v = d.mesh.is_internal(f) ? w * phi[d.mesh.owner()[f]] + (1 - w) * phi[d.mesh.neighbour()[f]]
                                               : phi.boundary()[f - ni];
        sum += (own ? 1.0 : -1.0) * v * d.geom.face_area[f];
      }
      sum /= d.geom.cell_volume[c];
      CHECK(mag(sum - g[c]) <= 1e-13 * std::max(1.0, mag(sum)));
    }
  }

  TEST_CASE("uniform cubes give face coefficient h and diagonal -6h") {
    const double h = 0.25;
    const Domain d = uniform_box(4, h);
    const ScalarField phi = with_boundary(d, [](const Vec3& x) { return x.x * x.y; }, false);
    const auto eq = fvm::laplacian(1.0, phi, d, SchemeConfig{});
    for (const auto& s : d.pattern->face_slots()) {
      CHECK(eq.matrix.value(s.upper) == doctest::Approx(h).epsilon(1e-14));
      CHECK(eq.matrix.value(s.upper) == eq.matrix.value(s.lower));
    }
    for (Index c = 0; c < d.n_cells(); ++c) {
      const Index i = c % 4, j = (c / 4) % 4, k = c / 16;
      if (i > 0 && i < 3 && j > 0 && j < 3 && k > 0 && k < 3)
        CHECK(eq.matrix.diagonal_value(c) == doctest::Approx(-6 * h).epsilon(1e-14));
    }
    for (double s : eq.source) CHECK(s == 0.0);
  }

  TEST_CASE("Laplacian against a dense per-cell oracle on a sheared duct") {
    const Domain d = Domain::build(gen_skewed_duct(6, 5, 30.0, 1.0, 1.0));
    std::mt19937_64 rng(30);
    const ScalarField phi = with_boundary(d, [](const Vec3& x) { return std::exp(x.x) * std::cos(2 * x.y); }, true);
    const auto gamma = [&] {
      std::vector<double> g(d.mesh.n_faces());
      std::uniform_real_distribution<double> u(0.5, 2.0);
      for (double& v : g) v = u(rng);
      return g;
    }();
    const auto eq = fvm::laplacian(std::span<const double>(gamma), phi, d, SchemeConfig{});
    const auto grad = fvm::gauss_gradient(phi, d);

    oracle::Dense a(d.n_cells());
    std::vector<double> src(d.n_cells(), 0.0);
    for (Index c = 0; c < d.n_cells(); ++c) {
      for (Index f = 0; f < d.mesh.n_faces(); ++f) {
        const bool own = d.mesh.owner()[f] == c;
        const bool nei = d.mesh.is_internal(f) && d.mesh.neighbour()[f] == c;
        if (!own && !nei) continue;
        const Index pi = d.mesh.patch_of(f);
        if (pi >= 0 && d.mesh.patches()[pi].kind == PatchKind::empty) continue;
        const Vec3 S = d.geom.face_area[f], dd = d.geom.delta[f];
        const double coeff = gamma[f] * dot(S, S) / dot(S, dd);
        const Vec3 k = S - (dot(S, S) / dot(S, dd)) * dd;
        if (pi < 0) {
          const Index other = own ? d.mesh.neighbour()[f] : d.mesh.owner()[f];
          a(c, c) -= coeff;
          a(c, other) += coeff;
          const double w = d.geom.weight[f];
          const Vec3 gf = w * grad[d.mesh.owner()[f]] + (1 - w) * grad[d.mesh.neighbour()[f]];
          src[c] -= (own ? 1.0 : -1.0) * gamma[f] * dot(k, gf);
        } else {
          a(c, c) -= coeff;
          src[c] -= coeff * phi.boundary_value(f) + gamma[f] * dot(k, grad[c]);
        }
      }
    }
    const auto got = eq.matrix.to_dense();
    double scale = 0.0;
    for (double v : a.a) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - a.a[i]) <= 1e-13 * scale);
    CHECK(oracle::max_rel_diff(eq.source, src) < 1e-13);
  }

  TEST_CASE("orthogonal meshes carry no correction and stay symmetric") {
    const Domain d = Domain::build(gen_channel(8, 4));
    const ScalarField phi = with_boundary(d, [](const Vec3& x) { return x.x * x.x + 3 * x.y; }, true);
    const auto eq = fvm::laplacian(0.3, phi, d, SchemeConfig{});
    for (double c : eq.face_correction) CHECK(c == 0.0);
    for (const auto& s : d.pattern->face_slots()) CHECK(eq.matrix.value(s.upper) == eq.matrix.value(s.lower));
  }

  TEST_CASE("correction switch and limiter") {
    const Domain d = Domain::build(gen_skewed_duct(6, 4, 30.0));
    const ScalarField phi = with_boundary(d, [](const Vec3& x) { return 100 * x.x * x.y; }, true);
    SchemeConfig off;
    off.nonorth_correction = false;
    SchemeConfig half;
    half.limiter = 0.5;
    const auto full = fvm::laplacian(1.0, phi, d, SchemeConfig{});
    const auto none = fvm::laplacian(1.0, phi, d, off);
    const auto h = fvm::laplacian(1.0, phi, d, half);
    double diff = 0.0;
    for (Index c = 0; c < d.n_cells(); ++c) {
      CHECK(h.source[c] - none.source[c] == doctest::Approx(0.5 * (full.source[c] - none.source[c])));
      diff = std::max(diff, std::abs(full.source[c] - none.source[c]));
    }
    CHECK(diff > 0.0);
    SchemeConfig bad;
    bad.limiter = 1.5;
    CHECK_THROWS_AS(fvm::laplacian(1.0, phi, d, bad), std::invalid_argument);
  }

  TEST_CASE("manufactured solution converges on a sheared duct") {
    std::vector<double> errs;
    for (Index n : {8, 16, 32}) errs.push_back(mms_error(n, 30.0, true));
    for (std::size_t i = 1; i < errs.size(); ++i) CHECK(std::log2(errs[i - 1] / errs[i]) >= 1.0);
    CHECK(mms_error(16, 30.0, false) > 10 * errs[1]);
  }

  TEST_CASE("hybrid storage does not change assembled operators") {
    const Mesh m = gen_skewed_duct(6, 4, 20.0);
    const Domain a = Domain::build(m, 7), b = Domain::build(m, 3);
    REQUIRE(b.pattern->crs_size() > 0);
    const ScalarField pa = with_boundary(a, [](const Vec3& x) { return x.x + x.y * x.y; }, true);
    const ScalarField pb = with_boundary(b, [](const Vec3& x) { return x.x + x.y * x.y; }, true);
    std::mt19937_64 rng(1);
    const auto flux = oracle::random_vector(m.n_faces(), rng);
    CHECK(fvm::laplacian(1.0, pa, a, SchemeConfig{}).matrix.to_dense() ==
          fvm::laplacian(1.0, pb, b, SchemeConfig{}).matrix.to_dense());
    CHECK(fvm::divergence(flux, pa, a, SchemeConfig{}).matrix.to_dense() ==
          fvm::divergence(flux, pb, b, SchemeConfig{}).matrix.to_dense());
  }

  TEST_CASE("upwind convection") {
    const Domain two = Domain::build(
        gen_box(2, 1, 1, [](Index i, Index j, Index k) { return Vec3{double(i), double(j), double(k)}; }, kAllWalls));
    const ScalarField phi("phi", two.mesh, scalar_bcs(two.mesh, ZeroGradient{}));
    std::vector<double> flux(two.mesh.n_faces(), 0.0);
    const auto zero = fvm::divergence(flux, phi, two, SchemeConfig{});
    for (double v : zero.matrix.to_dense()) CHECK(v == 0.0);

    flux[0] = 2.5;
    const auto eq = fvm::divergence(flux, phi, two, SchemeConfig{});
    CHECK(eq.matrix.diagonal_value(0) == 2.5);
    CHECK(eq.matrix.value(two.pattern->find(1, 0)) == -2.5);
    CHECK(eq.matrix.value(two.pattern->find(0, 1)) == 0.0);
    CHECK(eq.matrix.diagonal_value(1) == 0.0);
  }

  TEST_CASE("convection row sums balance cell fluxes") {
    const Domain d = Domain::build(gen_channel(6, 4));
    std::mt19937_64 rng(12);
    auto flux = oracle::random_vector(d.mesh.n_faces(), rng);
    const Index fb = d.mesh.find_patch("frontAndBack");
    for (Index f = d.mesh.patches()[fb].start; f < d.mesh.patches()[fb].end(); ++f) flux[f] = 0.0;
    ScalarField phi("phi", d.mesh, scalar_bcs(d.mesh, ZeroGradient{}));
    phi.bcs()[d.mesh.find_patch("inlet")] = FixedValue<double>{2.0};
    apply_bcs(phi, d.mesh, d.geom, 0.0);
    for (auto scheme : {ConvectionScheme::upwind, ConvectionScheme::linear}) {
      SchemeConfig sc;
      sc.convection = scheme;
      const auto eq = fvm::divergence(flux, phi, d, sc);
      const auto a = dense(eq.matrix);
      for (Index c = 0; c < d.n_cells(); ++c) {
        double row = 0.0, expected = 0.0, src = 0.0;
        for (Index j = 0; j < d.n_cells(); ++j) row += a(c, j);
        for (Index f = 0; f < d.mesh.n_faces(); ++f) {
          if (d.mesh.owner()[f] == c) {
            const Index pi = d.mesh.patch_of(f);
            if (pi == d.mesh.find_patch("inlet")) src -= flux[f] * 2.0;
            else expected += flux[f];
          } else if (d.mesh.is_internal(f) && d.mesh.neighbour()[f] == c) {
            expected -= flux[f];
          }
        }
        CHECK(row == doctest::Approx(expected).epsilon(1e-13).scale(1.0));
        CHECK(eq.source[c] == doctest::Approx(src).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("upwind is bounded for solenoidal fluxes") {
    const Domain d = Domain::build(gen_skewed_duct(7, 5, 25.0));
    std::mt19937_64 rng(99);
    const ScalarField phi("phi", d.mesh, scalar_bcs(d.mesh, ZeroGradient{}));
    for (int trial = 0; trial < 20; ++trial) {
      const auto flux = solenoidal_flux(d, rng);
      const auto net = fvm::surface_sum(flux, d);
      for (double v : net) REQUIRE(std::abs(v) < 1e-12);
      const auto a = dense(fvm::divergence(flux, phi, d, SchemeConfig{}).matrix);
      for (Index i = 0; i < d.n_cells(); ++i)
        for (Index j = 0; j < d.n_cells(); ++j) {
          if (i == j) CHECK(a(i, j) >= -1e-12);
          else CHECK(a(i, j) <= 0.0);
        }
    }
  }

  TEST_CASE("Euler time derivative") {
    const Domain one = uniform_box(1, 1.0);
    const std::vector<double> old = {2.0};
    const auto eq = fvm::ddt_euler<double>(old, 0.1, one);
    CHECK(eq.matrix.diagonal_value(0) == doctest::Approx(10.0));
    CHECK(eq.source[0] == doctest::Approx(20.0));
    const auto slow = fvm::ddt_euler<double>(old, 1e300, one);
    CHECK(slow.matrix.diagonal_value(0) < 1e-299);
    CHECK(slow.source[0] < 1e-299);
    CHECK_THROWS_AS(fvm::ddt_euler<double>(old, 0.0, one), std::invalid_argument);
    CHECK_THROWS_AS(fvm::ddt_euler<double>(old, -1.0, one), std::invalid_argument);
  }

  TEST_CASE("implicit Euler decay follows the recurrence") {
    const Domain one = uniform_box(1, 1.0);
    const double dt = 0.1;
    std::vector<double> phi = {1.0};
    for (int n = 1; n <= 10; ++n) {
      auto eq = fvm::ddt_euler<double>(phi, dt, one);
      eq.matrix.add_to_diagonal(0, one.geom.cell_volume[0]);  // + phi on the left
      phi[0] = eq.source[0] / eq.matrix.diagonal_value(0);
      CHECK(phi[0] == doctest::Approx(std::pow(1.0 + dt, -n)).epsilon(1e-14));
    }
  }

  TEST_CASE("Rhie-Chow flux") {
    const Domain d = uniform_box(5, 0.1);
    std::mt19937_64 rng(3);
    VectorField u("U", d.mesh, vector_bcs(d.mesh, NoSlip{}));
    for (auto& v : u.cells()) v = Vec3{std::sin(3.0 * v.x + 1), 0.5, -0.25};
    for (Index c = 0; c < d.n_cells(); ++c) u[c] = Vec3{std::sin(double(c)), 0.5, std::cos(double(c))};
    apply_bcs(u, d.mesh, d.geom, 0.0);
    std::vector<double> ap(d.n_cells());
    for (double& a : ap) a = 1.0 + std::uniform_real_distribution<double>(0, 1)(rng);

    ScalarField flat("p", d.mesh, scalar_bcs(d.mesh, ZeroGradient{}), 7.0);
    apply_bcs(flat, d.mesh, d.geom, 0.0);
    CHECK(fvm::rhie_chow_flux(u, flat, ap, d) == fvm::flux_of(u, d));

    VectorField still("U", d.mesh, vector_bcs(d.mesh, NoSlip{}));
    apply_bcs(still, d.mesh, d.geom, 0.0);
    const ScalarField lin = with_boundary(d, [](const Vec3& x) { return 3 * x.x - 2 * x.y + x.z; }, true);
    const auto flux = fvm::rhie_chow_flux(still, lin, ap, d);
    for (Index f = 0; f < d.mesh.n_internal_faces(); ++f) CHECK(std::abs(flux[f]) < 1e-15);

    ap[4] = 0.0;
    CHECK_THROWS_AS(fvm::rhie_chow_flux(u, flat, ap, d), std::invalid_argument);
  }

  TEST_CASE("boundary conditions") {
    const Domain d = Domain::build(gen_channel(4, 2));
    const Index inlet = d.mesh.find_patch("inlet");
    const Patch& ip = d.mesh.patches()[inlet];
    VectorField u("U", d.mesh, vector_bcs(d.mesh, NoSlip{}));

    u.bcs()[inlet] = TimedInlet{0.01, 0.5};
    apply_bcs(u, d.mesh, d.geom, 0.0);
    for (Index f = ip.start; f < ip.end(); ++f) CHECK(mag(u.boundary_value(f)) == 0.0);
    apply_bcs(u, d.mesh, d.geom, 0.5);
    for (Index f = ip.start; f < ip.end(); ++f) {
      CHECK(u.boundary_value(f).x == doctest::Approx(0.01).epsilon(1e-15));
      CHECK(u.boundary_value(f).y == 0.0);
    }
    CHECK(timed_inlet_speed(TimedInlet{0.01, 0.5}, 0.5) == doctest::Approx(0.01));

    u.bcs()[inlet] = MassFlowInlet{9.975e-4, 1000.0};
    apply_bcs(u, d.mesh, d.geom, 0.0);
    const double area = patch_area(d.mesh, d.geom, inlet);
    CHECK(area == doctest::Approx(0.02 * 0.01).epsilon(1e-12));
    for (Index f = ip.start; f < ip.end(); ++f)
      CHECK(u.boundary_value(f).x == doctest::Approx(9.975e-7 / area).epsilon(1e-14));

    u.bcs()[inlet] = MassFlowInlet{9.975e-4, 0.0};
    CHECK_THROWS_AS(apply_bcs(u, d.mesh, d.geom, 0.0), FieldError);

    CHECK_THROWS_AS(VectorField("U", d.mesh, {NoSlip{}}), FieldError);
  }

  TEST_CASE("H over A reproduces the off-diagonal split") {
    const Domain d = uniform_box(3, 0.1);
    std::mt19937_64 rng(17);
    VectorField u("U", d.mesh, vector_bcs(d.mesh, NoSlip{}));
    for (auto& v : u.cells()) v = Vec3{oracle::random_vector(1, rng)[0], 0.3, -0.1};
    apply_bcs(u, d.mesh, d.geom, 0.0);
    auto eq = fvm::laplacian(1.0, u, d, SchemeConfig{});
    eq *= -1.0;
    for (Index c = 0; c < d.n_cells(); ++c) eq.source[c] += Vec3{1.0, 2.0, 3.0};
    const auto h = fvm::h_by_a(eq, u.cells());
    const auto a = dense(eq.matrix);
    for (Index c = 0; c < d.n_cells(); ++c)
      for (int k = 0; k < 3; ++k) {
        double off = 0.0;
        for (Index j = 0; j < d.n_cells(); ++j)
          if (j != c) off += a(c, j) * u[j][k];
        CHECK(h[c][k] == doctest::Approx((eq.source[c][k] - off) / a(c, c)).epsilon(1e-13));
      }
  }
}
