#pragma once

// Intermediate-field matrices G = A + iH for the φ^{2k} models, the two
// nonzero eigenvalues ω_± of A^{-1}H, resolvent norms and the contour map
// that bends intermediate-field integrals into a band.

#include "lve/errors.hpp"
#include "lve/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace lve {

using cplx = std::complex<double>;

/// Real values of the intermediate fields, keyed by symbol ("sigma", "a1", ...).
struct FieldAssignment {
  int k = 3;
  std::map<std::string, double> values;

  double operator[](const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw ContractViolation("field " + name + " missing for k=" + std::to_string(k));
    return it->second;
  }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [name, v] : values) {
      os << (first ? "" : ",") << name << "=" << v;
      first = false;
    }
    return os.str();
  }
};

/// A linear combination Σ coefficient·field.
using LinearForm = std::vector<std::pair<std::string, double>>;

/// Shape of G = A + iH: diagonal A and a first-row-supported symmetric H,
/// H = μ [[μ g_1, g_2, …], [g_2, 0, …], …] with μ = λ^{1/(2k)}.
struct MatrixTemplate {
  int k = 4;
  std::vector<std::string> roster;
  std::vector<cplx> a_diagonal;
  std::vector<LinearForm> first_row;  // g_1 … g_dim

  int dimension() const { return static_cast<int>(a_diagonal.size()); }

  void validate() const {
    if (k < 3) throw ContractViolation("matrix templates need k >= 3");
    if (roster.size() != static_cast<std::size_t>(3 * (k - 2) + 1))
      throw ContractViolation("roster must hold 3(k-2)+1 = " + std::to_string(3 * (k - 2) + 1) + " fields");
    if (first_row.size() != a_diagonal.size() || a_diagonal.empty())
      throw ContractViolation("first row and diagonal of A must have equal, nonzero length");
    int ones = 0;
    for (const auto& d : a_diagonal) {
      if (d == cplx(1)) ++ones;
      else if (d != cplx(0, 1) && d != cplx(0, -1)) throw ContractViolation("A entries must be 1, i or -i");
    }
    if (ones != (k % 2 == 0 ? 1 : 2))
      throw ContractViolation("A must carry " + std::string(k % 2 == 0 ? "one" : "two") + " unit entries for k=" +
                              std::to_string(k));
    for (const auto& form : first_row)
      for (const auto& [name, c] : form)
        if (std::find(roster.begin(), roster.end(), name) == roster.end())
          throw ContractViolation("template uses field " + name + " outside its roster");
  }
};

inline std::vector<std::string> field_roster(int k, const MatrixTemplate* custom = nullptr) {
  auto series = [](char letter, int count, std::vector<std::string>& out) {
    for (int i = 1; i <= count; ++i) out.push_back(std::string(1, letter) + std::to_string(i));
  };
  std::vector<std::string> r{"sigma"};
  switch (k) {
    case 3: series('a', 1, r), series('b', 1, r), series('c', 1, r); return r;
    case 4: series('a', 3, r), series('b', 3, r); return r;
    case 5: series('a', 3, r), series('b', 3, r), series('c', 3, r); return r;
    default:
      if (custom && custom->k == k) return custom->roster;
      throw CapabilityError("no built-in field roster for k=" + std::to_string(k) +
                            "; supply a MatrixTemplate following the inductive first-row construction");
  }
}

/// The printed φ^8 (k=4) and φ^10 (k=5) shapes.
inline MatrixTemplate builtin_template(int k) {
  const cplx one(1), i(0, 1);
  MatrixTemplate t;
  t.k = k;
  t.roster = field_roster(k);
  if (k == 4) {
    t.a_diagonal = {one, i, -i, -i};
    t.first_row = {{{"b1", -1.0}, {"b3", 1.0}},
                   {{"b1", -1.0}, {"sigma", -1.0}},
                   {{"sigma", 1.0}},
                   {{"b1", 1.0}, {"b2", -1.0}}};
  } else if (k == 5) {
    t.a_diagonal = {one, one, i, -i, -i};
    t.first_row = {{{"c1", -1.0}, {"c3", 1.0}},
                   {{"a1", -1.0}, {"a2", 1.0}},
                   {{"a1", -1.0}, {"sigma", -1.0}},
                   {{"a1", 1.0}, {"a3", -1.0}},
                   {{"c1", 1.0}, {"c2", -1.0}}};
  } else {
    throw CapabilityError("built-in matrices exist for k = 3, 4, 5 only; k=" + std::to_string(k) +
                          " needs a MatrixTemplate following the inductive first-row construction");
  }
  return t;
}

/// Independent normal draws for every symbol of the roster.
template <class Rng>
FieldAssignment random_fields(int k, Rng& rng, double scale = 1.0, const MatrixTemplate* custom = nullptr) {
  std::normal_distribution<double> normal(0.0, scale);
  FieldAssignment f{k, {}};
  for (const auto& name : field_roster(k, custom)) f.values[name] = normal(rng);
  return f;
}

inline void check_roster(const FieldAssignment& f, const std::vector<std::string>& roster) {
  if (f.values.size() != roster.size())
    throw ContractViolation("field assignment has " + std::to_string(f.values.size()) + " symbols, roster needs " +
                            std::to_string(roster.size()));
  for (const auto& name : roster)
    if (!f.values.count(name)) throw ContractViolation("field " + name + " missing for k=" + std::to_string(f.k));
}

struct StructuredMatrix {
  std::vector<cplx> A;  // diagonal
  Eigen::MatrixXcd H;
  FieldAssignment fields;

  int dimension() const { return static_cast<int>(A.size()); }

  Eigen::MatrixXcd G() const {
    Eigen::MatrixXcd g = cplx(0, 1) * H;
    for (int d = 0; d < dimension(); ++d) g(d, d) += A[d];
    return g;
  }
};

/// φ^6 matrix with g = (2λ)^{1/4}: H = g [[2(c-a), b-a], [b-a, 0]], A = 1.
/// The factor 2 on the diagonal is what reproduces exp(-λφ^6) on integrating
/// out φ and σ.
inline StructuredMatrix build_matrix_phi6(double a, double b, double c, const Coupling& lambda) {
  const cplx g = Coupling{2 * lambda.modulus, lambda.argument}.power(0.25);
  StructuredMatrix m;
  m.A = {1.0, 1.0};
  m.H.resize(2, 2);
  m.H << g * (2 * (c - a)), g * (b - a), g * (b - a), 0.0;
  m.fields = FieldAssignment{3, {{"sigma", 0.0}, {"a1", a}, {"b1", b}, {"c1", c}}};
  return m;
}

inline StructuredMatrix build_matrix_general(int k, const FieldAssignment& fields, const Coupling& lambda,
                                             const MatrixTemplate* custom = nullptr) {
  if (fields.k != k) throw ContractViolation("field assignment is for k=" + std::to_string(fields.k));
  if (k == 3) {
    check_roster(fields, field_roster(3));
    auto m = build_matrix_phi6(fields["a1"], fields["b1"], fields["c1"], lambda);
    m.fields = fields;
    return m;
  }
  const MatrixTemplate t = (custom && custom->k == k) ? *custom : builtin_template(k);
  t.validate();
  check_roster(fields, t.roster);
  const cplx mu = lambda.power(1.0 / (2.0 * k));
  const int n = t.dimension();
  StructuredMatrix m;
  m.A = t.a_diagonal;
  m.H = Eigen::MatrixXcd::Zero(n, n);
  auto eval = [&](const LinearForm& form) {
    double s = 0.0;
    for (const auto& [name, c] : form) s += c * fields[name];
    return s;
  };
  m.H(0, 0) = mu * mu * eval(t.first_row[0]);
  for (int j = 1; j < n; ++j) m.H(0, j) = m.H(j, 0) = mu * eval(t.first_row[j]);
  m.fields = fields;
  return m;
}

/// Eigenvalues of [[2(c-a), b-a], [b-a, 0]], i.e. of H/(2λ)^{1/4}:
/// ω_± = (c-a) ± √((c-a)² + (b-a)²), so ω_+ >= 0 >= ω_-.
inline std::pair<double, double> omega_phi6(double a, double b, double c) {
  const double t = c - a, s = b - a;
  const double r = std::hypot(t, s);
  return {t + r, t - r};
}

/// The two eigenvalues of A^{-1}H that can be nonzero. With M = A^{-1}H
/// supported on the first row and column they solve
///   ω² - M_11 ω - Σ_{j>1} H_1j² / (A_11 A_jj) = 0.
inline std::pair<cplx, cplx> omega_general(const StructuredMatrix& m) {
  const int n = m.dimension();
  const cplx m11 = m.H(0, 0) / m.A[0];
  cplx q = 0;
  for (int j = 1; j < n; ++j) q += m.H(0, j) * m.H(0, j) / (m.A[0] * m.A[j]);
  const cplx root = std::sqrt(m11 * m11 + 4.0 * q);
  return {(m11 + root) / 2.0, (m11 - root) / 2.0};
}

inline std::pair<cplx, cplx> omega_general(int k, const FieldAssignment& fields, const Coupling& lambda,
                                           const MatrixTemplate* custom = nullptr) {
  return omega_general(build_matrix_general(k, fields, lambda, custom));
}

/// det G = det A · (1 + iω_+)(1 + iω_-).
inline cplx closed_form_determinant(const StructuredMatrix& m) {
  const auto [wp, wm] = omega_general(m);
  cplx d = (1.0 + cplx(0, 1) * wp) * (1.0 + cplx(0, 1) * wm);
  for (const auto& a : m.A) d *= a;
  return d;
}

/// Spectral norm of G^{-1}, i.e. 1/σ_min(G).
inline double resolvent_norm(const StructuredMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.G());
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > s(0) * 1e-14 * s.size()))
    throw SingularityError("G is numerically singular at " + m.fields.to_string());
  return 1.0 / smin;
}

/// x ↦ x - i·direction·x/(A|x|+1). direction = +1 for a-type fields,
/// -1 for b- and c-type fields.
struct ContourMap {
  double A_param = 10.0;
  int direction = 1;

  void validate() const {
    if (!(A_param > 0)) throw ContractViolation("band parameter must be positive");
    if (direction != 1 && direction != -1) throw ContractViolation("direction must be +1 or -1");
  }
  cplx derivative(double x) const {
    const double d = A_param * std::abs(x) + 1.0;
    return {1.0, -direction / (d * d)};
  }
};

inline cplx deform(double x, const ContourMap& map) {
  map.validate();
  return {x, -map.direction * x / (map.A_param * std::abs(x) + 1.0)};
}

struct ResolventScanRow {
  int k = 3;
  double argument = 0.0;
  std::size_t samples = 0;
  double min_norm = 0.0;
  double max_norm = 0.0;
  double min_one_plus_i_omega = 0.0;  // min over draws of |1 + iω_±|
  FieldAssignment worst_fields;       // draw attaining min |1 + iω_±|
};

struct ResolventScanOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 42;
  double modulus = 1.0;
  /// Every `large_every`-th draw is rescaled by 10^{U(0,3)}.
  std::size_t large_every = 4;
  const MatrixTemplate* custom = nullptr;
};

/// Resolvent norms and |1 + iω_±| over random field draws on each ray.
inline std::vector<ResolventScanRow> resolvent_scan(int k, std::span<const double> arguments,
                                                    const ResolventScanOptions& opt = {}) {
  std::vector<ResolventScanRow> rows;
  for (std::size_t r = 0; r < arguments.size(); ++r) {
    const double arg = arguments[r];
    if (std::abs(arg) >= domain_half_angle(k))
      throw DomainError("ray Arg λ = " + std::to_string(arg) + " outside the sector for k=" + std::to_string(k));
    std::mt19937_64 rng(opt.seed + 7919 * r);
    std::uniform_real_distribution<double> decades(0.0, 3.0);
    const Coupling lambda{opt.modulus, arg};
    ResolventScanRow row{k, arg, opt.samples, std::numeric_limits<double>::infinity(), 0.0,
                         std::numeric_limits<double>::infinity(), {}};
    for (std::size_t s = 0; s < opt.samples; ++s) {
      auto fields = random_fields(k, rng, 1.0, opt.custom);
      if (opt.large_every && s % opt.large_every == opt.large_every - 1) {
        const double scale = std::pow(10.0, decades(rng));
        for (auto& [name, v] : fields.values) v *= scale;
      }
      const auto m = build_matrix_general(k, fields, lambda, opt.custom);
      const double norm = resolvent_norm(m);
      row.min_norm = std::min(row.min_norm, norm);
      row.max_norm = std::max(row.max_norm, norm);
      const auto [wp, wm] = omega_general(m);
      const double gap = std::min(std::abs(1.0 + cplx(0, 1) * wp), std::abs(1.0 + cplx(0, 1) * wm));
      if (gap < row.min_one_plus_i_omega) {
        row.min_one_plus_i_omega = gap;
        row.worst_fields = fields;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lve
