#include "fracrom/affine.hpp"

#include <cmath>
#include <sstream>

namespace fracrom {

namespace {

void require_component(const Vec64& mu, Index i, const char* what) {
  if (i < 0 || i >= static_cast<Index>(mu.size())) {
    std::ostringstream os;
    os << "coefficient function " << what << " needs parameter component " << i
       << " but mu has dimension " << mu.size();
    throw ConfigError(os.str());
  }
}

}  // namespace

double CoeffFn::eval(const Vec64& mu) const {
  switch (kind) {
    case Kind::One:
      return 1.0;
    case Kind::MuComponent:
      require_component(mu, index, "mu[i]");
      return mu(index);
    case Kind::AnisoXX: {
      require_component(mu, 2, "aniso_xx");
      const double c = std::cos(mu(2)), s = std::sin(mu(2));
      return c * c * mu(0) + s * s * mu(1);
    }
    case Kind::AnisoXY: {
      require_component(mu, 2, "aniso_xy");
      const double c = std::cos(mu(2)), s = std::sin(mu(2));
      return s * c * (mu(1) - mu(0));
    }
    case Kind::AnisoYY: {
      require_component(mu, 2, "aniso_yy");
      const double c = std::cos(mu(2)), s = std::sin(mu(2));
      return c * c * mu(1) + s * s * mu(0);
    }
  }
  throw ConfigError("CoeffFn: unknown kind");
}

std::string CoeffFn::id() const {
  switch (kind) {
    case Kind::One:
      return "one";
    case Kind::MuComponent:
      return "mu[" + std::to_string(index) + "]";
    case Kind::AnisoXX:
      return "aniso_xx";
    case Kind::AnisoXY:
      return "aniso_xy";
    case Kind::AnisoYY:
      return "aniso_yy";
  }
  throw ConfigError("CoeffFn: unknown kind");
}

CoeffFn CoeffFn::from_id(const std::string& id) {
  if (id == "one") return one();
  if (id == "aniso_xx") return aniso_xx();
  if (id == "aniso_xy") return aniso_xy();
  if (id == "aniso_yy") return aniso_yy();
  if (id.size() > 4 && id.compare(0, 3, "mu[") == 0 && id.back() == ']') {
    const std::string digits = id.substr(3, id.size() - 4);
    if (!digits.empty() &&
        digits.find_first_not_of("0123456789") == std::string::npos)
      return mu(static_cast<Index>(std::stol(digits)));
  }
  throw ConfigError("unknown coefficient function id: \"" + id + "\"");
}

bool ParamBox::contains(const Vec64& mu) const {
  if (static_cast<Index>(mu.size()) != dim()) return false;
  for (Index i = 0; i < dim(); ++i)
    if (!(mu(i) >= lo(i) && mu(i) <= hi(i))) return false;
  return true;
}

void ParamBox::check_valid() const {
  if (lo.size() != hi.size())
    throw ConfigError("parameter box: lo and hi dimensions differ");
  for (Index i = 0; i < dim(); ++i) {
    if (!std::isfinite(lo(i)) || !std::isfinite(hi(i)))
      throw ConfigError("parameter box: non-finite bound");
    if (lo(i) > hi(i))
      throw ConfigError("parameter box: lo > hi in component " +
                        std::to_string(i));
  }
}

void AffineProblem::check_valid() const {
  const Index n = n_dof();
  if (n <= 0) throw ConfigError("affine problem \"" + id + "\": empty dof map");
  mass.check_valid();
  if (mass.nrows != n || mass.ncols != n)
    throw DimensionError("affine problem \"" + id + "\": mass dimension mismatch");
  if (!mass.is_symmetric())
    throw NumericError("affine problem \"" + id + "\": mass not symmetric");
  if (stiffness_terms.empty())
    throw ConfigError("affine problem \"" + id + "\": no operator terms");
  for (const auto& term : stiffness_terms) {
    term.matrix.check_valid();
    if (term.matrix.nrows != n || term.matrix.ncols != n)
      throw DimensionError("affine problem \"" + id + "\": operator term \"" +
                           term.name + "\" dimension mismatch");
    if (!term.matrix.is_symmetric())
      throw NumericError("affine problem \"" + id + "\": operator term \"" +
                         term.name + "\" not symmetric");
  }
  if (load_terms.empty())
    throw ConfigError("affine problem \"" + id + "\": no load terms");
  for (const auto& term : load_terms) {
    if (static_cast<Index>(term.vector.size()) != n)
      throw DimensionError("affine problem \"" + id + "\": load term \"" +
                           term.name + "\" dimension mismatch");
    if (!term.vector.allFinite())
      throw NumericError("affine problem \"" + id + "\": load term \"" +
                         term.name + "\" has non-finite entries");
  }
  box.check_valid();
}

Materialized materialize(const AffineProblem& problem, const Vec64& mu,
                         RunLog* log) {
  if (static_cast<Index>(mu.size()) != problem.box.dim()) {
    std::ostringstream os;
    os << "materialize: mu has dimension " << mu.size() << " but problem \""
       << problem.id << "\" expects " << problem.box.dim();
    throw ConfigError(os.str());
  }
  if (log != nullptr && !problem.box.contains(mu)) {
    std::ostringstream os;
    os << "materialize: mu = [";
    for (Index i = 0; i < static_cast<Index>(mu.size()); ++i)
      os << (i ? ", " : "") << format_double(mu(i));
    os << "] outside the declared parameter box of \"" << problem.id
       << "\"; extrapolating";
    log->warn(os.str());
  }
  return {materialize_operator(problem, mu), materialize_load(problem, mu)};
}

CsrMatrix materialize_operator(const AffineProblem& problem, const Vec64& mu) {
  const auto& terms = problem.stiffness_terms;
  CsrMatrix K = terms[0].matrix;
  double c0 = terms[0].coeff.eval(mu);
  if (c0 != 1.0)
    for (double& v : K.values) v *= c0;
  for (size_t t = 1; t < terms.size(); ++t)
    K = sparse_add_scaled(K, terms[t].matrix, 1.0, terms[t].coeff.eval(mu));
  return K;
}

Vec64 materialize_load(const AffineProblem& problem, const Vec64& mu) {
  Vec64 f = Vec64::Zero(problem.n_dof());
  for (const auto& term : problem.load_terms)
    f += term.coeff.eval(mu) * term.vector;
  return f;
}

}  // namespace fracrom
