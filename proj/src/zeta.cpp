#include "zetaflow/zeta.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "zetaflow/error.hpp"

namespace zetaflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A e^{h} e^{(h-a)L} / (1 - e^{h-a}) bounds sum_{l > L} A e^{-a l} over a
// length spectrum with N(R) <= C' e^{hR} (C' folded into A). With weighted,
// the summand carries an extra factor l.
double tail_majorant(double amp, double h, double a, double lmax, bool weighted) {
  if (amp == 0.0) return 0.0;
  if (!(a > h)) return kInf;
  const double q = std::exp(h - a);
  const double head = amp * std::exp(h + (h - a) * lmax);
  if (!weighted) return head / (1.0 - q);
  return head * ((lmax + 1.0) / (1.0 - q) + q / ((1.0 - q) * (1.0 - q)));
}

std::shared_ptr<const PowerTable> make_table(const LengthSpectrum& ls, const TruncationPolicy& tp) {
  tp.validate();
  return std::make_shared<const PowerTable>(ls, tp.lmax);
}

Character m_character(const GroupData& gd, const Weight& sigma) {
  validate_m_weight(gd, sigma);
  return Character(sigma, RootType::D);
}

}  // namespace

void TruncationPolicy::validate() const {
  if (!(lmax > 0 && std::isfinite(lmax))) throw ValidationError("lmax must be positive");
  if (!(tail_eps > 0)) throw ValidationError("tail_eps must be positive");
  if (!std::isfinite(abscissa_margin)) throw ValidationError("abscissa_margin must be finite");
}

double det_term(const GroupData& gd, double length, std::span<const double> angles) {
  if (static_cast<int>(angles.size()) != gd.n) throw ValidationError("det_term: wrong number of angles");
  const double e = std::exp(-length);
  double det = 1.0;
  for (double th : angles) det *= 1.0 - 2.0 * e * std::cos(th) + e * e;
  return det;
}

std::complex<double> L_sym(const GroupData& gd, const ClassPower& cp, const Character& sigma) {
  return cp.chi_trace * sigma(cp.angles) * std::exp(-gd.rho_norm * cp.length) / det_term(gd, cp.length, cp.angles);
}

PowerTable::PowerTable(const LengthSpectrum& ls, double lmax_)
    : gd(ls.group()), lmax(lmax_), powers(powers_up_to(ls, lmax_)), empty(ls.empty()),
      h(2.0 * ls.group().rho_norm), dim_chi(ls.dim_chi()) {
  det.reserve(powers.size());
  for (const auto& p : powers) det.push_back(det_term(gd, p.length, p.angles));
  if (empty) return;
  for (const auto& c : ls.classes()) k = std::max(k, std::log(c.chi_norm()) / c.l0());
  c_prime = fitted_growth_constant(ls, h);
  det_min = std::pow(1.0 - std::exp(-ls.systole()), 2 * gd.n);
}

ZetaSeries::ZetaSeries(std::shared_ptr<const PowerTable> table, Character sigma, TruncationPolicy tp)
    : table_(std::move(table)), sigma_(std::move(sigma)), tp_(tp) {
  tp_.validate();
  if (tp_.lmax != table_->lmax) throw ValidationError("power table and truncation policy disagree on lmax");
  if (static_cast<int>(sigma_.rank()) != table_->gd.n) throw ValidationError("character rank does not match n");
  twisted_trace_.reserve(table_->powers.size());
  for (const auto& p : table_->powers) twisted_trace_.push_back(p.chi_trace * sigma_(p.angles));
}

ZetaSeries::ZetaSeries(const LengthSpectrum& ls, const Weight& sigma, TruncationPolicy tp)
    : ZetaSeries(make_table(ls, tp), m_character(ls.group(), sigma), tp) {}

double ZetaSeries::selberg_abscissa() const {
  if (table_->empty) return -kInf;
  return table_->gd.rho_norm + table_->k;
}

double ZetaSeries::ruelle_abscissa() const {
  if (table_->empty) return -kInf;
  return 2.0 * table_->gd.rho_norm + table_->k;
}

ZetaValue ZetaSeries::evaluate(Kind kind, std::complex<double> s) const {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw ValidationError("s must be finite");
  const PowerTable& t = *table_;
  if (t.empty) return {{0.0, 0.0}, 0.0};

  const double rho = t.gd.rho_norm;
  const double abscissa = kind == Kind::ruelle ? ruelle_abscissa() : selberg_abscissa();
  const char* name = kind == Kind::selberg ? "selberg" : kind == Kind::ruelle ? "ruelle" : "log-derivative";
  if (s.real() <= abscissa - tp_.abscissa_margin) {
    std::ostringstream os;
    os << name << ": Re(s) = " << s.real() << " is not right of the convergence abscissa " << abscissa;
    throw DomainError(os.str());
  }

  const double dim_sigma = static_cast<double>(sigma_.dim());
  double tail = 0.0;
  if (kind == Kind::ruelle) {
    tail = tail_majorant(t.dim_chi * dim_sigma * t.c_prime, t.h, s.real() - t.k, t.lmax, false);
  } else {
    tail = tail_majorant(t.dim_chi * dim_sigma / t.det_min * t.c_prime, t.h, s.real() + rho - t.k, t.lmax,
                         kind == Kind::derivative);
  }
  if (!(tail <= tp_.tail_eps)) {
    std::ostringstream os;
    os << name << ": tail bound " << tail << " at s = " << s << " exceeds tail_eps = " << tp_.tail_eps;
    throw DomainError(os.str());
  }

  const double sign = (t.gd.d % 2) ? -1.0 : 1.0;
  const auto& powers = t.powers;
  auto term = [&](std::size_t i) -> std::complex<double> {
    const ClassPower& p = powers[i];
    switch (kind) {
      case Kind::selberg:
        return -twisted_trace_[i] * std::exp(-(s + rho) * p.length) / (p.j * t.det[i]);
      case Kind::ruelle:
        return sign * twisted_trace_[i] * std::exp(-s * p.length) / static_cast<double>(p.j);
      case Kind::derivative:
        return p.l0 * twisted_trace_[i] * std::exp(-(s + rho) * p.length) / t.det[i];
    }
    return 0.0;
  };
  return {reduce_terms(powers.size(), term, tp_.reduction), tail};
}

ZetaValue ZetaSeries::selberg_log(std::complex<double> s) const { return evaluate(Kind::selberg, s); }
ZetaValue ZetaSeries::ruelle_log(std::complex<double> s) const { return evaluate(Kind::ruelle, s); }
ZetaValue ZetaSeries::log_derivative(std::complex<double> s) const { return evaluate(Kind::derivative, s); }

ZetaValue selberg_log(std::complex<double> s, const Weight& sigma, const LengthSpectrum& ls,
                      const TruncationPolicy& tp) {
  return ZetaSeries(ls, sigma, tp).selberg_log(s);
}

ZetaValue ruelle_log(std::complex<double> s, const Weight& sigma, const LengthSpectrum& ls,
                     const TruncationPolicy& tp) {
  return ZetaSeries(ls, sigma, tp).ruelle_log(s);
}

ZetaValue log_derivative(std::complex<double> s, const Weight& sigma, const LengthSpectrum& ls,
                         const TruncationPolicy& tp) {
  return ZetaSeries(ls, sigma, tp).log_derivative(s);
}

double abscissa_estimate(const LengthSpectrum& ls, const Weight& sigma) {
  TruncationPolicy tp;
  tp.lmax = std::max(1.0, ls.systole());
  return ZetaSeries(ls, sigma, tp).selberg_abscissa();
}

double ruelle_abscissa_estimate(const LengthSpectrum& ls, const Weight& sigma) {
  TruncationPolicy tp;
  tp.lmax = std::max(1.0, ls.systole());
  return ZetaSeries(ls, sigma, tp).ruelle_abscissa();
}

RuelleFactorization::RuelleFactorization(const LengthSpectrum& ls, const Weight& sigma, TruncationPolicy tp)
    : gd_(ls.group()) {
  const Character sigma_char = m_character(gd_, sigma);
  auto table = make_table(ls, tp);
  for (int p = 0; p < gd_.d; ++p) {
    std::vector<ZetaSeries> row;
    for (const auto& comp : exterior_decomposition(gd_, p)) {
      if (comp.lambda != p) throw DomainError("exterior decomposition with unexpected A-weight");
      row.emplace_back(table, Character(comp.psi, RootType::D).tensor(sigma_char), tp);
    }
    factors_.push_back(std::move(row));
  }
}

ZetaValue RuelleFactorization::z_p_log(std::complex<double> s, int p) const {
  if (p < 0 || p >= gd_.d) throw ValidationError("p must lie in [0, d-1]");
  ZetaValue out{{0.0, 0.0}, 0.0};
  const std::complex<double> shifted = s + gd_.rho_norm - static_cast<double>(p);
  for (const auto& f : factors_[p]) {
    const ZetaValue v = f.selberg_log(shifted);
    out.value += v.value;
    out.tail_bound += v.tail_bound;
  }
  return out;
}

ZetaValue RuelleFactorization::ruelle_log(std::complex<double> s) const {
  ZetaValue out{{0.0, 0.0}, 0.0};
  for (int p = 0; p < gd_.d; ++p) {
    const ZetaValue v = z_p_log(s, p);
    out.value += (p % 2 ? -1.0 : 1.0) * v.value;
    out.tail_bound += v.tail_bound;
  }
  return out;
}

ZetaValue z_p_log(std::complex<double> s, int p, const Weight& sigma, const LengthSpectrum& ls,
                  const TruncationPolicy& tp) {
  return RuelleFactorization(ls, sigma, tp).z_p_log(s, p);
}

ZetaValue ruelle_factorized_log(std::complex<double> s, const Weight& sigma, const LengthSpectrum& ls,
                                const TruncationPolicy& tp) {
  return RuelleFactorization(ls, sigma, tp).ruelle_log(s);
}

}  // namespace zetaflow
