#include "tumorstab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tumorstab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMarginalBand = 1e-10;
constexpr double kTieTolerance = 1e-12;

void require_degree(int l, const char* where) {
  if (l < 2) {
    throw DegreeError(std::string(where) + ": defined for l >= 2, got l = " + std::to_string(l));
  }
}

}  // namespace

double gamma_threshold_l(const ModeProfile& mode, const ModelFunctions& fns) {
  const int l = mode.l;
  require_degree(l, "gamma_threshold_l");
  const double bracket = fns.g(1.0) + mode.I_l;
  if (!(bracket > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "gamma_threshold_l: g(1) + I_l = " << bracket << " <= 0 at l = " << l
       << " contradicts gamma_l > 0; upstream numerical failure";
    throw ContradictionError(os.str());
  }
  const double ld = l;
  return 4.0 * (2.0 * ld + 3.0) * (ld + 1.0) / (ld * (ld + 2.0) * (2.0 * ld + 1.0)) * bracket;
}

double darcy_gamma_l(const ModeProfile& mode, const ModelFunctions& fns) {
  const int l = mode.l;
  require_degree(l, "darcy_gamma_l");
  const double ld = l;
  return 2.0 / (ld * (ld - 1.0) * (ld + 2.0)) * (fns.g(1.0) + fns.g_prime(1.0) * mode.J_l);
}

double alpha_slope(int l) {
  const double ld = l;
  return -ld * (ld + 2.0) * (2.0 * ld + 1.0) / (4.0 * (2.0 * ld * ld + 4.0 * ld + 3.0));
}

double alpha_l(int l, double gamma, double gamma_l) {
  require_degree(l, "alpha_l");
  return alpha_slope(l) * (gamma - gamma_l);
}

double alpha_zero(const ModeProfile& mode0, const ModelFunctions& fns) {
  if (mode0.l != 0) throw DegreeError("alpha_zero: needs the degree-0 mode");
  return fns.g(1.0) + mode0.I_l;
}

ThresholdResult threshold_from_values(std::span<const double> values, int first_degree, int min_decreasing_run) {
  if (values.empty()) throw ValidationError("threshold_from_values: no values");
  ThresholdResult out;
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  out.gamma_star = values[best];
  const double band = kTieTolerance * std::max(1.0, std::abs(out.gamma_star));
  // Smallest degree whose value is within the tie band of the maximum.
  std::size_t first = best;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (out.gamma_star - values[k] <= band) {
      first = k;
      break;
    }
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k != first && out.gamma_star - values[k] <= band) out.tie = true;
  }
  out.l_star = first_degree + static_cast<int>(first);

  std::size_t start = values.size() - 1;
  while (start > 0 && values[start] < values[start - 1]) --start;
  auto& cert = out.certificate;
  cert.l_bar = first_degree + static_cast<int>(start);
  cert.decreasing_run = static_cast<int>(values.size() - 1 - start);
  cert.gamma_at_L_max = values.back();
  cert.satisfied = cert.decreasing_run >= min_decreasing_run && values.back() < out.gamma_star;
  return out;
}

double SpectrumReport::alpha(int l, double gamma) const {
  if (l == 0) return alpha_0;
  if (l == 1) return 0.0;
  if (l < 0 || l > L_max) throw DegreeError("SpectrumReport::alpha: degree " + std::to_string(l) + " not covered");
  return alpha_l(l, gamma, gamma_l[static_cast<std::size_t>(l)]);
}

SpectrumReport spectrum_from_modes(const std::vector<ModeProfile>& modes, const ModelFunctions& fns) {
  if (modes.size() < 3) throw ValidationError("spectrum_from_modes: need modes for l = 0..L_max with L_max >= 2");
  SpectrumReport rep;
  rep.L_max = static_cast<int>(modes.size()) - 1;
  rep.I_l.resize(modes.size());
  rep.gamma_l.assign(modes.size(), kNaN);
  rep.gamma_tilde_l.assign(modes.size(), kNaN);
  for (std::size_t l = 0; l < modes.size(); ++l) {
    if (modes[l].l != static_cast<int>(l)) throw ValidationError("spectrum_from_modes: modes must be ordered by degree");
    rep.I_l[l] = modes[l].I_l;
    if (l >= 2) {
      rep.gamma_l[l] = gamma_threshold_l(modes[l], fns);
      rep.gamma_tilde_l[l] = darcy_gamma_l(modes[l], fns);
    }
  }
  rep.alpha_0 = alpha_zero(modes[0], fns);

  const std::span<const double> stokes(rep.gamma_l.data() + 2, rep.gamma_l.size() - 2);
  const auto thr = threshold_from_values(stokes);
  rep.gamma_star = thr.gamma_star;
  rep.l_star = thr.l_star;
  rep.l_star_tie = thr.tie;
  rep.certificate = thr.certificate;

  const std::span<const double> darcy(rep.gamma_tilde_l.data() + 2, rep.gamma_tilde_l.size() - 2);
  const auto dthr = threshold_from_values(darcy);
  rep.gamma_tilde_star = dthr.gamma_star;
  rep.l_tilde_star = dthr.l_star;
  return rep;
}

SpectrumReport compute_spectrum(const RadialStationary& unit_state, const ModelFunctions& fns,
                                const SpectrumOptions& opt) {
  if (opt.L_max < 8) throw ValidationError("compute_spectrum: L_max must be >= 8");
  int L = opt.L_max;
  auto modes = solve_modes(0, L, unit_state, fns, opt.modes);
  for (;;) {
    auto rep = spectrum_from_modes(modes, fns);
    if (rep.certificate.satisfied || !opt.require_certificate) return rep;
    if (L >= opt.L_cap) {
      std::ostringstream os;
      os << "compute_spectrum: no tail certificate up to L_max = " << L << " (decreasing run "
         << rep.certificate.decreasing_run << ", gamma_star so far " << rep.gamma_star << " at l = " << rep.l_star
         << ")";
      throw SpectrumTruncationError(os.str(), std::move(rep));
    }
    const int next = std::min(2 * L, opt.L_cap);
    auto more = solve_modes(L + 1, next, unit_state, fns, opt.modes);
    modes.insert(modes.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    L = next;
  }
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::stable:
      return "stable";
    case Stability::unstable:
      return "unstable";
    case Stability::marginal:
      return "marginal";
  }
  return "marginal";
}

SpectrumClassification full_spectrum(double gamma, const SpectrumReport& rep) {
  SpectrumClassification out;
  out.gamma = gamma;
  out.eigenvalues.push_back({rep.alpha_0, 0, 1});
  out.eigenvalues.push_back({0.0, 1, 3});
  for (int l = 2; l <= rep.L_max; ++l) out.eigenvalues.push_back({rep.alpha(l, gamma), l, 2 * l + 1});
  std::stable_sort(out.eigenvalues.begin(), out.eigenvalues.end(),
                   [](const Eigenvalue& a, const Eigenvalue& b) { return a.value > b.value; });

  if (std::abs(gamma - rep.gamma_star) <= kMarginalBand) {
    out.stability = Stability::marginal;
  } else if (gamma > rep.gamma_star && rep.alpha_0 < 0.0) {
    out.stability = Stability::stable;
  } else {
    out.stability = Stability::unstable;
  }
  return out;
}

}  // namespace tumorstab
