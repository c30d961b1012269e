#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "renyi/renyi.hpp"

using namespace renyi;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void closed_form_inverses() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool all_closed = true;
  for (Order a : {Order::finite(0.5), Order::finite(2.0), Order::infinity()})
    for (int n = 2; n <= 10; ++n)
      for (int i = 0; i < 100; ++i) {
        const double mu = std::log(double(n)) * (i + 0.5) / 100.0;
        const auto cf = closed_form_inv_entropy_v(n, a, mu);
        if (!cf) {
          all_closed = false;
          continue;
        }
        worst = std::max(worst, std::fabs(*cf - bisect_inv_entropy_v(n, a, mu)));
      }
  const double s = seconds_since(t0);
  report(1, all_closed && worst <= 1e-10 && s < 1.0, fmt("max |closed - bisection| = %.3g, %.3f s", worst, s));
}

void figure_constant() {
  const double t = h2_vs_hhalf_threshold(8);
  report(2, std::fabs(t - 1.89398) <= 5e-6, fmt("threshold(8) = %.9f", t));
}

void scan_criteria() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<TheoremId> ids(std::begin(kAllTheorems), std::end(kAllTheorems));
  const ScanReport rep = verify_scan(ids, VerifyConfig{});
  const double s = seconds_since(t0);

  double viol = -kInf, walpha = 0.0, wbeta = 0.0, gap = 0.0;
  bool complete = rep.complete, witnessed = true;
  std::string worst_id = "-";
  for (const auto& t : rep.theorems) {
    if (t.max_violation > viol) {
      viol = t.max_violation;
      worst_id = to_string(t.theorem);
    }
    walpha = std::max(walpha, t.witness_alpha_error);
    wbeta = std::max(wbeta, t.witness_beta_error);
    gap = std::max(gap, t.min_gap);
    complete = complete && t.complete && t.claims_checked > 0;
    witnessed = witnessed && t.witness_checks > 0 && t.min_gap <= kWitnessBetaTol;
  }
  report(3, complete && viol <= kViolationTol && s < 60.0 && rep.theorems.size() == ids.size(),
         fmt("max violation %.3g over ", viol) + std::to_string(rep.grid_classes) + " grid classes + " +
             std::to_string(rep.random_sources) + " random sources (worst " + worst_id + "), " + fmt("%.1f s", s));
  report(4, witnessed && walpha <= kWitnessAlphaTol && wbeta <= kWitnessBetaTol,
         fmt("witness alpha error %.3g, beta error %.3g", walpha, wbeta) + fmt(", largest min gap %.3g", gap));
  const auto& id = rep.identities;
  report(5, id.sources > 0 && id.pe_hinf_residual <= 1e-12 && id.z_hhalf_residual <= 1e-12,
         fmt("P_e/H_inf residual %.3g, Z/H_1/2 residual %.3g", id.pe_hinf_residual, id.z_hhalf_residual) + " on " +
             std::to_string(id.sources) + " sources");
}

void estimator_oracle() {
  size_t checked = 0, mismatches = 0;
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= 4; ++k)
      for_each_grid_source(n, k, 0.25, [&](const CondSource& s) {
        ++checked;
        mismatches += min_error(s) == verify_estimator_pe(s) ? 0 : 1;
      });
  report(6, checked > 0 && mismatches == 0,
         std::to_string(mismatches) + " mismatches on " + std::to_string(checked) + " grid sources (step 1/4)");
}

void g_sign_structure() {
  std::mt19937_64 rng(0x5EED);
  std::uniform_real_distribution<double> order(0.5, 6.0);
  bool ok = true;
  for (int i = 0; i < 20; ++i) {
    double r = order(rng), s = order(rng);
    if (r > s) std::swap(r, s);
    for (int j = 1; j <= 2000 && ok; ++j) {
      const double z = std::pow(1e6, j / 2001.0);
      ok = g_fn(2, z, Order::of(r), Order::of(s)) < 0.0;
    }
  }
  double worst_residual = 0.0;
  for (int n : {3, 5, 8})
    for (auto [r, s] : {std::pair{0.5, 2.0}, {0.5, 3.0}, {2.0, 3.0}, {0.7, 1.5}}) {
      const Order R = Order::of(r), S = Order::of(s);
      const double zeta = zeta_root(n, R, S);
      worst_residual = std::max(worst_residual, std::fabs(g_fn(n, zeta, R, S)));
      int changes = 0;
      double prev = 1.0;
      for (int j = 1; j <= 4000; ++j) {
        const double z = std::pow(1e6, j / 4000.0);
        const double v = g_fn(n, z, R, S);
        if (v == 0.0) continue;
        if ((v > 0) != (prev > 0)) ++changes;
        if (z < zeta * (1 - 1e-9) && !(v > 0)) ok = false;
        if (z > zeta * (1 + 1e-9) && !(v < 0)) ok = false;
        prev = v;
      }
      ok = ok && changes == 1;
    }
  report(7, ok && worst_residual <= 1e-9,
         std::string(ok ? "sign structure holds" : "sign structure broken") + fmt(", max |g(zeta)| = %.3g", worst_residual));
}

void shannon_reverse_fano() {
  const double v = fano_renyi(FanoKind::Conditional, Order::shannon(), 0.5).lower.value;
  report(8, std::fabs(v - std::log(2.0)) <= 1e-12, fmt("reverse Fano at 0.5 = %.15f", v));
}

void bhattacharyya_inversion() {
  std::mt19937_64 rng(0x5EED);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + int(rng() % 9);
    const double eps = std::uniform_real_distribution<double>(0.0, (n - 1.0) / n)(rng);
    const double z = bhattacharyya_bounds(BhattDirection::ZFromPe, eps, n).upper.value;
    worst = std::max(worst, std::fabs(bhattacharyya_bounds(BhattDirection::PeFromZ, z, n).lower.value - eps));
  }
  report(9, worst <= 1e-10, fmt("max |recovered - eps| = %.3g", worst));
}

}  // namespace

int main() {
  try {
    closed_form_inverses();
    figure_constant();
    scan_criteria();
    estimator_oracle();
    g_sign_structure();
    shannon_reverse_fano();
    bhattacharyya_inversion();
  } catch (const std::exception& e) {
    std::printf("FAIL unexpected error: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
