#include "metapop/order.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace metapop {

namespace {

// Inequalities are compared with a relative slack: table entries are sums of a
// few double products assembled in different orders on the two sides, so exact
// comparisons would misfire on mathematically equal values.
bool definitely_greater(double lhs, double rhs) {
  const double tol = 1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return lhs > rhs + tol;
}

}  // namespace

RateTable RateTable::zero(int N, int k_max) {
  if (N < 1) throw std::invalid_argument("rate table: alphabet max must be >= 1");
  if (k_max < 1) throw std::invalid_argument("rate table: k_max must be >= 1");
  RateTable t;
  t.alphabet_max = N;
  t.k_max = k_max;
  const std::size_t s = static_cast<std::size_t>(N) + 1;
  t.birth.assign(static_cast<std::size_t>(k_max) * s, 0.0);
  t.death.assign(static_cast<std::size_t>(k_max) * s, 0.0);
  t.jump.assign(static_cast<std::size_t>(k_max) * s * s, 0.0);
  return t;
}

double& RateTable::birth_ref(int k, int b) {
  return birth[static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(states()) +
               static_cast<std::size_t>(b)];
}
double& RateTable::death_ref(int k, int a) {
  return death[static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(states()) +
               static_cast<std::size_t>(a)];
}
double& RateTable::jump_ref(int k, int a, int b) {
  return jump[(static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(states()) +
               static_cast<std::size_t>(a)) *
                  static_cast<std::size_t>(states()) +
              static_cast<std::size_t>(b)];
}

int RateTable::max_change() const {
  int kmax = 1;
  for (int k = k_max; k >= 1; --k) {
    bool any = false;
    for (int a = 0; a <= alphabet_max && !any; ++a) {
      if (birth_rate(k, a) > 0.0 || death_rate(k, a) > 0.0) any = true;
      for (int b = 0; b <= alphabet_max && !any; ++b)
        if (jump_rate(k, a, b) > 0.0) any = true;
    }
    if (any) {
      kmax = k;
      break;
    }
  }
  return kmax;
}

RateTable table_from_model(const ModelSpec& spec) {
  const ModelSpec m = spec.validated();
  if (m.variant == ModelVariant::ModelIV)
    throw std::invalid_argument(
        "table_from_model: Model IV has an unbounded alphabet");
  const int N = m.capacity;
  RateTable t = RateTable::zero(N, m.flock_limit());
  for (int a = 0; a <= N; ++a) {
    t.birth_ref(1, a) = birth_rate(m, a);
    t.death_ref(1, a) = death_rate(m, a);
    for (int b = 0; b <= N; ++b) {
      const int kmax = max_flock(m, a, b);
      for (int k = 1; k <= kmax; ++k) t.jump_ref(k, a, b) = m.lambda;
    }
  }
  return t;
}

namespace {

void require_same_alphabet(const RateTable& low, const RateTable& high) {
  if (low.alphabet_max != high.alphabet_max)
    throw std::invalid_argument("order check: tables must share the alphabet");
}

// --- single-change checker -------------------------------------------------

// The four reduced inequalities for tables moving one particle at a time, in
// the enumeration order used to report the first violation:
//   rule 1 (up, with jumps):  lowP1_b + lowG_{a,b} <= highP1_b + highG_{g,b}
//                             for all b, a <= g
//   rule 2 (up, births only): lowP1_b <= highP1_b              for all b
//   rule 3 (down, with jumps): lowPm1_a + lowG_{a,b} >= highPm1_a + highG_{a,d}
//                             for all a, b <= d
//   rule 4 (down, deaths only): lowPm1_a >= highPm1_a          for all a
OrderVerdict single_change_impl(const RateTable& low, const RateTable& high) {
  require_same_alphabet(low, high);
  if (low.k_max != 1 || high.k_max != 1)
    throw std::invalid_argument(
        "check_single_change: tables move more than one particle; use check_general");
  const int N = low.alphabet_max;
  OrderVerdict verdict;

  const auto found = [&](OrderCondition cond, int rule, int a, int b, int g, int d,
                         double lhs, double rhs) {
    OrderWitness w;
    w.condition = cond;
    w.reduced_rule = rule;
    w.K = 1;
    w.alpha = a;
    w.beta = b;
    w.gamma = g;
    w.delta = d;
    // tuple encodings re-evaluable through the general conditions
    if (cond == OrderCondition::UpMoves) {
      w.j = {0};
      w.m = {rule == 1 ? N : 0};
    } else {
      w.h = {0};
      w.m = {rule == 3 ? N : 0};
    }
    w.lhs = lhs;
    w.rhs = rhs;
    verdict.result = OrderVerdict::Result::NotOrdered;
    verdict.witness = w;
  };

  for (int b = 0; b <= N && !verdict.witness; ++b)
    for (int a = 0; a <= N && !verdict.witness; ++a)
      for (int g = a; g <= N && !verdict.witness; ++g) {
        ++verdict.evaluations;
        const double lhs = low.birth_rate(1, b) + low.jump_rate(1, a, b);
        const double rhs = high.birth_rate(1, b) + high.jump_rate(1, g, b);
        if (definitely_greater(lhs, rhs))
          found(OrderCondition::UpMoves, 1, a, b, g, b, lhs, rhs);
      }
  for (int b = 0; b <= N && !verdict.witness; ++b) {
    ++verdict.evaluations;
    const double lhs = low.birth_rate(1, b);
    const double rhs = high.birth_rate(1, b);
    if (definitely_greater(lhs, rhs))
      found(OrderCondition::UpMoves, 2, b, b, b, b, lhs, rhs);
  }
  for (int a = 0; a <= N && !verdict.witness; ++a)
    for (int b = 0; b <= N && !verdict.witness; ++b)
      for (int d = b; d <= N && !verdict.witness; ++d) {
        ++verdict.evaluations;
        const double lhs = low.death_rate(1, a) + low.jump_rate(1, a, b);
        const double rhs = high.death_rate(1, a) + high.jump_rate(1, a, d);
        if (definitely_greater(rhs, lhs))
          found(OrderCondition::DownMoves, 3, a, b, a, d, lhs, rhs);
      }
  for (int a = 0; a <= N && !verdict.witness; ++a) {
    ++verdict.evaluations;
    const double lhs = low.death_rate(1, a);
    const double rhs = high.death_rate(1, a);
    if (definitely_greater(rhs, lhs))
      found(OrderCondition::DownMoves, 4, a, a, a, a, lhs, rhs);
  }
  return verdict;
}

// --- general checker ---------------------------------------------------------

// Threshold index sets of the general conditions. With tuples t (= j or h)
// and m paired index-wise, the "low" set collects k with m_i >= k > shift_low
// + t_i and the "high" set k with shift_high + m_i >= k > t_i.
struct ConditionSums {
  double lhs, rhs;
};

// UpMoves at (alpha,beta,gamma,delta) with tuples (j, m):
//   lhs = sum_{k > delta-beta+j1} lowP^k_beta + sum_{k in Ia} lowG^k_{alpha,beta}
//   rhs = sum_{l > j1}            highP^l_delta + sum_{l in Ib} highG^l_{gamma,delta}
//   Ia = U_i {k: m_i >= k > delta-beta+j_i},  Ib = U_i {k: gamma-alpha+m_i >= k > j_i}
ConditionSums up_sums(const RateTable& low, const RateTable& high, int alpha,
                      int beta, int gamma, int delta, const std::vector<int>& j,
                      const std::vector<int>& m) {
  const int N = low.alphabet_max;
  const int dshift = delta - beta;
  const int gshift = gamma - alpha;
  int j1 = j[0];
  for (int v : j) j1 = std::min(j1, v);
  double lhs = 0.0, rhs = 0.0;
  for (int k = dshift + j1 + 1; k <= N; ++k) lhs += low.birth_rate(k, beta);
  for (int l = j1 + 1; l <= N; ++l) rhs += high.birth_rate(l, delta);
  std::vector<bool> in_a(static_cast<std::size_t>(N) + 1, false);
  std::vector<bool> in_b(static_cast<std::size_t>(N) + 1, false);
  for (std::size_t i = 0; i < j.size(); ++i) {
    for (int k = std::max(1, dshift + j[i] + 1); k <= std::min(N, m[i]); ++k)
      in_a[static_cast<std::size_t>(k)] = true;
    for (int k = std::max(1, j[i] + 1); k <= std::min(N, gshift + m[i]); ++k)
      in_b[static_cast<std::size_t>(k)] = true;
  }
  for (int k = 1; k <= N; ++k) {
    if (in_a[static_cast<std::size_t>(k)]) lhs += low.jump_rate(k, alpha, beta);
    if (in_b[static_cast<std::size_t>(k)]) rhs += high.jump_rate(k, gamma, delta);
  }
  return {lhs, rhs};
}

// DownMoves at (alpha,beta,gamma,delta) with tuples (h, m):
//   lhs = sum_{k > h1} lowP^-k_alpha + sum_{k in Id} lowG^k_{alpha,beta}
//   rhs = sum_{l > gamma-alpha+h1} highP^-l_gamma + sum_{l in Ic} highG^l_{gamma,delta}
//   Id = U_i {k: delta-beta+m_i >= k > h_i},  Ic = U_i {k: m_i >= k > gamma-alpha+h_i}
ConditionSums down_sums(const RateTable& low, const RateTable& high, int alpha,
                        int beta, int gamma, int delta, const std::vector<int>& h,
                        const std::vector<int>& m) {
  const int N = low.alphabet_max;
  const int dshift = delta - beta;
  const int gshift = gamma - alpha;
  int h1 = h[0];
  for (int v : h) h1 = std::min(h1, v);
  double lhs = 0.0, rhs = 0.0;
  for (int k = h1 + 1; k <= N; ++k) lhs += low.death_rate(k, alpha);
  for (int l = gshift + h1 + 1; l <= N; ++l) rhs += high.death_rate(l, gamma);
  std::vector<bool> in_d(static_cast<std::size_t>(N) + 1, false);
  std::vector<bool> in_c(static_cast<std::size_t>(N) + 1, false);
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (int k = std::max(1, h[i] + 1); k <= std::min(N, dshift + m[i]); ++k)
      in_d[static_cast<std::size_t>(k)] = true;
    for (int k = std::max(1, gshift + h[i] + 1); k <= std::min(N, m[i]); ++k)
      in_c[static_cast<std::size_t>(k)] = true;
  }
  for (int k = 1; k <= N; ++k) {
    if (in_d[static_cast<std::size_t>(k)]) lhs += low.jump_rate(k, alpha, beta);
    if (in_c[static_cast<std::size_t>(k)]) rhs += high.jump_rate(k, gamma, delta);
  }
  return {lhs, rhs};
}

// Enumerates the non-decreasing K-tuples with entries in {0..N}.
//
// Restricting entries to {0..N} loses nothing: every threshold appears only
// in comparisons "k > shift + t_i" or "k <= shift + m_i" against k in {1..N}
// with shift >= 0, so replacing an entry above N by N (or below 0 by 0)
// leaves every index set, and hence both condition sums, unchanged. The unit
// suite verifies this exhaustively for N <= 3.
std::vector<std::vector<int>> nondecreasing_tuples(int K, int N) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(K), 0);
  for (;;) {
    out.push_back(cur);
    int i = K - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == N) --i;
    if (i < 0) break;
    const int v = ++cur[static_cast<std::size_t>(i)];
    for (int a = i + 1; a < K; ++a) cur[static_cast<std::size_t>(a)] = v;
  }
  return out;
}

}  // namespace

std::pair<double, double> evaluate_witness(const RateTable& low,
                                           const RateTable& high,
                                           const OrderWitness& w) {
  require_same_alphabet(low, high);
  if (w.condition == OrderCondition::UpMoves) {
    const auto s = up_sums(low, high, w.alpha, w.beta, w.gamma, w.delta, w.j, w.m);
    return {s.lhs, s.rhs};
  }
  const auto s = down_sums(low, high, w.alpha, w.beta, w.gamma, w.delta, w.h, w.m);
  return {s.lhs, s.rhs};
}

OrderVerdict check_single_change(const RateTable& low, const RateTable& high) {
  return single_change_impl(low, high);
}

OrderVerdict check_general(const RateTable& low, const RateTable& high, int k_bound,
                           CheckOptions options) {
  require_same_alphabet(low, high);
  const int N = low.alphabet_max;
  const int complete_bound = std::max(low.max_change(), high.max_change());
  const bool reduced = k_bound != 0 && k_bound < complete_bound;
  const int bound = k_bound == 0 ? complete_bound : k_bound;
  if (bound < 1) throw std::invalid_argument("check_general: k_bound must be >= 1");

  OrderVerdict verdict;
  for (int K = 1; K <= bound; ++K) {
    const auto tuples = nondecreasing_tuples(K, N);
    for (const auto& first : tuples) {
      for (const auto& m : tuples) {
        for (int beta = 0; beta <= N; ++beta)
          for (int delta = beta; delta <= N; ++delta)
            for (int alpha = 0; alpha <= N; ++alpha)
              for (int gamma = alpha; gamma <= N; ++gamma) {
                verdict.evaluations += 2;
                if (verdict.evaluations > options.budget) {
                  verdict.result = OrderVerdict::Result::Inconclusive;
                  verdict.note = "inconclusive: evaluation budget exceeded";
                  return verdict;
                }
                const auto up =
                    up_sums(low, high, alpha, beta, gamma, delta, first, m);
                if (definitely_greater(up.lhs, up.rhs)) {
                  OrderWitness w;
                  w.condition = OrderCondition::UpMoves;
                  w.K = K;
                  w.alpha = alpha;
                  w.beta = beta;
                  w.gamma = gamma;
                  w.delta = delta;
                  w.j = first;
                  w.m = m;
                  w.lhs = up.lhs;
                  w.rhs = up.rhs;
                  verdict.result = OrderVerdict::Result::NotOrdered;
                  verdict.witness = w;
                  return verdict;
                }
                const auto down =
                    down_sums(low, high, alpha, beta, gamma, delta, first, m);
                if (definitely_greater(down.rhs, down.lhs)) {
                  OrderWitness w;
                  w.condition = OrderCondition::DownMoves;
                  w.K = K;
                  w.alpha = alpha;
                  w.beta = beta;
                  w.gamma = gamma;
                  w.delta = delta;
                  w.h = first;
                  w.m = m;
                  w.lhs = down.lhs;
                  w.rhs = down.rhs;
                  verdict.result = OrderVerdict::Result::NotOrdered;
                  verdict.witness = w;
                  return verdict;
                }
              }
      }
    }
  }
  if (reduced) {
    verdict.result = OrderVerdict::Result::Inconclusive;
    verdict.note =
        "inconclusive: passed at reduced k_bound " + std::to_string(bound) +
        " < complete bound " + std::to_string(complete_bound);
  }
  return verdict;
}

CrossValidation cross_validate(const RateTable& low, const RateTable& high) {
  CrossValidation cv;
  cv.single = check_single_change(low, high);
  cv.general = check_general(low, high, 1);
  // k_bound 1 is complete for single-change tables, so Inconclusive cannot occur
  cv.agree = cv.single.result == cv.general.result;
  if (!cv.agree)
    throw std::logic_error(
        "cross_validate: single-change and general checkers disagree");
  return cv;
}

}  // namespace metapop
