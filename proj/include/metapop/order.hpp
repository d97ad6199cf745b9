#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metapop/models.hpp"

namespace metapop {

// Dense transition-rate table on the finite alphabet {0..N}: birth rates
// P^k_b, death rates P^-k_a and pair jump rates G^k_{a,b} for k in {1..k_max}.
// Jump entries store the full rate (not divided by 2d): the lattice factor is
// a common positive multiplier and cancels from every order inequality.
struct RateTable {
  int alphabet_max = 0;  // N
  int k_max = 1;
  std::vector<double> birth;  // [k-1][(N+1)] flattened
  std::vector<double> death;
  std::vector<double> jump;   // [k-1][(N+1)*(N+1)] flattened

  static RateTable zero(int N, int k_max);

  int states() const { return alphabet_max + 1; }

  double birth_rate(int k, int b) const {
    return (k < 1 || k > k_max) ? 0.0
                                : birth[static_cast<std::size_t>(k - 1) *
                                            static_cast<std::size_t>(states()) +
                                        static_cast<std::size_t>(b)];
  }
  double death_rate(int k, int a) const {
    return (k < 1 || k > k_max) ? 0.0
                                : death[static_cast<std::size_t>(k - 1) *
                                            static_cast<std::size_t>(states()) +
                                        static_cast<std::size_t>(a)];
  }
  double jump_rate(int k, int a, int b) const {
    return (k < 1 || k > k_max)
               ? 0.0
               : jump[(static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(states()) +
                       static_cast<std::size_t>(a)) *
                          static_cast<std::size_t>(states()) +
                      static_cast<std::size_t>(b)];
  }
  double& birth_ref(int k, int b);
  double& death_ref(int k, int a);
  double& jump_ref(int k, int a, int b);

  // Largest particle change with a positive rate (>= 1).
  int max_change() const;
};

// Dense table of a model's rates; Models I-III only (Model IV has an
// unbounded alphabet).
RateTable table_from_model(const ModelSpec& m);

// The two families of inequalities deciding stochastic order: UpMoves bounds
// the low process's gains at the second coordinate, DownMoves bounds the high
// process's losses at the first.
enum class OrderCondition { UpMoves, DownMoves };

struct OrderWitness {
  OrderCondition condition = OrderCondition::UpMoves;
  int K = 1;
  int alpha = 0, beta = 0, gamma = 0, delta = 0;
  std::vector<int> j, m, h;  // h unused for UpMoves, j unused for DownMoves
  double lhs = 0.0, rhs = 0.0;
  int reduced_rule = 0;  // 1..4 when found by the single-change checker
};

struct OrderVerdict {
  enum class Result { Ordered, NotOrdered, Inconclusive };
  Result result = Result::Ordered;
  std::optional<OrderWitness> witness;
  std::string note;
  std::uint64_t evaluations = 0;

  bool ordered() const { return result == Result::Ordered; }
};

// Recomputes (lhs, rhs) of the witness inequality from the tables. A genuine
// witness satisfies lhs > rhs (UpMoves) resp. lhs < rhs (DownMoves) beyond
// the checker's relative tolerance.
std::pair<double, double> evaluate_witness(const RateTable& low,
                                           const RateTable& high,
                                           const OrderWitness& w);

// Decides whether `high` is stochastically larger than `low` for tables whose
// transitions change at most one particle, via the four reduced inequalities.
// First violation in enumeration order is returned as the witness.
OrderVerdict check_single_change(const RateTable& low, const RateTable& high);

struct CheckOptions {
  // Ceiling on condition evaluations; exceeding it yields Inconclusive.
  std::uint64_t budget = 400'000'000;
};

// Full check over K in {1..k_bound} and all non-decreasing threshold tuples
// with entries in {0..N}. k_bound = 0 selects the complete bound (the largest
// particle change of either table); a smaller user bound that passes is
// reported Inconclusive, never Ordered.
OrderVerdict check_general(const RateTable& low, const RateTable& high,
                           int k_bound = 0, CheckOptions options = {});

struct CrossValidation {
  OrderVerdict single;
  OrderVerdict general;
  bool agree = false;
};

// Runs both checkers on K_max = 1 tables; throws std::logic_error if they
// disagree.
CrossValidation cross_validate(const RateTable& low, const RateTable& high);

}  // namespace metapop
