#include "qfreg/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "qfreg/parallel.hpp"
#include "qfreg/random.hpp"

namespace qfreg {

namespace {

constexpr double kSlack = 1e-12;

std::size_t index_of(const std::vector<SubsetCode>& sorted, SubsetCode c) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), c) -
                                  sorted.begin());
}

SplitResult evaluate_marks(const DeterminantalOperator& b, const std::vector<bool>& marks) {
  const auto& u = b.universe();
  SplitResult r;
  for (std::size_t k = 0; k < u.size(); ++k) {
    (marks[k] ? r.selected : r.complement).push_back(u[k]);
  }
  for (const auto& e : b.entries()) {
    const bool in_row = marks[index_of(u, e.row)];
    const bool in_col = marks[index_of(u, e.col)];
    if (in_row && in_col) r.mass_selected += e.value;
    if (!in_row && !in_col) r.mass_complement += e.value;
  }
  return r;
}

std::vector<bool> greedy_marks(const DeterminantalOperator& b) {
  const auto& u = b.universe();
  std::vector<double> p(u.size(), 0.5);
  for (std::size_t k = 0; k < u.size(); ++k) {
    p[k] = 1.0;
    const double with = expected_split_product(b, u, p);
    p[k] = 0.0;
    const double without = expected_split_product(b, u, p);
    p[k] = with >= without ? 1.0 : 0.0;
  }
  std::vector<bool> marks(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) marks[k] = p[k] == 1.0;
  return marks;
}

}  // namespace

double expected_split_product(const DeterminantalOperator& b,
                              const std::vector<SubsetCode>& universe,
                              const std::vector<double>& probabilities) {
  // E[T T^] = sum over pairs of entries with {I,J} and {I',J'} disjoint of
  // b x_IJ b' y_I'J', where x = E[e_I e_J] and y = E[(1-e_I')(1-e_J')].
  // Pairs sharing a subset K are removed through per-K sums; pairs sharing
  // two distinct subsets were removed twice and are added back.
  const std::size_t m = universe.size();
  std::vector<double> px(m, 0.0), qy(m, 0.0);
  double sx = 0.0, sy = 0.0, twice = 0.0;
  std::unordered_map<std::uint64_t, double> offdiag_y;
  auto key = [](std::size_t r, std::size_t c) { return (static_cast<std::uint64_t>(r) << 32) | c; };
  struct Local { std::size_t r, c; double x, y, v; };
  std::vector<Local> terms;
  terms.reserve(b.entries().size());
  for (const auto& e : b.entries()) {
    const std::size_t r = index_of(universe, e.row);
    const std::size_t c = index_of(universe, e.col);
    const double pr = probabilities[r], pc = probabilities[c];
    const double x = r == c ? pr : pr * pc;
    const double y = r == c ? 1.0 - pr : (1.0 - pr) * (1.0 - pc);
    terms.push_back({r, c, x, y, e.value});
    sx += e.value * x;
    sy += e.value * y;
    px[r] += e.value * x;
    qy[r] += e.value * y;
    if (r != c) {
      px[c] += e.value * x;
      qy[c] += e.value * y;
      offdiag_y[key(r, c)] = e.value * y;
    }
  }
  double shared = 0.0;
  for (std::size_t k = 0; k < m; ++k) shared += px[k] * qy[k];
  for (const auto& t : terms) {
    if (t.r == t.c) continue;
    const double bx = t.v * t.x;
    twice += bx * offdiag_y[key(t.r, t.c)];
    auto it = offdiag_y.find(key(t.c, t.r));
    if (it != offdiag_y.end()) twice += bx * it->second;
  }
  return sx * sy - shared + twice;
}

SplitResult split_once(const DeterminantalOperator& b, const SplitOptions& options) {
  if (!(b.sigma() > 0.0)) throw InputError("split_once needs sigma(B) > 0");
  const double sigma = b.sigma();
  const double upsilon = ell1_influences(b).max;
  const double threshold = (sigma - upsilon) / 16.0;
  const std::size_t usize = b.universe().size();

  auto finish = [&](SplitResult r, std::size_t attempts) {
    r.sigma = sigma;
    r.upsilon = upsilon;
    r.threshold = threshold;
    r.attempts = attempts;
    return r;
  };
  auto passes = [&](const SplitResult& r) {
    return r.mass_selected >= threshold - kSlack && r.mass_complement >= threshold - kSlack;
  };

  if (options.mode == SplitMode::greedy) {
    SplitResult r = finish(evaluate_marks(b, greedy_marks(b)), 1);
    if (!passes(r)) {
      throw SplitFailure("greedy split fell below the (sigma - upsilon)/16 threshold", r);
    }
    return r;
  }

  SplitResult best;
  double best_min = -std::numeric_limits<double>::infinity();
  const std::size_t attempts = std::max<std::size_t>(1, options.max_attempts);
  for (std::size_t a = 0; a < attempts; ++a) {
    rng::CounterStream stream(options.seed, rng::StreamTag::split_marks,
                              static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32));
    std::vector<bool> marks(usize);
    for (std::size_t k = 0; k < usize; ++k) marks[k] = stream.next_u32() & 1u;
    SplitResult r = finish(evaluate_marks(b, marks), a + 1);
    if (passes(r)) return r;
    const double lo = std::min(r.mass_selected, r.mass_complement);
    if (lo > best_min) {
      best_min = lo;
      best = r;
    }
  }
  throw SplitFailure("no split reached the (sigma - upsilon)/16 threshold in " +
                         std::to_string(attempts) + " attempts",
                     best);
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::threshold: return "threshold";
    case StopReason::depth_target: return "depth-target";
    case StopReason::depth_limit: return "depth-limit";
  }
  return "unknown";
}

SplitTree iterated_split(const DeterminantalOperator& b, const IteratedSplitOptions& options) {
  if (!(b.sigma() > 0.0)) throw InputError("iterated_split needs sigma(B) > 0");
  SplitTree tree;
  tree.sigma = b.sigma();
  tree.upsilon = ell1_influences(b).max;
  for (int k = 0; k < 64; ++k) {
    if (tree.upsilon <= tree.sigma * std::ldexp(1.0, -5 * k - 1)) tree.predicted_depth = k;
    else break;
  }
  tree.levels.push_back({SplitBlock{b.universe(), b.sigma()}});

  while (true) {
    const std::size_t k = tree.levels.size() - 1;
    const auto& level = tree.levels.back();
    const bool stop = std::any_of(level.begin(), level.end(), [&](const SplitBlock& blk) {
      return tree.upsilon > blk.mass / 2.0;
    });
    if (stop) {
      tree.stop_reason = StopReason::threshold;
      break;
    }
    if (options.target_kappa && k >= *options.target_kappa) {
      tree.stop_reason = StopReason::depth_target;
      break;
    }
    if (k >= options.depth_limit) {
      tree.stop_reason = StopReason::depth_limit;
      break;
    }
    const std::size_t width = level.size();
    std::vector<SplitBlock> next(2 * width);
    parallel_chunks(width, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t l = begin; l < end; ++l) {
        SplitOptions so;
        so.seed = rng::derive_seed(options.seed, k, l);
        so.max_attempts = options.max_attempts;
        so.mode = options.mode;
        const auto r = split_once(b.restrict(level[l].family), so);
        next[l] = {r.selected, r.mass_selected};
        next[l + width] = {r.complement, r.mass_complement};
      }
    });
    tree.levels.push_back(std::move(next));
  }
  tree.kappa = tree.levels.size() - 1;
  return tree;
}

}  // namespace qfreg
