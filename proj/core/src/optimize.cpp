#include "condent/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "condent/random.hpp"

namespace condent {

NelderMeadOutcome nelder_mead(const Objective& f, const std::vector<double>& x0,
                              double step, int max_iterations, double ftol) {
  const int n = static_cast<int>(x0.size());
  if (n == 0) {
    NelderMeadOutcome out;
    out.best = x0;
    out.value = f(x0);
    out.converged = true;
    out.trace = {out.value};
    out.evaluations = 1;
    return out;
  }

  // Standard simplex coefficients with the adaptive tweaks of Gao & Han for
  // higher dimensions.
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / n;
  const double rho = 0.75 - 0.5 / n;
  const double sigma = 1.0 - 1.0 / n;

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  NelderMeadOutcome out;

  for (int i = 1; i <= n; ++i) simplex[i][i - 1] += step;
  for (int i = 0; i <= n; ++i) {
    values[i] = f(simplex[i]);
    ++out.evaluations;
  }

  std::vector<int> order(n + 1);
  auto sort_order = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
  };

  std::vector<double> centroid(n), reflected(n), trial(n);
  for (int iter = 0; iter < max_iterations; ++iter) {
    sort_order();
    const int best = order[0];
    const int worst = order[n];
    const int second_worst = order[n - 1];

    out.trace.push_back(values[best]);
    if (values[worst] - values[best] < ftol) {
      out.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (int j = 0; j < n; ++j) centroid[j] /= n;

    for (int j = 0; j < n; ++j) {
      reflected[j] = centroid[j] + alpha * (centroid[j] - simplex[worst][j]);
    }
    const double reflected_value = f(reflected);
    ++out.evaluations;

    if (reflected_value < values[best]) {
      for (int j = 0; j < n; ++j) {
        trial[j] = centroid[j] + gamma * (reflected[j] - centroid[j]);
      }
      const double expanded_value = f(trial);
      ++out.evaluations;
      if (expanded_value < reflected_value) {
        simplex[worst] = trial;
        values[worst] = expanded_value;
      } else {
        simplex[worst] = reflected;
        values[worst] = reflected_value;
      }
    } else if (reflected_value < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = reflected_value;
    } else {
      const bool outside = reflected_value < values[worst];
      if (outside) {
        for (int j = 0; j < n; ++j) {
          trial[j] = centroid[j] + rho * (reflected[j] - centroid[j]);
        }
      } else {
        for (int j = 0; j < n; ++j) {
          trial[j] = centroid[j] - rho * (centroid[j] - simplex[worst][j]);
        }
      }
      const double contracted_value = f(trial);
      ++out.evaluations;
      if (contracted_value < std::min(reflected_value, values[worst])) {
        simplex[worst] = trial;
        values[worst] = contracted_value;
      } else {
        // Shrink toward the best vertex.
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (int j = 0; j < n; ++j) {
            simplex[i][j] =
                simplex[best][j] + sigma * (simplex[i][j] - simplex[best][j]);
          }
          values[i] = f(simplex[i]);
          ++out.evaluations;
        }
      }
    }
  }

  sort_order();
  out.best = simplex[order[0]];
  out.value = values[order[0]];
  if (out.trace.empty() || out.trace.back() > out.value) {
    out.trace.push_back(out.value);
  }
  return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

OptimizationResult minimize_multistart(const Objective& f, int n_params,
                                       const OptimizerOptions& options,
                                       const std::vector<StartPoint>& starts) {
  if (options.restarts < 1) {
    throw std::invalid_argument("minimize_multistart: need >= 1 restart");
  }
  const int restarts = options.restarts;
  Rng master(options.seed);

  struct RestartPlan {
    std::vector<double> x0;
    std::string description;
  };
  std::vector<RestartPlan> plans(restarts);
  for (int r = 0; r < restarts; ++r) {
    if (r < static_cast<int>(starts.size())) {
      if (static_cast<int>(starts[r].params.size()) != n_params) {
        throw std::invalid_argument(
            "minimize_multistart: start point has wrong length");
      }
      plans[r] = {starts[r].params, starts[r].description};
    } else {
      Rng rng(master.derive(static_cast<std::uint64_t>(r)));
      std::vector<double> x(n_params);
      for (auto& v : x) v = options.random_scale * rng.normal();
      plans[r] = {std::move(x), "random start " + std::to_string(r)};
    }
  }

  std::vector<NelderMeadOutcome> outcomes(restarts);
  parallel_for(restarts, options.threads, [&](int r) {
    outcomes[r] = nelder_mead(f, plans[r].x0, options.initial_step,
                              options.max_iterations, options.tolerance);
  });

  int best = 0;
  for (int r = 1; r < restarts; ++r) {
    if (outcomes[r].value < outcomes[best].value) best = r;
  }

  OptimizationResult result;
  result.value = outcomes[best].value;
  result.converged = outcomes[best].converged;
  result.restarts_used = restarts;
  result.certificate.kind = "isometry";
  result.certificate.description = plans[best].description;
  result.certificate.params = outcomes[best].best;

  // Merged trace: restart-major concatenation, then running minimum, so it
  // is identical for any thread count.
  double running = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    for (double v : outcomes[r].trace) {
      running = std::min(running, v);
      result.trace.push_back(running);
    }
  }
  return result;
}

int isometry_param_count(int rows) { return rows * rows; }

Matrix hermitian_from_params(const std::vector<double>& params, int rows) {
  if (static_cast<int>(params.size()) != rows * rows) {
    throw std::invalid_argument("hermitian_from_params: wrong parameter count");
  }
  Matrix h(rows, rows);
  int next = 0;
  for (int i = 0; i < rows; ++i) {
    h(i, i) = params[next++];
  }
  for (int i = 0; i < rows; ++i) {
    for (int j = i + 1; j < rows; ++j) {
      const double re = params[next++];
      const double im = params[next++];
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  }
  return h;
}

Matrix isometry_from_params(const std::vector<double>& params, int rows,
                            int cols) {
  if (cols > rows) {
    throw std::invalid_argument("isometry_from_params: cols > rows");
  }
  Matrix h = hermitian_from_params(params, rows);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(rows);
  for (int i = 0; i < rows; ++i) {
    const double lambda = es.eigenvalues()[i];
    phases[i] = Complex(std::cos(lambda), std::sin(lambda));
  }
  Matrix u = es.eigenvectors() * phases.asDiagonal() *
             es.eigenvectors().adjoint();
  return u.leftCols(cols);
}

}  // namespace condent
