#include "tmr/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "tmr/parallel.hpp"

namespace tmr {

double rbf_kernel(std::span<const double> u, std::span<const double> v, double gamma) {
  double d = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double diff = u[k] - v[k];
    d += diff * diff;
  }
  return std::exp(-gamma * d);
}

namespace {

constexpr double kTau = 1e-12;

// LRU cache of kernel matrix rows.
class KernelRows {
public:
  KernelRows(const Matrix& X, double gamma, std::size_t budget_bytes)
      : X_(X), gamma_(gamma),
        capacity_(std::max<std::size_t>(2, budget_bytes / (sizeof(double) * std::max<std::size_t>(1, X.rows())))) {}

  const std::vector<double>& row(std::size_t i) {
    auto it = index_.find(i);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    std::vector<double> values;
    if (lru_.size() >= capacity_) {
      auto& victim = lru_.back();
      index_.erase(victim.first);
      values = std::move(victim.second);
      lru_.pop_back();
    }
    values.resize(X_.rows());
    const auto xi = X_.row(i);
    for (std::size_t j = 0; j < X_.rows(); ++j) values[j] = rbf_kernel(xi, X_.row(j), gamma_);
    lru_.emplace_front(i, std::move(values));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

private:
  const Matrix& X_;
  double gamma_;
  std::size_t capacity_;
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::unordered_map<std::size_t, std::list<std::pair<std::size_t, std::vector<double>>>::iterator> index_;
};

}  // namespace

SmoResult smo_solve(const Matrix& X, std::span<const int> signs, const SvmParams& params, double gamma,
                    bool track_objective) {
  const std::size_t n = X.rows();
  if (n < 2) throw InvalidArgument("smo_solve: need at least two training rows");
  if (signs.size() != n) throw InvalidArgument("smo_solve: label count mismatch");
  if (!(params.c > 0.0)) throw InvalidArgument("svm: C must be positive");
  if (!(gamma > 0.0)) throw InvalidArgument("svm: gamma must be positive");
  bool has_pos = false, has_neg = false;
  for (int s : signs) {
    if (s == 1) has_pos = true;
    else if (s == -1) has_neg = true;
    else throw InvalidArgument("smo_solve: labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw InvalidArgument("smo_solve: both classes are required");

  const double C = params.c;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = signs[i];
  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);  // gradient of 0.5 a'Qa - e'a
  KernelRows kernel(X, gamma, params.cache_mb * 1024 * 1024);

  auto upper = [&](std::size_t i) { return alpha[i] >= C; };
  auto lower = [&](std::size_t i) { return alpha[i] <= 0.0; };
  auto objective = [&] {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) f += alpha[i] * (G[i] - 1.0);
    return -0.5 * f;
  };

  SmoResult result;
  const long max_iter = params.max_passes * static_cast<long>(n);
  long iter = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (;; ++iter) {
    if (track_objective && iter % 100 == 0) result.objective_trace.push_back(objective());

    // i: maximal violator in I_up of -y_i G_i
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!upper(t) && -G[t] >= gmax) gmax = -G[t], i = t;
      } else {
        if (!lower(t) && G[t] >= gmax) gmax = G[t], i = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::size_t j = n;
    if (i < n) {
      const auto& Ki = kernel.row(i);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < n; ++t) {
        if (y[t] > 0) {
          if (lower(t)) continue;
          gmax2 = std::max(gmax2, G[t]);
          const double diff = gmax + G[t];
          if (diff > 0.0) {
            double quad = 2.0 - 2.0 * y[i] * Ki[t];
            if (quad <= 0.0) quad = kTau;
            const double obj = -(diff * diff) / quad;
            if (obj <= best) best = obj, j = t;
          }
        } else {
          if (upper(t)) continue;
          gmax2 = std::max(gmax2, -G[t]);
          const double diff = gmax - G[t];
          if (diff > 0.0) {
            double quad = 2.0 + 2.0 * y[i] * Ki[t];
            if (quad <= 0.0) quad = kTau;
            const double obj = -(diff * diff) / quad;
            if (obj <= best) best = obj, j = t;
          }
        }
      }
    }
    gap = gmax + gmax2;
    if (i == n || j == n || gap < params.tol) break;
    if (iter >= max_iter)
      throw SvmConvergenceError("svm: SMO did not converge within " + std::to_string(max_iter) +
                                    " iterations (KKT residual " + std::to_string(gap) + ")",
                                gap);

    const auto& Ki = kernel.row(i);
    const auto& Kj = kernel.row(j);
    const double Kij = Ki[j];
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = 2.0 - 2.0 * Kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) alpha[j] = 0.0, alpha[i] = diff;
      } else {
        if (alpha[i] < 0.0) alpha[i] = 0.0, alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) alpha[i] = C, alpha[j] = C - diff;
      } else {
        if (alpha[j] > C) alpha[j] = C, alpha[i] = C + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * Kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) alpha[i] = C, alpha[j] = sum - C;
      } else {
        if (alpha[j] < 0.0) alpha[j] = 0.0, alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) alpha[j] = C, alpha[i] = sum - C;
      } else {
        if (alpha[i] < 0.0) alpha[i] = 0.0, alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    // Q_ti = y_t y_i K_ti
    for (std::size_t t = 0; t < n; ++t) G[t] += y[t] * (y[i] * Ki[t] * di + y[j] * Kj[t] * dj);
  }
  if (track_objective) result.objective_trace.push_back(objective());

  // bias: average over free vectors, else the midpoint of the feasible range
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yG = y[t] * G[t];
    if (upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else if (lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else {
      ++n_free;
      sum_free += yG;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

  result.bias = -rho;
  result.iterations = iter;
  result.kkt_residual = gap;
  result.decision_values.resize(n);
  // sum_j alpha_j y_j K_tj = y_t (G_t + 1)
  for (std::size_t t = 0; t < n; ++t) result.decision_values[t] = y[t] * (G[t] + 1.0) - rho;
  result.alpha = std::move(alpha);
  return result;
}

double PlattSigmoid::probability(double f) const {
  const double z = a * f + b;
  return z >= 0.0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
}

PlattSigmoid fit_platt(std::span<const double> dec, std::span<const int> signs) {
  if (dec.size() != signs.size() || dec.empty()) throw InvalidArgument("fit_platt: bad input sizes");
  double prior1 = 0.0, prior0 = 0.0;
  for (int s : signs) (s > 0 ? prior1 : prior0) += 1.0;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  const std::size_t n = dec.size();
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = signs[i] > 0 ? hi : lo;

  auto loss = [&](double A, double B) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = dec[i] * A + B;
      f += z >= 0.0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return f;
  };

  double A = 0.0;
  double B = std::log((prior0 + 1.0) / (prior1 + 1.0));
  double fval = loss(A, B);
  constexpr double kSigma = 1e-12;
  for (int it = 0; it < 100; ++it) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = dec[i] * A + B;
      double p, q;
      if (z >= 0.0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += dec[i] * dec[i] * d2;
      h22 += d2;
      h21 += dec[i] * d2;
      const double d1 = t[i] - p;
      g1 += dec[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;
    double step = 1.0;
    while (step >= 1e-10) {
      const double nA = A + step * dA;
      const double nB = B + step * dB;
      const double nf = loss(nA, nB);
      if (nf < fval + 1e-4 * step * gd) {
        A = nA;
        B = nB;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < 1e-10) break;  // line search failed; keep the last iterate
  }
  return {A, B};
}

double decision_value(const BinarySvm& machine, std::span<const double> x, double gamma) {
  double f = machine.bias;
  for (std::size_t s = 0; s < machine.coef.size(); ++s)
    f += machine.coef[s] * rbf_kernel(machine.support_vectors.row(s), x, gamma);
  return f;
}

SvmModel svm_train(const Matrix& X, std::span<const int> y, const SvmParams& params) {
  if (y.size() != X.rows()) throw InvalidArgument("svm_train: label count mismatch");
  if (!(params.c > 0.0)) throw InvalidArgument("svm_train: C must be positive");
  if (params.gamma < 0.0) throw InvalidArgument("svm_train: gamma must be positive");
  SvmModel model;
  model.classes = distinct_classes(y);
  if (model.classes.size() < 2) throw InvalidArgument("svm_train: at least two classes are required");
  model.n_features = static_cast<int>(X.cols());
  model.c = params.c;
  model.gamma = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(std::max<std::size_t>(1, X.cols()));
  model.tol = params.tol;

  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < model.classes.size(); ++a)
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) pairs.emplace_back(model.classes[a], model.classes[b]);
  model.pairs.resize(pairs.size());

  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [pos, neg] = pairs[p];
    std::vector<std::size_t> rows;
    std::vector<int> signs;
    for (std::size_t r = 0; r < y.size(); ++r) {
      if (y[r] == pos || y[r] == neg) {
        rows.push_back(r);
        signs.push_back(y[r] == pos ? 1 : -1);
      }
    }
    const Matrix sub = X.select_rows(rows);
    const SmoResult smo = smo_solve(sub, signs, params, model.gamma);

    BinarySvm machine;
    machine.positive = pos;
    machine.negative = neg;
    machine.bias = smo.bias;
    machine.iterations = smo.iterations;
    machine.kkt_residual = smo.kkt_residual;
    std::vector<std::size_t> sv;
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (smo.alpha[k] > 0.0) {
        sv.push_back(k);
        machine.coef.push_back(smo.alpha[k] * signs[k]);
      }
    machine.support_vectors = sub.select_rows(sv);
    machine.platt = fit_platt(smo.decision_values, signs);
    model.pairs[p] = std::move(machine);
  });
  return model;
}

ProbabilityVector svm_predict(const SvmModel& model, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(model.n_features))
    throw InvalidArgument("svm_predict: expected " + std::to_string(model.n_features) + " features");
  ProbabilityVector p;
  p.classes = model.classes;
  p.probs.assign(model.classes.size(), 0.0);
  auto slot = [&](int label) {
    return static_cast<std::size_t>(std::lower_bound(p.classes.begin(), p.classes.end(), label) - p.classes.begin());
  };
  for (const auto& machine : model.pairs) {
    const double r = machine.platt.probability(decision_value(machine, x, model.gamma));
    p.probs[slot(machine.positive)] += r;
    p.probs[slot(machine.negative)] += 1.0 - r;
  }
  double total = 0.0;
  for (double v : p.probs) total += v;
  for (double& v : p.probs) v /= total;
  return p;
}

}  // namespace tmr
