#pragma once

// Latent-factor models fitted by SGD (regularized SVD with and without bias
// terms) and the non-negative factorization with per-epoch multiplicative
// updates. Training visits ratings in a seeded shuffled order, re-shuffled
// each epoch, so a fit is a pure function of (params, train).

#include <cstdint>
#include <span>
#include <vector>

#include "rdcbench/cf/hyperparams.hpp"
#include "rdcbench/rating_matrix.hpp"
#include "rdcbench/rng.hpp"

namespace rdc {

struct FactorModel {
  bool biased = false;
  bool non_negative = false;
  std::uint32_t n_factors = 0;
  std::uint32_t m = 0, n = 0;
  double mu = 0.0;
  std::vector<double> pu;  // m * n_factors, row per user
  std::vector<double> qi;  // n * n_factors, row per item
  std::vector<double> bu;  // biased only
  std::vector<double> bi;
  std::vector<std::uint8_t> known_user;  // had >= 1 training rating
  std::vector<std::uint8_t> known_item;

  double dot(std::uint32_t u, std::uint32_t i) const {
    const double* a = pu.data() + static_cast<std::size_t>(u) * n_factors;
    const double* b = qi.data() + static_cast<std::size_t>(i) * n_factors;
    double s = 0.0;
    for (std::uint32_t f = 0; f < n_factors; ++f) s += a[f] * b[f];
    return s;
  }
};

namespace detail {

// Gradient of the per-rating loss
//   1/2 (r - est)^2 + 1/2 reg (|pu_u|^2 + |qi_i|^2 [+ bu^2 + bi^2])
// with est = [mu + bu + bi +] pu_u . qi_i. Shared by the SGD update (which
// steps along -learning_rate * gradient) and the batch gradient used in the
// finite-difference check. Returns the prediction error r - est.
inline double svd_point_gradient(bool biased, double mu, double bu, double bi,
                                 const double* pu_u, const double* qi_i, std::uint32_t f,
                                 double r, double reg, double* gpu, double* gqi, double& gbu,
                                 double& gbi) {
  double est = 0.0;
  for (std::uint32_t x = 0; x < f; ++x) est += pu_u[x] * qi_i[x];
  if (biased) est += mu + bu + bi;
  const double err = r - est;
  for (std::uint32_t x = 0; x < f; ++x) {
    gpu[x] = -err * qi_i[x] + reg * pu_u[x];
    gqi[x] = -err * pu_u[x] + reg * qi_i[x];
  }
  gbu = biased ? -err + reg * bu : 0.0;
  gbi = biased ? -err + reg * bi : 0.0;
  return err;
}

}  // namespace detail

inline FactorModel fit_svd(const Hyperparams& params, const RatingMatrix& train, bool biased) {
  validate_hyperparams(biased ? AlgorithmId::svd_b : AlgorithmId::svd, params);
  const std::uint32_t f = params.n_factors;

  FactorModel mdl;
  mdl.biased = biased;
  mdl.n_factors = f;
  mdl.m = train.m();
  mdl.n = train.n();
  mdl.mu = train.global_mean();

  Xoshiro256ss rng(params.rng_seed);
  mdl.pu.resize(static_cast<std::size_t>(mdl.m) * f);
  mdl.qi.resize(static_cast<std::size_t>(mdl.n) * f);
  for (double& v : mdl.pu) v = rng.normal(0.0, params.init_std);
  for (double& v : mdl.qi) v = rng.normal(0.0, params.init_std);
  if (biased) {
    mdl.bu.assign(mdl.m, 0.0);
    mdl.bi.assign(mdl.n, 0.0);
  }
  mdl.known_user.resize(mdl.m);
  mdl.known_item.resize(mdl.n);
  for (std::uint32_t u = 0; u < mdl.m; ++u) mdl.known_user[u] = train.user_degree(u) > 0;
  for (std::uint32_t i = 0; i < mdl.n; ++i) mdl.known_item[i] = train.item_degree(i) > 0;

  const double lr = params.learning_rate;
  const double reg = params.regularization;
  const std::span<const Rating> triples = train.triples();
  std::vector<std::uint32_t> order(triples.size());
  for (std::uint32_t k = 0; k < order.size(); ++k) order[k] = k;

  std::vector<double> gpu(f), gqi(f);
  for (std::uint32_t epoch = 0; epoch < params.n_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::uint32_t k : order) {
      const Rating& t = triples[k];
      double* pu_u = mdl.pu.data() + static_cast<std::size_t>(t.user) * f;
      double* qi_i = mdl.qi.data() + static_cast<std::size_t>(t.item) * f;
      double gbu = 0.0, gbi = 0.0;
      detail::svd_point_gradient(biased, mdl.mu, biased ? mdl.bu[t.user] : 0.0,
                                 biased ? mdl.bi[t.item] : 0.0, pu_u, qi_i, f, t.value, reg,
                                 gpu.data(), gqi.data(), gbu, gbi);
      if (biased) {
        mdl.bu[t.user] -= lr * gbu;
        mdl.bi[t.item] -= lr * gbi;
      }
      for (std::uint32_t x = 0; x < f; ++x) {
        pu_u[x] -= lr * gpu[x];
        qi_i[x] -= lr * gqi[x];
      }
    }
  }
  return mdl;
}

// Packed parameter layout for the objective/gradient pair below:
// biased  -> [bu(m), bi(n), pu(m*f), qi(n*f)]
// unbiased-> [pu(m*f), qi(n*f)]
inline std::size_t svd_parameter_count(const FactorModel& mdl) {
  std::size_t c = mdl.pu.size() + mdl.qi.size();
  if (mdl.biased) c += mdl.bu.size() + mdl.bi.size();
  return c;
}

inline double svd_objective(const FactorModel& mdl, const RatingMatrix& train, double reg) {
  double total = 0.0;
  for (const Rating& t : train.triples()) {
    double est = mdl.dot(t.user, t.item);
    if (mdl.biased) est += mdl.mu + mdl.bu[t.user] + mdl.bi[t.item];
    const double err = t.value - est;
    double penalty = 0.0;
    const double* pu_u = mdl.pu.data() + static_cast<std::size_t>(t.user) * mdl.n_factors;
    const double* qi_i = mdl.qi.data() + static_cast<std::size_t>(t.item) * mdl.n_factors;
    for (std::uint32_t x = 0; x < mdl.n_factors; ++x)
      penalty += pu_u[x] * pu_u[x] + qi_i[x] * qi_i[x];
    if (mdl.biased) penalty += mdl.bu[t.user] * mdl.bu[t.user] + mdl.bi[t.item] * mdl.bi[t.item];
    total += 0.5 * err * err + 0.5 * reg * penalty;
  }
  return total;
}

inline std::vector<double> svd_gradient(const FactorModel& mdl, const RatingMatrix& train,
                                        double reg) {
  const std::uint32_t f = mdl.n_factors;
  std::vector<double> grad(svd_parameter_count(mdl), 0.0);
  const std::size_t bu_off = 0;
  const std::size_t bi_off = mdl.biased ? mdl.bu.size() : 0;
  const std::size_t pu_off = mdl.biased ? bi_off + mdl.bi.size() : 0;
  const std::size_t qi_off = pu_off + mdl.pu.size();

  std::vector<double> gpu(f), gqi(f);
  for (const Rating& t : train.triples()) {
    const double* pu_u = mdl.pu.data() + static_cast<std::size_t>(t.user) * f;
    const double* qi_i = mdl.qi.data() + static_cast<std::size_t>(t.item) * f;
    double gbu = 0.0, gbi = 0.0;
    detail::svd_point_gradient(mdl.biased, mdl.mu, mdl.biased ? mdl.bu[t.user] : 0.0,
                               mdl.biased ? mdl.bi[t.item] : 0.0, pu_u, qi_i, f, t.value, reg,
                               gpu.data(), gqi.data(), gbu, gbi);
    if (mdl.biased) {
      grad[bu_off + t.user] += gbu;
      grad[bi_off + t.item] += gbi;
    }
    for (std::uint32_t x = 0; x < f; ++x) {
      grad[pu_off + static_cast<std::size_t>(t.user) * f + x] += gpu[x];
      grad[qi_off + static_cast<std::size_t>(t.item) * f + x] += gqi[x];
    }
  }
  return grad;
}

// View/update of the packed parameter vector, used by the gradient check to
// apply finite-difference perturbations.
inline double svd_get_parameter(const FactorModel& mdl, std::size_t idx) {
  if (mdl.biased) {
    if (idx < mdl.bu.size()) return mdl.bu[idx];
    idx -= mdl.bu.size();
    if (idx < mdl.bi.size()) return mdl.bi[idx];
    idx -= mdl.bi.size();
  }
  if (idx < mdl.pu.size()) return mdl.pu[idx];
  return mdl.qi[idx - mdl.pu.size()];
}

inline void svd_set_parameter(FactorModel& mdl, std::size_t idx, double v) {
  if (mdl.biased) {
    if (idx < mdl.bu.size()) {
      mdl.bu[idx] = v;
      return;
    }
    idx -= mdl.bu.size();
    if (idx < mdl.bi.size()) {
      mdl.bi[idx] = v;
      return;
    }
    idx -= mdl.bi.size();
  }
  if (idx < mdl.pu.size()) {
    mdl.pu[idx] = v;
    return;
  }
  mdl.qi[idx - mdl.pu.size()] = v;
}

// Non-negative factorization. Factors start uniform in (init_low, init_high]
// and are rescaled once per epoch by the ratio of accumulated numerators to
// denominators, which keeps every entry >= 0 for non-negative ratings.
inline FactorModel fit_nmf(const Hyperparams& params, const RatingMatrix& train) {
  validate_hyperparams(AlgorithmId::nmf, params);
  if (train.scale().min_value < 0.0)
    throw std::invalid_argument("nmf requires a non-negative rating scale");
  const std::uint32_t f = params.n_factors;

  FactorModel mdl;
  mdl.non_negative = true;
  mdl.n_factors = f;
  mdl.m = train.m();
  mdl.n = train.n();
  mdl.mu = train.global_mean();

  Xoshiro256ss rng(params.rng_seed);
  mdl.pu.resize(static_cast<std::size_t>(mdl.m) * f);
  mdl.qi.resize(static_cast<std::size_t>(mdl.n) * f);
  const double lo = params.init_low, hi = params.init_high;
  for (double& v : mdl.pu) v = lo + (hi - lo) * (1.0 - rng.unit_double());
  for (double& v : mdl.qi) v = lo + (hi - lo) * (1.0 - rng.unit_double());
  mdl.known_user.resize(mdl.m);
  mdl.known_item.resize(mdl.n);
  for (std::uint32_t u = 0; u < mdl.m; ++u) mdl.known_user[u] = train.user_degree(u) > 0;
  for (std::uint32_t i = 0; i < mdl.n; ++i) mdl.known_item[i] = train.item_degree(i) > 0;

  const double reg = params.regularization;
  std::vector<double> user_num(mdl.pu.size()), user_denom(mdl.pu.size());
  std::vector<double> item_num(mdl.qi.size()), item_denom(mdl.qi.size());

  for (std::uint32_t epoch = 0; epoch < params.n_epochs; ++epoch) {
    std::fill(user_num.begin(), user_num.end(), 0.0);
    std::fill(user_denom.begin(), user_denom.end(), 0.0);
    std::fill(item_num.begin(), item_num.end(), 0.0);
    std::fill(item_denom.begin(), item_denom.end(), 0.0);

    for (const Rating& t : train.triples()) {
      const std::size_t uoff = static_cast<std::size_t>(t.user) * f;
      const std::size_t ioff = static_cast<std::size_t>(t.item) * f;
      const double est = mdl.dot(t.user, t.item);
      for (std::uint32_t x = 0; x < f; ++x) {
        user_num[uoff + x] += mdl.qi[ioff + x] * t.value;
        user_denom[uoff + x] += mdl.qi[ioff + x] * est;
        item_num[ioff + x] += mdl.pu[uoff + x] * t.value;
        item_denom[ioff + x] += mdl.pu[uoff + x] * est;
      }
    }

    for (std::uint32_t u = 0; u < mdl.m; ++u) {
      const double deg = train.user_degree(u);
      if (deg == 0) continue;
      const std::size_t off = static_cast<std::size_t>(u) * f;
      for (std::uint32_t x = 0; x < f; ++x) {
        const double denom = user_denom[off + x] + deg * reg * mdl.pu[off + x];
        if (denom > 0.0) mdl.pu[off + x] *= user_num[off + x] / denom;
      }
    }
    for (std::uint32_t i = 0; i < mdl.n; ++i) {
      const double deg = train.item_degree(i);
      if (deg == 0) continue;
      const std::size_t off = static_cast<std::size_t>(i) * f;
      for (std::uint32_t x = 0; x < f; ++x) {
        const double denom = item_denom[off + x] + deg * reg * mdl.qi[off + x];
        if (denom > 0.0) mdl.qi[off + x] *= item_num[off + x] / denom;
      }
    }
  }
  return mdl;
}

}  // namespace rdc
