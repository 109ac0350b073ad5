#include "umbilic/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "umbilic/errors.hpp"

namespace umbilic {

namespace {

int& thread_count_ref() {
  static int n = [] {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc > 8 ? 8 : hc);
  }();
  return n;
}

double pairwise(const double* v, long n) {
  if (n <= 4) {
    double s = 0;
    for (long i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const long h = n / 2;
  return pairwise(v, h) + pairwise(v + h, n - h);
}

struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Tensor-product integral over per-axis composite rules; deterministic
// pairwise accumulation in flat-index order regardless of thread count.
double tensor_integrate(const ScalarFn& f, int dim, const AxisRule* axes, const ChartBox* reject,
                        long* evals) {
  long total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<long>(axes[i].nodes.size());
  *evals += total;
  auto term = [&](long flat) -> double {
    Point p{};
    double w = 1.0;
    long rem = flat;
    for (int i = dim - 1; i >= 0; --i) {
      const long m = static_cast<long>(axes[i].nodes.size());
      const long k = rem % m;
      rem /= m;
      p[i] = axes[i].nodes[k];
      w *= axes[i].weights[k];
    }
    if (reject && reject->near_excluded(p)) return 0.0;
    const double v = f(p);
    if (!std::isfinite(v)) throw NumericError("non-finite sample in quadrature");
    return w * v;
  };
  return parallel_sum(total, term);
}

AxisRule axis_rule_for_interval(double lo, double hi, int order) {
  const auto& [x, w] = gauss_legendre(order);
  AxisRule r;
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    r.nodes[i] = c + h * x[i];
    r.weights[i] = h * w[i];
  }
  return r;
}

// Dyadic panels covering [-R, R]: [0,1],[1,2],[2,4],...,[R/2,R] mirrored.
std::vector<std::array<double, 2>> dyadic_panels(double R) {
  std::vector<double> cuts{0.0};
  double b = 1.0;
  if (R <= 1.0) {
    cuts.push_back(R);
  } else {
    while (b < R * (1 - 1e-12)) {
      cuts.push_back(b);
      b *= 2.0;
    }
    cuts.push_back(R);
  }
  std::vector<std::array<double, 2>> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) panels.push_back({cuts[i], cuts[i + 1]});
  std::vector<std::array<double, 2>> all;
  for (auto it = panels.rbegin(); it != panels.rend(); ++it) all.push_back({-(*it)[1], -(*it)[0]});
  for (const auto& p : panels) all.push_back(p);
  return all;
}

AxisRule composite_axis(const std::vector<std::array<double, 2>>& panels, int order) {
  AxisRule r;
  for (const auto& p : panels) {
    AxisRule one = axis_rule_for_interval(p[0], p[1], order);
    r.nodes.insert(r.nodes.end(), one.nodes.begin(), one.nodes.end());
    r.weights.insert(r.weights.end(), one.weights.begin(), one.weights.end());
  }
  return r;
}

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1 || order > 256) throw ValidationError("quadrature order out of range");

  std::vector<double> x(order), w(order);
  for (int i = 0; i < order; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return cache.emplace(order, std::make_pair(std::move(x), std::move(w))).first->second;
}

double parallel_sum(long count, const std::function<double(long)>& fn) {
  if (count <= 0) return 0.0;
  constexpr long kChunk = 2048;
  const long nchunks = (count + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);

  const int want = thread_count_ref();
  if (count < 4 * kChunk || want <= 1) {
    for (long c = 0; c < nchunks; ++c) {
      double s = 0;
      const long lo = c * kChunk, hi = std::min(count, lo + kChunk);
      for (long i = lo; i < hi; ++i) s += fn(i);
      partial[c] = s;
    }
    return pairwise(partial.data(), nchunks);
  }

  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    try {
      for (;;) {
        const long c = next.fetch_add(1);
        if (c >= nchunks) return;
        double s = 0;
        const long lo = c * kChunk, hi = std::min(count, lo + kChunk);
        for (long i = lo; i < hi; ++i) s += fn(i);
        partial[c] = s;
      }
    } catch (...) {
      std::lock_guard<std::mutex> g(err_mu);
      if (!err) err = std::current_exception();
      next.store(nchunks);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < want; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return pairwise(partial.data(), nchunks);
}

QuadratureResult integrate_box(const ScalarFn& f, const ChartBox& box, int order, double tolerance) {
  if (order < 2) order = 2;
  QuadratureResult res;
  std::vector<AxisRule> hi(box.dim()), lo(box.dim());
  const int low_order = std::max(2, (order * 7) / 10);
  for (int i = 0; i < box.dim(); ++i) {
    hi[i] = axis_rule_for_interval(box.lo(i), box.hi(i), order);
    lo[i] = axis_rule_for_interval(box.lo(i), box.hi(i), low_order);
  }
  const ChartBox* reject = box.excluded().empty() ? nullptr : &box;
  const double v_hi = tensor_integrate(f, box.dim(), hi.data(), reject, &res.evaluations);
  const double v_lo = tensor_integrate(f, box.dim(), lo.data(), reject, &res.evaluations);
  res.value = v_hi;
  res.error_estimate = std::abs(v_hi - v_lo);
  if (tolerance > 0.0 && res.error_estimate > tolerance)
    throw NumericError("quadrature error estimate above requested tolerance");
  return res;
}

QuadratureResult integrate_improper(const ScalarFn& f, int dim, double tolerance, int panel_order, double r0,
                                    double rmax) {
  QuadratureResult res;
  double R = r0;
  double prev = 0.0;
  bool have_prev = false;
  for (;;) {
    std::vector<AxisRule> axes(dim), axes_lo(dim);
    const auto panels = dyadic_panels(R);
    for (int i = 0; i < dim; ++i) {
      axes[i] = composite_axis(panels, panel_order);
      axes_lo[i] = composite_axis(panels, std::max(2, panel_order - 2));
    }
    const double v = tensor_integrate(f, dim, axes.data(), nullptr, &res.evaluations);
    const double v_lo = tensor_integrate(f, dim, axes_lo.data(), nullptr, &res.evaluations);
    const double quad_est = std::abs(v - v_lo);
    if (have_prev) {
      const double tail_est = std::abs(v - prev);
      if (tail_est <= 0.5 * tolerance || R >= rmax) {
        res.value = v;
        res.error_estimate = tail_est + quad_est;
        res.truncation_radius = R;
        if (res.error_estimate > tolerance && R >= rmax)
          throw NumericError("improper integral: tail estimate did not reach tolerance");
        return res;
      }
    }
    prev = v;
    have_prev = true;
    R *= 2.0;
  }
}

}  // namespace umbilic
