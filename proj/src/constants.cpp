#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fft.hpp"
#include "wickstat/parallel.hpp"
#include "wickstat/renorm.hpp"

namespace wickstat {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double mode_weight(const ModelParams& p, const Point& l) {
  return p.M_table ? std::norm((*p.M_table)(l)) : multiplier_weight(l, 2.0 * p.m);
}

struct KernelTables {
  std::vector<double> lambda;               // <l>^sigma
  std::vector<cplx> outer;                  // <q>^alpha N_0(q)
  std::vector<std::vector<cplx>> factor;    // N_i(l) <l>^alpha |M(l)|^2 <l>^{-sigma}
};

KernelTables kernel_tables(const ModelParams& p, const Lattice& lat, double alpha) {
  KernelTables t;
  const std::size_t n = lat.size();
  t.lambda.resize(n);
  t.outer.resize(n);
  t.factor.assign(static_cast<std::size_t>(p.k), std::vector<cplx>(n));
  const Multiplier N0 = p.N(0);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& l = lat.point(i);
    t.lambda[i] = multiplier_weight(l, p.sigma);
    t.outer[i] = multiplier_weight(l, alpha) * N0(l);
    const double base = multiplier_weight(l, alpha) * mode_weight(p, l) / t.lambda[i];
    for (int j = 0; j < p.k; ++j) t.factor[static_cast<std::size_t>(j)][i] = p.N(j + 1)(l) * base;
  }
  return t;
}

}  // namespace

double c1(const ModelParams& p, int N, double alpha) {
  auto lat = make_lattice(p.d, N);
  double s = 0.0;
  for (std::size_t i = 0; i < lat->size(); ++i) {
    const Point& l = lat->point(i);
    s += multiplier_weight(l, 2.0 * alpha) * mode_weight(p, l) * multiplier_weight(l, -p.sigma);
  }
  return s * std::pow(kTwoPi, -p.d);
}

std::vector<double> factor_covariance(const ModelParams& p, int N) {
  auto lat = make_lattice(p.d, N);
  const int k = p.k;
  std::vector<Multiplier> mu;
  for (int i = 1; i <= k; ++i) mu.push_back(p.N(i));
  std::vector<double> C(static_cast<std::size_t>(k * k), 0.0);
  for (std::size_t q = 0; q < lat->size(); ++q) {
    const Point& l = lat->point(q);
    const double v = stationary_mode_variance(p, l);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        C[static_cast<std::size_t>(i * k + j)] += (mu[static_cast<std::size_t>(i)](l) *
                                                   std::conj(mu[static_cast<std::size_t>(j)](l))).real() * v;
  }
  for (auto& c : C) c *= std::pow(kTwoPi, -p.d);
  return C;
}

C2Sum c2_brute_sum(const ModelParams& p, int N, double alpha, int workers) {
  p.validate();
  const int k = p.k;
  const double est = std::pow(2.0 * N + 1.0, static_cast<double>(p.d * k));
  if (est > kBruteTermLimit) {
    std::ostringstream os;
    os << "brute-force sum would visit about " << est << " terms (limit " << kBruteTermLimit
       << "); use c2_fast";
    throw std::length_error(os.str());
  }
  auto lat = make_lattice(p.d, N);
  const KernelTables t = kernel_tables(p, *lat, alpha);
  const std::size_t n = lat->size();

  struct Partial {
    cplx sum{};
    double abs = 0.0;
    std::size_t terms = 0;
  };
  std::vector<Partial> part(n);

  parallel_for(n, workers, [&](std::size_t i1) {
    Partial acc;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    idx[0] = i1;
    // iterative odometer over the remaining k-1 indices
    std::vector<std::size_t> pos(static_cast<std::size_t>(k), 0);
    auto visit = [&] {
      Point q{0, 0, 0};
      double lam = 0.0;
      cplx prod = 1.0;
      for (int j = 0; j < k; ++j) {
        const Point& l = lat->point(idx[static_cast<std::size_t>(j)]);
        q[0] += l[0];
        q[1] += l[1];
        q[2] += l[2];
        lam += t.lambda[idx[static_cast<std::size_t>(j)]];
        prod *= t.factor[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
      }
      const auto qi = lat->find(q);
      if (qi < 0) return;
      const std::size_t qq = static_cast<std::size_t>(qi);
      const cplx term = t.outer[qq] * prod / (lam + t.lambda[qq]);
      acc.sum += term;
      acc.abs += std::abs(term);
      ++acc.terms;
    };
    if (k == 1) {
      visit();
    } else {
      for (;;) {
        for (int j = 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j)];
        visit();
        int j = k - 1;
        while (j >= 1 && ++pos[static_cast<std::size_t>(j)] == n) pos[static_cast<std::size_t>(j--)] = 0;
        if (j < 1) break;
      }
    }
    part[i1] = acc;
  });

  C2Sum r;
  cplx total{};
  for (const auto& a : part) {
    total += a.sum;
    r.abs_sum += a.abs;
    r.terms += a.terms;
  }
  const double pre = factorial(k) * std::pow(kTwoPi, -p.d * k);
  r.value = pre * total.real();
  r.imag = pre * total.imag();
  r.abs_sum *= pre;
  return r;
}

double c2_brute(const ModelParams& p, int N, double alpha, int workers) {
  return c2_brute_sum(p, N, alpha, workers).value;
}

namespace {

// Integrand of the s-representation on one node.
class ConvolutionIntegrand {
public:
  ConvolutionIntegrand(const ModelParams& p, int N, double alpha)
      : p_(p), lat_(make_lattice(p.d, N)), t_(kernel_tables(p, *lat_, alpha)) {
    M_ = fft_size_at_least((p.k + 1) * N + 1);
    equal_ = p.equal_factor_multipliers();
    offsets_.resize(lat_->size());
    for (std::size_t i = 0; i < lat_->size(); ++i) {
      const Point& l = lat_->point(i);
      std::size_t off = 0;
      for (int a = 0; a < p.d; ++a) off = off * M_ + static_cast<std::size_t>(l[a] < 0 ? l[a] + M_ : l[a]);
      offsets_[i] = off;
    }
    std::size_t total = 1;
    for (int a = 0; a < p.d; ++a) total *= static_cast<std::size_t>(M_);
    inv_count_ = 1.0 / static_cast<double>(total);
    prod_.resize(total);
    damp_.resize(lat_->size());
    // crude bound on the integral of |integrand|, used as a rounding floor
    double b = 0.0;
    for (const auto& w : t_.outer) b += std::abs(w);
    for (const auto& f : t_.factor) {
      double s = 0.0;
      for (const auto& v : f) s += std::abs(v);
      b *= s;
    }
    bound_ = b / (p.k + 1);
    lambda_max_ = *std::max_element(t_.lambda.begin(), t_.lambda.end());
  }

  int grid() const { return M_; }
  double bound() const { return bound_; }
  double lambda_max() const { return lambda_max_; }

  double operator()(double s) {
    auto& fft = detail::complex_fft(p_.d, M_);
    cplx* buf = fft.data();
    const std::size_t total = fft.count();
    for (std::size_t i = 0; i < damp_.size(); ++i) damp_[i] = std::exp(-s * t_.lambda[i]);
    const int k = p_.k;
    const int passes = equal_ ? 1 : k;
    for (int j = 0; j < passes; ++j) {
      std::fill(buf, buf + total, cplx{});
      const auto& f = t_.factor[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < damp_.size(); ++i) buf[offsets_[i]] = damp_[i] * f[i];
      fft.forward();
      if (j == 0)
        std::copy(buf, buf + total, prod_.begin());
      else
        for (std::size_t x = 0; x < total; ++x) prod_[x] *= buf[x];
    }
    if (equal_) {
      for (std::size_t x = 0; x < total; ++x) {
        const cplx b = prod_[x];
        cplx acc = b;
        for (int j = 1; j < k; ++j) acc *= b;
        prod_[x] = acc;
      }
    }
    std::copy(prod_.begin(), prod_.end(), buf);
    fft.backward();
    cplx sum{};
    for (std::size_t i = 0; i < damp_.size(); ++i) sum += t_.outer[i] * damp_[i] * buf[offsets_[i]];
    return (sum * inv_count_).real();
  }

private:
  const ModelParams& p_;
  LatticePtr lat_;
  KernelTables t_;
  int M_ = 0;
  bool equal_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<cplx> prod_;
  std::vector<double> damp_;
  double inv_count_ = 1.0;
  double bound_ = 0.0;
  double lambda_max_ = 1.0;
};

}  // namespace

C2FastResult c2_fast_detail(const ModelParams& p, int N, double alpha, const QuadratureSpec& q) {
  p.validate();
  if (!(p.sigma > 0.0)) throw std::invalid_argument("c2_fast needs sigma > 0");
  ConvolutionIntegrand f(p, N, alpha);

  // s = exp(pi/2 sinh t). Every denominator lies in [k+1, (k+1) lambda_max], so
  // the right tail is cut where exp(-s (k+1)) is negligible and the left tail
  // where s is below the relative resolution of the largest denominator.
  const double hpi = 0.5 * kPi;
  const double s_hi = 60.0 / (p.k + 1);
  const double s_lo = 1e-17 / ((p.k + 1) * f.lambda_max());
  const double t_hi = std::asinh(std::log(s_hi) / hpi);
  const double t_lo = std::asinh(std::log(s_lo) / hpi);

  auto node = [&](double t, double& absval) {
    const double s = std::exp(hpi * std::sinh(t));
    const double w = s * hpi * std::cosh(t);
    const double v = f(s) * w;
    absval = std::abs(v);
    return v;
  };

  C2FastResult r;
  double h = q.initial_step;
  // level 0: all integer multiples of h inside [t_lo, t_hi]
  const long j_lo = static_cast<long>(std::floor(t_lo / h));
  const long j_hi = static_cast<long>(std::ceil(t_hi / h));
  double sum = 0.0, abs_sum = 0.0;
  for (long j = j_lo; j <= j_hi; ++j) {
    double a;
    sum += node(j * h, a);
    abs_sum += a;
    ++r.nodes;
  }
  double I = h * sum;
  const double floor = 1e-14 * f.bound();
  long lo = j_lo, hi = j_hi;
  for (int level = 1; level <= q.max_levels; ++level) {
    h *= 0.5;
    lo *= 2;
    hi *= 2;
    for (long j = lo + 1; j < hi; j += 2) {
      double a;
      sum += node(j * h, a);
      abs_sum += a;
      ++r.nodes;
    }
    const double I_new = h * sum;
    r.last_change = std::abs(I_new - I);
    r.scale = h * abs_sum;
    I = I_new;
    r.levels = level;
    if (level >= q.min_levels && r.last_change <= q.rel_tol * std::max(r.scale, std::abs(I)) + floor) {
      r.value = factorial(p.k) * std::pow(kTwoPi, -p.d * p.k) * I;
      r.last_change *= factorial(p.k) * std::pow(kTwoPi, -p.d * p.k);
      r.scale *= factorial(p.k) * std::pow(kTwoPi, -p.d * p.k);
      return r;
    }
  }
  const double pre = factorial(p.k) * std::pow(kTwoPi, -p.d * p.k);
  std::ostringstream os;
  os.precision(10);
  os << "quadrature did not converge: estimate " << pre * I << ", last change " << pre * r.last_change
     << ", tolerance " << q.rel_tol * pre * std::max(r.scale, std::abs(I));
  throw std::runtime_error(os.str());
}

double c2_fast(const ModelParams& p, int N, double alpha, const QuadratureSpec& q) {
  return c2_fast_detail(p, N, alpha, q).value;
}

std::string to_string(RenormConstants::Method m) { return m == RenormConstants::Method::Brute ? "brute" : "fast"; }

RenormConstants renorm_constants(const ModelParams& p, int N, double alpha, int workers) {
  RenormConstants r;
  r.N = N;
  r.alpha = alpha;
  r.c1 = c1(p, N, alpha);
  const double est = std::pow(2.0 * N + 1.0, static_cast<double>(p.d * p.k));
  if (est <= 1e7 || !(p.sigma > 0.0)) {
    r.c2 = c2_brute(p, N, alpha, workers);
    r.method = RenormConstants::Method::Brute;
  } else {
    r.c2 = c2_fast(p, N, alpha);
    r.method = RenormConstants::Method::Fast;
  }
  return r;
}

GrowthFit growth_rate_fit(std::span<const int> Ns, std::span<const double> c2, double delta, double slope_tolerance,
                          double r2_threshold) {
  const std::size_t n = Ns.size();
  if (n < 4 || c2.size() != n) throw std::invalid_argument("growth fit needs at least four cutoffs");
  const double ratio = static_cast<double>(Ns[1]) / Ns[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (Ns[i] <= Ns[i - 1] || std::abs(static_cast<double>(Ns[i]) / Ns[i - 1] - ratio) > 1e-9 * ratio)
      throw std::invalid_argument("cutoffs must be geometrically spaced");
    if (c2[i] < c2[i - 1]) throw std::domain_error("non-monotone c2 sequence");
  }
  GrowthFit g;
  g.delta = delta;
  g.log_mode = std::abs(delta) < 1e-12;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(static_cast<double>(Ns[i]));
    if (g.log_mode) {
      y[i] = c2[i];
    } else {
      if (!(c2[i] > 0.0)) throw std::domain_error("power-law fit needs positive c2");
      y[i] = std::log(c2[i]);
    }
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  g.slope = sxy / sxx;
  g.intercept = my - g.slope * mx;
  g.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 0.0;
  if (g.log_mode) {
    g.rel_deviation = 0.0;
    g.matches = g.r2 >= r2_threshold;
  } else {
    g.rel_deviation = std::abs(g.slope - delta) / std::abs(delta);
    g.matches = g.rel_deviation <= slope_tolerance;
  }
  return g;
}

}  // namespace wickstat
