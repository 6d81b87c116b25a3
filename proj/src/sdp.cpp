#include "aftrack/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace aftrack::sdp {

namespace detail {

Eigen::MatrixXd embed(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a.real();
  out.bottomRightCorner(n, n) = a.real();
  out.topRightCorner(n, n) = -a.imag();
  out.bottomLeftCorner(n, n) = a.imag();
  return out;
}

Eigen::MatrixXcd unembed(const Eigen::MatrixXd& y) {
  const Eigen::Index n = y.rows() / 2;
  Eigen::MatrixXd re = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  Eigen::MatrixXd im = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  Eigen::MatrixXcd out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

}  // namespace detail

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// PSD-block coefficient of one scalarized constraint, stored either as a
// diagonal or as an eigenvalue factorization so Schur assembly can exploit
// the rank-one-plus-diagonal structure these problems have.
struct Coef {
  bool is_diag = false;
  VectorXd diag;    // when is_diag
  MatrixXd q;       // n x r factors otherwise
  VectorXd sig;     // r signed weights: A = sum sig_k q_k q_k^T
  double fnorm = 0.0;

  double inner(const MatrixXd& sym) const {
    if (is_diag) return sym.diagonal().dot(diag);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < sig.size(); ++k) {
      acc += sig[k] * q.col(k).dot(sym * q.col(k));
    }
    return acc;
  }

  void add_to(MatrixXd& acc, double w) const {
    if (is_diag) {
      acc.diagonal() += w * diag;
      return;
    }
    for (Eigen::Index k = 0; k < sig.size(); ++k) {
      acc.noalias() += (w * sig[k]) * (q.col(k) * q.col(k).transpose());
    }
  }

  MatrixXd dense(int n) const {
    MatrixXd m = MatrixXd::Zero(n, n);
    add_to(m, 1.0);
    return m;
  }
};

Coef make_coef(const MatrixXd& a) {
  Coef c;
  c.fnorm = a.norm();
  const Eigen::Index n = a.rows();
  MatrixXd off = a;
  off.diagonal().setZero();
  if (off.norm() <= 1e-14 * std::max(1.0, c.fnorm)) {
    c.is_diag = true;
    c.diag = a.diagonal();
    return c;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  const VectorXd& vals = es.eigenvalues();
  const double cut = 1e-13 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::vector<int> keep;
  for (int k = 0; k < n; ++k) {
    if (std::abs(vals[k]) > cut) keep.push_back(k);
  }
  c.q.resize(n, keep.size());
  c.sig.resize(keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) {
    c.q.col(j) = es.eigenvectors().col(keep[j]);
    c.sig[j] = vals[keep[j]];
  }
  return c;
}

struct Row {
  Coef a;       // PSD-block coefficient
  int slack;    // index into the scalar block, or -1
  double rhs;
};

// One symmetric-cone point: dense PSD block plus nonnegative scalars.
struct Point {
  MatrixXd p;
  VectorXd s;
};

struct Direction {
  MatrixXd p;
  VectorXd s;
  VectorXd y;
  MatrixXd zp;
  VectorXd zs;
};

double block_inner(const Point& x, const Point& z) {
  return x.p.cwiseProduct(z.p).sum() + x.s.dot(z.s);
}

// Largest step alpha with X + alpha*D staying in the cone, via the
// generalized eigenvalue bound; 1.0 when unconstrained.
double step_to_boundary(const MatrixXd& x, const MatrixXd& dx, const VectorXd& xs,
                        const VectorXd& dxs) {
  double alpha = std::numeric_limits<double>::infinity();
  Eigen::LLT<MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd y = llt.matrixL().solve(dx);
  y = llt.matrixL().solve(y.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (y + y.transpose()),
                                             Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  for (Eigen::Index j = 0; j < xs.size(); ++j) {
    if (dxs[j] < 0.0) alpha = std::min(alpha, -xs[j] / dxs[j]);
  }
  return alpha;
}

MatrixXd sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Symmetric PSD square root and inverse square root via eigendecomposition.
void psd_sqrt(const MatrixXd& a, MatrixXd& root, MatrixXd& inv_root) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  const VectorXd sq = vals.cwiseSqrt();
  VectorXd isq(sq.size());
  for (Eigen::Index i = 0; i < sq.size(); ++i) isq[i] = sq[i] > 0.0 ? 1.0 / sq[i] : 0.0;
  root.noalias() = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
  inv_root.noalias() = es.eigenvectors() * isq.asDiagonal() * es.eigenvectors().transpose();
}

struct InternalProblem {
  int n = 0;   // PSD block dim (2 * complex dim)
  int ns = 0;  // scalar slacks
  MatrixXd c;  // objective on the PSD block (scalar part is zero)
  std::vector<Row> rows;
  VectorXd b;
};

class Solver {
 public:
  Solver(const InternalProblem& prob, const SolveOptions& opt)
      : prob_(prob), opt_(opt), m_(static_cast<int>(prob.rows.size())) {}

  // Runs the path-following iteration; fills iterates_ and the final point.
  SolveStatus run(const std::optional<MatrixXd>& x0, std::string& diag);

  Point x_{};
  Point z_{};
  VectorXd y_;
  std::vector<IterateStat> iterates_;  // internal sign convention
  int iterations_ = 0;
  double best_metric_ = std::numeric_limits<double>::infinity();

 private:
  struct Residuals {
    VectorXd rp;
    MatrixXd rd_p;
    VectorXd rd_s;
    double relp;
    double reld;
    double mu;
    double pobj;
    double dobj;
  };

  Residuals residuals() const;
  bool direction(const MatrixXd& w, const VectorXd& ws, const MatrixXd& rc_p,
                 const VectorXd& rc_s, const Residuals& res, Direction& dir) const;

  const InternalProblem& prob_;
  SolveOptions opt_;
  int m_;
};

Solver::Residuals Solver::residuals() const {
  Residuals r;
  r.rp.resize(m_);
  for (int k = 0; k < m_; ++k) {
    double v = prob_.rows[k].a.inner(x_.p);
    if (prob_.rows[k].slack >= 0) v += x_.s[prob_.rows[k].slack];
    r.rp[k] = prob_.b[k] - v;
  }
  r.rd_p = prob_.c - z_.p;
  r.rd_s = -z_.s;
  for (int k = 0; k < m_; ++k) {
    prob_.rows[k].a.add_to(r.rd_p, -y_[k]);
    if (prob_.rows[k].slack >= 0) r.rd_s[prob_.rows[k].slack] -= y_[k];
  }
  const double bnorm = prob_.b.size() ? prob_.b.cwiseAbs().maxCoeff() : 0.0;
  r.relp = r.rp.size() ? r.rp.cwiseAbs().maxCoeff() / (1.0 + bnorm) : 0.0;
  r.reld = std::sqrt(r.rd_p.squaredNorm() + r.rd_s.squaredNorm()) / (1.0 + prob_.c.norm());
  r.mu = block_inner(x_, z_) / (prob_.n + prob_.ns);
  r.pobj = prob_.c.cwiseProduct(x_.p).sum();
  r.dobj = prob_.b.dot(y_);
  return r;
}

bool Solver::direction(const MatrixXd& w, const VectorXd& ws, const MatrixXd& rc_p,
                       const VectorXd& rc_s, const Residuals& res, Direction& dir) const {
  const int n = prob_.n;
  // Precompute W-transformed factors and the elementwise square of W for
  // the structured Schur assembly.
  const MatrixXd wsq = w.cwiseProduct(w);
  std::vector<MatrixXd> wq(m_);
  for (int k = 0; k < m_; ++k) {
    if (!prob_.rows[k].a.is_diag) wq[k].noalias() = w * prob_.rows[k].a.q;
  }

  MatrixXd schur(m_, m_);
  for (int k = 0; k < m_; ++k) {
    const Coef& ak = prob_.rows[k].a;
    for (int l = k; l < m_; ++l) {
      const Coef& al = prob_.rows[l].a;
      double v = 0.0;
      if (ak.is_diag && al.is_diag) {
        v = ak.diag.dot(wsq * al.diag);
      } else if (ak.is_diag || al.is_diag) {
        const Coef& d = ak.is_diag ? ak : al;
        const Coef& f = ak.is_diag ? al : ak;
        const MatrixXd& wf = ak.is_diag ? wq[l] : wq[k];
        for (Eigen::Index r = 0; r < f.sig.size(); ++r) {
          v += f.sig[r] * wf.col(r).cwiseAbs2().dot(d.diag);
        }
      } else {
        for (Eigen::Index r = 0; r < ak.sig.size(); ++r) {
          for (Eigen::Index t = 0; t < al.sig.size(); ++t) {
            const double dot = prob_.rows[k].a.q.col(r).dot(wq[l].col(t));
            v += ak.sig[r] * al.sig[t] * dot * dot;
          }
        }
      }
      schur(k, l) = v;
      schur(l, k) = v;
    }
  }
  for (int k = 0; k < m_; ++k) {
    const int j = prob_.rows[k].slack;
    if (j >= 0) schur(k, k) += ws[j] * ws[j];
  }

  MatrixXd wrdw(n, n);
  wrdw.noalias() = w * res.rd_p * w;
  VectorXd h(m_);
  for (int k = 0; k < m_; ++k) {
    const Row& row = prob_.rows[k];
    double v = res.rp[k] - row.a.inner(rc_p) + row.a.inner(wrdw);
    if (row.slack >= 0) {
      const int j = row.slack;
      v += -rc_s[j] + ws[j] * ws[j] * res.rd_s[j];
    }
    h[k] = v;
  }

  Eigen::LLT<MatrixXd> llt(schur);
  if (llt.info() == Eigen::Success) {
    dir.y = llt.solve(h);
  } else {
    // Near-degenerate Schur complement: fall back to a ridged LDLT.
    MatrixXd reg = schur;
    reg.diagonal().array() += 1e-12 * (1.0 + schur.diagonal().cwiseAbs().maxCoeff());
    Eigen::LDLT<MatrixXd> ldlt(reg);
    if (ldlt.info() != Eigen::Success) return false;
    dir.y = ldlt.solve(h);
  }

  dir.zp = res.rd_p;
  dir.zs = res.rd_s;
  for (int k = 0; k < m_; ++k) {
    prob_.rows[k].a.add_to(dir.zp, -dir.y[k]);
    if (prob_.rows[k].slack >= 0) dir.zs[prob_.rows[k].slack] -= dir.y[k];
  }
  dir.p = rc_p - sym(w * dir.zp * w);
  dir.s = rc_s - ws.cwiseAbs2().cwiseProduct(dir.zs);
  return true;
}

SolveStatus Solver::run(const std::optional<MatrixXd>& x0, std::string& diag) {
  const int n = prob_.n;
  const int ns = prob_.ns;

  double anorm = 1.0;
  for (const Row& r : prob_.rows) anorm = std::max(anorm, r.a.fnorm);
  const double bnorm = prob_.b.size() ? prob_.b.cwiseAbs().maxCoeff() : 0.0;
  const double tau_p = std::max(1.0, bnorm / anorm);
  const double tau_d = std::max({1.0, prob_.c.norm() / std::sqrt(double(n)), anorm});

  x_.p = tau_p * MatrixXd::Identity(n, n);
  x_.s = VectorXd::Constant(std::max(ns, 0), tau_p);
  if (x0.has_value()) {
    // Caller-supplied strictly feasible start; slacks take up the margins.
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(*x0, Eigen::EigenvaluesOnly);
    bool ok = es.eigenvalues().minCoeff() > 0.0;
    VectorXd s(std::max(ns, 0));
    for (int k = 0; k < m_ && ok; ++k) {
      if (prob_.rows[k].slack >= 0) {
        const double margin = prob_.b[k] - prob_.rows[k].a.inner(*x0);
        if (margin <= 0.0) ok = false;
        else s[prob_.rows[k].slack] = margin;
      }
    }
    if (ok) {
      x_.p = *x0;
      x_.s = s;
    }
  }
  z_.p = tau_d * MatrixXd::Identity(n, n);
  z_.s = VectorXd::Constant(std::max(ns, 0), tau_d);
  y_ = VectorXd::Zero(m_);

  Point best_x = x_;
  Point best_z = z_;
  VectorXd best_y = y_;
  int stall = 0;

  for (int iter = 0; iter < opt_.max_iter; ++iter) {
    iterations_ = iter + 1;
    Residuals res = residuals();
    const double relgap =
        std::abs(res.pobj - res.dobj) / (1.0 + std::abs(res.pobj) + std::abs(res.dobj));
    iterates_.push_back({res.pobj, res.dobj, res.relp, res.reld, res.mu});

    const double metric = std::max({res.relp, res.reld, relgap});
    if (metric < best_metric_) {
      if (metric < 0.75 * best_metric_) stall = 0;
      best_metric_ = metric;
      best_x = x_;
      best_z = z_;
      best_y = y_;
    } else {
      ++stall;
    }
    if (res.relp <= opt_.tol && res.reld <= opt_.tol && relgap <= opt_.tol) {
      return SolveStatus::optimal;
    }
    if (stall > 20) {
      diag = "progress stalled";
      break;
    }

    // Nesterov-Todd scaling point: W Z W = X blockwise.
    MatrixXd xr, xir;
    psd_sqrt(x_.p, xr, xir);
    MatrixXd mid = xr * z_.p * xr;
    MatrixXd mr, mir;
    psd_sqrt(sym(mid), mr, mir);
    MatrixXd w = sym(xr * mir * xr);
    VectorXd ws = (x_.s.array() / z_.s.array()).sqrt();

    Eigen::LLT<MatrixXd> zllt(z_.p);
    if (zllt.info() != Eigen::Success) {
      diag = "dual block left the cone";
      break;
    }
    const MatrixXd zinv = zllt.solve(MatrixXd::Identity(n, n));
    const VectorXd zsinv = z_.s.cwiseInverse();

    // Predictor (affine scaling) step.
    Direction aff;
    if (!direction(w, ws, -x_.p, -x_.s, res, aff)) {
      diag = "singular Schur complement";
      break;
    }
    double ap = std::min(1.0, 0.98 * step_to_boundary(x_.p, aff.p, x_.s, aff.s));
    double ad = std::min(1.0, 0.98 * step_to_boundary(z_.p, aff.zp, z_.s, aff.zs));
    Point xa{x_.p + ap * aff.p, x_.s + ap * aff.s};
    Point za{z_.p + ad * aff.zp, z_.s + ad * aff.zs};
    const double mu_aff = std::max(0.0, block_inner(xa, za) / (n + ns));
    double sigma = std::pow(mu_aff / res.mu, 3);
    sigma = std::clamp(sigma, 1e-10, 1.0);

    // Corrector step toward the sigma*mu center, with a second-order term.
    const bool second_order = std::getenv("AFTRACK_SDP_NO2ND") == nullptr;
    MatrixXd rc_p = sigma * res.mu * zinv - x_.p;
    VectorXd rc_s = sigma * res.mu * zsinv - x_.s;
    if (second_order) {
      rc_p -= sym(aff.p * zinv * aff.zp);
      rc_s -= aff.s.cwiseProduct(aff.zs).cwiseProduct(zsinv);
    }
    Direction dir;
    if (!direction(w, ws, rc_p, rc_s, res, dir)) {
      diag = "singular Schur complement";
      break;
    }
    ap = std::min(1.0, 0.98 * step_to_boundary(x_.p, dir.p, x_.s, dir.s));
    ad = std::min(1.0, 0.98 * step_to_boundary(z_.p, dir.zp, z_.s, dir.zs));
    if (std::getenv("AFTRACK_SDP_DEBUG")) {
      std::fprintf(stderr, "  iter %d mu=%.3e sigma=%.3e ap=%.3e ad=%.3e\n", iter,
                   res.mu, sigma, ap, ad);
    }
    x_.p = sym(x_.p + ap * dir.p);
    x_.s += ap * dir.s;
    y_ += ad * dir.y;
    z_.p = sym(z_.p + ad * dir.zp);
    z_.s += ad * dir.zs;
  }

  x_ = best_x;
  z_ = best_z;
  y_ = best_y;
  if (diag.empty()) diag = "iteration cap reached";
  return SolveStatus::numerical_failure;  // classified by the caller
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolveOptions& options) {
  const int nc = problem.dim;
  if (nc < 1) throw ValidationError("sdp: dim must be >= 1");
  auto check_dim = [&](const linalg::HermitianMatrix& m) {
    if (m.dim() != nc) throw ValidationError("sdp: constraint dimension mismatch");
  };
  check_dim(problem.objective);
  for (const auto& t : problem.eq) check_dim(t.matrix);
  for (const auto& t : problem.ineq) check_dim(t.matrix);
  if (problem.eq.empty() && problem.ineq.empty()) {
    throw ValidationError("sdp: at least one constraint required");
  }

  const bool maximize = problem.sense == Sense::maximize;
  const double user_sign = maximize ? -1.0 : 1.0;

  InternalProblem prob;
  prob.n = 2 * nc;
  prob.ns = static_cast<int>(problem.ineq.size());
  prob.c = user_sign * detail::embed(problem.objective.entries());
  const int m = static_cast<int>(problem.eq.size() + problem.ineq.size());
  prob.b.resize(m);
  prob.rows.reserve(m);
  int k = 0;
  for (const auto& t : problem.eq) {
    prob.rows.push_back(Row{make_coef(detail::embed(t.matrix.entries())), -1, 2.0 * t.bound});
    prob.b[k++] = 2.0 * t.bound;
  }
  int slack = 0;
  for (const auto& t : problem.ineq) {
    prob.rows.push_back(Row{make_coef(detail::embed(t.matrix.entries())), slack, 2.0 * t.bound});
    prob.b[k++] = 2.0 * t.bound;
    ++slack;
  }

  std::optional<MatrixXd> x0;
  if (options.initial_x.has_value()) {
    if (options.initial_x->rows() != nc || options.initial_x->cols() != nc) {
      throw ValidationError("sdp: initial_x dimension mismatch");
    }
    x0 = detail::embed(*options.initial_x);
  }

  Solver solver(prob, options);
  std::string diag;
  SolveStatus raw = solver.run(x0, diag);

  // Recover the Hermitian primal by averaging the conjugate blocks.
  Eigen::MatrixXcd xc = detail::unembed(solver.x_.p);
  linalg::HermitianMatrix x(0.5 * (xc + xc.adjoint().eval()));

  VectorXd duals(m);
  for (int i = 0; i < m; ++i) {
    const bool is_ineq = i >= static_cast<int>(problem.eq.size());
    if (maximize) {
      duals[i] = -solver.y_[i];
    } else {
      duals[i] = is_ineq ? -solver.y_[i] : solver.y_[i];
    }
  }

  SdpSolution sol{
      std::move(x),       std::move(duals), 0.0, 0.0, 0.0, raw,
      solver.iterations_, {},               diag};

  // Convert history to the caller's sign convention.
  sol.history.reserve(solver.iterates_.size());
  for (const IterateStat& it : solver.iterates_) {
    sol.history.push_back({user_sign * it.primal_objective / 2.0,
                           user_sign * it.dual_objective / 2.0, it.primal_residual,
                           it.dual_residual, it.mu});
  }
  // Objectives of the returned iterate (the best one, which need not be the
  // last recorded).
  sol.objective_value = user_sign * prob.c.cwiseProduct(solver.x_.p).sum() / 2.0;
  sol.dual_objective = user_sign * prob.b.dot(solver.y_) / 2.0;
  sol.gap = std::abs(sol.objective_value - sol.dual_objective);

  // Classify against the solution contract.
  const CertificateReport report = check_certificate(problem, sol);
  const bool ok = report.max_primal_residual <= 1e-7 &&
                  report.min_x_eigenvalue >= -1e-8 &&
                  sol.gap <= 1e-7 * (1.0 + std::abs(sol.objective_value));
  if (ok) {
    sol.status = SolveStatus::optimal;
  } else if (raw == SolveStatus::optimal) {
    sol.status = SolveStatus::numerical_failure;
    sol.diagnostics = "converged iterate failed the solution contract";
  } else {
    // Check for a primal-infeasibility certificate in the dual ray.
    const double yscale = solver.y_.size() ? solver.y_.cwiseAbs().maxCoeff() : 0.0;
    if (yscale > 0.0) {
      VectorXd yr = solver.y_ / yscale;
      MatrixXd astar = MatrixXd::Zero(prob.n, prob.n);
      bool slack_ok = true;
      for (int i = 0; i < m; ++i) {
        prob.rows[i].a.add_to(astar, yr[i]);
        if (prob.rows[i].slack >= 0 && yr[i] > 1e-7) slack_ok = false;
      }
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(astar, Eigen::EigenvaluesOnly);
      const double ray_obj = prob.b.dot(yr);
      if (slack_ok && es.eigenvalues().maxCoeff() <= 1e-7 * (1.0 + astar.norm()) &&
          ray_obj > 1e-6 * (1.0 + prob.b.cwiseAbs().maxCoeff())) {
        sol.status = SolveStatus::infeasible;
        sol.diagnostics = "primal infeasibility certificate found";
      }
    }
  }
  return sol;
}

CertificateReport check_certificate(const SdpProblem& problem, const SdpSolution& solution) {
  const int n = problem.dim;
  const Eigen::MatrixXcd& x = solution.x.entries();

  double worst = 0.0;
  int k = 0;
  for (const auto& t : problem.eq) {
    const double v = (x * t.matrix.entries()).trace().real();
    worst = std::max(worst, std::abs(v - t.bound));
    ++k;
  }
  for (const auto& t : problem.ineq) {
    const double v = (x * t.matrix.entries()).trace().real();
    worst = std::max(worst, std::max(0.0, v - t.bound));
    ++k;
  }

  // Dual slack in the paper's convention (see SdpSolution::duals).
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
  const double sense = problem.sense == Sense::maximize ? 1.0 : -1.0;
  int i = 0;
  for (const auto& t : problem.eq) g += sense * solution.duals[i++] * t.matrix.entries();
  for (const auto& t : problem.ineq) g += solution.duals[i++] * t.matrix.entries();
  g -= sense * problem.objective.entries();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gx(g, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> xx(x, Eigen::EigenvaluesOnly);

  CertificateReport report{
      worst,
      xx.eigenvalues().minCoeff(),
      gx.eigenvalues().minCoeff(),
      std::abs((x * g).trace().real()),
      std::abs(solution.objective_value - solution.dual_objective),
      std::move(g)};
  return report;
}

std::string dump_json(const SdpProblem& problem) {
  using nlohmann::json;
  auto mat = [](const Eigen::MatrixXcd& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json rr = json::array(), ri = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        rr.push_back(m(r, c).real());
        ri.push_back(m(r, c).imag());
      }
      re.push_back(rr);
      im.push_back(ri);
    }
    return json{{"re", re}, {"im", im}};
  };
  json j;
  j["dim"] = problem.dim;
  j["sense"] = problem.sense == Sense::maximize ? "max" : "min";
  j["objective"] = mat(problem.objective.entries());
  j["eq"] = json::array();
  for (const auto& t : problem.eq) {
    j["eq"].push_back({{"matrix", mat(t.matrix.entries())}, {"rhs", t.bound}});
  }
  j["ineq"] = json::array();
  for (const auto& t : problem.ineq) {
    j["ineq"].push_back({{"matrix", mat(t.matrix.entries())}, {"rhs", t.bound}});
  }
  return j.dump(2);
}

}  // namespace aftrack::sdp
