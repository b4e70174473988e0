#include "fpnc/gnn/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

template <class F>
void for_each_block(ModelParams& p, F&& f) {
  f(p.init_w);
  f(p.init_b);
  f(p.msg_w);
  f(p.gru_wi);
  f(p.gru_wh);
  f(p.gru_bz);
  f(p.gru_br);
  f(p.edge_w1);
  f(p.edge_b1);
  f(p.edge_w2);
  f(p.edge_b2);
  f(p.out_w1);
  f(p.out_b1);
  f(p.out_w2);
  f(p.out_b2);
}

template <class F>
void for_each_block(const ModelParams& p, F&& f) {
  for_each_block(const_cast<ModelParams&>(p), [&](auto& block) { f(std::as_const(block)); });
}

template <class M>
void visit_entries(M& m, auto&& f) {
  if constexpr (std::is_same_v<std::remove_const_t<M>, double>) {
    f(m);
  } else {
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) f(m(i, j));
  }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Round {
  MatrixXd h;         // state entering the round
  MatrixXd edge_pre;  // H x directed edges
  VectorXd lambda;
  MatrixXd m, x, c, z, r, n;
};

struct Directed {
  std::vector<Index> src, dst;
};

Directed directed_edges(const AnalysisGraph& g) {
  Directed d;
  for (auto [a, b] : g.edges) {
    d.src.push_back(static_cast<Index>(a));
    d.dst.push_back(static_cast<Index>(b));
    d.src.push_back(static_cast<Index>(b));
    d.dst.push_back(static_cast<Index>(a));
  }
  return d;
}

struct Trace {
  std::vector<Round> rounds;
  MatrixXd final_h;
};

Trace run(const AnalysisGraph& g, const ModelParams& p, std::size_t iterations, const Directed& d) {
  const Index H = static_cast<Index>(p.hidden);
  const Index N = static_cast<Index>(g.node_count());
  const Index E = static_cast<Index>(d.src.size());
  if (g.features.rows() != static_cast<Index>(p.features)) throw UsageError("feature width does not match the model");
  Trace t;
  MatrixXd h = (p.init_w * g.features).colwise() + p.init_b;
  for (std::size_t it = 0; it < iterations; ++it) {
    Round rd;
    rd.h = h;
    rd.edge_pre.resize(H, E);
    rd.lambda.resize(E);
    for (Index e = 0; e < E; ++e) {
      VectorXd pre = p.edge_w1.leftCols(H) * h.col(d.src[e]) + p.edge_w1.rightCols(H) * h.col(d.dst[e]) + p.edge_b1;
      rd.edge_pre.col(e) = pre;
      rd.lambda(e) = sigmoid(p.edge_w2.dot(pre.cwiseMax(0.0)) + p.edge_b2);
    }
    rd.m = p.msg_w * h;
    rd.x = MatrixXd::Zero(H, N);
    for (Index e = 0; e < E; ++e) rd.x.col(d.dst[e]) += rd.lambda(e) * rd.m.col(d.src[e]);
    MatrixXd a = p.gru_wi * rd.x;
    rd.c = p.gru_wh * h;
    rd.z = ((a.topRows(H) + rd.c.topRows(H)).colwise() + p.gru_bz).unaryExpr(&sigmoid);
    rd.r = ((a.middleRows(H, H) + rd.c.middleRows(H, H)).colwise() + p.gru_br).unaryExpr(&sigmoid);
    rd.n = (a.bottomRows(H) + rd.r.cwiseProduct(rd.c.bottomRows(H))).array().tanh().matrix();
    h = (MatrixXd::Ones(H, N) - rd.z).cwiseProduct(rd.n) + rd.z.cwiseProduct(h);
    t.rounds.push_back(std::move(rd));
  }
  t.final_h = std::move(h);
  return t;
}

std::size_t resolve_iterations(const AnalysisGraph& g, std::optional<std::size_t> iterations) {
  if (iterations && *iterations == 0) throw UsageError("at least one message-passing iteration is required");
  return iterations ? *iterations : graph_diameter(g);
}

double readout(const ModelParams& p, const VectorXd& h) {
  return p.out_w2.dot((p.out_w1 * h + p.out_b1).cwiseMax(0.0)) + p.out_b2;
}

PolicyOutput policy_from(const AnalysisGraph& g, const ModelParams& p, const MatrixXd& h) {
  PolicyOutput out;
  for (const auto& group : g.groups) {
    std::vector<double> scores;
    for (auto v : group.nodes) scores.push_back(readout(p, h.col(static_cast<Index>(v))));
    double top = -INFINITY;
    for (double s : scores) top = std::max(top, s);
    std::vector<double> probs;
    double sum = 0;
    for (double s : scores) {
      probs.push_back(std::exp(s - top));
      sum += probs.back();
    }
    for (double& q : probs) q /= sum;
    out.scores.push_back(std::move(scores));
    out.probabilities.push_back(std::move(probs));
  }
  return out;
}

}  // namespace

ModelParams ModelParams::zeros(std::size_t features, std::size_t hidden) {
  const Index F = static_cast<Index>(features), H = static_cast<Index>(hidden);
  ModelParams p;
  p.features = features;
  p.hidden = hidden;
  p.init_w = MatrixXd::Zero(H, F);
  p.init_b = VectorXd::Zero(H);
  p.msg_w = MatrixXd::Zero(H, H);
  p.gru_wi = MatrixXd::Zero(3 * H, H);
  p.gru_wh = MatrixXd::Zero(3 * H, H);
  p.gru_bz = VectorXd::Zero(H);
  p.gru_br = VectorXd::Zero(H);
  p.edge_w1 = MatrixXd::Zero(H, 2 * H);
  p.edge_b1 = VectorXd::Zero(H);
  p.edge_w2 = Eigen::RowVectorXd::Zero(H);
  p.out_w1 = MatrixXd::Zero(H, H);
  p.out_b1 = VectorXd::Zero(H);
  p.out_w2 = Eigen::RowVectorXd::Zero(H);
  return p;
}

ModelParams ModelParams::random(std::size_t features, std::size_t hidden, std::uint64_t seed) {
  auto p = zeros(features, hidden);
  std::mt19937_64 rng(seed);
  auto glorot = [&](auto& m) {
    double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) m(i, j) = dist(rng);
  };
  glorot(p.init_w);
  glorot(p.msg_w);
  glorot(p.gru_wi);
  glorot(p.gru_wh);
  glorot(p.edge_w1);
  glorot(p.edge_w2);
  glorot(p.out_w1);
  glorot(p.out_w2);
  return p;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for_each_block(*this, [&](const auto& b) { visit_entries(b, [&](double) { ++n; }); });
  return n;
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for_each_block(*this, [&](const auto& b) { visit_entries(b, [&](double v) { out.push_back(v); }); });
  return out;
}

void ModelParams::assign(const std::vector<double>& values) {
  if (values.size() != parameter_count()) throw UsageError("parameter vector has the wrong length");
  std::size_t i = 0;
  for_each_block(*this, [&](auto& b) { visit_entries(b, [&](double& v) { v = values[i++]; }); });
}

void write_params(std::ostream& out, const ModelParams& params) {
  static_assert(std::endian::native == std::endian::little, "checkpoint writer assumes a little-endian host");
  out << "fpnc-gnn 1 " << params.features << ' ' << params.hidden << '\n';
  auto values = params.flatten();
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed to write model parameters");
}

ModelParams read_params(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw UsageError("missing checkpoint header");
  std::istringstream hs(header);
  std::string magic;
  int version = 0;
  std::size_t f = 0, h = 0;
  if (!(hs >> magic >> version >> f >> h) || magic != "fpnc-gnn" || version != 1 || f == 0 || h == 0)
    throw UsageError("unrecognised checkpoint header: " + header);
  auto params = ModelParams::zeros(f, h);
  std::vector<double> values(params.parameter_count());
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw UsageError("truncated checkpoint");
  params.assign(values);
  return params;
}

void save_params(const std::string& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open " + path + " for writing");
  write_params(out, params);
}

ModelParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open checkpoint " + path);
  return read_params(in);
}

PolicyOutput forward(const AnalysisGraph& g, const ModelParams& params, std::optional<std::size_t> iterations) {
  return policy_from(g, params, embeddings(g, params, iterations));
}

Eigen::MatrixXd embeddings(const AnalysisGraph& g, const ModelParams& params, std::optional<std::size_t> iterations) {
  return run(g, params, resolve_iterations(g, iterations), directed_edges(g)).final_h;
}

double log_probability(const PolicyOutput& policy, const std::vector<std::size_t>& actions) {
  if (actions.size() != policy.probabilities.size()) throw UsageError("one action per flow group expected");
  double sum = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) sum += std::log(policy.probabilities[i].at(actions[i]));
  return sum;
}

GradientSet backward(const AnalysisGraph& g, const ModelParams& p, const std::vector<std::size_t>& actions, double weight,
                     std::optional<std::size_t> iterations) {
  if (actions.size() != g.groups.size()) throw UsageError("one action per flow group expected");
  const Index H = static_cast<Index>(p.hidden);
  const Index N = static_cast<Index>(g.node_count());
  const auto d = directed_edges(g);
  const Index E = static_cast<Index>(d.src.size());
  const auto trace = run(g, p, resolve_iterations(g, iterations), d);
  const auto policy = policy_from(g, p, trace.final_h);

  auto grad = ModelParams::zeros(p.features, p.hidden);
  MatrixXd dh = MatrixXd::Zero(H, N);

  // Readout and per-group softmax.
  for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
    const auto& group = g.groups[gi];
    if (actions[gi] >= group.nodes.size()) throw UsageError("action out of range");
    for (std::size_t j = 0; j < group.nodes.size(); ++j) {
      double ds = weight * ((j == actions[gi] ? 1.0 : 0.0) - policy.probabilities[gi][j]);
      if (ds == 0) continue;
      const Index v = static_cast<Index>(group.nodes[j]);
      VectorXd q = p.out_w1 * trace.final_h.col(v) + p.out_b1;
      VectorXd act = q.cwiseMax(0.0);
      grad.out_w2 += ds * act.transpose();
      grad.out_b2 += ds;
      VectorXd dq = (ds * p.out_w2.transpose()).cwiseProduct((q.array() > 0).cast<double>().matrix());
      grad.out_w1 += dq * trace.final_h.col(v).transpose();
      grad.out_b1 += dq;
      dh.col(v) += p.out_w1.transpose() * dq;
    }
  }

  for (auto it = trace.rounds.rbegin(); it != trace.rounds.rend(); ++it) {
    const Round& rd = *it;
    MatrixXd dz = dh.cwiseProduct(rd.h - rd.n);
    MatrixXd dn = dh.cwiseProduct(MatrixXd::Ones(H, N) - rd.z);
    MatrixXd dprev = dh.cwiseProduct(rd.z);

    MatrixXd dn_pre = dn.cwiseProduct((1.0 - rd.n.array().square()).matrix());
    MatrixXd dr = dn_pre.cwiseProduct(rd.c.bottomRows(H));
    MatrixXd dr_pre = dr.cwiseProduct(rd.r.cwiseProduct(MatrixXd::Ones(H, N) - rd.r));
    MatrixXd dz_pre = dz.cwiseProduct(rd.z.cwiseProduct(MatrixXd::Ones(H, N) - rd.z));

    MatrixXd da(3 * H, N), dc(3 * H, N);
    da << dz_pre, dr_pre, dn_pre;
    dc << dz_pre, dr_pre, dn_pre.cwiseProduct(rd.r);
    grad.gru_bz += dz_pre.rowwise().sum();
    grad.gru_br += dr_pre.rowwise().sum();
    grad.gru_wi += da * rd.x.transpose();
    grad.gru_wh += dc * rd.h.transpose();
    MatrixXd dx = p.gru_wi.transpose() * da;
    dprev += p.gru_wh.transpose() * dc;

    MatrixXd dm = MatrixXd::Zero(H, N);
    for (Index e = 0; e < E; ++e) {
      const Index u = d.src[e], v = d.dst[e];
      dm.col(u) += rd.lambda(e) * dx.col(v);
      double dlambda = dx.col(v).dot(rd.m.col(u));
      double ds = dlambda * rd.lambda(e) * (1 - rd.lambda(e));
      if (ds == 0) continue;
      VectorXd pre = rd.edge_pre.col(e);
      VectorXd act = pre.cwiseMax(0.0);
      grad.edge_w2 += ds * act.transpose();
      grad.edge_b2 += ds;
      VectorXd dpre = (ds * p.edge_w2.transpose()).cwiseProduct((pre.array() > 0).cast<double>().matrix());
      grad.edge_w1.leftCols(H) += dpre * rd.h.col(u).transpose();
      grad.edge_w1.rightCols(H) += dpre * rd.h.col(v).transpose();
      grad.edge_b1 += dpre;
      dprev.col(u) += p.edge_w1.leftCols(H).transpose() * dpre;
      dprev.col(v) += p.edge_w1.rightCols(H).transpose() * dpre;
    }
    grad.msg_w += dm * rd.h.transpose();
    dprev += p.msg_w.transpose() * dm;
    dh = std::move(dprev);
  }

  grad.init_w += dh * g.features.transpose();
  grad.init_b += dh.rowwise().sum();
  return grad;
}

void add_scaled(ModelParams& params, const GradientSet& grad, double scale) {
  auto values = params.flatten();
  auto g = grad.flatten();
  if (values.size() != g.size()) throw UsageError("gradient shape mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += scale * g[i];
  params.assign(values);
}

bool all_finite(const GradientSet& grad) {
  for (double v : grad.flatten())
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace fpnc
