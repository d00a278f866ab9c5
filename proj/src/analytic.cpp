#include "acil/analytic.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>

#include <boost/crc.hpp>

#include "acil/error.hpp"
#include "byte_io.hpp"

namespace acil {

namespace {

constexpr std::string_view kStateMagic = "ACILSTAT";
constexpr std::uint32_t kStateVersion = 1;

using DenseMatrix = Eigen::MatrixXd;

std::string condition_estimate(const DenseMatrix& a) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().size() == 0) return "unavailable";
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  std::ostringstream os;
  os << "eigenvalues in [" << lo << ", " << hi << "], condition ~ " << (lo > 0 ? hi / lo : INFINITY);
  return os.str();
}

Eigen::LLT<DenseMatrix> factor_spd(const DenseMatrix& a, const char* what) {
  Eigen::LLT<DenseMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + ": Cholesky factorization failed (" + condition_estimate(a) + ")");
  }
  return llt;
}

void symmetrize(Matrix& m) { m = (0.5 * (m + m.transpose())).eval(); }

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + " contains non-finite values");
}

// One exact recursive step on a block of rows with targets laid out over the
// full (already widened) class registry. New-class columns of W enter as
// zero, so W + R_k X^T (Y - X W) is the block update of the old and new
// columns at once.
void absorb_rows(Matrix& weights, Matrix& autocorrelation, const Eigen::Ref<const Matrix>& x,
                 const Eigen::Ref<const Matrix>& y) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n == 0) return;

  Matrix updated;
  if (n <= d) {
    // Woodbury form: only an n x n system is factored.
    const Matrix rxt = autocorrelation * x.transpose();  // d x n, equals (X R)^T
    DenseMatrix inner = DenseMatrix::Identity(n, n) + x * rxt;
    inner = 0.5 * (inner + inner.transpose());
    const auto llt = factor_spd(inner, "phase update inner system (I + X R X^T)");
    const DenseMatrix gain = llt.solve(DenseMatrix(rxt.transpose()));  // n x d
    updated = autocorrelation - rxt * gain;
  } else {
    // More rows than features: invert the d x d information matrix directly.
    const auto prev = factor_spd(DenseMatrix(autocorrelation), "autocorrelation matrix R");
    DenseMatrix information = prev.solve(DenseMatrix::Identity(d, d));
    information.noalias() += x.transpose() * x;
    information = 0.5 * (information + information.transpose());
    const auto llt = factor_spd(information, "phase update information matrix (R^-1 + X^T X)");
    updated = llt.solve(DenseMatrix::Identity(d, d));
  }
  symmetrize(updated);

  const Matrix residual = y - x * weights;
  weights.noalias() += updated * (x.transpose() * residual);
  autocorrelation = std::move(updated);
}

}  // namespace

AnalyticState::AnalyticState(Matrix weights, Matrix autocorrelation, ClassList class_registry, double gamma,
                             std::size_t phase_count)
    : weights_(std::move(weights)),
      autocorrelation_(std::move(autocorrelation)),
      registry_(std::move(class_registry)),
      gamma_(gamma),
      phase_count_(phase_count) {
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) throw ValidationError("gamma must be a positive finite number");
  if (autocorrelation_.rows() != autocorrelation_.cols() || autocorrelation_.rows() < 1) {
    throw ValidationError("autocorrelation matrix must be square and non-empty");
  }
  if (weights_.rows() != autocorrelation_.rows()) {
    throw ValidationError("weight rows (" + std::to_string(weights_.rows()) + ") do not match d_fe (" +
                          std::to_string(autocorrelation_.rows()) + ")");
  }
  if (weights_.cols() != static_cast<Eigen::Index>(registry_.size())) {
    throw ValidationError("weight columns do not match the class registry length");
  }
  if (std::set<ClassId>(registry_.begin(), registry_.end()).size() != registry_.size()) {
    throw ValidationError("class registry contains duplicate ids");
  }
  require_finite(weights_, "weight matrix");
  require_finite(autocorrelation_, "autocorrelation matrix");
}

AnalyticState fit_base(const Matrix& features, const Matrix& onehot, const ClassList& class_ids, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be a positive finite number");
  if (features.rows() < 1) throw ValidationError("base phase needs at least one sample");
  if (features.cols() < 1) throw ValidationError("base phase features have no columns");
  if (onehot.rows() != features.rows()) throw ValidationError("row-count mismatch between features and labels");
  if (onehot.cols() != static_cast<Eigen::Index>(class_ids.size())) {
    throw ValidationError("label columns do not match the number of class ids");
  }
  require_finite(features, "base features");
  require_finite(onehot, "base labels");

  const Eigen::Index d = features.cols();
  DenseMatrix gram = features.transpose() * features;
  gram.diagonal().array() += gamma;
  const auto llt = factor_spd(gram, "base Gram matrix (X^T X + gamma I)");

  Matrix weights = llt.solve(DenseMatrix(features.transpose() * onehot));
  Matrix autocorrelation = llt.solve(DenseMatrix::Identity(d, d));
  symmetrize(autocorrelation);
  return AnalyticState(std::move(weights), std::move(autocorrelation), class_ids, gamma, 0);
}

AnalyticState update_phase(const AnalyticState& state, const PhaseUpdate& update, const UpdateOptions& options) {
  const Eigen::Index d = state.expanded_dim();
  const Eigen::Index n = update.features.rows();
  const auto new_classes = static_cast<Eigen::Index>(update.class_ids.size());
  if (update.features.cols() != d) {
    throw ValidationError("phase features have " + std::to_string(update.features.cols()) +
                          " columns, state expects d_fe=" + std::to_string(d));
  }
  if (update.onehot.rows() != n || update.onehot.cols() != new_classes) {
    throw ValidationError("phase labels must be " + std::to_string(n) + " x " + std::to_string(new_classes));
  }
  if (options.chunk_size < 1) throw ValidationError("chunk size must be positive");
  std::set<ClassId> known(state.class_registry().begin(), state.class_registry().end());
  for (auto c : update.class_ids) {
    if (!known.insert(c).second) {
      throw ValidationError("class " + std::to_string(c) + " overlaps a previously learned class");
    }
  }
  require_finite(update.features, "phase features");
  require_finite(update.onehot, "phase labels");

  const Eigen::Index old_classes = state.class_count();
  Matrix weights(d, old_classes + new_classes);
  weights.leftCols(old_classes) = state.weights();
  weights.rightCols(new_classes).setZero();
  Matrix autocorrelation = state.autocorrelation();

  Matrix targets = Matrix::Zero(n, old_classes + new_classes);
  targets.rightCols(new_classes) = update.onehot;

  for (Eigen::Index start = 0; start < n; start += options.chunk_size) {
    const Eigen::Index rows = std::min(options.chunk_size, n - start);
    absorb_rows(weights, autocorrelation, update.features.middleRows(start, rows), targets.middleRows(start, rows));
  }

  ClassList registry = state.class_registry();
  registry.insert(registry.end(), update.class_ids.begin(), update.class_ids.end());
  return AnalyticState(std::move(weights), std::move(autocorrelation), std::move(registry), state.gamma(),
                       state.phase_count() + 1);
}

std::vector<Eigen::Index> argmax_rows(const Matrix& scores) {
  std::vector<Eigen::Index> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < scores.cols(); ++j) {
      if (scores(i, j) > scores(i, best)) best = j;
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

Prediction predict(const AnalyticState& state, const Matrix& features) {
  if (features.cols() != state.expanded_dim()) {
    throw ValidationError("predict: dimension mismatch, expected " + std::to_string(state.expanded_dim()) +
                          " columns but got " + std::to_string(features.cols()));
  }
  if (state.class_count() == 0) throw ValidationError("predict: state has no classes");
  Prediction p;
  p.scores = features * state.weights();
  const auto cols = argmax_rows(p.scores);
  p.classes.reserve(cols.size());
  for (auto c : cols) p.classes.push_back(state.class_registry()[static_cast<std::size_t>(c)]);
  return p;
}

std::uint64_t crc64(std::span<const std::uint8_t> bytes) {
  boost::crc_optimal<64, 0x42F0E1EBA9EA3693ULL, ~0ULL, ~0ULL, true, true> crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::vector<std::uint8_t> save_state(const AnalyticState& state) {
  detail::ByteWriter w;
  w.bytes(kStateMagic);
  w.put<std::uint32_t>(kStateVersion);
  w.put<double>(state.gamma());
  w.put<std::uint32_t>(static_cast<std::uint32_t>(state.expanded_dim()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(state.class_count()));
  for (auto c : state.class_registry()) w.put<std::uint32_t>(c);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(state.phase_count()));
  for (const Matrix* m : {&state.weights(), &state.autocorrelation()}) {
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      for (Eigen::Index j = 0; j < m->cols(); ++j) w.put<double>((*m)(i, j));
    }
  }
  const auto checksum = crc64(w.buffer());
  w.put<std::uint64_t>(checksum);
  return std::move(w.buffer());
}

AnalyticState load_state(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kStateMagic.size() + sizeof(std::uint64_t)) {
    throw FormatError("state: checksum error (payload too short)");
  }
  const auto body = bytes.first(bytes.size() - sizeof(std::uint64_t));
  detail::ByteReader trailer(bytes.last(sizeof(std::uint64_t)), "state");
  if (trailer.get<std::uint64_t>() != crc64(body)) throw FormatError("state: checksum error (corrupt or truncated)");

  detail::ByteReader r(body, "state");
  if (r.bytes(kStateMagic.size()) != kStateMagic) throw FormatError("state: bad magic");
  const auto version = r.get<std::uint32_t>();
  if (version != kStateVersion) {
    throw FormatError("state: version mismatch (file " + std::to_string(version) + ", supported " +
                      std::to_string(kStateVersion) + ")");
  }
  const auto gamma = r.get<double>();
  const auto d = static_cast<Eigen::Index>(r.get<std::uint32_t>());
  const auto classes = static_cast<Eigen::Index>(r.get<std::uint32_t>());
  ClassList registry;
  registry.reserve(static_cast<std::size_t>(classes));
  for (Eigen::Index c = 0; c < classes; ++c) registry.push_back(r.get<std::uint32_t>());
  const auto phases = r.get<std::uint32_t>();
  const auto expected = static_cast<std::size_t>(d) * static_cast<std::size_t>(classes + d) * sizeof(double);
  if (r.remaining() != expected) throw FormatError("state: payload size does not match header");
  Matrix weights(d, classes);
  Matrix autocorrelation(d, d);
  for (Matrix* m : {&weights, &autocorrelation}) {
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      for (Eigen::Index j = 0; j < m->cols(); ++j) (*m)(i, j) = r.get<double>();
    }
  }
  return AnalyticState(std::move(weights), std::move(autocorrelation), std::move(registry), gamma, phases);
}

void save_state_file(const AnalyticState& state, const std::filesystem::path& path) {
  const auto bytes = save_state(state);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write state file '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

AnalyticState load_state_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open state file '" + path.string() + "'");
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return load_state(bytes);
}

}  // namespace acil
