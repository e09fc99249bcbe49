#include "cognipleasure/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cognipleasure/error.hpp"

namespace cognipleasure::fusion {

namespace {

std::size_t count_true(const Mask& m) {
  return static_cast<std::size_t>(std::count(m.begin(), m.end(), true));
}

// Row-wise masked softmax of `scores`; masked columns get exactly zero.
Matrix masked_softmax(const Matrix& scores, const Mask& mask) {
  Matrix w = Matrix::Zero(scores.rows(), scores.cols());
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < scores.cols(); ++c) {
      if (mask[static_cast<std::size_t>(c)]) mx = std::max(mx, scores(r, c));
    }
    double sum = 0.0;
    for (Eigen::Index c = 0; c < scores.cols(); ++c) {
      if (!mask[static_cast<std::size_t>(c)]) continue;
      w(r, c) = std::exp(scores(r, c) - mx);
      sum += w(r, c);
    }
    w.row(r) /= sum;
  }
  return w;
}

AttentionResult attend(const Matrix& q, const Matrix& k, const Matrix& v, const Mask& mask) {
  if (static_cast<std::size_t>(k.rows()) != mask.size()) {
    throw InvalidArgument("attention mask length does not match the key sequence");
  }
  if (count_true(mask) == 0) throw InvalidArgument("attention needs at least one unmasked key");
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  AttentionResult r;
  r.weights = masked_softmax((q * k.transpose()) * scale, mask);
  r.output = r.weights * v;
  return r;
}

Matrix relu(Matrix x) { return x.cwiseMax(0.0); }

Matrix add_row_bias(Matrix x, const Vector& b) {
  if (b.size() == 0) return x;
  x.rowwise() += b.transpose();
  return x;
}

Matrix uniform(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  }
  return m;
}

Vector uniform_vec(std::mt19937_64& rng, Eigen::Index n, double scale) {
  return uniform(rng, n, 1, scale).col(0);
}

EncoderParams random_encoder(std::mt19937_64& rng, Eigen::Index d_model, int heads) {
  const double s = 1.0 / std::sqrt(static_cast<double>(d_model));
  const Eigen::Index d_ff = 2 * d_model;
  EncoderParams p;
  p.heads = heads;
  p.cls = uniform_vec(rng, d_model, 1.0);
  p.w_q = uniform(rng, d_model, d_model, s);
  p.w_k = uniform(rng, d_model, d_model, s);
  p.w_v = uniform(rng, d_model, d_model, s);
  p.w_o = uniform(rng, d_model, d_model, s);
  p.w_ff1 = uniform(rng, d_model, d_ff, s);
  p.b_ff1 = uniform_vec(rng, d_ff, s);
  p.w_ff2 = uniform(rng, d_ff, d_model, 1.0 / std::sqrt(static_cast<double>(d_ff)));
  p.b_ff2 = uniform_vec(rng, d_model, s);
  p.ln1_gain = Vector::Ones(d_model);
  p.ln1_shift = Vector::Zero(d_model);
  p.ln2_gain = Vector::Ones(d_model);
  p.ln2_shift = Vector::Zero(d_model);
  return p;
}

}  // namespace

std::string_view to_string(Modality m) {
  switch (m) {
    case Modality::Audio: return "audio";
    case Modality::Visual: return "visual";
    case Modality::Text: return "text";
  }
  return "?";
}

std::string_view to_string(Head h) {
  switch (h) {
    case Head::Audio: return "audio";
    case Head::Visual: return "visual";
    case Head::Text: return "text";
    case Head::Fused: return "fused";
  }
  return "?";
}

void ModalitySequence::validate() const {
  if (features.rows() < 1) throw InvalidArgument("modality sequence must have at least one step");
  if (static_cast<Eigen::Index>(mask.size()) != features.rows()) {
    throw InvalidArgument("mask length does not match the sequence length");
  }
  if (count_true(mask) == 0) throw InvalidArgument("mask must keep at least one step");
}

Matrix temporal_conv1d(const Matrix& sequence, const Conv1dKernel& kernel) {
  if (kernel.taps.empty() || kernel.size() % 2 == 0) {
    throw InvalidArgument("convolution kernel size must be odd");
  }
  if (sequence.cols() != kernel.in_width()) {
    throw InvalidArgument("convolution input width does not match the kernel");
  }
  const Eigen::Index t_len = sequence.rows();
  const int half = kernel.size() / 2;
  Matrix out = Matrix::Zero(t_len, kernel.out_width());
  for (int j = 0; j < kernel.size(); ++j) {
    const int shift = j - half;
    for (Eigen::Index t = 0; t < t_len; ++t) {
      const Eigen::Index src = t + shift;
      if (src < 0 || src >= t_len) continue;
      out.row(t) += sequence.row(src) * kernel.taps[static_cast<std::size_t>(j)];
    }
  }
  return add_row_bias(std::move(out), kernel.bias);
}

Matrix sinusoidal_pe(Eigen::Index length, Eigen::Index width) {
  if (width <= 0 || width % 2 != 0) throw InvalidArgument("position width must be even");
  Matrix pe(length, width);
  for (Eigen::Index pos = 0; pos < length; ++pos) {
    for (Eigen::Index i = 0; i < width; i += 2) {
      const double freq = std::pow(10000.0, static_cast<double>(i) / static_cast<double>(width));
      pe(pos, i) = std::sin(static_cast<double>(pos) / freq);
      pe(pos, i + 1) = std::cos(static_cast<double>(pos) / freq);
    }
  }
  return pe;
}

AttentionResult cross_attention(const Matrix& query_source, const Matrix& kv_source,
                                const Mask& kv_mask, const AttentionProjections& proj) {
  if (query_source.cols() != proj.w_q.rows() || kv_source.cols() != proj.w_k.rows() ||
      kv_source.cols() != proj.w_v.rows() || proj.w_q.cols() != proj.w_k.cols()) {
    throw InvalidArgument("attention projection shapes do not match the inputs");
  }
  return attend(query_source * proj.w_q, kv_source * proj.w_k, kv_source * proj.w_v, kv_mask);
}

Matrix residual_concat(const Matrix& original, const Matrix& attended) {
  if (original.rows() != attended.rows()) {
    throw InvalidArgument("residual concatenation needs equal sequence lengths");
  }
  Matrix out(original.rows(), original.cols() + attended.cols());
  out << original, attended;
  return out;
}

Matrix layer_norm(const Matrix& x, const Vector& gain, const Vector& shift, double eps) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mean = x.row(r).mean();
    const double var = (x.row(r).array() - mean).square().mean();
    out.row(r) = ((x.row(r).array() - mean) / std::sqrt(var + eps)).matrix();
  }
  out = (out.array().rowwise() * gain.transpose().array()).matrix();
  out.rowwise() += shift.transpose();
  return out;
}

void EncoderParams::validate() const {
  const Eigen::Index d = model_width();
  if (heads < 1 || d % heads != 0) {
    throw InvalidArgument("model width must be divisible by the head count");
  }
  auto square = [d](const Matrix& m) { return m.rows() == d && m.cols() == d; };
  if (!square(w_q) || !square(w_k) || !square(w_v) || !square(w_o)) {
    throw InvalidArgument("encoder attention matrices must be d_model x d_model");
  }
  if (w_ff1.rows() != d || w_ff2.cols() != d || w_ff1.cols() != w_ff2.rows() ||
      b_ff1.size() != w_ff1.cols() || b_ff2.size() != d) {
    throw InvalidArgument("encoder feed-forward shapes are inconsistent");
  }
  if (ln1_gain.size() != d || ln1_shift.size() != d || ln2_gain.size() != d ||
      ln2_shift.size() != d) {
    throw InvalidArgument("encoder normalization parameters must have width d_model");
  }
}

Matrix multi_head_self_attention(const Matrix& x, const Mask& mask, const EncoderParams& p) {
  const Eigen::Index d = p.model_width();
  const Eigen::Index dh = d / p.heads;
  const Matrix q = x * p.w_q;
  const Matrix k = x * p.w_k;
  const Matrix v = x * p.w_v;
  Matrix joined(x.rows(), d);
  for (int h = 0; h < p.heads; ++h) {
    const Eigen::Index off = h * dh;
    joined.middleCols(off, dh) =
        attend(q.middleCols(off, dh), k.middleCols(off, dh), v.middleCols(off, dh), mask).output;
  }
  return joined * p.w_o;
}

Vector encode_with_cls(const Matrix& sequence, const Mask& mask, const EncoderParams& p) {
  p.validate();
  if (sequence.cols() != p.model_width()) {
    throw InvalidArgument("encoder input width " + std::to_string(sequence.cols()) +
                          " does not match d_model " + std::to_string(p.model_width()));
  }
  if (static_cast<Eigen::Index>(mask.size()) != sequence.rows()) {
    throw InvalidArgument("mask length does not match the sequence length");
  }
  Matrix x(sequence.rows() + 1, sequence.cols());
  x.row(0) = p.cls.transpose();
  x.bottomRows(sequence.rows()) = sequence;
  Mask full;
  full.reserve(mask.size() + 1);
  full.push_back(true);
  full.insert(full.end(), mask.begin(), mask.end());

  const Matrix x1 = x + multi_head_self_attention(layer_norm(x, p.ln1_gain, p.ln1_shift), full, p);
  const Matrix hidden = relu(add_row_bias(layer_norm(x1, p.ln2_gain, p.ln2_shift) * p.w_ff1, p.b_ff1));
  const Matrix x2 = x1 + add_row_bias(hidden * p.w_ff2, p.b_ff2);
  return x2.row(0).transpose();
}

Vector fuse_and_head(const std::vector<Vector>& cls_vectors, const LinearHead& head) {
  Eigen::Index width = 0;
  for (const auto& v : cls_vectors) width += v.size();
  if (head.weight.cols() != width) {
    throw InvalidArgument("fused width " + std::to_string(width) + " does not match head input " +
                          std::to_string(head.weight.cols()));
  }
  Vector fused(width);
  Eigen::Index off = 0;
  for (const auto& v : cls_vectors) {
    fused.segment(off, v.size()) = v;
    off += v.size();
  }
  Vector out = head.weight * fused;
  if (head.bias.size() != 0) out += head.bias;
  return out;
}

double mean_absolute_error(const Vector& pred, const Vector& target) {
  if (pred.size() != target.size() || pred.size() == 0) {
    throw InvalidArgument("MAE needs equal, non-empty vectors");
  }
  return (pred - target).cwiseAbs().mean();
}

double LossWeights::of(Head h) const {
  switch (h) {
    case Head::Audio: return audio;
    case Head::Visual: return visual;
    case Head::Text: return text;
    case Head::Fused: return fused;
  }
  return 0.0;
}

void LossWeights::validate() const {
  if (audio < 0 || visual < 0 || text < 0 || fused < 0) {
    throw InvalidArgument("loss weights must be non-negative");
  }
  if (audio + visual + text + fused == 0.0) {
    throw InvalidArgument("at least one loss weight must be positive");
  }
}

double multitask_loss(const std::map<Head, Vector>& predictions, const Vector& target,
                      const LossWeights& weights) {
  weights.validate();
  double loss = 0.0;
  for (const auto& [head, pred] : predictions) {
    loss += weights.of(head) * mean_absolute_error(pred, target);
  }
  return loss;
}

FusionParams FusionParams::random(const std::map<Modality, Eigen::Index>& input_widths,
                                  Eigen::Index width, int heads, std::uint64_t seed) {
  if (input_widths.size() < 2) throw InvalidArgument("fusion needs at least two modalities");
  if (width <= 0 || width % 2 != 0) throw InvalidArgument("fusion width must be even");
  std::mt19937_64 rng(seed);
  FusionParams p;
  const Eigen::Index d_model = 2 * width;
  for (const auto& [m, d_in] : input_widths) {
    ModalityParams mp;
    const int k = 3;
    const double s = 1.0 / std::sqrt(static_cast<double>(d_in * k));
    for (int j = 0; j < k; ++j) mp.conv.taps.push_back(uniform(rng, d_in, width, s));
    mp.conv.bias = Vector::Zero(width);
    const double sw = 1.0 / std::sqrt(static_cast<double>(width));
    mp.cross = {uniform(rng, width, width, sw), uniform(rng, width, width, sw),
                uniform(rng, width, width, sw)};
    mp.encoder = random_encoder(rng, d_model, heads);
    mp.unimodal_head = {uniform(rng, kNumOutputs, width, sw), Vector::Zero(kNumOutputs)};
    p.modalities.emplace(m, std::move(mp));
  }
  const Eigen::Index fused_width = d_model * static_cast<Eigen::Index>(input_widths.size());
  p.fused_head = {uniform(rng, kNumOutputs, fused_width,
                          1.0 / std::sqrt(static_cast<double>(fused_width))),
                  Vector::Zero(kNumOutputs)};
  return p;
}

FusionOutput forward(const std::vector<ModalitySequence>& inputs, const FusionParams& params) {
  if (inputs.size() < 2) throw InvalidArgument("fusion needs at least two modalities");
  std::map<Modality, const ModalitySequence*> by_modality;
  for (const auto& s : inputs) {
    s.validate();
    if (!by_modality.emplace(s.modality, &s).second) {
      throw InvalidArgument("duplicate modality " + std::string(to_string(s.modality)));
    }
    if (!params.modalities.count(s.modality)) {
      throw InvalidArgument("no parameters for modality " + std::string(to_string(s.modality)));
    }
  }

  FusionOutput out;
  std::map<Modality, Matrix> positioned;
  for (const auto& [m, seq] : by_modality) {
    const auto& mp = params.modalities.at(m);
    Matrix u = temporal_conv1d(seq->features, mp.conv);
    u += sinusoidal_pe(u.rows(), u.cols());
    positioned.emplace(m, std::move(u));
  }

  std::vector<Vector> cls_vectors;
  for (const auto& [m, seq] : by_modality) {
    const auto& mp = params.modalities.at(m);
    const Matrix& own = positioned.at(m);

    Eigen::Index rows = 0;
    for (const auto& [o, mat] : positioned) {
      if (o != m) rows += mat.rows();
    }
    Matrix others(rows, own.cols());
    Mask others_mask;
    Eigen::Index off = 0;
    for (const auto& [o, mat] : positioned) {
      if (o == m) continue;
      others.middleRows(off, mat.rows()) = mat;
      off += mat.rows();
      const auto& mk = by_modality.at(o)->mask;
      others_mask.insert(others_mask.end(), mk.begin(), mk.end());
    }

    ModalityTrace tr;
    tr.convolved = own;
    tr.cross = cross_attention(own, others, others_mask, mp.cross);
    tr.concatenated = residual_concat(own, tr.cross.output);
    tr.cls = encode_with_cls(tr.concatenated, seq->mask, mp.encoder);

    Vector pooled = Vector::Zero(own.cols());
    for (Eigen::Index t = 0; t < own.rows(); ++t) {
      if (seq->mask[static_cast<std::size_t>(t)]) pooled += own.row(t).transpose();
    }
    pooled /= static_cast<double>(count_true(seq->mask));
    tr.unimodal = mp.unimodal_head.weight * pooled + mp.unimodal_head.bias;

    cls_vectors.push_back(tr.cls);
    out.traces.emplace(m, std::move(tr));
  }

  out.fused = fuse_and_head(cls_vectors, params.fused_head);
  out.fused_input.resize(0);
  Eigen::Index width = 0;
  for (const auto& v : cls_vectors) width += v.size();
  out.fused_input.resize(width);
  Eigen::Index off = 0;
  for (const auto& v : cls_vectors) {
    out.fused_input.segment(off, v.size()) = v;
    off += v.size();
  }
  return out;
}

}  // namespace cognipleasure::fusion
