#pragma once

// Forward-only, small-matrix version of the cross-modal appraisal fusion
// network: temporal convolution, sinusoidal positions, cross-modal
// attention, residual concatenation, a CLS-token encoder block, the fused
// linear head and the multi-task loss. Rows are time steps.

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cognipleasure::fusion {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Mask = std::vector<bool>;

enum class Modality { Audio, Visual, Text };
/// Loss heads: one per modality plus the fused head.
enum class Head { Audio, Visual, Text, Fused };

std::string_view to_string(Modality m);
std::string_view to_string(Head h);

inline constexpr int kNumOutputs = 7;

struct ModalitySequence {
  Modality modality;
  Matrix features;  // T x d_in
  Mask mask;        // length T, at least one true

  /// Throws InvalidArgument on an empty sequence or an unusable mask.
  void validate() const;
};

/// Same-length temporal convolution: `taps` holds k (odd) matrices of shape
/// d_in x d_out, centred on the current step, zero-padded at both ends.
struct Conv1dKernel {
  std::vector<Matrix> taps;
  Vector bias;  // d_out, may be empty for no bias

  int size() const { return static_cast<int>(taps.size()); }
  Eigen::Index in_width() const { return taps.front().rows(); }
  Eigen::Index out_width() const { return taps.front().cols(); }
};

Matrix temporal_conv1d(const Matrix& sequence, const Conv1dKernel& kernel);

/// T x d sinusoidal position table: column 2i holds sin(pos / 10000^(2i/d)),
/// column 2i+1 the matching cosine. d must be even.
Matrix sinusoidal_pe(Eigen::Index length, Eigen::Index width);

struct AttentionProjections {
  Matrix w_q;  // d_in x d_k
  Matrix w_k;  // d_in x d_k
  Matrix w_v;  // d_in x d_v
};

struct AttentionResult {
  Matrix output;   // T_q x d_v
  Matrix weights;  // T_q x T_kv, rows sum to 1, masked columns exactly 0
};

/// softmax(Q K^T / sqrt(d_k)) V with Q from `query_source` and K, V from
/// `kv_source`. Keys whose mask entry is false get zero weight. Throws
/// InvalidArgument when no key is unmasked.
AttentionResult cross_attention(const Matrix& query_source, const Matrix& kv_source,
                                const Mask& kv_mask, const AttentionProjections& proj);

/// [original | attended] along the feature axis.
Matrix residual_concat(const Matrix& original, const Matrix& attended);

/// Row-wise layer normalization with learned gain and shift.
Matrix layer_norm(const Matrix& x, const Vector& gain, const Vector& shift, double eps = 1e-5);

struct EncoderParams {
  int heads = 4;
  Vector cls;                 // d_model
  Matrix w_q, w_k, w_v, w_o;  // d_model x d_model
  Matrix w_ff1;               // d_model x d_ff
  Vector b_ff1;               // d_ff
  Matrix w_ff2;               // d_ff x d_model
  Vector b_ff2;               // d_model
  Vector ln1_gain, ln1_shift, ln2_gain, ln2_shift;

  Eigen::Index model_width() const { return cls.size(); }
  void validate() const;
};

/// Multi-head self-attention over `x` with a key mask.
Matrix multi_head_self_attention(const Matrix& x, const Mask& mask, const EncoderParams& p);

/// Prepends the CLS token, runs one pre-norm encoder block (self-attention
/// then ReLU feed-forward, each with a residual) and returns the CLS row.
/// The CLS position is always attendable, so a fully masked sequence is
/// allowed.
Vector encode_with_cls(const Matrix& sequence, const Mask& mask, const EncoderParams& p);

struct LinearHead {
  Matrix weight;  // outputs x inputs
  Vector bias;    // outputs
};

/// Concatenates CLS vectors in the given (audio, visual, text) order and
/// applies the head. Throws InvalidArgument on a width mismatch.
Vector fuse_and_head(const std::vector<Vector>& cls_vectors, const LinearHead& head);

double mean_absolute_error(const Vector& pred, const Vector& target);

/// Loss weights per head; a head with no prediction contributes nothing.
struct LossWeights {
  double audio = 1.0;
  double visual = 1.0;
  double text = 1.0;
  double fused = 1.0;

  double of(Head h) const;
  void validate() const;
};

/// sum over heads of weight * MAE(prediction, target).
double multitask_loss(const std::map<Head, Vector>& predictions, const Vector& target,
                      const LossWeights& weights);

// ---------------------------------------------------------------------------
// Whole toy model

struct ModalityParams {
  Conv1dKernel conv;            // d_in -> d
  AttentionProjections cross;   // d -> d
  EncoderParams encoder;        // d_model = 2d
  LinearHead unimodal_head;     // d -> 7 on the masked mean of the conv output
};

struct FusionParams {
  std::map<Modality, ModalityParams> modalities;
  LinearHead fused_head;  // (#modalities * 2d) -> 7
  LossWeights loss_weights;

  /// Small random parameters (uniform, scaled by fan-in) for the given
  /// modalities and input widths. Reproducible for a seed.
  static FusionParams random(const std::map<Modality, Eigen::Index>& input_widths,
                             Eigen::Index width, int heads, std::uint64_t seed);
};

struct ModalityTrace {
  Matrix convolved;       // T x d, with positions added
  AttentionResult cross;  // queries from this modality, keys from the others
  Matrix concatenated;    // T x 2d
  Vector cls;             // 2d
  Vector unimodal;        // 7
};

struct FusionOutput {
  std::map<Modality, ModalityTrace> traces;
  Vector fused_input;  // #modalities * 2d
  Vector fused;        // 7
};

/// Each modality queries the time-concatenation of the other modalities.
/// Needs at least two modalities.
FusionOutput forward(const std::vector<ModalitySequence>& inputs, const FusionParams& params);

}  // namespace cognipleasure::fusion
