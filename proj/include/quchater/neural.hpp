#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "quchater/errors.hpp"
#include "quchater/rng.hpp"

namespace quchater {

/// Time-major sequence: seq[t] is the feature vector at step t.
using Seq = std::vector<std::vector<double>>;

struct Tensor {
    std::vector<double> data;
    std::vector<std::size_t> shape;
    std::vector<double> grad;
    bool trainable = true;

    std::size_t size() const { return data.size(); }
    double& at(std::size_t i, std::size_t j) { return data[i * shape[1] + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * shape[1] + j]; }
    double& g(std::size_t i, std::size_t j) { return grad[i * shape[1] + j]; }
};

/// Insertion-ordered named parameter set; the order fixes both the
/// checkpoint layout and the seeded initialization sequence. Storage is a
/// deque so Tensor addresses stay valid while parameters are added.
class ParamStore {
public:
    Tensor& add(const std::string& name, std::vector<std::size_t> shape);
    Tensor& at(const std::string& name);
    const Tensor& at(const std::string& name) const;
    bool contains(const std::string& name) const;

    void zero_grad();
    std::size_t param_count(bool trainable_only = true) const;

    std::deque<std::pair<std::string, Tensor>>& items() { return items_; }
    const std::deque<std::pair<std::string, Tensor>>& items() const { return items_; }

private:
    std::deque<std::pair<std::string, Tensor>> items_;
};

/// Uniform init in +-1/sqrt(fan_in); biases stay zero.
void init_uniform(Tensor& t, double bound, Rng& rng);

// --- activations -----------------------------------------------------------

/// Overflow-safe logistic function.
double stable_sigmoid(double z);

// --- optimizer ---------------------------------------------------------------

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step_count = 0;
    std::vector<std::vector<double>> first_moment;
    std::vector<std::vector<double>> second_moment;

    void init_like(const ParamStore& store);
};

/// Bias-corrected Adam step over every trainable tensor; gradients are read
/// from Tensor::grad and left untouched.
void adam_update(ParamStore& store, AdamState& state);

// --- losses ------------------------------------------------------------------

struct BceResult {
    double loss = 0.0;
    std::vector<double> grad; // dLoss/dpred
};

/// Mean binary cross-entropy with predictions clamped to [eps, 1-eps],
/// eps = 1e-7. Gradient is (p - y) / (p (1 - p)) / N at the clamped value.
BceResult bce_loss(const std::vector<double>& pred, const std::vector<double>& target);

// --- linear ------------------------------------------------------------------

std::vector<double> linear_forward(const Tensor& W, const Tensor& b,
                                   const std::vector<double>& x);

/// Accumulates dW, db into grads and returns dx.
std::vector<double> linear_backward(Tensor& W, Tensor& b, const std::vector<double>& x,
                                    const std::vector<double>& dy);

// --- recurrent cells -----------------------------------------------------------

struct LstmCache {
    std::vector<double> x, h_prev, c_prev;
    std::vector<double> i, f, o, g, c, tanh_c;
};

/// Views into the per-gate weight tensors of one LSTM cell.
struct LstmCell {
    Tensor *W_i, *U_i, *b_i;
    Tensor *W_f, *U_f, *b_f;
    Tensor *W_o, *U_o, *b_o;
    Tensor *W_c, *U_c, *b_c;
    std::size_t in_dim = 0, hidden = 0;

    static LstmCell create(ParamStore& ps, const std::string& prefix,
                           std::size_t in_dim, std::size_t hidden, Rng& rng);
    static LstmCell view(ParamStore& ps, const std::string& prefix,
                         std::size_t in_dim, std::size_t hidden);

    void forward(const std::vector<double>& x, const std::vector<double>& h_prev,
                 const std::vector<double>& c_prev, std::vector<double>& h_out,
                 std::vector<double>& c_out, LstmCache* cache) const;

    /// Backward for one step; accumulates weight grads, adds the input
    /// gradient into dx and writes the carried state gradients.
    void backward(const LstmCache& cache, const std::vector<double>& dh,
                  const std::vector<double>& dc, std::vector<double>& dx,
                  std::vector<double>& dh_prev, std::vector<double>& dc_prev) const;
};

struct GruCache {
    std::vector<double> x, h_prev;
    std::vector<double> z, r, rh, g;
};

/// Update/reset-gate GRU: h = z * h_prev + (1 - z) * tanh(W x + U (r*h_prev) + b).
struct GruCell {
    Tensor *W_z, *U_z, *b_z;
    Tensor *W_r, *U_r, *b_r;
    Tensor *W_h, *U_h, *b_h;
    std::size_t in_dim = 0, hidden = 0;

    static GruCell create(ParamStore& ps, const std::string& prefix,
                          std::size_t in_dim, std::size_t hidden, Rng& rng);
    static GruCell view(ParamStore& ps, const std::string& prefix,
                        std::size_t in_dim, std::size_t hidden);

    void forward(const std::vector<double>& x, const std::vector<double>& h_prev,
                 std::vector<double>& h_out, GruCache* cache) const;
    void backward(const GruCache& cache, const std::vector<double>& dh,
                  std::vector<double>& dx, std::vector<double>& dh_prev) const;
};

struct RnnCache {
    std::vector<double> x, h_prev, h;
};

/// Vanilla tanh recurrence: h = tanh(W x + U h_prev + b).
struct RnnCell {
    Tensor *W, *U, *b;
    std::size_t in_dim = 0, hidden = 0;

    static RnnCell create(ParamStore& ps, const std::string& prefix,
                          std::size_t in_dim, std::size_t hidden, Rng& rng);
    static RnnCell view(ParamStore& ps, const std::string& prefix,
                        std::size_t in_dim, std::size_t hidden);

    void forward(const std::vector<double>& x, const std::vector<double>& h_prev,
                 std::vector<double>& h_out, RnnCache* cache) const;
    void backward(const RnnCache& cache, const std::vector<double>& dh,
                  std::vector<double>& dx, std::vector<double>& dh_prev) const;
};

// --- temporal convolution --------------------------------------------------------

struct TcnCache {
    Seq input;
    Seq pre_activation;
};

/// Dilated causal 1-D convolution: out[t] = act(b + sum_i W_i . in[t - d*i]),
/// inputs before t = 0 read as zero. `relu` off gives the linear debug mode.
Seq tcn_layer_forward(const Tensor& W, const Tensor& b, const Seq& input,
                      std::size_t dilation, bool relu, TcnCache* cache);

/// Backward pass; accumulates weight grads and returns the input gradient.
Seq tcn_layer_backward(Tensor& W, Tensor& b, const TcnCache& cache,
                       const Seq& d_output, std::size_t dilation, bool relu);

// --- pooling (for the 1D-CNN baseline) ----------------------------------------

struct PoolCache {
    std::vector<std::vector<std::size_t>> argmax; // [t_out][channel] -> t_in
    std::size_t in_len = 0;
};

/// Width-2 stride-2 max pooling; an odd tail keeps its single element.
Seq maxpool2_forward(const Seq& input, PoolCache* cache);
Seq maxpool2_backward(const PoolCache& cache, const Seq& d_output, std::size_t channels);

} // namespace quchater
