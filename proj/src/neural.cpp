#include "quchater/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace quchater {

namespace {

std::size_t shape_size(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

// y += W x + b for W (out x in)
void affine_accum(const Tensor& W, const Tensor& b, const std::vector<double>& x,
                  std::vector<double>& y) {
    const std::size_t out = W.shape[0], in = W.shape[1];
    for (std::size_t o = 0; o < out; ++o) {
        double acc = b.data[o];
        const double* row = &W.data[o * in];
        for (std::size_t i = 0; i < in; ++i) acc += row[i] * x[i];
        y[o] += acc;
    }
}

// dW += dy x^T, db += dy, dx += W^T dy
void affine_backward(Tensor& W, Tensor& b, const std::vector<double>& x,
                     const std::vector<double>& dy, std::vector<double>& dx) {
    const std::size_t out = W.shape[0], in = W.shape[1];
    for (std::size_t o = 0; o < out; ++o) {
        const double d = dy[o];
        b.grad[o] += d;
        double* grow = &W.grad[o * in];
        const double* row = &W.data[o * in];
        for (std::size_t i = 0; i < in; ++i) {
            grow[i] += d * x[i];
            dx[i] += row[i] * d;
        }
    }
}

Tensor& add_matrix(ParamStore& ps, const std::string& name, std::size_t out,
                   std::size_t in, Rng& rng) {
    Tensor& t = ps.add(name, {out, in});
    init_uniform(t, 1.0 / std::sqrt(static_cast<double>(in)), rng);
    return t;
}

Tensor& add_bias(ParamStore& ps, const std::string& name, std::size_t out) {
    return ps.add(name, {out}); // zeros
}

} // namespace

Tensor& ParamStore::add(const std::string& name, std::vector<std::size_t> shape) {
    if (contains(name)) throw std::invalid_argument("duplicate parameter name: " + name);
    Tensor t;
    t.shape = std::move(shape);
    t.data.assign(shape_size(t.shape), 0.0);
    t.grad.assign(t.data.size(), 0.0);
    items_.emplace_back(name, std::move(t));
    return items_.back().second;
}

Tensor& ParamStore::at(const std::string& name) {
    for (auto& [n, t] : items_)
        if (n == name) return t;
    throw std::invalid_argument("unknown parameter name: " + name);
}

const Tensor& ParamStore::at(const std::string& name) const {
    for (const auto& [n, t] : items_)
        if (n == name) return t;
    throw std::invalid_argument("unknown parameter name: " + name);
}

bool ParamStore::contains(const std::string& name) const {
    for (const auto& [n, t] : items_)
        if (n == name) return true;
    return false;
}

void ParamStore::zero_grad() {
    for (auto& [n, t] : items_) std::fill(t.grad.begin(), t.grad.end(), 0.0);
}

std::size_t ParamStore::param_count(bool trainable_only) const {
    std::size_t n = 0;
    for (const auto& [name, t] : items_)
        if (!trainable_only || t.trainable) n += t.size();
    return n;
}

void init_uniform(Tensor& t, double bound, Rng& rng) {
    for (double& v : t.data) v = rng.uniform(-bound, bound);
}

double stable_sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void AdamState::init_like(const ParamStore& store) {
    first_moment.clear();
    second_moment.clear();
    for (const auto& [name, t] : store.items()) {
        first_moment.emplace_back(t.size(), 0.0);
        second_moment.emplace_back(t.size(), 0.0);
    }
    step_count = 0;
}

void adam_update(ParamStore& store, AdamState& state) {
    if (state.first_moment.size() != store.items().size())
        throw ShapeMismatch("Adam state does not match parameter store");
    ++state.step_count;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    for (std::size_t p = 0; p < store.items().size(); ++p) {
        Tensor& t = store.items()[p].second;
        if (!t.trainable) continue;
        auto& m = state.first_moment[p];
        auto& v = state.second_moment[p];
        if (m.size() != t.size()) throw ShapeMismatch("Adam moment shape mismatch");
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double g = t.grad[i];
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            t.data[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    }
}

BceResult bce_loss(const std::vector<double>& pred, const std::vector<double>& target) {
    if (pred.size() != target.size() || pred.empty())
        throw ShapeMismatch("prediction/target size mismatch");
    constexpr double eps = 1e-7;
    const double n = static_cast<double>(pred.size());
    BceResult res;
    res.grad.resize(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double p = std::clamp(pred[i], eps, 1.0 - eps);
        const double y = target[i];
        res.loss += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
        res.grad[i] = (p - y) / (p * (1.0 - p)) / n;
    }
    res.loss /= n;
    return res;
}

std::vector<double> linear_forward(const Tensor& W, const Tensor& b,
                                   const std::vector<double>& x) {
    if (W.shape.size() != 2 || x.size() != W.shape[1] || b.size() != W.shape[0])
        throw ShapeMismatch("linear_forward shape mismatch");
    std::vector<double> y(W.shape[0], 0.0);
    affine_accum(W, b, x, y);
    return y;
}

std::vector<double> linear_backward(Tensor& W, Tensor& b, const std::vector<double>& x,
                                    const std::vector<double>& dy) {
    if (dy.size() != W.shape[0] || x.size() != W.shape[1])
        throw ShapeMismatch("linear_backward shape mismatch");
    std::vector<double> dx(x.size(), 0.0);
    affine_backward(W, b, x, dy, dx);
    return dx;
}

// --- LSTM ----------------------------------------------------------------------

LstmCell LstmCell::create(ParamStore& ps, const std::string& prefix,
                          std::size_t in_dim, std::size_t hidden, Rng& rng) {
    LstmCell cell;
    cell.in_dim = in_dim;
    cell.hidden = hidden;
    const char* gates = "ifoc";
    Tensor* slots[12];
    int s = 0;
    for (int g = 0; g < 4; ++g) {
        const std::string gate(1, gates[g]);
        slots[s++] = &add_matrix(ps, prefix + ".W_" + gate, hidden, in_dim, rng);
        slots[s++] = &add_matrix(ps, prefix + ".U_" + gate, hidden, hidden, rng);
        slots[s++] = &add_bias(ps, prefix + ".b_" + gate, hidden);
    }
    cell.W_i = slots[0]; cell.U_i = slots[1]; cell.b_i = slots[2];
    cell.W_f = slots[3]; cell.U_f = slots[4]; cell.b_f = slots[5];
    cell.W_o = slots[6]; cell.U_o = slots[7]; cell.b_o = slots[8];
    cell.W_c = slots[9]; cell.U_c = slots[10]; cell.b_c = slots[11];
    return cell;
}

LstmCell LstmCell::view(ParamStore& ps, const std::string& prefix,
                        std::size_t in_dim, std::size_t hidden) {
    LstmCell cell;
    cell.in_dim = in_dim;
    cell.hidden = hidden;
    cell.W_i = &ps.at(prefix + ".W_i"); cell.U_i = &ps.at(prefix + ".U_i"); cell.b_i = &ps.at(prefix + ".b_i");
    cell.W_f = &ps.at(prefix + ".W_f"); cell.U_f = &ps.at(prefix + ".U_f"); cell.b_f = &ps.at(prefix + ".b_f");
    cell.W_o = &ps.at(prefix + ".W_o"); cell.U_o = &ps.at(prefix + ".U_o"); cell.b_o = &ps.at(prefix + ".b_o");
    cell.W_c = &ps.at(prefix + ".W_c"); cell.U_c = &ps.at(prefix + ".U_c"); cell.b_c = &ps.at(prefix + ".b_c");
    return cell;
}

void LstmCell::forward(const std::vector<double>& x, const std::vector<double>& h_prev,
                       const std::vector<double>& c_prev, std::vector<double>& h_out,
                       std::vector<double>& c_out, LstmCache* cache) const {
    if (x.size() != in_dim || h_prev.size() != hidden || c_prev.size() != hidden)
        throw ShapeMismatch("lstm_cell_step shape mismatch");

    std::vector<double> zi(hidden, 0.0), zf(hidden, 0.0), zo(hidden, 0.0), zg(hidden, 0.0);
    affine_accum(*W_i, *b_i, x, zi);
    affine_accum(*W_f, *b_f, x, zf);
    affine_accum(*W_o, *b_o, x, zo);
    affine_accum(*W_c, *b_c, x, zg);
    const Tensor zero_bias{std::vector<double>(hidden, 0.0), {hidden}, {}, false};
    affine_accum(*U_i, zero_bias, h_prev, zi);
    affine_accum(*U_f, zero_bias, h_prev, zf);
    affine_accum(*U_o, zero_bias, h_prev, zo);
    affine_accum(*U_c, zero_bias, h_prev, zg);

    h_out.resize(hidden);
    c_out.resize(hidden);
    std::vector<double> i(hidden), f(hidden), o(hidden), g(hidden), tanh_c(hidden);
    for (std::size_t k = 0; k < hidden; ++k) {
        i[k] = stable_sigmoid(zi[k]);
        f[k] = stable_sigmoid(zf[k]);
        o[k] = stable_sigmoid(zo[k]);
        g[k] = std::tanh(zg[k]);
        c_out[k] = f[k] * c_prev[k] + i[k] * g[k];
        tanh_c[k] = std::tanh(c_out[k]);
        h_out[k] = o[k] * tanh_c[k];
    }
    if (cache) {
        cache->x = x;
        cache->h_prev = h_prev;
        cache->c_prev = c_prev;
        cache->i = std::move(i);
        cache->f = std::move(f);
        cache->o = std::move(o);
        cache->g = std::move(g);
        cache->c = c_out;
        cache->tanh_c = std::move(tanh_c);
    }
}

void LstmCell::backward(const LstmCache& cache, const std::vector<double>& dh,
                        const std::vector<double>& dc, std::vector<double>& dx,
                        std::vector<double>& dh_prev, std::vector<double>& dc_prev) const {
    std::vector<double> dzi(hidden), dzf(hidden), dzo(hidden), dzg(hidden);
    dc_prev.assign(hidden, 0.0);
    for (std::size_t k = 0; k < hidden; ++k) {
        const double do_ = dh[k] * cache.tanh_c[k];
        double dck = dc[k] + dh[k] * cache.o[k] * (1.0 - cache.tanh_c[k] * cache.tanh_c[k]);
        const double df = dck * cache.c_prev[k];
        const double di = dck * cache.g[k];
        const double dg = dck * cache.i[k];
        dc_prev[k] = dck * cache.f[k];
        dzi[k] = di * cache.i[k] * (1.0 - cache.i[k]);
        dzf[k] = df * cache.f[k] * (1.0 - cache.f[k]);
        dzo[k] = do_ * cache.o[k] * (1.0 - cache.o[k]);
        dzg[k] = dg * (1.0 - cache.g[k] * cache.g[k]);
    }
    dx.assign(in_dim, 0.0);
    dh_prev.assign(hidden, 0.0);
    affine_backward(*W_i, *b_i, cache.x, dzi, dx);
    affine_backward(*W_f, *b_f, cache.x, dzf, dx);
    affine_backward(*W_o, *b_o, cache.x, dzo, dx);
    affine_backward(*W_c, *b_c, cache.x, dzg, dx);
    Tensor dummy{std::vector<double>(hidden, 0.0), {hidden},
                 std::vector<double>(hidden, 0.0), false};
    affine_backward(*U_i, dummy, cache.h_prev, dzi, dh_prev);
    affine_backward(*U_f, dummy, cache.h_prev, dzf, dh_prev);
    affine_backward(*U_o, dummy, cache.h_prev, dzo, dh_prev);
    affine_backward(*U_c, dummy, cache.h_prev, dzg, dh_prev);
}

// --- GRU ----------------------------------------------------------------------

GruCell GruCell::create(ParamStore& ps, const std::string& prefix,
                        std::size_t in_dim, std::size_t hidden, Rng& rng) {
    GruCell cell;
    cell.in_dim = in_dim;
    cell.hidden = hidden;
    cell.W_z = &add_matrix(ps, prefix + ".W_z", hidden, in_dim, rng);
    cell.U_z = &add_matrix(ps, prefix + ".U_z", hidden, hidden, rng);
    cell.b_z = &add_bias(ps, prefix + ".b_z", hidden);
    cell.W_r = &add_matrix(ps, prefix + ".W_r", hidden, in_dim, rng);
    cell.U_r = &add_matrix(ps, prefix + ".U_r", hidden, hidden, rng);
    cell.b_r = &add_bias(ps, prefix + ".b_r", hidden);
    cell.W_h = &add_matrix(ps, prefix + ".W_h", hidden, in_dim, rng);
    cell.U_h = &add_matrix(ps, prefix + ".U_h", hidden, hidden, rng);
    cell.b_h = &add_bias(ps, prefix + ".b_h", hidden);
    return cell;
}

GruCell GruCell::view(ParamStore& ps, const std::string& prefix,
                      std::size_t in_dim, std::size_t hidden) {
    GruCell cell;
    cell.in_dim = in_dim;
    cell.hidden = hidden;
    cell.W_z = &ps.at(prefix + ".W_z"); cell.U_z = &ps.at(prefix + ".U_z"); cell.b_z = &ps.at(prefix + ".b_z");
    cell.W_r = &ps.at(prefix + ".W_r"); cell.U_r = &ps.at(prefix + ".U_r"); cell.b_r = &ps.at(prefix + ".b_r");
    cell.W_h = &ps.at(prefix + ".W_h"); cell.U_h = &ps.at(prefix + ".U_h"); cell.b_h = &ps.at(prefix + ".b_h");
    return cell;
}

void GruCell::forward(const std::vector<double>& x, const std::vector<double>& h_prev,
                      std::vector<double>& h_out, GruCache* cache) const {
    if (x.size() != in_dim || h_prev.size() != hidden)
        throw ShapeMismatch("gru_cell_step shape mismatch");
    std::vector<double> zz(hidden, 0.0), zr(hidden, 0.0);
    affine_accum(*W_z, *b_z, x, zz);
    affine_accum(*W_r, *b_r, x, zr);
    const Tensor zero_bias{std::vector<double>(hidden, 0.0), {hidden}, {}, false};
    affine_accum(*U_z, zero_bias, h_prev, zz);
    affine_accum(*U_r, zero_bias, h_prev, zr);

    std::vector<double> z(hidden), r(hidden), rh(hidden);
    for (std::size_t k = 0; k < hidden; ++k) {
        z[k] = stable_sigmoid(zz[k]);
        r[k] = stable_sigmoid(zr[k]);
        rh[k] = r[k] * h_prev[k];
    }
    std::vector<double> zg(hidden, 0.0);
    affine_accum(*W_h, *b_h, x, zg);
    affine_accum(*U_h, zero_bias, rh, zg);

    h_out.resize(hidden);
    std::vector<double> g(hidden);
    for (std::size_t k = 0; k < hidden; ++k) {
        g[k] = std::tanh(zg[k]);
        h_out[k] = z[k] * h_prev[k] + (1.0 - z[k]) * g[k];
    }
    if (cache) {
        cache->x = x;
        cache->h_prev = h_prev;
        cache->z = std::move(z);
        cache->r = std::move(r);
        cache->rh = std::move(rh);
        cache->g = std::move(g);
    }
}

void GruCell::backward(const GruCache& cache, const std::vector<double>& dh,
                       std::vector<double>& dx, std::vector<double>& dh_prev) const {
    std::vector<double> dz(hidden), dg(hidden), dzg(hidden);
    dh_prev.assign(hidden, 0.0);
    for (std::size_t k = 0; k < hidden; ++k) {
        dz[k] = dh[k] * (cache.h_prev[k] - cache.g[k]);
        dg[k] = dh[k] * (1.0 - cache.z[k]);
        dh_prev[k] += dh[k] * cache.z[k];
        dzg[k] = dg[k] * (1.0 - cache.g[k] * cache.g[k]);
    }
    dx.assign(in_dim, 0.0);
    std::vector<double> drh(hidden, 0.0);
    affine_backward(*W_h, *b_h, cache.x, dzg, dx);
    Tensor dummy{std::vector<double>(hidden, 0.0), {hidden},
                 std::vector<double>(hidden, 0.0), false};
    affine_backward(*U_h, dummy, cache.rh, dzg, drh);

    std::vector<double> dzz(hidden), dzr(hidden);
    for (std::size_t k = 0; k < hidden; ++k) {
        const double dr = drh[k] * cache.h_prev[k];
        dh_prev[k] += drh[k] * cache.r[k];
        dzz[k] = dz[k] * cache.z[k] * (1.0 - cache.z[k]);
        dzr[k] = dr * cache.r[k] * (1.0 - cache.r[k]);
    }
    affine_backward(*W_z, *b_z, cache.x, dzz, dx);
    affine_backward(*W_r, *b_r, cache.x, dzr, dx);
    affine_backward(*U_z, dummy, cache.h_prev, dzz, dh_prev);
    affine_backward(*U_r, dummy, cache.h_prev, dzr, dh_prev);
}

// --- RNN ----------------------------------------------------------------------

RnnCell RnnCell::create(ParamStore& ps, const std::string& prefix,
                        std::size_t in_dim, std::size_t hidden, Rng& rng) {
    RnnCell cell;
    cell.in_dim = in_dim;
    cell.hidden = hidden;
    cell.W = &add_matrix(ps, prefix + ".W", hidden, in_dim, rng);
    cell.U = &add_matrix(ps, prefix + ".U", hidden, hidden, rng);
    cell.b = &add_bias(ps, prefix + ".b", hidden);
    return cell;
}

RnnCell RnnCell::view(ParamStore& ps, const std::string& prefix,
                      std::size_t in_dim, std::size_t hidden) {
    RnnCell cell;
    cell.in_dim = in_dim;
    cell.hidden = hidden;
    cell.W = &ps.at(prefix + ".W");
    cell.U = &ps.at(prefix + ".U");
    cell.b = &ps.at(prefix + ".b");
    return cell;
}

void RnnCell::forward(const std::vector<double>& x, const std::vector<double>& h_prev,
                      std::vector<double>& h_out, RnnCache* cache) const {
    if (x.size() != in_dim || h_prev.size() != hidden)
        throw ShapeMismatch("rnn_cell_step shape mismatch");
    std::vector<double> z(hidden, 0.0);
    affine_accum(*W, *b, x, z);
    const Tensor zero_bias{std::vector<double>(hidden, 0.0), {hidden}, {}, false};
    affine_accum(*U, zero_bias, h_prev, z);
    h_out.resize(hidden);
    for (std::size_t k = 0; k < hidden; ++k) h_out[k] = std::tanh(z[k]);
    if (cache) {
        cache->x = x;
        cache->h_prev = h_prev;
        cache->h = h_out;
    }
}

void RnnCell::backward(const RnnCache& cache, const std::vector<double>& dh,
                       std::vector<double>& dx, std::vector<double>& dh_prev) const {
    std::vector<double> dz(hidden);
    for (std::size_t k = 0; k < hidden; ++k)
        dz[k] = dh[k] * (1.0 - cache.h[k] * cache.h[k]);
    dx.assign(in_dim, 0.0);
    dh_prev.assign(hidden, 0.0);
    affine_backward(*W, *b, cache.x, dz, dx);
    Tensor dummy{std::vector<double>(hidden, 0.0), {hidden},
                 std::vector<double>(hidden, 0.0), false};
    affine_backward(*U, dummy, cache.h_prev, dz, dh_prev);
}

// --- TCN ----------------------------------------------------------------------

Seq tcn_layer_forward(const Tensor& W, const Tensor& b, const Seq& input,
                      std::size_t dilation, bool relu, TcnCache* cache) {
    if (W.shape.size() != 3) throw ShapeMismatch("TCN weights must be (out, in, k)");
    const std::size_t out_ch = W.shape[0], in_ch = W.shape[1], k = W.shape[2];
    if (b.size() != out_ch) throw ShapeMismatch("TCN bias size mismatch");
    if (dilation < 1 || k < 1) throw std::invalid_argument("kernel and dilation must be >= 1");
    if (input.empty()) throw ShapeMismatch("empty sequence");
    const std::size_t T = input.size();

    Seq out(T, std::vector<double>(out_ch, 0.0));
    Seq pre(T, std::vector<double>(out_ch, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
        if (input[t].size() != in_ch) throw ShapeMismatch("TCN input channel mismatch");
        for (std::size_t o = 0; o < out_ch; ++o) {
            double acc = b.data[o];
            for (std::size_t i = 0; i < k; ++i) {
                const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t) -
                                           static_cast<std::ptrdiff_t>(dilation * i);
                if (src < 0) continue; // causal left zero-padding
                for (std::size_t c = 0; c < in_ch; ++c)
                    acc += W.data[(o * in_ch + c) * k + i] * input[static_cast<std::size_t>(src)][c];
            }
            pre[t][o] = acc;
            out[t][o] = relu ? std::max(0.0, acc) : acc;
        }
    }
    if (cache) {
        cache->input = input;
        cache->pre_activation = pre;
    }
    return out;
}

Seq tcn_layer_backward(Tensor& W, Tensor& b, const TcnCache& cache,
                       const Seq& d_output, std::size_t dilation, bool relu) {
    const std::size_t out_ch = W.shape[0], in_ch = W.shape[1], k = W.shape[2];
    const std::size_t T = cache.input.size();
    if (d_output.size() != T) throw ShapeMismatch("TCN upstream length mismatch");

    Seq d_input(T, std::vector<double>(in_ch, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t o = 0; o < out_ch; ++o) {
            double d = d_output[t][o];
            if (relu && cache.pre_activation[t][o] <= 0.0) d = 0.0;
            if (d == 0.0) continue;
            b.grad[o] += d;
            for (std::size_t i = 0; i < k; ++i) {
                const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t) -
                                           static_cast<std::ptrdiff_t>(dilation * i);
                if (src < 0) continue;
                for (std::size_t c = 0; c < in_ch; ++c) {
                    W.grad[(o * in_ch + c) * k + i] += d * cache.input[static_cast<std::size_t>(src)][c];
                    d_input[static_cast<std::size_t>(src)][c] += d * W.data[(o * in_ch + c) * k + i];
                }
            }
        }
    }
    return d_input;
}

// --- pooling --------------------------------------------------------------------

Seq maxpool2_forward(const Seq& input, PoolCache* cache) {
    if (input.empty()) throw ShapeMismatch("empty sequence");
    const std::size_t T = input.size();
    const std::size_t channels = input.front().size();
    const std::size_t out_len = (T + 1) / 2;
    Seq out(out_len, std::vector<double>(channels, 0.0));
    if (cache) {
        cache->argmax.assign(out_len, std::vector<std::size_t>(channels, 0));
        cache->in_len = T;
    }
    for (std::size_t t = 0; t < out_len; ++t) {
        const std::size_t a = 2 * t;
        const std::size_t bidx = std::min(a + 1, T - 1);
        for (std::size_t c = 0; c < channels; ++c) {
            if (input[bidx][c] > input[a][c]) {
                out[t][c] = input[bidx][c];
                if (cache) cache->argmax[t][c] = bidx;
            } else {
                out[t][c] = input[a][c];
                if (cache) cache->argmax[t][c] = a;
            }
        }
    }
    return out;
}

Seq maxpool2_backward(const PoolCache& cache, const Seq& d_output, std::size_t channels) {
    Seq d_input(cache.in_len, std::vector<double>(channels, 0.0));
    for (std::size_t t = 0; t < d_output.size(); ++t)
        for (std::size_t c = 0; c < channels; ++c)
            d_input[cache.argmax[t][c]][c] += d_output[t][c];
    return d_input;
}

} // namespace quchater
