#include "stocksent/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "stocksent/errors.hpp"
#include "stocksent/init.hpp"

namespace stocksent {

namespace {

Matrix window_row(const Matrix& window, int t) {
    Matrix x(window.cols, 1);
    for (int j = 0; j < window.cols; ++j) x(j, 0) = window(t, j);
    return x;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
    Matrix z(top.rows + bottom.rows, 1);
    for (int i = 0; i < top.rows; ++i) z(i, 0) = top(i, 0);
    for (int i = 0; i < bottom.rows; ++i) z(top.rows + i, 0) = bottom(i, 0);
    return z;
}

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

}  // namespace

const char* to_string(CellKind kind) { return kind == CellKind::Gru ? "gru" : "lstm"; }

CellKind parse_cell_kind(const std::string& text) {
    std::string lower = text;
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "gru") return CellKind::Gru;
    if (lower == "lstm") return CellKind::Lstm;
    throw ConfigError("unknown cell kind \"" + text + "\" (expected gru or lstm)");
}

void NetworkSpec::validate() const {
    if (input_dim < 1) {
        throw ConfigError("network input dimension must be positive, got " +
                          std::to_string(input_dim));
    }
    if (hidden.empty() || hidden.size() > 2) {
        throw ConfigError("network must have 1 or 2 recurrent layers, got " +
                          std::to_string(hidden.size()));
    }
    for (int h : hidden) {
        if (h < 1) throw ConfigError("hidden width must be positive, got " + std::to_string(h));
    }
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
        throw ConfigError("dropout rate must be in [0,1), got " + std::to_string(dropout_rate));
    }
}

int NetworkSpec::head_width() const { return hidden.back() * (bidirectional ? 2 : 1); }

Matrix dropout(const Matrix& x, double rate, SeededRng& rng, bool training, Matrix* mask) {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw ConfigError("dropout rate must be in [0,1), got " + std::to_string(rate));
    }
    Matrix out = x;
    Matrix m(x.rows, x.cols, 1.0);
    if (training && rate > 0.0) {
        const double inv_keep = 1.0 / (1.0 - rate);
        for (std::size_t k = 0; k < out.data.size(); ++k) {
            if (rng.uniform01() < rate) {
                m.data[k] = 0.0;
                out.data[k] = 0.0;
            } else {
                m.data[k] = inv_keep;
                out.data[k] *= inv_keep;
            }
        }
    }
    if (mask) *mask = std::move(m);
    return out;
}

int Network::layer_input_dim(std::size_t layer) const {
    if (layer == 0) return spec_.input_dim;
    return spec_.hidden[layer - 1] * (spec_.bidirectional ? 2 : 1);
}

Network::Network(const NetworkSpec& spec, SeededRng& rng) : spec_(spec) {
    spec_.validate();
    for (std::size_t l = 0; l < spec_.hidden.size(); ++l) {
        const int in = layer_input_dim(l);
        const int h = spec_.hidden[l];
        if (spec_.cell == CellKind::Gru) {
            gru_f_.emplace_back(in, h, rng);
            if (spec_.bidirectional) gru_b_.emplace_back(in, h, rng);
        } else {
            lstm_f_.emplace_back(in, h, rng);
            if (spec_.bidirectional) lstm_b_.emplace_back(in, h, rng);
        }
    }
    dense_W_ = glorot_init(1, spec_.head_width(), rng);
    dense_b_ = Matrix(1, 1);
}

double Network::forward(const Matrix& window, bool training, SeededRng& rng,
                        ForwardCache* cache) const {
    if (window.rows < 1) throw ShapeError("window must have at least one timestep");
    if (window.cols != spec_.input_dim) {
        throw ShapeError("window has " + std::to_string(window.cols) + " features, network expects " +
                         std::to_string(spec_.input_dim));
    }
    const int T = window.rows;
    const std::size_t L = spec_.hidden.size();
    const bool bi = spec_.bidirectional;
    const bool is_gru = spec_.cell == CellKind::Gru;

    if (cache) {
        cache->timesteps = T;
        cache->training = training;
        cache->gf.assign(L, {});
        cache->gb.assign(L, {});
        cache->lf.assign(L, {});
        cache->lb.assign(L, {});
    }

    // inputs to the current layer, one column per window position
    std::vector<Matrix> seq(T);
    for (int t = 0; t < T; ++t) seq[t] = window_row(window, t);

    Matrix head;
    for (std::size_t l = 0; l < L; ++l) {
        const int h = spec_.hidden[l];
        std::vector<Matrix> fwd_states(T), bwd_states;
        if (is_gru) {
            if (cache) cache->gf[l].resize(T);
            Matrix state(h, 1);
            for (int t = 0; t < T; ++t) {
                state = gru_f_[l].step(seq[t], state, cache ? &cache->gf[l][t] : nullptr);
                fwd_states[t] = state;
            }
            if (bi) {
                if (cache) cache->gb[l].resize(T);
                bwd_states.resize(T);
                Matrix bstate(h, 1);
                for (int k = 0; k < T; ++k) {
                    const int t = T - 1 - k;
                    bstate = gru_b_[l].step(seq[t], bstate, cache ? &cache->gb[l][k] : nullptr);
                    bwd_states[t] = bstate;
                }
            }
        } else {
            if (cache) cache->lf[l].resize(T);
            LstmState state{Matrix(h, 1), Matrix(h, 1)};
            for (int t = 0; t < T; ++t) {
                state = lstm_f_[l].step(seq[t], state, cache ? &cache->lf[l][t] : nullptr);
                fwd_states[t] = state.h;
            }
            if (bi) {
                if (cache) cache->lb[l].resize(T);
                bwd_states.resize(T);
                LstmState bstate{Matrix(h, 1), Matrix(h, 1)};
                for (int k = 0; k < T; ++k) {
                    const int t = T - 1 - k;
                    bstate = lstm_b_[l].step(seq[t], bstate, cache ? &cache->lb[l][k] : nullptr);
                    bwd_states[t] = bstate.h;
                }
            }
        }

        if (l + 1 < L) {
            for (int t = 0; t < T; ++t) {
                seq[t] = bi ? vstack(fwd_states[t], bwd_states[t]) : fwd_states[t];
            }
        } else {
            // the head reads each direction's final state
            head = bi ? vstack(fwd_states[T - 1], bwd_states[0]) : fwd_states[T - 1];
        }
    }

    Matrix mask(head.rows, 1, 1.0);
    Matrix dense_in =
        training ? dropout(head, spec_.dropout_rate, rng, true, &mask) : head;

    double pred = dense_b_(0, 0);
    for (int k = 0; k < dense_in.rows; ++k) pred += dense_W_(0, k) * dense_in(k, 0);
    if (validation_enabled() && !std::isfinite(pred)) {
        throw NumericError("network prediction is not finite");
    }

    if (cache) {
        cache->head_input = std::move(head);
        cache->mask = std::move(mask);
        cache->dense_input = std::move(dense_in);
    }
    return pred;
}

double Network::predict(const Matrix& window) const {
    SeededRng unused(0);
    return forward(window, false, unused, nullptr);
}

void Network::backward(double d_prediction, const ForwardCache& cache,
                       NetworkGrads& grads) const {
    const int T = cache.timesteps;
    if (T < 1) throw ShapeError("forward cache is empty; run forward(training) first");
    const std::size_t L = spec_.hidden.size();
    const bool bi = spec_.bidirectional;
    const bool is_gru = spec_.cell == CellKind::Gru;
    if ((is_gru && (cache.gf.size() != L || cache.gf[L - 1].size() != static_cast<std::size_t>(T))) ||
        (!is_gru && (cache.lf.size() != L || cache.lf[L - 1].size() != static_cast<std::size_t>(T)))) {
        throw ShapeError("forward cache does not match this network");
    }
    if (cache.dense_input.rows != spec_.head_width()) {
        throw ShapeError("forward cache head width " + cache.dense_input.shape_str() +
                         " does not match this network");
    }

    // dense head
    grads.db_dense(0, 0) += d_prediction;
    Matrix d_head(cache.dense_input.rows, 1);
    for (int k = 0; k < cache.dense_input.rows; ++k) {
        grads.dW_dense(0, k) += d_prediction * cache.dense_input(k, 0);
        d_head(k, 0) = d_prediction * dense_W_(0, k) * cache.mask(k, 0);
    }

    // upstream gradients per layer output, indexed by window position
    const int top_h = spec_.hidden[L - 1];
    std::vector<Matrix> dYf(T), dYb;
    for (int t = 0; t < T; ++t) dYf[t] = Matrix(top_h, 1);
    if (bi) {
        dYb.resize(T);
        for (int t = 0; t < T; ++t) dYb[t] = Matrix(top_h, 1);
    }
    for (int k = 0; k < top_h; ++k) {
        dYf[T - 1](k, 0) = d_head(k, 0);
        if (bi) dYb[0](k, 0) = d_head(top_h + k, 0);
    }

    for (std::size_t li = L; li-- > 0;) {
        const int h = spec_.hidden[li];
        const int in_dim = layer_input_dim(li);
        // gradient w.r.t. this layer's input sequence, filled by the cells
        std::vector<Matrix> dX;
        Matrix* dx_slot = nullptr;
        if (li > 0) {
            dX.assign(T, Matrix(in_dim, 1));
        }

        if (is_gru) {
            Matrix dh(h, 1);
            for (int t = T - 1; t >= 0; --t) {
                axpy(dh, 1.0, dYf[t]);
                if (li > 0) dx_slot = &dX[t];
                dh = gru_f_[li].backward(dh, cache.gf[li][t], grads.gf[li], dx_slot);
            }
            if (bi) {
                Matrix dhb(h, 1);
                for (int k = T - 1; k >= 0; --k) {
                    const int t = T - 1 - k;
                    axpy(dhb, 1.0, dYb[t]);
                    if (li > 0) dx_slot = &dX[t];
                    dhb = gru_b_[li].backward(dhb, cache.gb[li][k], grads.gb[li], dx_slot);
                }
            }
        } else {
            Matrix dh(h, 1), dc(h, 1);
            for (int t = T - 1; t >= 0; --t) {
                axpy(dh, 1.0, dYf[t]);
                if (li > 0) dx_slot = &dX[t];
                LstmState prev = lstm_f_[li].backward(dh, dc, cache.lf[li][t], grads.lf[li], dx_slot);
                dh = std::move(prev.h);
                dc = std::move(prev.c);
            }
            if (bi) {
                Matrix dhb(h, 1), dcb(h, 1);
                for (int k = T - 1; k >= 0; --k) {
                    const int t = T - 1 - k;
                    axpy(dhb, 1.0, dYb[t]);
                    if (li > 0) dx_slot = &dX[t];
                    LstmState prev =
                        lstm_b_[li].backward(dhb, dcb, cache.lb[li][k], grads.lb[li], dx_slot);
                    dhb = std::move(prev.h);
                    dcb = std::move(prev.c);
                }
            }
        }

        if (li > 0) {
            const int lower_h = spec_.hidden[li - 1];
            dYf.assign(T, Matrix(lower_h, 1));
            if (bi) dYb.assign(T, Matrix(lower_h, 1));
            for (int t = 0; t < T; ++t) {
                for (int k = 0; k < lower_h; ++k) {
                    dYf[t](k, 0) = dX[t](k, 0);
                    if (bi) dYb[t](k, 0) = dX[t](lower_h + k, 0);
                }
            }
        }
    }
}

std::vector<Matrix*> Network::params() {
    std::vector<Matrix*> out;
    for (std::size_t l = 0; l < spec_.hidden.size(); ++l) {
        if (spec_.cell == CellKind::Gru) {
            for (GruCell* c : {&gru_f_[l], spec_.bidirectional ? &gru_b_[l] : nullptr}) {
                if (!c) continue;
                for (Matrix* m : {&c->W_r, &c->W_u, &c->W_h, &c->b_r, &c->b_u, &c->b_h}) {
                    out.push_back(m);
                }
            }
        } else {
            for (LstmCell* c : {&lstm_f_[l], spec_.bidirectional ? &lstm_b_[l] : nullptr}) {
                if (!c) continue;
                for (Matrix* m : {&c->W_f, &c->W_i, &c->W_o, &c->W_g, &c->b_f, &c->b_i, &c->b_o,
                                  &c->b_g}) {
                    out.push_back(m);
                }
            }
        }
    }
    out.push_back(&dense_W_);
    out.push_back(&dense_b_);
    return out;
}

std::vector<const Matrix*> Network::params() const {
    std::vector<const Matrix*> out;
    for (Matrix* m : const_cast<Network*>(this)->params()) out.push_back(m);
    return out;
}

std::vector<std::string> Network::param_names() const {
    std::vector<std::string> out;
    for (std::size_t l = 0; l < spec_.hidden.size(); ++l) {
        const int dirs = spec_.bidirectional ? 2 : 1;
        for (int d = 0; d < dirs; ++d) {
            const std::string prefix =
                "l" + std::to_string(l) + (d == 0 ? ".f." : ".b.");
            if (spec_.cell == CellKind::Gru) {
                for (const char* n : {"W_r", "W_u", "W_h", "b_r", "b_u", "b_h"}) {
                    out.push_back(prefix + n);
                }
            } else {
                for (const char* n :
                     {"W_f", "W_i", "W_o", "W_g", "b_f", "b_i", "b_o", "b_g"}) {
                    out.push_back(prefix + n);
                }
            }
        }
    }
    out.push_back("dense.W");
    out.push_back("dense.b");
    return out;
}

NetworkGrads NetworkGrads::for_network(const Network& net) {
    NetworkGrads g;
    const NetworkSpec& spec = net.spec();
    for (std::size_t l = 0; l < spec.hidden.size(); ++l) {
        const int in = net.layer_input_dim(l);
        const int h = spec.hidden[l];
        if (spec.cell == CellKind::Gru) {
            g.gf.emplace_back(in, h);
            if (spec.bidirectional) g.gb.emplace_back(in, h);
        } else {
            g.lf.emplace_back(in, h);
            if (spec.bidirectional) g.lb.emplace_back(in, h);
        }
    }
    g.dW_dense = Matrix(1, spec.head_width());
    g.db_dense = Matrix(1, 1);
    return g;
}

void NetworkGrads::zero() {
    for (auto& g : gf) g.zero();
    for (auto& g : gb) g.zero();
    for (auto& g : lf) g.zero();
    for (auto& g : lb) g.zero();
    std::fill(dW_dense.data.begin(), dW_dense.data.end(), 0.0);
    std::fill(db_dense.data.begin(), db_dense.data.end(), 0.0);
}

std::vector<Matrix*> NetworkGrads::pointers() {
    std::vector<Matrix*> out;
    const std::size_t layers = std::max(gf.size(), lf.size());
    for (std::size_t l = 0; l < layers; ++l) {
        if (!gf.empty()) {
            for (GruGrads* g : {&gf[l], l < gb.size() ? &gb[l] : nullptr}) {
                if (!g) continue;
                for (Matrix* m : {&g->dW_r, &g->dW_u, &g->dW_h, &g->db_r, &g->db_u, &g->db_h}) {
                    out.push_back(m);
                }
            }
        } else {
            for (LstmGrads* g : {&lf[l], l < lb.size() ? &lb[l] : nullptr}) {
                if (!g) continue;
                for (Matrix* m : {&g->dW_f, &g->dW_i, &g->dW_o, &g->dW_g, &g->db_f, &g->db_i,
                                  &g->db_o, &g->db_g}) {
                    out.push_back(m);
                }
            }
        }
    }
    out.push_back(&dW_dense);
    out.push_back(&db_dense);
    return out;
}

std::vector<const Matrix*> NetworkGrads::pointers() const {
    std::vector<const Matrix*> out;
    for (Matrix* m : const_cast<NetworkGrads*>(this)->pointers()) out.push_back(m);
    return out;
}

void Network::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw CheckpointError("cannot open checkpoint file for writing: " + path);
    out << "stocksent network v1\n";
    out << "cell " << to_string(spec_.cell) << "\n";
    out << "input " << spec_.input_dim << "\n";
    out << "hidden";
    for (int h : spec_.hidden) out << ' ' << h;
    out << "\n";
    out << "bidirectional " << (spec_.bidirectional ? 1 : 0) << "\n";
    out << "dropout " << format_double(spec_.dropout_rate) << "\n";

    const auto names = param_names();
    const auto ps = params();
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const Matrix& m = *ps[k];
        out << "param " << names[k] << ' ' << m.rows << ' ' << m.cols << "\n";
        for (int i = 0; i < m.rows; ++i) {
            for (int j = 0; j < m.cols; ++j) {
                if (j) out << ' ';
                out << format_double(m(i, j));
            }
            out << "\n";
        }
    }
    out << "end\n";
    if (!out) throw CheckpointError("failed writing checkpoint file: " + path);
}

Network Network::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot open checkpoint file: " + path);
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) {
            throw CheckpointError(std::string("checkpoint truncated before ") + what + ": " + path);
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };

    next_line("header");
    if (line != "stocksent network v1") {
        throw CheckpointError("unrecognized checkpoint header \"" + line + "\" in " + path);
    }

    NetworkSpec spec;
    next_line("cell kind");
    {
        std::istringstream ss(line);
        std::string key, value;
        ss >> key >> value;
        if (key != "cell") throw CheckpointError("expected cell line, got \"" + line + "\"");
        try {
            spec.cell = parse_cell_kind(value);
        } catch (const ConfigError& e) {
            throw CheckpointError(std::string("bad checkpoint cell kind: ") + e.what());
        }
    }
    next_line("input dimension");
    {
        std::istringstream ss(line);
        std::string key;
        ss >> key >> spec.input_dim;
        if (key != "input" || !ss) throw CheckpointError("bad input line \"" + line + "\"");
    }
    next_line("hidden widths");
    {
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key != "hidden") throw CheckpointError("bad hidden line \"" + line + "\"");
        spec.hidden.clear();
        int h;
        while (ss >> h) spec.hidden.push_back(h);
    }
    next_line("bidirectional flag");
    {
        std::istringstream ss(line);
        std::string key;
        int flag;
        ss >> key >> flag;
        if (key != "bidirectional" || !ss || (flag != 0 && flag != 1)) {
            throw CheckpointError("bad bidirectional line \"" + line + "\"");
        }
        spec.bidirectional = flag == 1;
    }
    next_line("dropout rate");
    {
        std::istringstream ss(line);
        std::string key, value;
        ss >> key >> value;
        if (key != "dropout" || value.empty()) {
            throw CheckpointError("bad dropout line \"" + line + "\"");
        }
        char* end = nullptr;
        spec.dropout_rate = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0') {
            throw CheckpointError("unparseable dropout rate \"" + value + "\"");
        }
    }
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw CheckpointError(std::string("invalid checkpoint architecture: ") + e.what());
    }

    SeededRng scratch(0);
    Network net(spec, scratch);
    const auto names = net.param_names();
    const auto ps = net.params();
    for (std::size_t k = 0; k < ps.size(); ++k) {
        next_line("parameter header");
        std::istringstream ss(line);
        std::string key, name;
        int rows = 0, cols = 0;
        ss >> key >> name >> rows >> cols;
        if (key != "param" || !ss) throw CheckpointError("bad parameter line \"" + line + "\"");
        if (name != names[k]) {
            throw CheckpointError("checkpoint parameter \"" + name + "\" where \"" + names[k] +
                                  "\" was expected");
        }
        Matrix& m = *ps[k];
        if (rows != m.rows || cols != m.cols) {
            throw CheckpointError("checkpoint parameter " + name + " has shape " +
                                  std::to_string(rows) + "x" + std::to_string(cols) +
                                  ", expected " + m.shape_str());
        }
        for (int i = 0; i < rows; ++i) {
            next_line("parameter values");
            const char* p = line.c_str();
            for (int j = 0; j < cols; ++j) {
                char* end = nullptr;
                const double v = std::strtod(p, &end);
                if (end == p) {
                    throw CheckpointError("checkpoint parameter " + name + " row " +
                                          std::to_string(i) + " is short or unparseable");
                }
                m(i, j) = v;
                p = end;
            }
            while (*p == ' ' || *p == '\t') ++p;
            if (*p != '\0') {
                throw CheckpointError("checkpoint parameter " + name + " row " +
                                      std::to_string(i) + " has trailing data");
            }
        }
    }
    next_line("trailer");
    if (line != "end") throw CheckpointError("checkpoint missing end marker: " + path);
    return net;
}

}  // namespace stocksent
