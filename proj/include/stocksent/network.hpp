#pragma once

#include <string>
#include <vector>

#include "stocksent/cells.hpp"
#include "stocksent/matrix.hpp"
#include "stocksent/rng.hpp"

namespace stocksent {

enum class CellKind { Gru, Lstm };

const char* to_string(CellKind kind);
CellKind parse_cell_kind(const std::string& text);

// Architecture of a recurrent regressor: one or two recurrent layers,
// optionally bidirectional, inverted dropout after the last recurrent layer,
// and a linear head mapping the final state(s) to one real output.
struct NetworkSpec {
    CellKind cell = CellKind::Gru;
    int input_dim = 1;
    std::vector<int> hidden{50};
    bool bidirectional = false;
    double dropout_rate = 0.0;

    void validate() const;   // throws ConfigError
    int head_width() const;  // dense input width (doubled when bidirectional)
};

// Inverted dropout. Training mode zeroes each entry with probability `rate`
// and scales survivors by 1/(1-rate); inference is the identity. The mask
// (entries 0 or 1/(1-rate)) is written to *mask when given.
Matrix dropout(const Matrix& x, double rate, SeededRng& rng, bool training,
               Matrix* mask = nullptr);

// Everything needed to replay one forward pass during backpropagation.
struct ForwardCache {
    int timesteps = 0;
    bool training = false;
    // GRU caches: gf in window order; gb in the backward cell's processing
    // order (gb[l][k] covers window position T-1-k)
    std::vector<std::vector<GruCache>> gf, gb;
    std::vector<std::vector<LstmCache>> lf, lb;
    Matrix head_input;     // final state(s) before dropout
    Matrix mask;           // dropout mask applied to head_input
    Matrix dense_input;    // after dropout
};

class Network;

// Gradient buffers mirroring a network's parameters.
struct NetworkGrads {
    std::vector<GruGrads> gf, gb;
    std::vector<LstmGrads> lf, lb;
    Matrix dW_dense, db_dense;

    static NetworkGrads for_network(const Network& net);
    void zero();
    std::vector<const Matrix*> pointers() const;
    std::vector<Matrix*> pointers();
};

class Network {
  public:
    Network(const NetworkSpec& spec, SeededRng& rng);

    const NetworkSpec& spec() const { return spec_; }

    // window is lookback x features, one row per timestep. Returns the
    // prediction; fills *cache when training needs a backward pass.
    // `rng` drives dropout and is consumed only in training mode.
    double forward(const Matrix& window, bool training, SeededRng& rng,
                   ForwardCache* cache = nullptr) const;

    // Inference-mode forward (dropout off, no cache).
    double predict(const Matrix& window) const;

    void backward(double d_prediction, const ForwardCache& cache, NetworkGrads& grads) const;

    // Parameter enumeration in a fixed order (layer-major, forward cell
    // before backward cell, dense head last). Matches NetworkGrads::pointers.
    std::vector<Matrix*> params();
    std::vector<const Matrix*> params() const;
    std::vector<std::string> param_names() const;

    void save(const std::string& path) const;
    static Network load(const std::string& path);

    friend struct NetworkGrads;

  private:
    NetworkSpec spec_;
    std::vector<GruCell> gru_f_, gru_b_;
    std::vector<LstmCell> lstm_f_, lstm_b_;
    Matrix dense_W_;   // 1 x head_width
    Matrix dense_b_;   // 1 x 1

    int layer_input_dim(std::size_t layer) const;
};

}  // namespace stocksent
