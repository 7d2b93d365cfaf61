#pragma once

// Reverse-mode autodiff tape over Tensor values. A Graph is built per forward
// pass; creation order is a topological order, so backward is a single reverse
// sweep that visits each node exactly once. Parameters are external leaves;
// backward accumulates into their grad buffers.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "emoseq/tensor.hpp"

namespace emoseq {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v)
      : name(std::move(n)), value(std::move(v)), grad(value.shape) {}

  void zero_grad() { grad.zero(); }
};

struct Value {
  int id = -1;
  bool valid() const { return id >= 0; }
};

class Graph {
 public:
  Value constant(Tensor t) {
    Node n;
    n.value = std::move(t);
    return push(std::move(n), "constant");
  }

  Value param(Parameter& p) {
    Node n;
    n.value = p.value;
    n.bound = &p;
    return push(std::move(n), "param");
  }

  const Tensor& value(Value v) const { return node(v).value; }
  const Tensor& grad(Value v) const { return node(v).grad; }
  std::size_t size() const { return nodes_.size(); }

  // ---- elementwise ----

  Value add(Value a, Value b) {
    const Tensor& ta = node(a).value;
    const Tensor& tb = node(b).value;
    if (!ta.same_shape(tb))
      throw ShapeError("add: shapes differ: " + shape_str(ta.shape) + " vs " +
                       shape_str(tb.shape));
    Node n;
    n.value = ta;
    for (std::size_t i = 0; i < tb.numel(); ++i) n.value.data[i] += tb.data[i];
    n.inputs = {a.id, b.id};
    n.back = [](Graph& g, int self) {
      Node& s = g.nodes_[self];
      Node& na = g.nodes_[s.inputs[0]];
      Node& nb = g.nodes_[s.inputs[1]];
      for (std::size_t i = 0; i < s.grad.numel(); ++i) {
        na.grad.data[i] += s.grad.data[i];
        nb.grad.data[i] += s.grad.data[i];
      }
    };
    return push(std::move(n), "add");
  }

  // ---- shape ----

  Value reshape(Value a, std::vector<std::size_t> shape) {
    const Tensor& ta = node(a).value;
    if (numel_of(shape) != ta.numel())
      throw ShapeError("reshape: cannot view " + shape_str(ta.shape) + " as " +
                       shape_str(shape));
    Node n;
    n.value = Tensor(std::move(shape), ta.data);
    n.inputs = {a.id};
    n.back = [](Graph& g, int self) {
      Node& s = g.nodes_[self];
      Node& na = g.nodes_[s.inputs[0]];
      for (std::size_t i = 0; i < s.grad.numel(); ++i)
        na.grad.data[i] += s.grad.data[i];
    };
    return push(std::move(n), "reshape");
  }

  // Concatenate 1-D tensors into one 1-D tensor, in argument order.
  Value concat(const std::vector<Value>& parts) {
    if (parts.empty()) throw ArgumentError("concat: no inputs");
    Node n;
    std::size_t total = 0;
    for (Value p : parts) {
      const Tensor& t = node(p).value;
      if (t.rank() != 1)
        throw ShapeError("concat: expected 1-D input, got " + shape_str(t.shape));
      total += t.numel();
      n.inputs.push_back(p.id);
    }
    n.value = Tensor({total});
    std::size_t off = 0;
    for (Value p : parts) {
      const Tensor& t = node(p).value;
      std::copy(t.data.begin(), t.data.end(), n.value.data.begin() + off);
      off += t.numel();
    }
    n.back = [](Graph& g, int self) {
      Node& s = g.nodes_[self];
      std::size_t off = 0;
      for (int in : s.inputs) {
        Node& ni = g.nodes_[in];
        for (std::size_t i = 0; i < ni.grad.numel(); ++i)
          ni.grad.data[i] += s.grad.data[off + i];
        off += ni.grad.numel();
      }
    };
    return push(std::move(n), "concat");
  }

  // Stack equal-length 1-D tensors as the rows of a 2-D tensor.
  Value stack_rows(const std::vector<Value>& rows) {
    if (rows.empty()) throw ArgumentError("stack_rows: no inputs");
    const std::size_t width = node(rows[0]).value.numel();
    Node n;
    for (Value r : rows) {
      const Tensor& t = node(r).value;
      if (t.rank() != 1 || t.numel() != width)
        throw ShapeError("stack_rows: rows must be 1-D of equal length, got " +
                         shape_str(t.shape));
      n.inputs.push_back(r.id);
    }
    n.value = Tensor({rows.size(), width});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Tensor& t = node(rows[i]).value;
      std::copy(t.data.begin(), t.data.end(), n.value.data.begin() + i * width);
    }
    n.back = [width](Graph& g, int self) {
      Node& s = g.nodes_[self];
      for (std::size_t i = 0; i < s.inputs.size(); ++i) {
        Node& ni = g.nodes_[s.inputs[i]];
        for (std::size_t j = 0; j < width; ++j)
          ni.grad.data[j] += s.grad.data[i * width + j];
      }
    };
    return push(std::move(n), "stack_rows");
  }

  // ---- linear algebra ----

  Value matmul(Value a, Value b) {
    const Tensor& ta = node(a).value;
    const Tensor& tb = node(b).value;
    if (ta.rank() != 2 || tb.rank() != 2)
      throw ShapeError("matmul: expected 2-D inputs, got " + shape_str(ta.shape) +
                       " and " + shape_str(tb.shape));
    Node n;
    matmul_into(ta, false, tb, false, n.value, false);
    n.inputs = {a.id, b.id};
    n.back = [](Graph& g, int self) {
      Node& s = g.nodes_[self];
      Node& na = g.nodes_[s.inputs[0]];
      Node& nb = g.nodes_[s.inputs[1]];
      matmul_into(s.grad, false, nb.value, true, na.grad, true);  // dA += dC B^T
      matmul_into(na.value, true, s.grad, false, nb.grad, true);  // dB += A^T dC
    };
    return push(std::move(n), "matmul");
  }

  // out = W x + b, with W [o,i], x [i], b [o].
  Value affine(Value w, Value x, Value b) {
    const Tensor& tw = node(w).value;
    const Tensor& tx = node(x).value;
    const Tensor& tb = node(b).value;
    if (tw.rank() != 2 || tx.rank() != 1 || tb.rank() != 1 ||
        tw.shape[1] != tx.numel() || tw.shape[0] != tb.numel())
      throw ShapeError("affine: incompatible shapes W" + shape_str(tw.shape) + " x" +
                       shape_str(tx.shape) + " b" + shape_str(tb.shape));
    const std::size_t o = tw.shape[0], in = tw.shape[1];
    Node n;
    n.value = Tensor({o});
    for (std::size_t i = 0; i < o; ++i) {
      double acc = tb.data[i];
      for (std::size_t j = 0; j < in; ++j) acc += tw(i, j) * tx.data[j];
      n.value.data[i] = acc;
    }
    n.inputs = {w.id, x.id, b.id};
    n.back = [o, in](Graph& g, int self) {
      Node& s = g.nodes_[self];
      Node& nw = g.nodes_[s.inputs[0]];
      Node& nx = g.nodes_[s.inputs[1]];
      Node& nb = g.nodes_[s.inputs[2]];
      for (std::size_t i = 0; i < o; ++i) {
        const double gi = s.grad.data[i];
        if (gi == 0.0) continue;
        nb.grad.data[i] += gi;
        for (std::size_t j = 0; j < in; ++j) {
          nw.grad.data[i * in + j] += gi * nx.value.data[j];
          nx.grad.data[j] += gi * nw.value.data[i * in + j];
        }
      }
    };
    return push(std::move(n), "affine");
  }

  // ---- convolution kernels ----

  // Full-width text convolution for one region size. x [t,m], w [f,rho,m],
  // b [f] -> [t-rho+1, f]. ReLU optional.
  Value conv_region(Value x, Value w, Value b, bool relu) {
    const Tensor& tx = node(x).value;
    const Tensor& tw = node(w).value;
    const Tensor& tb = node(b).value;
    if (tx.rank() != 2 || tw.rank() != 3 || tb.rank() != 1)
      throw ShapeError("conv_region: expected x[t,m] w[f,rho,m] b[f], got x" +
                       shape_str(tx.shape) + " w" + shape_str(tw.shape) + " b" +
                       shape_str(tb.shape));
    const std::size_t t = tx.shape[0], m = tx.shape[1];
    const std::size_t f = tw.shape[0], rho = tw.shape[1];
    if (tw.shape[2] != m)
      throw ShapeError("conv_region: filter width " + std::to_string(tw.shape[2]) +
                       " does not match embedding size " + std::to_string(m));
    if (tb.numel() != f)
      throw ShapeError("conv_region: bias length " + std::to_string(tb.numel()) +
                       " does not match filter count " + std::to_string(f));
    if (rho > t)
      throw ShapeError("conv_region: region size " + std::to_string(rho) +
                       " exceeds token count " + std::to_string(t));
    const std::size_t out_len = t - rho + 1;
    Node n;
    n.value = Tensor({out_len, f});
    for (std::size_t i = 0; i < out_len; ++i) {
      for (std::size_t j = 0; j < f; ++j) {
        double acc = tb.data[j];
        for (std::size_t u = 0; u < rho; ++u)
          for (std::size_t c = 0; c < m; ++c) acc += tx(i + u, c) * tw(j, u, c);
        n.value(i, j) = (relu && acc < 0.0) ? 0.0 : acc;
      }
    }
    n.inputs = {x.id, w.id, b.id};
    n.back = [out_len, f, rho, m, relu](Graph& g, int self) {
      Node& s = g.nodes_[self];
      Node& nx = g.nodes_[s.inputs[0]];
      Node& nw = g.nodes_[s.inputs[1]];
      Node& nb = g.nodes_[s.inputs[2]];
      for (std::size_t i = 0; i < out_len; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
          double gi = s.grad.data[i * f + j];
          if (relu && s.value.data[i * f + j] <= 0.0) gi = 0.0;
          if (gi == 0.0) continue;
          nb.grad.data[j] += gi;
          for (std::size_t u = 0; u < rho; ++u)
            for (std::size_t c = 0; c < m; ++c) {
              nw.grad.data[(j * rho + u) * m + c] += gi * nx.value.data[(i + u) * m + c];
              nx.grad.data[(i + u) * m + c] += gi * nw.value.data[(j * rho + u) * m + c];
            }
        }
      }
    };
    return push(std::move(n), "conv_region");
  }

  // Per-channel max over positions. x [n,f] -> [f]; gradient goes to the
  // first argmax position of each channel.
  Value maxpool_time(Value x) {
    const Tensor& tx = node(x).value;
    if (tx.rank() != 2 || tx.shape[0] == 0)
      throw ShapeError("maxpool_time: expected non-empty [n,f], got " +
                       shape_str(tx.shape));
    const std::size_t rows = tx.shape[0], f = tx.shape[1];
    Node n;
    n.value = Tensor({f});
    n.idx_cache.resize(f);
    for (std::size_t j = 0; j < f; ++j) {
      std::size_t best = 0;
      double bv = tx(0, j);
      for (std::size_t i = 1; i < rows; ++i)
        if (tx(i, j) > bv) {
          bv = tx(i, j);
          best = i;
        }
      n.value.data[j] = bv;
      n.idx_cache[j] = best;
    }
    n.inputs = {x.id};
    n.back = [f](Graph& g, int self) {
      Node& s = g.nodes_[self];
      Node& nx = g.nodes_[s.inputs[0]];
      const std::size_t width = f;
      for (std::size_t j = 0; j < width; ++j)
        nx.grad.data[s.idx_cache[j] * width + j] += s.grad.data[j];
    };
    return push(std::move(n), "maxpool_time");
  }

  // Single-channel 1-D convolution. x [n], w [field], b [1]; input is
  // right-padded with zeros to the next stride-compatible length.
  Value conv1d(Value x, Value w, Value b, std::size_t stride, bool relu) {
    const Tensor& tx = node(x).value;
    const Tensor& tw = node(w).value;
    const Tensor& tb = node(b).value;
    if (tx.rank() != 1 || tw.rank() != 1 || tb.numel() != 1)
      throw ShapeError("conv1d: expected x[n] w[field] b[1], got x" +
                       shape_str(tx.shape) + " w" + shape_str(tw.shape) + " b" +
                       shape_str(tb.shape));
    if (stride == 0) throw ArgumentError("conv1d: stride must be positive");
    const std::size_t n_in = tx.numel(), field = tw.numel();
    if (field > n_in)
      throw ShapeError("conv1d: receptive field " + std::to_string(field) +
                       " exceeds input length " + std::to_string(n_in));
    std::size_t eff = n_in;
    if ((n_in - field) % stride != 0) {
      eff = n_in + (stride - (n_in - field) % stride);
      log_note("conv1d: input length " + std::to_string(n_in) +
               " padded to " + std::to_string(eff) + " for stride " +
               std::to_string(stride));
    }
    const std::size_t out_len = (eff - field) / stride + 1;
    Node n;
    n.value = Tensor({out_len});
    for (std::size_t i = 0; i < out_len; ++i) {
      double acc = tb.data[0];
      for (std::size_t j = 0; j < field; ++j) {
        const std::size_t idx = i * stride + j;
        if (idx < n_in) acc += tx.data[idx] * tw.data[j];
      }
      n.value.data[i] = (relu && acc < 0.0) ? 0.0 : acc;
    }
    n.inputs = {x.id, w.id, b.id};
    n.back = [out_len, field, stride, n_in, relu](Graph& g, int self) {
      Node& s = g.nodes_[self];
      Node& nx = g.nodes_[s.inputs[0]];
      Node& nw = g.nodes_[s.inputs[1]];
      Node& nb = g.nodes_[s.inputs[2]];
      for (std::size_t i = 0; i < out_len; ++i) {
        double gi = s.grad.data[i];
        if (relu && s.value.data[i] <= 0.0) gi = 0.0;
        if (gi == 0.0) continue;
        nb.grad.data[0] += gi;
        for (std::size_t j = 0; j < field; ++j) {
          const std::size_t idx = i * stride + j;
          if (idx >= n_in) continue;
          nw.grad.data[j] += gi * nx.value.data[idx];
          nx.grad.data[idx] += gi * nw.value.data[j];
        }
      }
    };
    return push(std::move(n), "conv1d");
  }

  // ---- loss ----

  // Numerically stabilized softmax + cross-entropy against a gold class.
  // Returns the scalar loss; probabilities are cached and readable via probs().
  Value softmax_xent(Value logits, std::size_t gold) {
    const Tensor& tl = node(logits).value;
    if (tl.rank() != 1 || tl.numel() < 2)
      throw ArgumentError("softmax_xent: need at least 2 logits, got " +
                          shape_str(tl.shape));
    if (gold >= tl.numel())
      throw ArgumentError("softmax_xent: gold index " + std::to_string(gold) +
                          " out of range for " + std::to_string(tl.numel()) +
                          " classes");
    const std::size_t c = tl.numel();
    double mx = tl.data[0];
    for (double v : tl.data) mx = std::max(mx, v);
    double sum = 0.0;
    Tensor probs({c});
    for (std::size_t i = 0; i < c; ++i) {
      probs.data[i] = std::exp(tl.data[i] - mx);
      sum += probs.data[i];
    }
    for (std::size_t i = 0; i < c; ++i) probs.data[i] /= sum;
    // loss computed in log space so extreme logits cannot produce log(0)
    const double loss = (mx + std::log(sum)) - tl.data[gold];
    Node n;
    n.value = Tensor::scalar(loss);
    n.aux = std::move(probs);
    n.idx_cache = {gold};
    n.inputs = {logits.id};
    n.back = [c](Graph& g, int self) {
      Node& s = g.nodes_[self];
      Node& nl = g.nodes_[s.inputs[0]];
      const double gi = s.grad.data[0];
      const std::size_t gold_idx = s.idx_cache[0];
      for (std::size_t i = 0; i < c; ++i)
        nl.grad.data[i] += gi * (s.aux.data[i] - (i == gold_idx ? 1.0 : 0.0));
    };
    return push(std::move(n), "softmax_xent");
  }

  // Cached probabilities of a softmax_xent node.
  const Tensor& probs(Value loss) const {
    const Node& n = node(loss);
    if (n.aux.numel() == 0)
      throw ArgumentError("probs: node has no cached distribution");
    return n.aux;
  }

  // ---- backward ----

  void backward(Value loss) {
    Node& ln = node(loss);
    if (ln.value.numel() != 1)
      throw ShapeError("backward: loss must be scalar, got " +
                       shape_str(ln.value.shape));
    for (Node& n : nodes_) {
      n.grad = Tensor(n.value.shape);
    }
    ln.grad.data[0] = 1.0;
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i)
      if (nodes_[i].back) nodes_[i].back(*this, i);
    for (Node& n : nodes_) {
      if (!n.bound) continue;
      for (std::size_t i = 0; i < n.grad.numel(); ++i)
        n.bound->grad.data[i] += n.grad.data[i];
    }
  }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::vector<int> inputs;
    std::function<void(Graph&, int)> back;
    Parameter* bound = nullptr;
    std::vector<std::size_t> idx_cache;
    Tensor aux;
  };

  std::vector<Node> nodes_;

  Node& node(Value v) {
    if (!v.valid() || v.id >= static_cast<int>(nodes_.size()))
      throw ArgumentError("graph: invalid value handle");
    return nodes_[static_cast<std::size_t>(v.id)];
  }
  const Node& node(Value v) const {
    if (!v.valid() || v.id >= static_cast<int>(nodes_.size()))
      throw ArgumentError("graph: invalid value handle");
    return nodes_[static_cast<std::size_t>(v.id)];
  }

  Value push(Node n, const char* op) {
    if (!n.value.all_finite())
      throw NumericalError(std::string("non-finite value produced by ") + op);
    nodes_.push_back(std::move(n));
    return Value{static_cast<int>(nodes_.size()) - 1};
  }
};

// Pure softmax over a logit vector; the inference-side counterpart of
// Graph::softmax_xent.
inline Tensor softmax(const Tensor& logits) {
  if (logits.rank() != 1 || logits.numel() == 0)
    throw ArgumentError("softmax: expected non-empty 1-D logits");
  double mx = logits.data[0];
  for (double v : logits.data) mx = std::max(mx, v);
  Tensor out({logits.numel()});
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.numel(); ++i) {
    out.data[i] = std::exp(logits.data[i] - mx);
    sum += out.data[i];
  }
  for (double& v : out.data) v /= sum;
  return out;
}

inline std::size_t argmax(const Tensor& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.numel(); ++i)
    if (v.data[i] > v.data[best]) best = i;
  return best;
}

}  // namespace emoseq
