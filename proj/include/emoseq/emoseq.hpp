#pragma once

// Umbrella header.

#include "emoseq/agreement.hpp"
#include "emoseq/checkpoint.hpp"
#include "emoseq/common.hpp"
#include "emoseq/config.hpp"
#include "emoseq/corpus.hpp"
#include "emoseq/embeddings.hpp"
#include "emoseq/emotions.hpp"
#include "emoseq/grad_check.hpp"
#include "emoseq/graph.hpp"
#include "emoseq/metrics.hpp"
#include "emoseq/model.hpp"
#include "emoseq/synth.hpp"
#include "emoseq/tensor.hpp"
#include "emoseq/train.hpp"
