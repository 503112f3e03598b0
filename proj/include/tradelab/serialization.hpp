#pragma once

#include <iosfwd>

#include "tradelab/agents_approx.hpp"
#include "tradelab/agents_tabular.hpp"

// Text formats for trained agents. Numbers are written in their shortest
// exact form, so write/read round-trips bit for bit. Readers throw
// DataError on malformed input.

namespace tradelab {

/// CSV `state_bits,action,value`, one row per (state, action), states in
/// code order, Buy before Wait. state_bits is oldest day first, Up = 1.
void write_qtable(std::ostream& out, const QTable& table);
QTable read_qtable(std::istream& in);

/// CSV `action,index,weight`.
void write_linear(std::ostream& out, const LinearWeights& weights);
LinearWeights read_linear(std::istream& in);

/// Sectioned text:
///   networks 2
///   network buy
///   sizes 14 16 16 1
///   layer 0 16 14        (index, outputs, inputs)
///   <outputs rows of `inputs` weights>
///   bias
///   <outputs values>
///   ...
///   network wait
///   ...
void write_deep(std::ostream& out, const DeepQNetworks& params);
DeepQNetworks read_deep(std::istream& in);

}  // namespace tradelab
