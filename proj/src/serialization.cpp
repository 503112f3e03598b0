#include "tradelab/serialization.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "detail/number_format.hpp"
#include "tradelab/errors.hpp"

namespace tradelab {

namespace {

Action parse_action(std::string_view text) {
  if (text == "buy") return Action::Buy;
  if (text == "wait") return Action::Wait;
  throw DataError("unknown action '" + std::string(text) + "'");
}

double parse_value(std::string_view text) {
  auto v = detail::parse_double(detail::trim(text));
  if (!v) throw DataError("bad number '" + std::string(text) + "'");
  return *v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != header) {
    throw DataError("expected header '" + header + "'");
  }
}

// Whitespace-token reader for the sectioned network format.
class Tokens {
 public:
  explicit Tokens(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw DataError("unexpected end of network file");
    return w;
  }
  void expect(const std::string& keyword) {
    const auto w = word();
    if (w != keyword) throw DataError("expected '" + keyword + "', found '" + w + "'");
  }
  std::size_t count() {
    const auto w = word();
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(w, &pos);
      if (pos != w.size()) throw DataError("bad count '" + w + "'");
      return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
      throw DataError("bad count '" + w + "'");
    }
  }
  double number() { return parse_value(word()); }

 private:
  std::istream& in_;
};

}  // namespace

void write_qtable(std::ostream& out, const QTable& table) {
  out << "state_bits,action,value\n";
  const std::size_t width = table.history() + 1;
  for (std::size_t code = 0; code < table.state_count(); ++code) {
    std::string bits(width, '0');
    for (std::size_t i = 0; i < width; ++i) {
      if (code >> (width - 1 - i) & 1U) bits[i] = '1';
    }
    for (Action a : kActions) {
      out << bits << ',' << to_string(a) << ',' << detail::shortest(table.value_at(code, a)) << '\n';
    }
  }
}

QTable read_qtable(std::istream& in) {
  expect_header(in, "state_bits,action,value");
  std::optional<QTable> table;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto fields = split(std::string(detail::trim(line)), ',');
    if (fields.size() != 3) throw DataError("q-table row needs 3 fields: " + line);
    MovementState s;
    try {
      s = MovementState::from_bitstring(fields[0]);
    } catch (const UsageError& e) {
      throw DataError(e.what());
    }
    if (!table) table.emplace(s.history());
    if (s.history() != table->history()) throw DataError("q-table rows disagree on history length");
    table->set(s, parse_action(fields[1]), parse_value(fields[2]));
  }
  if (!table) throw DataError("empty q-table");
  return *table;
}

void write_linear(std::ostream& out, const LinearWeights& weights) {
  out << "action,index,weight\n";
  for (Action a : kActions) {
    const auto w = weights.of(a);
    for (std::size_t i = 0; i < w.size(); ++i) {
      out << to_string(a) << ',' << i << ',' << detail::shortest(w[i]) << '\n';
    }
  }
}

LinearWeights read_linear(std::istream& in) {
  expect_header(in, "action,index,weight");
  LinearWeights weights;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto fields = split(std::string(detail::trim(line)), ',');
    if (fields.size() != 3) throw DataError("weight row needs 3 fields: " + line);
    auto& vec = weights.per_action[index_of(parse_action(fields[0]))];
    if (fields[1] != std::to_string(vec.size())) throw DataError("weight indices out of sequence");
    vec.push_back(parse_value(fields[2]));
  }
  if (weights.per_action[0].empty() || weights.per_action[0].size() != weights.per_action[1].size()) {
    throw DataError("linear weights must list both actions with equal length");
  }
  return weights;
}

void write_deep(std::ostream& out, const DeepQNetworks& params) {
  out << "networks 2\n";
  for (Action a : kActions) {
    const auto& net = params.of(a);
    out << "network " << to_string(a) << '\n' << "sizes";
    for (std::size_t s : net.spec().sizes) out << ' ' << s;
    out << '\n';
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      const auto& layer = net.layers[l];
      out << "layer " << l << ' ' << layer.outputs << ' ' << layer.inputs << '\n';
      for (std::size_t r = 0; r < layer.outputs; ++r) {
        for (std::size_t c = 0; c < layer.inputs; ++c) {
          out << (c ? " " : "") << detail::shortest(layer.weights[r * layer.inputs + c]);
        }
        out << '\n';
      }
      out << "bias\n";
      for (std::size_t r = 0; r < layer.outputs; ++r) {
        out << (r ? " " : "") << detail::shortest(layer.bias[r]);
      }
      out << '\n';
    }
  }
}

DeepQNetworks read_deep(std::istream& in) {
  Tokens tok(in);
  tok.expect("networks");
  if (tok.count() != 2) throw DataError("expected exactly 2 networks");
  DeepQNetworks params;
  for (Action expected : kActions) {
    tok.expect("network");
    if (parse_action(tok.word()) != expected) throw DataError("networks out of order");
    tok.expect("sizes");
    // The size list ends where the first layer section starts; read it by
    // peeking tokens until "layer".
    nn::LayerSpec spec;
    std::string w = tok.word();
    while (w != "layer") {
      try {
        spec.sizes.push_back(static_cast<std::size_t>(std::stoull(w)));
      } catch (const std::logic_error&) {
        throw DataError("bad layer size '" + w + "'");
      }
      w = tok.word();
    }
    try {
      spec.validate();
    } catch (const UsageError& e) {
      throw DataError(e.what());
    }
    nn::Mlp net = nn::zeros(spec);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      if (l > 0) tok.expect("layer");
      auto& layer = net.layers[l];
      if (tok.count() != l || tok.count() != layer.outputs || tok.count() != layer.inputs) {
        throw DataError("layer header disagrees with the size list");
      }
      for (double& v : layer.weights) v = tok.number();
      tok.expect("bias");
      for (double& v : layer.bias) v = tok.number();
    }
    params.of(expected) = std::move(net);
  }
  return params;
}

}  // namespace tradelab
