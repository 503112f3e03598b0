#include <doctest.h>

#include <random>
#include <sstream>

#include "tradelab/errors.hpp"
#include "tradelab/serialization.hpp"

using namespace tradelab;

TEST_SUITE("serialization") {

TEST_CASE("q-table round trip and layout") {
  QTable q(1);
  q.set(MovementState::from_bitstring("01"), Action::Buy, 0.1);
  q.set(MovementState::from_bitstring("11"), Action::Wait, -1.0 / 3.0);
  std::stringstream s;
  write_qtable(s, q);
  const auto text = s.str();
  CHECK(text.rfind("state_bits,action,value\n00,buy,0\n00,wait,0\n01,buy,0.1\n", 0) == 0);
  CHECK(read_qtable(s) == q);
}

TEST_CASE("linear weights round trip bit for bit") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 1e3);
  auto w = LinearWeights::zeros(14);
  for (auto& v : w.per_action)
    for (auto& x : v) x = n(rng);
  w.per_action[1][3] = 5e-324;
  std::stringstream s;
  write_linear(s, w);
  CHECK(read_linear(s) == w);
}

TEST_CASE("deep networks round trip bit for bit") {
  DeepHyperparams hp;
  hp.hidden_layers = 3;
  hp.units = 7;
  hp.seed = 21;
  const auto params = init_deep(10, hp);
  std::stringstream s;
  write_deep(s, params);
  CHECK(s.str().rfind("networks 2\nnetwork buy\nsizes 10 7 7 7 1\n", 0) == 0);
  CHECK(read_deep(s) == params);
}

TEST_CASE("malformed input is a data error") {
  std::istringstream bad_q("state_bits,action,value\n0x,buy,1\n");
  CHECK_THROWS_AS(read_qtable(bad_q), DataError);
  std::istringstream bad_linear("action,index,weight\nbuy,0,abc\n");
  CHECK_THROWS_AS(read_linear(bad_linear), DataError);
  std::istringstream bad_deep("networks 2\nnetwork buy\nsizes 2 1\nlayer 0 1 2\n1\n");
  CHECK_THROWS_AS(read_deep(bad_deep), DataError);
}

}  // TEST_SUITE
