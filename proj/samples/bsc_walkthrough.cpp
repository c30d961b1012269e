// Reads a source file (samples/bsc.csv by default) and prints its conditional
// entropies, error probability, Bhattacharyya parameter and a few bounds.

#include <fstream>
#include <iostream>

#include "renyi/renyi.hpp"

using namespace renyi;

int main(int argc, char** argv) {
  std::ifstream in(argc > 1 ? argv[1] : "samples/bsc.csv");
  if (!in) {
    std::cerr << "cannot open the source file\n";
    return 2;
  }
  const CondSource src = CondSource::read_csv(in);
  const Order half = Order::finite(0.5), two = Order::finite(2.0);

  for (Order a : {half, Order::shannon(), two, Order::infinity()})
    std::cout << "H_" << a.to_string() << "(X|Y) = " << format_number(cond_renyi(src, a)) << "\n";
  std::cout << "P_e(X|Y)    = " << format_number(min_error(src)) << "\n";
  std::cout << "Z(X|Y)      = " << format_number(bhattacharyya(src)) << "\n";

  const auto h2 = h2_vs_hhalf(cond_renyi(src, half), int(src.support_x()));
  std::cout << "H_2 given H_1/2 lies in [" << format_number(h2.lower.value) << ", "
            << format_number(h2.upper.value) << "]\n";

  const auto fano = fano_renyi(FanoKind::Conditional, two, min_error(src), int(src.support_x()));
  std::cout << "H_2 given P_e lies in   [" << format_number(fano.lower.value) << ", "
            << format_number(fano.upper->value) << "]\n";
  return 0;
}
