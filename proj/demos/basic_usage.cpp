// Builds the reduced W pair and a W/GHZ mixture, then prints their
// entanglement, CHSH and teleportation diagnostics.

#include <iostream>

#include <qdiag/qdiag.hpp>

int main() {
  using namespace qdiag;

  OutputRecord w;
  w.state_kind = "w";
  w.n = 3;
  w.report = full_report(reduced_w_pair(3));
  write_report_text(std::cout, w);
  std::cout << '\n';

  OutputRecord mix;
  mix.state_kind = "mixture";
  mix.n = 3;
  mix.p = 0.9;
  mix.report = full_report(mixture_ghz_w({3, 0.9}));
  write_report_text(std::cout, mix);
  std::cout << '\n';

  for (int n = 3; n <= 5; ++n) {
    const ThresholdReport t = thresholds(n);
    std::cout << "n=" << n << " entangled for p > " << format_full(t.p_entangled) << '\n';
  }

  std::cout << "CHSH maximum for the reduced W pair: " << chsh_maximize(reduced_w_pair(3)) << '\n';
  return 0;
}
