// Evaluates S^z_n twice, once as a product of Szego steps and once from the
// determinants of CMV restrictions, and prints the worst entrywise gap.
//
//   sample_theorem [sequence.json] [n]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "cmvlab/identities.hpp"
#include "cmvlab/io.hpp"

int main(int argc, char** argv) {
  using namespace cmvlab;
  const VerblunskySequence seq =
      argc > 1 ? sequence_from_json(read_json_file(argv[1])) : VerblunskySequence::random(1, 0.9, true);
  const int n = argc > 2 ? std::atoi(argv[2]) : 12;
  if (n < 1) {
    std::fprintf(stderr, "n must be >= 1\n");
    return 2;
  }

  double worst = 0.0;
  for (int k = 0; k < 16; ++k) {
    const cplx z = std::polar(1.0, two_pi * k / 16.0);
    const Transfer2x2 product = transfer(seq, n, z);
    const Transfer2x2 half = theorem_halfline_eval(seq, n, z);
    const double gap = transfer_residual(half, product).relative;
    worst = std::max(worst, gap);
    std::printf("theta %6.4f  ||S|| %12.6e  half-line gap %.3e", two_pi * k / 16.0, operator_norm(product), gap);
    if (seq.defined_at(-1))
      std::printf("  extended gap %.3e", transfer_residual(theorem_extended_eval(seq, n, z), product).relative);
    std::printf("\n");
  }
  std::printf("n = %d, worst relative gap %.3e\n", n, worst);
  return worst <= 1e-9 ? 0 : 1;
}
