// Builds a generic bounded-rank structure, hides it behind a random
// congruence and recovers it again.
#include <iostream>

#include "hermikron/hermikron.hpp"

using namespace hermikron;

int main() {
  const BundleDescriptor desc = make_descriptor(8, 5, 1, 2);
  std::cout << "K_{c,d} with n=8, r=5, c=1, d=2: alpha=" << desc.alpha() << " s=" << desc.s() << "\n";

  const Codimensions cf = codim_closed_form(desc);
  std::cout << "closed form codimension: orbit " << cf.orbit << ", bundle " << cf.bundle << "\n";

  const HKCF h = realize_canonical(desc);
  const CodimResult brute = orbit_codim_bruteforce(h, Backend::Exact);
  std::cout << "brute force codimension: orbit " << brute.orbit_codim << ", bundle " << brute.bundle_codim << "\n";

  const HermitianPencil p = random_congruence_sample(h, EigenvaluePolicy::Gaussian, 42);
  const StructureReport rep = full_report(p, 42);
  std::cout << "normal rank " << rep.normal_rank << ", minimal indices";
  for (int x : rep.right_minimal_indices) std::cout << ' ' << x;
  std::cout << "\nreal eigenvalues:";
  for (const auto& e : rep.finite_eigs) std::cout << ' ' << e.value.real() << (e.sign == 1 ? "(+)" : "(-)");
  std::cout << "\nmatches descriptor: " << std::boolalpha << match_descriptor(rep, desc) << "\n";

  const Perturbation absorb = singular_absorb({0.0, 1.0}, 1, 1, 1e-3);
  const StructureReport merged = full_report(absorb.pencil, 7);
  std::cout << "J_1(i, -i) + M_1 nudged by 1e-3 has minimal indices";
  for (int x : merged.right_minimal_indices) std::cout << ' ' << x;
  std::cout << " and " << merged.finite_eigs.size() << " finite eigenvalues\n";
  return 0;
}
