// Box initial data, one large step: how far each scheme overshoots [0, 1].
// Prints the first-step profile of both schemes side by side.

#include <algorithm>
#include <cstdio>

#include "tfetd/problems.hpp"
#include "tfetd/steppers.hpp"
#include "tfetd/system.hpp"

int main(int argc, char** argv) {
  using namespace tfetd;
  const double alpha = argc > 1 ? std::atof(argv[1]) : 1.8;
  const int n = argc > 2 ? std::atoi(argv[2]) : 64;
  const double tau = 0.25;

  const TemperedParams p = TemperedParams::make(alpha, 1.0);
  const SemiDiscreteSystem sys = build_system(Mesh1D::make(n), example3(p));

  Eigen::VectorXd first[2];
  for (Scheme s : {Scheme::EtdRdp, Scheme::Cn}) {
    StepperConfig c;
    c.tau = tau;
    c.t_end = tau;
    c.scheme = s;
    first[s == Scheme::Cn] = integrate(sys, c).final_state();
  }
  auto overshoot = [](const Eigen::VectorXd& u) {
    return std::max(0.0, u.maxCoeff() - 1.0) + std::max(0.0, -u.minCoeff());
  };

  std::printf("alpha=%.2f N=%d tau=%.2f\n", alpha, n, tau);
  std::printf("%8s %12s %12s %12s\n", "x", "u0", "etdrdp", "cn");
  const Eigen::VectorXd x = sys.op->mesh.interior_nodes();
  for (Eigen::Index i = 0; i < x.size(); i += std::max<Eigen::Index>(1, x.size() / 16)) {
    std::printf("%8.4f %12.6f %12.6f %12.6f\n", x(i), sys.initial(i), first[0](i), first[1](i));
  }
  std::printf("overshoot  etdrdp %.3e  cn %.3e\n", overshoot(first[0]), overshoot(first[1]));
}
