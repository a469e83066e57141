#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "clg/engine.hpp"
#include "clg/jtree.hpp"
#include "clg/oracle.hpp"

namespace clg::testkit {

struct Tolerances {
  double discrete = 1e-9;
  double density = 1e-8;
  double moments = 1e-9;  // relative, floored at 1
};

struct Mismatch {
  bool ok = true;
  std::string detail;
  void fail(const std::string& what) {
    if (ok) detail = what;
    ok = false;
  }
};

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// Propagates `evidence` and compares every posterior with the oracle.
inline Mismatch compare_with_oracle(const Network& net, const StrongJunctionTree& tree, const JointMixture& prior,
                                    const Evidence& evidence, const Tolerances& tol = {}) {
  Mismatch m;
  const JointMixture joint = condition(prior, evidence);
  TreeState state = propagate(tree, net, evidence);
  for (VariableId v = 0; v < net.size(); ++v) {
    const std::string name = net.variable(v).name;
    if (net.is_discrete(v)) {
      const auto got = state.query_discrete(v);
      const auto want = oracle_discrete(joint, v);
      for (std::size_t s = 0; s < want.size(); ++s)
        if (!(std::abs(got[s] - want[s]) <= tol.discrete)) {
          std::ostringstream os;
          os << "P(" << name << "=" << s << ") " << got[s] << " vs " << want[s];
          m.fail(os.str());
        }
      continue;
    }
    const auto got = state.query_continuous(v);
    const auto want = oracle_continuous(joint, v);
    if (!close_rel(got.mean(), want.mean(), tol.moments) || !close_rel(got.variance(), want.variance(), tol.moments)) {
      std::ostringstream os;
      os << "moments of " << name << " (" << got.mean() << ", " << got.variance() << ") vs (" << want.mean() << ", "
         << want.variance() << ")";
      m.fail(os.str());
    }
    if (evidence.contains(v)) continue;
    const double sd = std::sqrt(want.variance());
    for (int k = 0; k <= 100; ++k) {
      const double y = want.mean() - 5.0 * sd + 10.0 * sd * k / 100.0;
      if (!(std::abs(got.pdf(y) - want.pdf(y)) <= tol.density)) {
        std::ostringstream os;
        os << "density of " << name << " at " << y << ": " << got.pdf(y) << " vs " << want.pdf(y);
        m.fail(os.str());
        break;
      }
    }
  }
  return m;
}

}  // namespace clg::testkit
