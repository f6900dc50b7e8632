#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twisted/group.hpp"
#include "twisted/rational.hpp"

namespace twisted {

/// U(1)-valued group cochain stored as exact turns: the table holds t with
/// phase = exp(2 pi i t), each entry reduced into [0,1). Normalized means the
/// turn is 0 whenever any argument is the group identity.
class PhaseCochain {
 public:
  PhaseCochain() = default;
  PhaseCochain(FiniteAbelianGroup g, int degree);

  int degree() const { return degree_; }
  const FiniteAbelianGroup& group() const { return grp_; }
  long long table_size() const { return static_cast<long long>(table_.size()); }

  const Rational& at(long long flat) const { return table_[flat]; }
  void set(long long flat, const Rational& t) { table_[flat] = t.mod1(); }

  long long flatten(const std::vector<int>& args) const;
  std::vector<int> unflatten(long long flat) const;

  const Rational& at2(int x, int y) const { return table_[static_cast<long long>(x) * n_ + y]; }
  const Rational& at3(int x, int y, int z) const {
    return table_[(static_cast<long long>(x) * n_ + y) * n_ + z];
  }

  /// Common denominator M: all turns lie in (1/M)Z.
  long long modulus() const;
  bool is_normalized() const;

  friend bool operator==(const PhaseCochain& a, const PhaseCochain& b) {
    return a.degree_ == b.degree_ && a.grp_ == b.grp_ && a.table_ == b.table_;
  }

 private:
  FiniteAbelianGroup grp_;
  int degree_ = 0;
  int n_ = 0;
  std::vector<Rational> table_;
};

PhaseCochain trivial_cochain(const FiniteAbelianGroup& g, int degree);

/// Additive coboundary in this project's orientation (degree 2 instance:
/// (dc)(x,y,z) = c(x,y) + c(x+y,z) - c(x,y+z) - c(y,z)); defined for any
/// degree p >= 1 as the negative of the standard alternating sum, so d(d c)=0.
PhaseCochain coboundary(const PhaseCochain& c);

struct PentagonReport {
  bool ok = true;
  std::array<int, 4> witness{-1, -1, -1, -1};
};

/// phi(x,y,z) + phi(x,y+z,w) + phi(y,z,w) == phi(x+y,z,w) + phi(x,y,z+w)
/// exhaustively over G^4, in exact turns.
PentagonReport pentagon_check(const PhaseCochain& phi);

/// turn(a,b,c) = theta * a.(b x c) mod 1 on Z_N^3; requires theta*N integral.
PhaseCochain volume_tricharacter(int N, const Rational& theta);

/// Character in each argument, sign-flips under transpositions, zero on
/// repeated arguments.
bool is_tricharacter(const PhaseCochain& phi);

struct AntisymmetrizeReport {
  bool ok = true;
  PhaseCochain result;
  std::array<int, 3> witness{-1, -1, -1};
  std::string error;
};

/// Cyclic cube-root antisymmetrization. For each triple with cyclic turns
/// t1,t2,t3: equal turns pass through unchanged; otherwise the result is the
/// branch r of (t1+t2+t3)/3 (mod 1/3) that lies in (1/M)Z for the declared
/// modulus M. No branch or several branches in (1/M)Z is an error (the cube
/// root is genuinely ambiguous); it is reported, not guessed.
AntisymmetrizeReport antisymmetrize(const PhaseCochain& phi);

/// Finds degree-2 c with coboundary(c) = phi1 - phi2 (turns), by exact linear
/// algebra over Z_M, M = lcm of the moduli. nullopt when no solution exists.
std::optional<PhaseCochain> solve_cohomologous(const PhaseCochain& phi1,
                                               const PhaseCochain& phi2);

/// Mackey multiplier on G x Ghat ~ G x G: turn((y,eta),(x,xi)) = <eta, x>.
PhaseCochain mackey_multiplier(const FiniteAbelianGroup& g);

/// Returns a copy with one table entry shifted by `delta` (negative-control
/// helper).
PhaseCochain mutate(const PhaseCochain& phi, long long flat, const Rational& delta);

/// Cached complex phases of a degree-3 cochain, with the sign convention
/// exp(2 pi i * sgn * t).
struct PhaseTable3 {
  int n = 0;
  std::vector<std::complex<double>> p;  // n^3
  std::complex<double> at(int x, int y, int z) const {
    return p[(static_cast<size_t>(x) * n + y) * n + z];
  }
};
std::shared_ptr<const PhaseTable3> make_phase_table(const PhaseCochain& phi, int sgn);

// CSV rows "a0,...,ak,num,den"; JSON array of {args, num, den}.
std::string cochain_to_csv(const PhaseCochain& c);
std::string cochain_to_json(const PhaseCochain& c);
PhaseCochain cochain_from_csv(const FiniteAbelianGroup& g, int degree, const std::string& csv);

}  // namespace twisted
