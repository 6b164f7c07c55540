// hilbert.hpp: truncated Fock spaces, ladder operators and the chain Hamiltonian

#pragma once

#include <array>
#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace kerrchain {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr int kModeCount = 3;

enum class DampingKind { none, amplitude, phase };

// How a damping parameter kappa maps onto the rate multiplying each Lindblad
// dissipator (kappa_j/2)(2 L rho L^dag - L^dag L rho - rho L^dag L).
//   literal:   rate = kappa for both damping kinds.
//   reference: rate = 2 kappa for amplitude damping, kappa for phase damping.
// The reference convention is the one under which the published steady-state
// regime boundaries and damped negativity curves are reproduced.
enum class RateConvention { literal, reference };

std::string_view to_string(DampingKind kind);
DampingKind damping_kind_from_string(std::string_view text);
std::string_view to_string(RateConvention convention);
RateConvention rate_convention_from_string(std::string_view text);

// Physical constants of the pumped three-oscillator chain (hbar = 1).
struct SystemParams {
    double chi = 1.0;
    double alpha = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    std::array<double, kModeCount> kappa{0.0, 0.0, 0.0};
    DampingKind damping = DampingKind::none;
    RateConvention rate_convention = RateConvention::reference;

    // Coupling actually entering the hop terms: epsilon + delta.
    double coupling() const { return epsilon + delta; }
    void set_uniform_kappa(double value) { kappa = {value, value, value}; }

    // Throws std::invalid_argument when chi <= 0, alpha < 0 or any kappa < 0.
    void validate() const;
};

struct Occupation {
    int n1 = 0;
    int n2 = 0;
    int n3 = 0;

    int operator[](int mode) const { return mode == 1 ? n1 : (mode == 2 ? n2 : n3); }
    friend bool operator==(const Occupation&, const Occupation&) = default;
};

// Composite Fock space with a common per-mode photon cutoff n_max.
// Basis order is mode-1-major: |ijk> has index i*d*d + j*d + k with d = n_max+1.
class HilbertSpace {
public:
    explicit HilbertSpace(int n_max);

    int n_max() const { return n_max_; }
    Index mode_dim() const { return n_max_ + 1; }
    std::array<Index, kModeCount> mode_dims() const { return {mode_dim(), mode_dim(), mode_dim()}; }
    Index total_dim() const { return mode_dim() * mode_dim() * mode_dim(); }

    bool contains(const Occupation& occ) const;
    Index index_of(const Occupation& occ) const;
    Occupation occupation_of(Index index) const;

    friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

private:
    int n_max_;
};

HilbertSpace build_space(int n_max);

enum class OperatorKind { annihilation, creation, number };

struct ModeOperator {
    Matrix matrix;
    int mode;
    OperatorKind kind;
};

// Throws std::invalid_argument unless mode is 1, 2 or 3.
int checked_mode(int mode);

ModeOperator mode_operator(const HilbertSpace& space, int mode, OperatorKind kind);

// H = (chi/2) sum_j a_j^dag^2 a_j^2
//   + (eps+delta)(a1^dag a2 + a2^dag a1 + a2^dag a3 + a3^dag a2)
//   + alpha (a1^dag + a1 + a3^dag + a3)
Matrix build_hamiltonian(const HilbertSpace& space, const SystemParams& params);

// Permutation exchanging the occupations of modes 1 and 3.
Matrix mode_swap_13(const HilbertSpace& space);

} // namespace kerrchain
