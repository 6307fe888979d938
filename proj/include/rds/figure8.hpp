#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rds/geometry.hpp"
#include "rds/rng.hpp"
#include "rds/series.hpp"

namespace rds::fig8 {

// Parameters of the box-chain map: a linear squeeze H(x,y) = (x/kappa^2,
// kappa*y) drives points through the nested boxes S_n = [a,b] x kappa^-n[a,b],
// and a quarter-turn R(x,y) = (a+b-y, x) re-enters the chain.  Requires
// kappa > 1 and 1 < a < b < kappa so the boxes are disjoint from their images.
struct Fig8Params {
    double kappa = 2.0;
    double a = 1.2;
    double b = 1.4;
    int n0 = 2; // smallest admissible box index
    int k0 = 2; // steps spent outside the squeeze phase per block

    void validate() const;
    double log_kappa() const;
};

// Sign and log-magnitude of a real number; the representation used for all
// cocycle arithmetic here, where entries reach kappa^(+-10^6) and would
// overflow any dense double matrix.
struct SignLog {
    double lg = kNegInf; // log|value|; -inf encodes zero
    int s = 0;           // -1, 0, +1
};

SignLog signlog_of(double x);
SignLog signlog_pow(int sign, double log_magnitude);
SignLog signlog_mul(const SignLog& a, const SignLog& b);
SignLog signlog_add(const SignLog& a, const SignLog& b);

struct LogMat2 {
    // Row-major, like Mat2.
    std::array<std::array<SignLog, 2>, 2> e{};

    static LogMat2 identity();
    static LogMat2 from_mat(const Mat2& m);
    static LogMat2 diagonal(const SignLog& d1, const SignLog& d2);
    static LogMat2 anti_diagonal(const SignLog& d12, const SignLog& d21);

    LogMat2 operator*(const LogMat2& o) const;
    Mat2 to_mat() const; // may over/underflow; intended for small exponents
    SignLog log_abs_det() const;
};

// A (sign, log) representation of M v and its norm.
std::array<SignLog, 2> log_apply(const LogMat2& m, const Vec2& v);
double log_norm(const std::array<SignLog, 2>& u);

// Axis-aligned closed rectangle.
struct Rect {
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    bool contains(const Vec2& p) const {
        return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi;
    }
};

// The box S_n = [a,b] x kappa^-n [a,b].  Throws for n < n0.  (The bounds
// underflow doubles for very large n; the run itself tracks points in log
// coordinates and never materializes these rectangles.)
Rect box_S(int n, const Fig8Params& params);

// One squeeze step H and the quarter turn R: the image point together with
// the (constant) derivative, diag(kappa^-2, kappa) and [[0,-1],[1,0]].
std::pair<Vec2, Mat2> h_step(const Vec2& p, const Fig8Params& params);
std::pair<Vec2, Mat2> rotation_R(const Vec2& p, const Fig8Params& params);

// The n+k0-step block composite on S_n in closed form:
//   p = (x, y) in S_n  ->  (a + b - kappa^n y, x / kappa^(2n))  in S_2n,
// with derivative [[0, -kappa^n], [kappa^-2n, 0]].  Validates membership.
std::pair<Vec2, LogMat2> block_map(int n, const Vec2& p, const Fig8Params& params);

// The impulse: if p lies in some box S_m, send it to S_target by scaling y
// with kappa^(m - target); off every box it is the identity.
struct ImpulseResult {
    Vec2 point;
    LogMat2 jac;
    int source_box = -1; // -1: point was in no box, impulse was the identity
};
ImpulseResult impulse(const Vec2& p, int target, const Fig8Params& params);

// How the impulse target is chosen when a block completes.
class TargetLaw {
  public:
    static TargetLaw iid(BoxIndexDist dist);
    // Degenerate law target = current box (the block ends in S_2n, so this
    // forces target = 2n and an identity impulse): the deterministic map,
    // run through the very same stepping code.
    static TargetLaw deterministic();
    // Fixed list of targets, for replaying a prescribed index sequence.
    static TargetLaw scripted(std::vector<int> targets);

    int sample(int current_box, RngStream& stream);
    bool is_deterministic() const { return kind_ == Kind::deterministic; }

  private:
    enum class Kind { iid, deterministic, scripted };
    TargetLaw(Kind k) : kind_(k), dist_(BoxIndexDist::geometric(2, 0.5)) {}
    Kind kind_;
    BoxIndexDist dist_;
    std::vector<int> script_;
    std::size_t script_pos_ = 0;
};

// Position within the block structure.  The point is carried in log
// coordinates (both components stay strictly positive); in deterministic
// mode box indices double at every return and the y coordinate drops below
// the smallest subnormal double after a few hundred steps, so a plain Vec2
// cannot represent the state.
struct BlockState {
    int n = 0;      // the block started in S_n
    long phase = 0; // steps taken inside the current block, in [0, n + k0)
    double lx = 0.0, ly = 0.0; // log coordinates

    Vec2 point() const; // exp of the log coordinates; may underflow
    static BlockState start(int n1, const Fig8Params& params); // center of S_n1
    static BlockState from_point(int n1, const Vec2& p, const Fig8Params& params);
};

// One step of the impulsed map.  Phases 0..n-1 apply H; the next k0-1 steps
// are derivative-identity padding outside the boxes; the block's final step
// applies R composed with the impulse at the freshly drawn target, which
// starts the next block.  Throws if the point escapes the region the phase
// promises (state is included in the message).
struct StepResult {
    LogMat2 jac;
    bool block_completed = false;
    int target = 0; // drawn target when block_completed
};
StepResult step_fig8(BlockState& s, RngStream& stream, TargetLaw& law,
                     const Fig8Params& params);

// The block bookkeeping of a run: the drawn index sequence n_1, n_2, ... and
// the return times N(k) = sum_{i<=k} (n_i + k0) at which block k completes.
struct ReturnSchedule {
    std::vector<int> n_sequence;
    std::vector<std::int64_t> N;

    static ReturnSchedule from_indices(const std::vector<int>& indices,
                                       const Fig8Params& params);
};

// Just the return times of an index sequence.
std::vector<std::int64_t> return_times(const std::vector<int>& indices, const Fig8Params& params);

// The derivative cocycle at time N(j) + ell, 0 <= ell <= n_{j+1}, evaluated
// from the closed-form product of block matrices (no stepping):
//   j = 2k-1: [[0, (-1)^k kappa^(n1 - 2 ell)], [(-1)^(k-1) kappa^(ell - n_2k), 0]]
//   j = 2k:   [[(-1)^k kappa^(-2 ell), 0], [0, (-1)^k kappa^(n1 - n_{2k+1} + ell)]]
// indices = (n_1, ..., n_K) must extend one block past j.  Also returns
// log ||A v|| computed exactly in the log domain.
struct ClosedFormResult {
    LogMat2 matrix;
    double log_norm_Av = kNegInf;
};
ClosedFormResult closed_form_cocycle(const std::vector<int>& indices, std::size_t j, long ell,
                                     const Fig8Params& params, const Vec2& v);

// Run the impulsed map for total_steps from the center of S_n1, accumulating
// the cocycle in the log domain; the series holds (1/m) log ||A^(m) v|| for
// every step m.
struct Fig8RunResult {
    Series series;
    std::vector<int> indices;             // n_1, n_2, ... (first entry = n1)
    std::vector<std::int64_t> returns;    // N(1), N(2), ... within the run
    LogMat2 cocycle;                      // the full product at total_steps
};
Fig8RunResult fig8_lyapunov_run(const Fig8Params& params, TargetLaw law, const Vec2& v, int n1,
                                std::int64_t total_steps, RngStream& stream);

// The strong-law diagnostic: ratio of the n-th drawn index over n+1, for
// n = 0..N-1.  For any valid index law this tends to zero almost surely.
Series slln_diagnostic(const BoxIndexDist& dist, RngStream& stream, std::int64_t N);

} // namespace rds::fig8
