#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "sympcal/matrices.hpp"

namespace sympcal {

// Time-periodic quadratic form Q_t(z) = 1/2 <B_t z, z>, with a closed-form
// flow when the kind permits. Flows solve zdot = -J0 B_t z.
class QuadraticForm {
  public:
    enum class Kind { Constant, Rotated, Sampled };

    QuadraticForm() = default;  // empty; assign a factory result before use

    // Q(z) = 1/2 <B z, z>; flow e^{-J0 B t}.
    static QuadraticForm constant(const Mat& b);
    // Q_t(z) = 1/2 <-c z, z> + 1/2 <J0 mhat e^{-c J0 t} z, e^{-c J0 t} z>;
    // flow e^{c J0 t} e^{mhat t}.
    static QuadraticForm rotated(double c, const Mat& mhat);
    // arbitrary periodic symmetric family, optionally with a known flow
    static QuadraticForm sampled(int n, std::function<Mat(double)> b,
                                 std::function<Mat(double)> flow = nullptr);
    // diamond of independent blocks acting on interleaved coordinates
    static QuadraticForm diamond_of(const std::vector<QuadraticForm>& blocks);

    int n() const { return n_; }
    int dim() const { return 2 * n_; }
    Kind kind() const { return kind_; }

    Mat b_matrix(double t) const;
    bool has_closed_flow() const;
    Mat flow(double t) const;          // requires has_closed_flow
    Mat monodromy() const { return flow(1.0); }

    double value(double t, const Vec& z) const;
    Vec grad(double t, const Vec& z) const;

    const Mat& constant_b() const;     // Kind::Constant only
    const Mat& rotated_mhat() const;   // Kind::Rotated only
    double rotated_c() const;

  private:
    Kind kind_ = Kind::Constant;
    int n_ = 0;
    Mat b0_, mhat_;
    double c_ = 0.0;
    std::function<Mat(double)> b_fn_, flow_fn_;
};

// Time-one linear flow of a closed-form quadratic (routes Sampled kinds to
// the caller's integrator by throwing UnsupportedError).
Mat linear_flow(const QuadraticForm& q, double t);

} // namespace sympcal
