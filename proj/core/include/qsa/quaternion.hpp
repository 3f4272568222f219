#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qsa/errors.hpp"

namespace qsa {

struct Su2Vector;

/// Quaternion q = t + xI + yJ + zK with the Hamilton product (I^2 = J^2 = K^2 = -1, IJ = K).
struct Quaternion {
    double t = 0, x = 0, y = 0, z = 0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double t_, double x_, double y_, double z_) : t(t_), x(x_), y(y_), z(z_) {}

    static constexpr Quaternion identity() { return {1, 0, 0, 0}; }

    friend constexpr Quaternion operator+(const Quaternion& a, const Quaternion& b) {
        return {a.t + b.t, a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr Quaternion operator-(const Quaternion& a, const Quaternion& b) {
        return {a.t - b.t, a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr Quaternion operator*(double s, const Quaternion& q) {
        return {s * q.t, s * q.x, s * q.y, s * q.z};
    }
    friend constexpr Quaternion operator*(const Quaternion& q, double s) { return s * q; }
    friend constexpr Quaternion operator-(const Quaternion& q) { return {-q.t, -q.x, -q.y, -q.z}; }

    constexpr Quaternion conj() const { return {t, -x, -y, -z}; }
    constexpr double norm_sq() const { return t * t + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm_sq()); }
    constexpr double re() const { return t; }

    Quaternion inverse() const {
        const double n2 = norm_sq();
        if (n2 < 1e-28) throw DivisionByZero("quaternion inverse: |q| < 1e-14");
        return (1.0 / n2) * conj();
    }
};

/// Hamilton product.
constexpr Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
    return {a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z,
            a.t * b.x + a.x * b.t + a.y * b.z - a.z * b.y,
            a.t * b.y - a.x * b.z + a.y * b.t + a.z * b.x,
            a.t * b.z + a.x * b.y - a.y * b.x + a.z * b.t};
}
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) { return quat_mul(a, b); }

/// Element of Im(H) ~ su(2) ~ R^3, coordinates w.r.t. I, J, K.
struct Su2Vector {
    double vI = 0, vJ = 0, vK = 0;

    constexpr Su2Vector() = default;
    constexpr Su2Vector(double i, double j, double k) : vI(i), vJ(j), vK(k) {}

    constexpr double norm_sq() const { return vI * vI + vJ * vJ + vK * vK; }
    double norm() const { return std::sqrt(norm_sq()); }

    friend constexpr Su2Vector operator+(const Su2Vector& a, const Su2Vector& b) {
        return {a.vI + b.vI, a.vJ + b.vJ, a.vK + b.vK};
    }
    friend constexpr Su2Vector operator-(const Su2Vector& a, const Su2Vector& b) {
        return {a.vI - b.vI, a.vJ - b.vJ, a.vK - b.vK};
    }
    friend constexpr Su2Vector operator*(double s, const Su2Vector& v) {
        return {s * v.vI, s * v.vJ, s * v.vK};
    }
    friend constexpr Su2Vector operator-(const Su2Vector& v) { return {-v.vI, -v.vJ, -v.vK}; }
    constexpr double dot(const Su2Vector& o) const { return vI * o.vI + vJ * o.vJ + vK * o.vK; }
};

/// Vector part of q, as an su(2) element.
constexpr Su2Vector imag(const Quaternion& q) { return {q.x, q.y, q.z}; }
constexpr Quaternion embed(const Su2Vector& v) { return {0, v.vI, v.vJ, v.vK}; }

/// Unit quaternion representing an SU(2) element. Renormalized every 64 group
/// products to bound drift on long paths.
class Su2Element {
public:
    Su2Element() : q_(Quaternion::identity()) {}
    explicit Su2Element(const Quaternion& q) : q_(q) { renormalize(); }

    static Su2Element identity() { return {}; }

    const Quaternion& quat() const { return q_; }

    Su2Element inverse() const {
        Su2Element r;
        r.q_ = q_.conj();
        r.mults_ = mults_;
        return r;
    }

    friend Su2Element operator*(const Su2Element& a, const Su2Element& b) {
        Su2Element r;
        r.q_ = a.q_ * b.q_;
        r.mults_ = std::max(a.mults_, b.mults_) + 1;
        if (r.mults_ >= 64) r.renormalize();
        return r;
    }

    void renormalize() {
        const double n = q_.norm();
        if (n > 0) q_ = (1.0 / n) * q_;
        mults_ = 0;
    }

private:
    Quaternion q_;
    std::uint32_t mults_ = 0;
};

/// Closed-form exponential e^v = cos(eta) + (sin(eta)/eta) v, eta = |v|.
inline Su2Element su2_exp(const Su2Vector& v) {
    const double eta = v.norm();
    double sinc;
    if (eta < 1e-8) {
        sinc = 1.0 - eta * eta / 6.0; // removable singularity at the identity
    } else {
        sinc = std::sin(eta) / eta;
    }
    return Su2Element(Quaternion{std::cos(eta), sinc * v.vI, sinc * v.vJ, sinc * v.vK});
}

/// Principal logarithm on SU(2) \ {-1}; returned eta = |v| lies in [0, pi).
inline Su2Vector su2_log(const Su2Element& u) {
    const Quaternion& q = u.quat();
    if (q.re() <= -1.0 + 1e-12) throw AntipodalInput("su2_log at the antipode -1");
    const double vn = imag(q).norm();
    const double eta = std::atan2(vn, q.re());
    double scale;
    if (eta < 1e-8) {
        scale = 1.0 + eta * eta / 6.0; // eta/sin(eta)
    } else {
        scale = eta / std::sin(eta);
    }
    return scale * imag(q);
}

/// Inhomogeneous coordinates w_i = q_{n+1}^{-1} q_i of a point in H^{n+1}.
inline std::vector<Quaternion> inhomogeneous_coords(const std::vector<Quaternion>& q) {
    const Quaternion inv = q.back().inverse();
    std::vector<Quaternion> w(q.size() - 1);
    for (std::size_t i = 0; i + 1 < q.size(); ++i) w[i] = inv * q[i];
    return w;
}

} // namespace qsa
