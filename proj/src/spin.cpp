#include "spinmeas/spin.hpp"

#include <algorithm>
#include <cmath>

namespace spinmeas::spin {

double angle_between(const UnitAxis& u, const UnitAxis& v) { return std::acos(std::clamp(u.dot(v), -1.0, 1.0)); }

// Unit vectors: 2 - 2 a.o = |a - o|^2, 1 - (n.r)^2 = |n x r|^2.
double error_exact(const UnitAxis& a, const UnitAxis& o_a) { return (a.vec() - o_a.vec()).norm(); }

double disturbance_exact(const UnitAxis& b, const UnitAxis& o_a) {
    return (b.vec() - o_a.vec()).norm() * (b.vec() + o_a.vec()).norm() / std::sqrt(2.0);
}

double std_dev(const UnitAxis& axis, const UnitAxis& r) { return axis.vec().cross(r.vec()).norm(); }

Bounds bounds(const UnitAxis& a, const UnitAxis& b, const UnitAxis& r) {
    const double comm = std::abs(r.vec().dot(a.vec().cross(b.vec())));
    const double extra = a.dot(b) - a.dot(r) * b.dot(r);
    return {comm, extra, std::hypot(extra, comm)};
}

UncertaintyReport report(const SpinConfig& c) {
    const Bounds bd = bounds(c.a, c.b, c.r);
    return make_report(error_exact(c.a, c.o_a), disturbance_exact(c.b, c.o_a), std_dev(c.a, c.r), std_dev(c.b, c.r),
                       bd.commutator_bound, bd.schroedinger_extra);
}

MeasurementModel projective_apparatus(const UnitAxis& o_a) {
    const SpinOperator op = spin_operator(o_a);
    return MeasurementModel(2, {{+1.0, op.projector_plus}, {-1.0, op.projector_minus}});
}

Operator2 modified_observable(const UnitAxis& b, const UnitAxis& o_a) {
    const SpinOperator op = spin_operator(o_a);
    const Operator2 bm = spin_observable(b.vec());
    return op.projector_plus * bm * op.projector_plus + op.projector_minus * bm * op.projector_minus;
}

}  // namespace spinmeas::spin
