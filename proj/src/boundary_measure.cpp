#include "qfusion/boundary_measure.hpp"

namespace qfusion {

void write_cylinder_csv(std::ostream& os, const CylinderMeasure<Real>& measure, const QContext<Real>& ctx,
                        const Real& tolerance) {
  const Real base = ctx.dim_u * ctx.kappa / sqrt(Real(2));
  os << "# precision_bits=" << ctx.precision_bits << "\n";
  os << "word,mass,bound,bound_holds,consistency_residual,consistent\n";
  for (const auto& [x, m] : measure.masses) {
    const Real bound = pow(base, static_cast<long>(x.size()));
    auto child = [&](Letter a) {
      const Word c = x + a;
      auto it = measure.masses.find(c);
      return it != measure.masses.end() ? it->second : harmonic_cylinder_mass(c, ctx);
    };
    const Real residual = abs(m - child(Letter::U) - child(Letter::UBar));
    os << x.to_string() << ',' << format(m) << ',' << format(bound) << ','
       << (m <= bound * (1 + tolerance) ? "pass" : "fail") << ',' << format(residual) << ','
       << (residual <= tolerance ? "pass" : "fail") << '\n';
  }
}

}  // namespace qfusion
