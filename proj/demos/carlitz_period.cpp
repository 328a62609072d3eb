// Carlitz period over F_3[theta], its Anderson generating function and the Betti matrix of rho_t.
#include <iostream>

#include "tmotive/galois.hpp"

int main() {
    using namespace tmotive;
    FieldSpec spec{3, 1, 2, 0};
    DrinfeldModule rho = DrinfeldModule::carlitz(spec);
    Precision p{12, 40};
    RamSeries pi = carlitz_period(spec.field(), 3, 2, p.prec + 8);
    std::cout << "pi    = " << pi.to_text() << "\n";
    std::cout << "Exp(pi) vanishes: " << exp_eval(rho, pi, p.prec).value.is_zero() << "\n";

    MotiveMatrices mm = psi_rho(rho, {pi}, p);
    for (const auto& c : mm.checks) std::cout << c.name << ": " << (c.pass ? "ok" : "FAIL") << "  " << c.detail << "\n";
    RamSeries v = mm.agfs[0].twist(1, spec).eval_at_theta();
    std::cout << "f^(1)(theta) + pi vanishes: " << (v + pi).is_zero() << "\n";

    BettiResult b = betti(endo_matrix(rho.rho_t(), rho), mm);
    std::cout << "hB(rho_t) = " << b.hB(0, 0).to_string("t") << "\n";
}
