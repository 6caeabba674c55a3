"""RK4 drift of H and the Casimirs as the step count grows (poisson4 example, d14 = 1)."""

from hamfactor.classifier import conserved_report
from hamfactor.dsolver import solve_family
from hamfactor.exact import substitute
from hamfactor.flow import FlowConfig, demo_flow, relative_drift
from hamfactor.jordan import JordanSpec, imaginary, realize, zero

CASES = [("poisson4 d14=1", JordanSpec.of(zero(2, 2)), "g1.d_1_4"),
         ("oscillator", JordanSpec.of(imaginary(1, 1)), None)]


def main() -> None:
    print(f"{'case':<14}{'steps':>8}{'H drift':>12}{'Casimir drift':>16}")
    for name, spec, param in CASES:
        fam = solve_family(spec)
        param = param or fam.params[0]
        d = substitute(fam.general, {p: int(p == param) for p in fam.params})
        b = realize(spec)
        cas = [c.vector for c in conserved_report(b, d).casimirs]
        for steps in (100, 1000, 10_000):
            _, ham, cv = demo_flow(b, d, cas, FlowConfig(t_max=10.0, steps=steps))
            cd = max((relative_drift(c) for c in cv), default=0.0)
            print(f"{name:<14}{steps:>8}{relative_drift(ham):>12.2e}{cd:>16.2e}")


if __name__ == "__main__":
    main()
