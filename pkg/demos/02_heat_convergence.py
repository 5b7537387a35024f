"""
Heat equation: DG and CG in time
================================

Refine the time step for the discontinuous and continuous schemes and watch
the sup-in-time L2 error drop at order q+1.
"""

from stgalerkin.harness.study import StudyConfig, run_study

for scheme, qs in (("HeatJamet", (0, 1, 2)), ("HeatAzizMonk", (1, 2))):
    for q in qs:
        cfg = StudyConfig(scheme=scheme, q=q, p=2, M=256, N=4, refine="tau", levels=4,
                          solution="heat_sine", norms=("LinfL2",))
        report = run_study(cfg)
        errs = [f"{lv.errors['LinfL2']:.2e}" for lv in report.levels]
        orders = [f"{o:.2f}" for o in report.orders("LinfL2")]
        print(f"{scheme:13s} q={q}: errors {errs}  orders {orders}")
