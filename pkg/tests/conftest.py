from helpers import ACCEPTANCE

TITLES = {
    1: "oracle equivalence",
    2: "classifier ground truth",
    3: "nice embedding above the weight threshold",
    4: "avoiding hosts stay below 2 ell^2 n on every grid",
    5: "G* size and increment step guarantees",
    6: "expected weight of wild vertices",
    7: "exact small extremal values",
    8: "pipeline soundness",
    9: "constants and bound arithmetic",
}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[n]
        ok = all(p for _, p, _ in checks)
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {n}: {TITLES.get(n, '')}")
        for name, passed, detail in checks:
            tr.write_line(f"        {'ok  ' if passed else 'FAIL'} {name} {detail}".rstrip())
